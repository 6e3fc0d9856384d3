use super::{require_paraunitary, weighted_sum, MonomialAssignment};
use crate::error::{Error, Result};
use crate::idempotents::outer;
use crate::laurent::LaurentPoly;
use crate::polymatrix::PolyMatrix;

/// `W = sum_i w_i v_i^* v_i` over the rows `v_i` of a paraunitary `P`.
/// The result satisfies `W W^* = I` but may involve negative exponents.
pub fn pseudo_from_rows(p: &PolyMatrix, weights: &MonomialAssignment) -> Result<PolyMatrix> {
    require_paraunitary(p)?;
    if weights.len() != p.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} rows",
            weights.len(),
            p.rows()
        )));
    }
    if let Some(var) = weights.vars().names().iter().find(|v| p.vars().contains(v)) {
        return Err(Error::VariableCollision { var: var.clone() });
    }
    let projections = (0..p.rows())
        .map(|i| outer(&p.row_matrix(i)))
        .collect::<Result<Vec<_>>>()?;
    let w = weighted_sum(&projections, weights.weights())?;
    match w.is_pseudo_paraunitary()? {
        Some(g) if g.is_one() => Ok(w),
        _ => Err(Error::Internal("pseudo_from_rows produced W with W W^* != I".into())),
    }
}

/// A pseudo-paraunitary `W` multiplied by the least monomial `m` clearing its
/// negative exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearedMatrix {
    /// The clearing monomial `m`.
    pub multiplier: LaurentPoly,
    /// `Q = m W`, free of negative exponents.
    pub matrix: PolyMatrix,
    /// `m W^*`, the adjoint of `W` cleared by the same monomial.
    pub cleared_adjoint: PolyMatrix,
    /// `p` with `Q * cleared_adjoint = p I`; always `m^2`.
    pub gram: LaurentPoly,
}

pub fn monomial_clear(w: &PolyMatrix) -> Result<ClearedMatrix> {
    let standard = w.is_pseudo_paraunitary()?.ok_or(Error::NotPseudoParaunitary)?;
    let vars = w.vars();
    let mut clearing = vec![0i32; vars.len()];
    for e in w.entries().iter().filter(|e| !e.is_zero()) {
        for (c, m) in clearing.iter_mut().zip(e.min_exponents()) {
            *c = (*c).max(-m);
        }
    }
    let ring = w.ring();
    let m = LaurentPoly::monomial(ring.one(), clearing, vars)?;
    let q = w.scale_poly(&m)?;
    let cleared_adjoint = w.adjoint().scale_poly(&m)?;
    let gram = m.try_mul(&m)?.try_mul(&standard)?;
    let expected = PolyMatrix::identity(ring, vars, w.rows()).scale_poly(&gram)?;
    if q.try_mul(&cleared_adjoint)? != expected || q.entries().iter().any(|e| e.min_exponents().iter().any(|&x| x < 0)) {
        return Err(Error::Internal("monomial_clear failed its check".into()));
    }
    Ok(ClearedMatrix {
        multiplier: m,
        matrix: q,
        cleared_adjoint,
        gram,
    })
}
