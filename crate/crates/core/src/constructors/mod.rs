//! Paraunitary and pseudo-paraunitary constructions from complete symmetric
//! orthogonal sets of idempotents, plus Hadamard specialization.

mod arrangement;
mod hadamard;
mod pseudo;
mod tangle;

pub use arrangement::{block_arrangement, ArrangementPlan};
pub use hadamard::{specialize_hadamard, HadamardReport, BUTSON_CAP};
pub use pseudo::{monomial_clear, pseudo_from_rows, ClearedMatrix};
pub use tangle::{tangle, BlockSwap, TangleForm, TangleOrder, TangleVariant};

use crate::error::{Error, Result};
use crate::idempotents::IdempotentSet;
use crate::laurent::{parse_poly, LaurentPoly, VarSet};
use crate::polymatrix::PolyMatrix;
use crate::scalars::{Ring, Scalar};

/// Weights `alpha_i * z^t_i` with unit-modulus `alpha_i` and non-negative exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialAssignment {
    weights: Vec<LaurentPoly>,
}

/// Checks that `w` is a single term with unit-modulus coefficient and no negative exponent.
pub(crate) fn check_weight(index: usize, w: &LaurentPoly) -> Result<()> {
    let (coeff, exps) = w.as_monomial().ok_or(Error::NotMonomial { index })?;
    if !coeff.is_unit_modulus() {
        return Err(Error::NotUnitModulus { index });
    }
    if exps.iter().any(|&e| e < 0) {
        return Err(Error::NegativeExponent { index });
    }
    Ok(())
}

impl MonomialAssignment {
    pub fn new(weights: Vec<LaurentPoly>) -> Result<MonomialAssignment> {
        for (i, w) in weights.iter().enumerate() {
            check_weight(i, w)?;
            if i > 0 && w.ring() != weights[0].ring() {
                return Err(crate::scalars::incompatible(weights[0].ring(), w.ring()));
            }
        }
        Ok(MonomialAssignment { weights })
    }

    /// Parses one monomial per entry, e.g. `["1", "z", "-x^2*y"]`.
    pub fn parse<S: AsRef<str>>(ring: &Ring, texts: &[S]) -> Result<MonomialAssignment> {
        let weights = texts
            .iter()
            .map(|t| parse_poly(t.as_ref(), ring, None))
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights)
    }

    /// `coeffs[i] * prod_j vars[j]^exponents[i][j]`.
    pub fn from_exponents(vars: &VarSet, coeffs: &[Scalar], exponents: &[Vec<u32>]) -> Result<MonomialAssignment> {
        if coeffs.len() != exponents.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} exponent vectors",
                coeffs.len(),
                exponents.len()
            )));
        }
        let weights = coeffs
            .iter()
            .zip(exponents)
            .map(|(c, e)| {
                if e.len() != vars.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "exponent vector of length {} for {} variables",
                        e.len(),
                        vars.len()
                    )));
                }
                LaurentPoly::monomial(c.clone(), e.iter().map(|&x| x as i32).collect(), vars)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights)
    }

    pub fn weights(&self) -> &[LaurentPoly] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Union of the variables of all weights.
    pub fn vars(&self) -> VarSet {
        self.weights.iter().fold(VarSet::empty(), |acc, w| acc.union(w.vars()))
    }
}

/// Returns `m` after checking `m * m^* = I`; a failure means the construction is wrong.
pub(crate) fn assert_paraunitary(m: PolyMatrix, what: &str) -> Result<PolyMatrix> {
    let report = m.is_paraunitary()?;
    if report.passed {
        Ok(m)
    } else {
        Err(Error::Internal(format!("{what} produced a matrix that is not paraunitary: {report}")))
    }
}

pub(crate) fn require_paraunitary(m: &PolyMatrix) -> Result<()> {
    if m.is_paraunitary()?.passed {
        Ok(())
    } else {
        Err(Error::NotParaunitary)
    }
}

/// `sum_i w_i * E_i`.
fn weighted_sum(members: &[PolyMatrix], weights: &[LaurentPoly]) -> Result<PolyMatrix> {
    if members.len() != weights.len() || members.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} members",
            weights.len(),
            members.len()
        )));
    }
    let mut acc = members[0].scale_poly(&weights[0])?;
    for (m, w) in members.iter().zip(weights).skip(1) {
        acc = acc.try_add(&m.scale_poly(w)?)?;
    }
    Ok(acc)
}

/// `W(z) = sum_i alpha_i z^t_i E_i`, paraunitary for any complete symmetric set.
pub fn monomial_sum(set: &IdempotentSet, assignment: &MonomialAssignment) -> Result<PolyMatrix> {
    let w = weighted_sum(set.members(), assignment.weights())?;
    assert_paraunitary(w, "monomial_sum")
}

/// `H(z) = I - v v^* + z v v^*` for a unit column vector `v`.
pub fn belevitch_block(v: &PolyMatrix, var: &str) -> Result<PolyMatrix> {
    if v.cols() != 1 {
        return Err(Error::DimensionMismatch(format!("expected a column vector, got {}x{}", v.rows(), v.cols())));
    }
    if v.vars().contains(var) {
        return Err(Error::VariableCollision { var: var.to_string() });
    }
    if !v.adjoint().try_mul(v)?.is_identity() {
        return Err(Error::NotUnitVector);
    }
    let ring = v.ring();
    let z = LaurentPoly::var(ring, var)?;
    let f1 = v.try_mul(&v.adjoint())?;
    let f2 = PolyMatrix::identity(ring, v.vars(), v.rows()).try_sub(&f1)?;
    assert_paraunitary(f2.try_add(&f1.scale_poly(&z)?)?, "belevitch_block")
}

/// `U = sum_i alpha_i v_i^* v_i` for orthonormal rows `v_i`, so that
/// `U v_i^* = alpha_i v_i^*`.
pub fn spectral_unitary(vectors: &PolyMatrix, units: &[Scalar]) -> Result<PolyMatrix> {
    if !vectors.is_scalar() {
        return Err(Error::NotScalar);
    }
    let n = vectors.rows();
    if !vectors.is_square() || units.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} vectors of length {} with {} units",
            n,
            vectors.cols(),
            units.len()
        )));
    }
    if let Some(index) = units.iter().position(|a| !a.is_unit_modulus()) {
        return Err(Error::NotUnitModulus { index });
    }
    let gram = vectors.gram()?;
    for i in 0..n {
        for j in 0..n {
            let e = gram.get(i, j);
            let ok = if i == j { e.is_one() } else { e.is_zero() };
            if !ok {
                return Err(Error::NotOrthonormal { i, j });
            }
        }
    }
    let rows: Vec<PolyMatrix> = (0..n).map(|i| vectors.row_matrix(i)).collect();
    let weights: Vec<LaurentPoly> = units
        .iter()
        .map(|a| LaurentPoly::constant(a.clone(), vectors.vars()))
        .collect();
    let projections = rows
        .iter()
        .map(crate::idempotents::outer)
        .collect::<Result<Vec<_>>>()?;
    let u = assert_paraunitary(weighted_sum(&projections, &weights)?, "spectral_unitary")?;
    for (row, a) in rows.iter().zip(units) {
        let col = row.adjoint();
        if u.try_mul(&col)? != col.scale(a)? {
            return Err(Error::Internal("spectral_unitary eigenvector check failed".into()));
        }
    }
    Ok(u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComposeMode {
    Product,
    Tensor,
}

/// Left-to-right product or tensor product of `parts`.
pub fn compose(parts: &[PolyMatrix], mode: ComposeMode) -> Result<PolyMatrix> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::DimensionMismatch("nothing to compose".into()))?;
    let mut acc = first.clone();
    for p in rest {
        acc = match mode {
            ComposeMode::Product => acc.try_mul(p)?,
            ComposeMode::Tensor => acc.tensor(p)?,
        };
    }
    Ok(acc)
}

/// [`compose`] for paraunitary parts, with the result checked.
pub fn compose_paraunitary(parts: &[PolyMatrix], mode: ComposeMode) -> Result<PolyMatrix> {
    for p in parts {
        require_paraunitary(p)?;
    }
    assert_paraunitary(compose(parts, mode)?, "compose")
}
