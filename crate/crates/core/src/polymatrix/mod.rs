//! Matrices of Laurent polynomials: products, adjoints, block layout and
//! exact rank, trace and determinant.

mod linalg;
mod report;

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::{parse_poly, LaurentPoly, VarSet};
use crate::scalars::{incompatible, Ring, Scalar};

pub use report::VerificationReport;

/// A rectangular matrix whose entries share one ring and one variable set.
/// Scalar matrices are the case of an empty variable set (or constant entries).
#[derive(Clone)]
pub struct PolyMatrix {
    ring: Ring,
    vars: VarSet,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    /// Builds a matrix from row-major entries, unifying their variable sets.
    pub fn new(ring: &Ring, rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<PolyMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut vars = VarSet::empty();
        for e in &entries {
            if e.ring() != ring {
                return Err(incompatible(e.ring(), ring));
            }
            vars = vars.union(e.vars());
        }
        let entries = entries.iter().map(|e| e.with_vars(&vars)).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            ring: ring.clone(),
            vars,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_scalars(ring: &Ring, rows: usize, cols: usize, values: Vec<Scalar>) -> Result<PolyMatrix> {
        let empty = VarSet::empty();
        let entries = values
            .into_iter()
            .map(|v| {
                if v.in_ring(ring) {
                    Ok(LaurentPoly::constant(v, &empty))
                } else {
                    Err(incompatible(&v.ring(), ring))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, rows, cols, entries)
    }

    /// Parses a grid of entry texts; `vars` (if given) is included in the result's variables.
    pub fn parse_grid<S: AsRef<str>>(ring: &Ring, vars: Option<&VarSet>, grid: &[Vec<S>]) -> Result<PolyMatrix> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        if grid.iter().any(|r| r.len() != cols) {
            return Err(Error::parse("ragged matrix rows"));
        }
        let entries = grid
            .iter()
            .flatten()
            .map(|s| parse_poly(s.as_ref(), ring, vars))
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::new(ring, rows, cols, entries)?;
        if let Some(v) = vars {
            m = m.with_vars(&m.vars.union(v))?;
        }
        Ok(m)
    }

    /// Convenience for literal matrices in code and tests.
    pub fn parse_rows(ring: &Ring, grid: &[&[&str]]) -> Result<PolyMatrix> {
        let owned: Vec<Vec<&str>> = grid.iter().map(|r| r.to_vec()).collect();
        Self::parse_grid(ring, None, &owned)
    }

    pub fn zeros(ring: &Ring, vars: &VarSet, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            ring: ring.clone(),
            vars: vars.clone(),
            rows,
            cols,
            entries: vec![LaurentPoly::zero(ring, vars); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, vars: &VarSet, n: usize) -> PolyMatrix {
        let mut m = Self::zeros(ring, vars, n, n);
        for i in 0..n {
            m.entries[i * n + i] = LaurentPoly::one(ring, vars);
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(ring: &Ring, diag: &[LaurentPoly]) -> Result<PolyMatrix> {
        let n = diag.len();
        let mut entries = vec![LaurentPoly::zero(ring, &VarSet::empty()); n * n];
        for (i, d) in diag.iter().enumerate() {
            entries[i * n + i] = d.clone();
        }
        Self::new(ring, n, n, entries)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Row `i` as a 1 x cols matrix.
    pub fn row_matrix(&self, i: usize) -> PolyMatrix {
        PolyMatrix {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            rows: 1,
            cols: self.cols,
            entries: self.row(i).to_vec(),
        }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn with_vars(&self, vars: &VarSet) -> Result<PolyMatrix> {
        if &self.vars == vars {
            return Ok(self.clone());
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            vars: vars.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.with_vars(vars)).collect::<Result<_>>()?,
        })
    }

    fn aligned(&self, other: &PolyMatrix) -> Result<(PolyMatrix, PolyMatrix)> {
        if self.ring != other.ring {
            return Err(incompatible(&self.ring, &other.ring));
        }
        if self.vars == other.vars {
            return Ok((self.clone(), other.clone()));
        }
        let u = self.vars.union(&other.vars);
        Ok((self.with_vars(&u)?, other.with_vars(&u)?))
    }

    /// True when every entry is a constant.
    pub fn is_scalar(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_constant)
    }

    pub fn scalar_entries(&self) -> Result<Vec<Scalar>> {
        self.entries
            .iter()
            .map(|e| e.constant_value().ok_or(Error::NotScalar))
            .collect()
    }

    pub fn scalar_at(&self, i: usize, j: usize) -> Result<Scalar> {
        self.get(i, j).constant_value().ok_or(Error::NotScalar)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    fn map_entries(&self, f: impl Fn(&LaurentPoly) -> Result<LaurentPoly>) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(&self.ring, self.rows, self.cols, entries)
    }

    fn zip_entries(
        &self,
        other: &PolyMatrix,
        f: impl Fn(&LaurentPoly, &LaurentPoly) -> Result<LaurentPoly>,
    ) -> Result<PolyMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = self.aligned(other)?;
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| f(x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { entries, ..a })
    }

    pub fn try_add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip_entries(other, LaurentPoly::try_add)
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip_entries(other, LaurentPoly::try_sub)
    }

    pub fn neg(&self) -> PolyMatrix {
        PolyMatrix {
            entries: self.entries.iter().map(LaurentPoly::neg).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, k: &Scalar) -> Result<PolyMatrix> {
        self.map_entries(|e| e.scale(k))
    }

    pub fn scale_poly(&self, p: &LaurentPoly) -> Result<PolyMatrix> {
        self.map_entries(|e| e.try_mul(p))
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = self.aligned(other)?;
        let mut entries = Vec::with_capacity(a.rows * b.cols);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let mut acc = BTreeMap::new();
                for k in 0..a.cols {
                    let x = a.get(i, k);
                    if x.is_zero() {
                        continue;
                    }
                    let y = b.get(k, j);
                    if !y.is_zero() {
                        LaurentPoly::mul_add_into(&mut acc, x, y);
                    }
                }
                entries.push(LaurentPoly::from_parts(&a.ring, &a.vars, acc));
            }
        }
        Ok(PolyMatrix {
            ring: a.ring,
            vars: a.vars,
            rows: a.rows,
            cols: b.cols,
            entries,
        })
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Transpose with every entry starred.
    pub fn adjoint(&self) -> PolyMatrix {
        let t = self.transpose();
        PolyMatrix {
            entries: t.entries.iter().map(LaurentPoly::star).collect(),
            ..t
        }
    }

    /// Kronecker product: block (i, j) is `self[i][j] * other`.
    pub fn tensor(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        let (a, b) = self.aligned(other)?;
        let rows = a.rows * b.rows;
        let cols = a.cols * b.cols;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = a.get(i / b.rows, j / b.cols);
                let y = b.get(i % b.rows, j % b.cols);
                entries.push(if x.is_zero() || y.is_zero() {
                    LaurentPoly::zero(&a.ring, &a.vars)
                } else {
                    x.try_mul(y)?
                });
            }
        }
        Ok(PolyMatrix {
            ring: a.ring,
            vars: a.vars,
            rows,
            cols,
            entries,
        })
    }

    /// Assembles a grid of equally sized blocks.
    pub fn from_blocks(grid: &[Vec<PolyMatrix>]) -> Result<PolyMatrix> {
        let first = grid
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::DimensionMismatch("empty block grid".into()))?;
        let (br, bc) = (first.rows, first.cols);
        let bcols = grid[0].len();
        let mut vars = VarSet::empty();
        for row in grid {
            if row.len() != bcols {
                return Err(Error::DimensionMismatch("ragged block grid".into()));
            }
            for b in row {
                if b.rows != br || b.cols != bc {
                    return Err(Error::DimensionMismatch("blocks of different sizes".into()));
                }
                if b.ring != first.ring {
                    return Err(incompatible(&b.ring, &first.ring));
                }
                vars = vars.union(&b.vars);
            }
        }
        let rows = br * grid.len();
        let cols = bc * bcols;
        let mut entries = vec![LaurentPoly::zero(&first.ring, &vars); rows * cols];
        for (bi, row) in grid.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                let block = block.with_vars(&vars)?;
                for i in 0..br {
                    for j in 0..bc {
                        entries[(bi * br + i) * cols + bj * bc + j] = block.get(i, j).clone();
                    }
                }
            }
        }
        Ok(PolyMatrix {
            ring: first.ring.clone(),
            vars,
            rows,
            cols,
            entries,
        })
    }

    /// The block at block position (bi, bj) for blocks of size `br x bc`.
    pub fn block(&self, bi: usize, bj: usize, br: usize, bc: usize) -> PolyMatrix {
        let mut entries = Vec::with_capacity(br * bc);
        for i in 0..br {
            for j in 0..bc {
                entries.push(self.get(bi * br + i, bj * bc + j).clone());
            }
        }
        PolyMatrix {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            rows: br,
            cols: bc,
            entries,
        }
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<PolyMatrix> {
        check_permutation(perm, self.rows)?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for &p in perm {
            entries.extend_from_slice(self.row(p));
        }
        Ok(PolyMatrix {
            entries,
            ..self.clone()
        })
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_cols(&self, perm: &[usize]) -> Result<PolyMatrix> {
        Ok(self.transpose().permute_rows(perm)?.transpose())
    }

    pub fn substitute(&self, assignment: &BTreeMap<String, LaurentPoly>) -> Result<PolyMatrix> {
        self.map_entries(|e| e.substitute(assignment))
    }

    pub fn embed(&self, target: &Ring) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(|e| e.embed(target)).collect::<Result<Vec<_>>>()?;
        Self::new(target, self.rows, self.cols, entries)
    }

    pub fn trace(&self) -> Result<LaurentPoly> {
        self.require_square()?;
        let mut acc = LaurentPoly::zero(&self.ring, &self.vars);
        for i in 0..self.rows {
            acc = acc.try_add(self.get(i, i))?;
        }
        Ok(acc)
    }

    /// Rank over the coefficient field; entries must be constants.
    pub fn rank(&self) -> Result<usize> {
        let values = self.scalar_entries()?;
        Ok(linalg::scalar_rank(self.rows, self.cols, values))
    }

    pub fn determinant(&self) -> Result<LaurentPoly> {
        self.require_square()?;
        if self.is_scalar() {
            let d = linalg::scalar_determinant(&self.ring, self.rows, self.scalar_entries()?);
            return Ok(LaurentPoly::constant(d, &self.vars));
        }
        linalg::laurent_determinant(self)
    }

    /// Inverse of a scalar matrix by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<PolyMatrix> {
        self.require_square()?;
        let values = linalg::scalar_inverse(&self.ring, self.rows, self.scalar_entries()?)?;
        Self::from_scalars(&self.ring, self.rows, self.cols, values)
    }

    /// `M * adjoint(M)`, the Gram matrix of the rows.
    pub fn gram(&self) -> Result<PolyMatrix> {
        self.try_mul(&self.adjoint())
    }

    pub fn is_paraunitary(&self) -> Result<VerificationReport> {
        self.require_square()?;
        let product = self.gram()?;
        let residual = product.try_sub(&PolyMatrix::identity(&self.ring, &product.vars, self.rows))?;
        Ok(VerificationReport::from_residual("paraunitary", residual))
    }

    /// The unit monomial `p` with `M * adjoint(M) = p * I`, if there is one.
    pub fn is_pseudo_paraunitary(&self) -> Result<Option<LaurentPoly>> {
        self.require_square()?;
        let product = self.gram()?;
        Ok(scalar_multiple_of_identity(&product).filter(|p| p.is_unit_monomial().is_some()))
    }

    /// Block inner product `sum_i K_i * adjoint(L_i)` of two rows of blocks.
    pub fn block_inner_product(k: &[PolyMatrix], l: &[PolyMatrix]) -> Result<PolyMatrix> {
        if k.len() != l.len() || k.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "block rows of length {} and {}",
                k.len(),
                l.len()
            )));
        }
        let mut acc = k[0].try_mul(&l[0].adjoint())?;
        for (a, b) in k.iter().zip(l).skip(1) {
            acc = acc.try_add(&a.try_mul(&b.adjoint())?)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let grid: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        json!({
            "ring": self.ring.to_json(),
            "vars": self.vars.names(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": grid,
        })
    }

    pub fn from_json(v: &Value) -> Result<PolyMatrix> {
        let ring = Ring::from_json(v.get("ring").ok_or_else(|| Error::parse("matrix without ring"))?)?;
        let names: Vec<String> = match v.get("vars") {
            Some(x) => serde_json::from_value(x.clone())?,
            None => Vec::new(),
        };
        let vars = VarSet::new(names)?;
        let grid: Vec<Vec<String>> =
            serde_json::from_value(v.get("entries").cloned().ok_or_else(|| Error::parse("matrix without entries"))?)?;
        let m = Self::parse_grid(&ring, Some(&vars), &grid)?;
        let expect = |key: &str, actual: usize| -> Result<()> {
            match v.get(key).and_then(Value::as_u64) {
                Some(n) if n as usize == actual => Ok(()),
                Some(n) => Err(Error::parse(format!("{key} = {n} but entries give {actual}"))),
                None => Ok(()),
            }
        };
        expect("rows", m.rows)?;
        expect("cols", m.cols)?;
        if !m.vars.is_subset(&vars) {
            return Err(Error::parse(format!(
                "entries use variables {:?} beyond declared {:?}",
                m.vars, vars
            )));
        }
        Ok(m)
    }
}

/// `Some(p)` when `m` is square and equals `p * I`.
pub(crate) fn scalar_multiple_of_identity(m: &PolyMatrix) -> Option<LaurentPoly> {
    if !m.is_square() {
        return None;
    }
    let p = m.get(0, 0).clone();
    for i in 0..m.rows {
        for j in 0..m.cols {
            let e = m.get(i, j);
            let ok = if i == j { e == &p } else { e.is_zero() };
            if !ok {
                return None;
            }
        }
    }
    Some(p)
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch(format!("permutation of length {} for size {n}", perm.len())));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// `sum_i coeffs[i]^-1 * members[i]`, checked to invert `sum_i coeffs[i] * members[i]`.
pub fn idempotent_inverse(coeffs: &[Scalar], members: &[PolyMatrix]) -> Result<PolyMatrix> {
    if coeffs.len() != members.len() || members.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} members",
            coeffs.len(),
            members.len()
        )));
    }
    if let Some(index) = coeffs.iter().position(Scalar::is_zero) {
        return Err(Error::ZeroCoefficient { index });
    }
    let mut forward = members[0].scale(&coeffs[0])?;
    let mut inverse = members[0].scale(&coeffs[0].inv()?)?;
    for (c, m) in coeffs.iter().zip(members).skip(1) {
        forward = forward.try_add(&m.scale(c)?)?;
        inverse = inverse.try_add(&m.scale(&c.inv()?)?)?;
    }
    if !forward.try_mul(&inverse)?.is_identity() {
        return Err(Error::Internal("idempotent inverse failed its check".into()));
    }
    Ok(inverse)
}

/// Value equality: entries are compared after aligning variable sets.
impl PartialEq for PolyMatrix {
    fn eq(&self, other: &PolyMatrix) -> bool {
        self.ring == other.ring && self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for PolyMatrix {}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {} in {:?}", self.rows, self.cols, self.ring, self.vars)?;
        write!(f, "{self}")
    }
}
