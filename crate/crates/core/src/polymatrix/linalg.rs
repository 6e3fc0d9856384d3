//! Exact elimination: field Gaussian elimination for scalar matrices and
//! fraction-free Bareiss elimination for Laurent matrices.

use super::PolyMatrix;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalars::{Ring, Scalar};

/// Reduces `m` (row-major, `cols` wide) to row echelon form in place with
/// first-nonzero pivoting. Returns the pivot columns and the number of row swaps.
fn echelon(m: &mut [Scalar], rows: usize, cols: usize) -> (Vec<usize>, usize) {
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
            swaps += 1;
        }
        let inv = m[r * cols + c].inv().expect("pivot is nonzero");
        for i in r + 1..rows {
            let f = &m[i * cols + c] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let t = &f * &m[r * cols + j];
                m[i * cols + j] = &m[i * cols + j] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, swaps)
}

pub(super) fn scalar_rank(rows: usize, cols: usize, mut values: Vec<Scalar>) -> usize {
    echelon(&mut values, rows, cols).0.len()
}

pub(super) fn scalar_determinant(ring: &Ring, n: usize, mut values: Vec<Scalar>) -> Scalar {
    let (pivots, swaps) = echelon(&mut values, n, n);
    if pivots.len() < n {
        return ring.zero();
    }
    let mut det = ring.one();
    for i in 0..n {
        det = &det * &values[i * n + i];
    }
    if swaps % 2 == 1 {
        -det
    } else {
        det
    }
}

pub(super) fn scalar_inverse(ring: &Ring, n: usize, values: Vec<Scalar>) -> Result<Vec<Scalar>> {
    let w = 2 * n;
    let mut aug = Vec::with_capacity(n * w);
    for i in 0..n {
        aug.extend_from_slice(&values[i * n..(i + 1) * n]);
        for j in 0..n {
            aug.push(if i == j { ring.one() } else { ring.zero() });
        }
    }
    let (pivots, _) = echelon(&mut aug, n, w);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::DivisionByZero);
    }
    for r in (0..n).rev() {
        let inv = aug[r * w + r].inv()?;
        for j in 0..w {
            aug[r * w + j] = &aug[r * w + j] * &inv;
        }
        for i in 0..r {
            let f = aug[i * w + r].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..w {
                let t = &f * &aug[r * w + j];
                aug[i * w + j] = &aug[i * w + j] - &t;
            }
        }
    }
    Ok((0..n).flat_map(|i| aug[i * w + n..(i + 1) * w].to_vec()).collect())
}

/// Determinant of a Laurent matrix: each row is multiplied by the monomial
/// clearing its negative exponents, Bareiss runs over the polynomial ring,
/// and the extracted monomials are restored at the end.
pub(super) fn laurent_determinant(m: &PolyMatrix) -> Result<LaurentPoly> {
    let n = m.rows();
    let vars = m.vars().clone();
    let ring = m.ring().clone();
    let mut shift = vec![0i32; vars.len()];
    let mut a: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
    for i in 0..n {
        let row = m.row(i);
        let mut mins: Option<Vec<i32>> = None;
        for e in row.iter().filter(|e| !e.is_zero()) {
            let em = e.min_exponents();
            mins = Some(match mins {
                None => em,
                Some(cur) => cur.iter().zip(&em).map(|(x, y)| *x.min(y)).collect(),
            });
        }
        let Some(mins) = mins else {
            return Ok(LaurentPoly::zero(&ring, &vars));
        };
        for (s, x) in shift.iter_mut().zip(&mins) {
            *s += x;
        }
        let neg: Vec<i32> = mins.iter().map(|x| -x).collect();
        a.push(row.iter().map(|e| e.shift(&neg)).collect());
    }
    if n == 0 {
        return Ok(LaurentPoly::one(&ring, &vars));
    }
    let mut negate = false;
    let mut prev = LaurentPoly::one(&ring, &vars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(LaurentPoly::zero(&ring, &vars));
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].try_mul(&a[k][k])?.try_sub(&a[i][k].try_mul(&a[k][j])?)?;
                a[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].shift(&shift);
    Ok(if negate { det.neg() } else { det })
}
