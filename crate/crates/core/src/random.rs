//! Seeded generators for randomized checks and the CLI `--seed` flag.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructors::{monomial_sum, MonomialAssignment};
use crate::error::{Error, Result};
use crate::idempotents::{
    conjugate_set, diagonal_set, from_orthonormal_basis, group_set, merge, GroupTable, IdempotentSet,
};
use crate::laurent::{LaurentPoly, VarSet};
use crate::polymatrix::PolyMatrix;
use crate::scalars::{Rational, Ring, Scalar};

pub type SeededRng = ChaCha8Rng;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random unit-modulus scalar: a signed root of unity available in `ring`.
pub fn unit(ring: &Ring, rng: &mut SeededRng) -> Result<Scalar> {
    let sign = if rng.gen_bool(0.5) { ring.one() } else { ring.from_int(-1) };
    match ring.conductor() {
        Some(n) => Ok(&sign * &ring.zeta_pow(rng.gen_range(0..n as i64))?),
        None => Ok(sign),
    }
}

/// A random nonzero scalar with small numerator and denominator.
pub fn nonzero(ring: &Ring, rng: &mut SeededRng) -> Result<Scalar> {
    loop {
        let num = rng.gen_range(-9i64..=9);
        let den = rng.gen_range(1i64..=4);
        if let Ok(s) = ring.from_rational(&Rational::new(num, den)) {
            if !s.is_zero() {
                let phase = unit(ring, rng)?;
                return Ok(&s * &phase);
            }
        }
    }
}

/// A random matrix with orthonormal rows: the Cayley transform `(I - S)(I + S)^-1`
/// of a small skew-symmetric integer `S`, times a diagonal of random units.
pub fn orthogonal(ring: &Ring, n: usize, rng: &mut SeededRng) -> Result<PolyMatrix> {
    let empty = VarSet::empty();
    let id = PolyMatrix::identity(ring, &empty, n);
    for _ in 0..64 {
        let mut s = vec![ring.zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.gen_range(-3i64..=3);
                s[i * n + j] = ring.from_int(v);
                s[j * n + i] = ring.from_int(-v);
            }
        }
        let s = PolyMatrix::from_scalars(ring, n, n, s)?;
        let inv = match id.try_add(&s)?.inverse() {
            Ok(inv) => inv,
            Err(_) => continue,
        };
        let phases = (0..n)
            .map(|_| unit(ring, rng).map(|u| LaurentPoly::constant(u, &empty)))
            .collect::<Result<Vec<_>>>()?;
        let d = PolyMatrix::diagonal(ring, &phases)?;
        return id.try_sub(&s)?.try_mul(&inv)?.try_mul(&d);
    }
    Err(Error::Internal(format!("no invertible Cayley transform found for n = {n}")))
}

/// A random partition of `0..n` into contiguous groups of a shuffled order.
pub fn partition(n: usize, rng: &mut SeededRng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, i) in order.into_iter().enumerate() {
        if k == 0 || rng.gen_bool(0.4) {
            groups.push(vec![i]);
        } else {
            groups.last_mut().expect("first index opens a group").push(i);
        }
    }
    groups
}

fn group_candidates(n: usize) -> Vec<GroupTable> {
    let mut out = Vec::new();
    if let Ok(g) = GroupTable::cyclic(n) {
        out.push(g);
    }
    if n.is_power_of_two() && n > 1 {
        if let Ok(g) = GroupTable::elementary_abelian_2(n.trailing_zeros()) {
            out.push(g);
        }
    }
    if n == 6 {
        if let Ok(g) = GroupTable::symmetric_3() {
            out.push(g);
        }
    }
    if n >= 4 && n.is_multiple_of(2) {
        if let Ok(g) = GroupTable::dihedral(n) {
            out.push(g);
        }
    }
    out
}

/// A random complete orthogonal set of symmetric idempotents in `n x n`
/// matrices over `ring`, drawn from the basis, group ring and conjugated
/// diagonal constructions, optionally merged.
pub fn idempotent_set(ring: &Ring, n: usize, rng: &mut SeededRng) -> Result<IdempotentSet> {
    let set = match rng.gen_range(0..3) {
        0 => None,
        1 => {
            let groups = group_candidates(n);
            groups.choose(rng).and_then(|g| group_set(g, ring).ok())
        }
        _ => Some(conjugate_set(&diagonal_set(ring, n)?, &orthogonal(ring, n, rng)?)?),
    };
    let set = match set {
        Some(s) => s,
        None => from_orthonormal_basis(&orthogonal(ring, n, rng)?, None)?,
    };
    if set.len() > 1 && rng.gen_bool(0.3) {
        merge(&set, &partition(set.len(), rng))
    } else {
        Ok(set)
    }
}

/// Random unit monomials `u * prod v^e` with `0 <= e <= max_exp`.
pub fn weights(
    ring: &Ring,
    count: usize,
    vars: &VarSet,
    max_exp: i32,
    rng: &mut SeededRng,
) -> Result<MonomialAssignment> {
    let weights = (0..count)
        .map(|_| {
            let exps = (0..vars.len()).map(|_| rng.gen_range(0..=max_exp)).collect();
            LaurentPoly::monomial(unit(ring, rng)?, exps, vars)
        })
        .collect::<Result<Vec<_>>>()?;
    MonomialAssignment::new(weights)
}

/// A random paraunitary `sum_i w_i E_i` in the given variables.
pub fn paraunitary(ring: &Ring, n: usize, vars: &VarSet, rng: &mut SeededRng) -> Result<PolyMatrix> {
    let set = idempotent_set(ring, n, rng)?;
    monomial_sum(&set, &weights(ring, set.len(), vars, 3, rng)?)
}

/// A random `k x k` Latin square on the symbols `0..k`.
pub fn latin_square(k: usize, rng: &mut SeededRng) -> Vec<Vec<usize>> {
    let mut rows: Vec<usize> = (0..k).collect();
    let mut cols: Vec<usize> = (0..k).collect();
    let mut symbols: Vec<usize> = (0..k).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    symbols.shuffle(rng);
    (0..k)
        .map(|i| (0..k).map(|j| symbols[(rows[i] + cols[j]) % k]).collect())
        .collect()
}
