#![allow(dead_code)]

pub mod props;

use std::collections::HashMap;

use paraunitary::random::{self, SeededRng, DEFAULT_SEED};
use paraunitary::{LaurentPoly, PolyMatrix, Ring, VarSet};
use proptest::test_runner::{Config, RngSeed};
use rand::Rng;

/// Seed for randomized suites; `PARAUNITARY_SEED` overrides the default.
pub fn seed() -> u64 {
    std::env::var("PARAUNITARY_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed()),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn rings() -> Vec<Ring> {
    vec![
        Ring::rational(),
        Ring::cyclotomic(8).unwrap(),
        Ring::cyclotomic(12).unwrap(),
        Ring::prime_field(7).unwrap(),
        Ring::prime_field(13).unwrap(),
    ]
}

/// Determinant by Laplace expansion along rows, memoized on the set of
/// remaining columns. Independent of the Bareiss elimination in the library.
pub fn cofactor_det(m: &PolyMatrix) -> LaurentPoly {
    let n = m.rows();
    assert_eq!(n, m.cols());
    assert!(n <= 16);
    let mut memo: HashMap<u32, LaurentPoly> = HashMap::new();
    fn go(m: &PolyMatrix, mask: u32, memo: &mut HashMap<u32, LaurentPoly>) -> LaurentPoly {
        let n = m.rows();
        let row = n - mask.count_ones() as usize;
        if row == n {
            return LaurentPoly::one(m.ring(), m.vars());
        }
        if let Some(d) = memo.get(&mask) {
            return d.clone();
        }
        let mut acc = LaurentPoly::zero(m.ring(), m.vars());
        let mut position = 0;
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let a = m.get(row, col);
            if !a.is_zero() {
                let minor = go(m, mask & !(1 << col), memo);
                let term = a.try_mul(&minor).unwrap();
                acc = if position % 2 == 0 { acc.try_add(&term) } else { acc.try_sub(&term) }.unwrap();
            }
            position += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    go(m, full, &mut memo)
}

/// A random Laurent polynomial with up to four terms and exponents in -2..=2.
pub fn laurent(ring: &Ring, vars: &VarSet, rng: &mut SeededRng) -> LaurentPoly {
    let mut acc = LaurentPoly::zero(ring, vars);
    for _ in 0..rng.gen_range(0..=4) {
        let exps = (0..vars.len()).map(|_| rng.gen_range(-2..=2)).collect();
        let c = random::nonzero(ring, rng).unwrap();
        acc = acc.try_add(&LaurentPoly::monomial(c, exps, vars).unwrap()).unwrap();
    }
    acc
}

/// A random square matrix of Laurent polynomials.
pub fn laurent_matrix(ring: &Ring, vars: &VarSet, n: usize, rng: &mut SeededRng) -> PolyMatrix {
    let entries = (0..n * n).map(|_| laurent(ring, vars, rng)).collect();
    PolyMatrix::new(ring, n, n, entries).unwrap()
}
