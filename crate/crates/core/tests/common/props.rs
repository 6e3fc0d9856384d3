//! Property bodies shared by the proptest suites and the acceptance run.
//! Each takes one seed and derives its parameters from it.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{cofactor_det, laurent, laurent_matrix, rings};
use paraunitary::constructors::{block_arrangement, compose, tangle, ArrangementPlan, ComposeMode, TangleVariant};
use paraunitary::idempotents::{
    conjugate_set, from_matrix_rows, group_set, merge, realify, tensor_sets, verify_set, GroupRingElement,
    GroupTable, IdempotentSet,
};
use paraunitary::random::{self, SeededRng};
use paraunitary::{LaurentPoly, PolyMatrix, Ring, Scalar, VarSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Property = fn(u64) -> Result<(), TestCaseError>;

fn vars(names: &[&str]) -> VarSet {
    VarSet::new(names.iter().copied()).unwrap()
}

fn any_ring(rng: &mut SeededRng) -> Ring {
    rings().choose(rng).unwrap().clone()
}

fn paraunitary_in(ring: &Ring, n: usize, names: &[&str], rng: &mut SeededRng) -> PolyMatrix {
    random::paraunitary(ring, n, &vars(names), rng).unwrap()
}

fn is_pu(m: &PolyMatrix) -> bool {
    m.is_paraunitary().unwrap().passed
}

fn permutation(n: usize, rng: &mut SeededRng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// `prod_i a_i^(rank E_i)` with ranks from traces.
pub fn product_of_powers(set: &IdempotentSet, coeffs: &[Scalar]) -> Scalar {
    let ranks = set.ranks().unwrap();
    coeffs
        .iter()
        .zip(ranks)
        .fold(set.ring().one(), |acc, (c, r)| &acc * &c.pow(r as i64).unwrap())
}

pub fn group_tables() -> Vec<GroupTable> {
    vec![
        GroupTable::cyclic(2).unwrap(),
        GroupTable::cyclic(3).unwrap(),
        GroupTable::cyclic(4).unwrap(),
        GroupTable::cyclic(6).unwrap(),
        GroupTable::elementary_abelian_2(2).unwrap(),
        GroupTable::elementary_abelian_2(3).unwrap(),
        GroupTable::dihedral(6).unwrap(),
        GroupTable::dihedral(8).unwrap(),
        GroupTable::symmetric_3().unwrap(),
    ]
}

pub fn closure_of_paraunitarity(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    let n = rng.gen_range(1..=4);
    let a = paraunitary_in(&ring, n, &["z"], &mut rng);
    let b = paraunitary_in(&ring, n, &["z", "y"], &mut rng);
    prop_assert!(is_pu(&a.try_mul(&b).unwrap()));
    prop_assert!(is_pu(&a.adjoint()));
    prop_assert!(is_pu(&a.transpose()));
    prop_assert!(is_pu(&a.permute_rows(&permutation(n, &mut rng)).unwrap()));
    prop_assert!(is_pu(&b.permute_cols(&permutation(n, &mut rng)).unwrap()));
    let m = rng.gen_range(1..=3);
    let c = paraunitary_in(&ring, m, &["t"], &mut rng);
    prop_assert!(is_pu(&a.tensor(&c).unwrap()));
    Ok(())
}

pub fn composition_trees(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    // depth 3: ((A B) (x) C) (D (x) E)
    let a = paraunitary_in(&ring, 2, &["z"], &mut rng);
    let b = paraunitary_in(&ring, 2, &["z"], &mut rng);
    let c = paraunitary_in(&ring, 2, &["y"], &mut rng);
    let d = paraunitary_in(&ring, 2, &["z", "y"], &mut rng);
    let e = paraunitary_in(&ring, 2, &["t"], &mut rng);
    let left = compose(&[compose(&[a, b], ComposeMode::Product).unwrap(), c], ComposeMode::Tensor).unwrap();
    let right = compose(&[d, e], ComposeMode::Tensor).unwrap();
    prop_assert!(is_pu(&compose(&[left, right], ComposeMode::Product).unwrap()));
    Ok(())
}

pub fn every_constructor_yields_a_verified_set(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    let n = rng.gen_range(1..=5);
    let s = random::idempotent_set(&ring, n, &mut rng).unwrap();
    prop_assert!(verify_set(&s).unwrap().passed);
    let merged = merge(&s, &random::partition(s.len(), &mut rng)).unwrap();
    prop_assert!(verify_set(&merged).unwrap().passed);
    let conj = conjugate_set(&s, &random::orthogonal(&ring, n, &mut rng).unwrap()).unwrap();
    prop_assert!(verify_set(&conj).unwrap().passed);
    let t = random::idempotent_set(&ring, rng.gen_range(1..=3), &mut rng).unwrap();
    prop_assert!(verify_set(&tensor_sets(&s, &t).unwrap()).unwrap().passed);
    let p = paraunitary_in(&ring, n, &["z"], &mut rng);
    prop_assert!(verify_set(&from_matrix_rows(&p).unwrap()).unwrap().passed);
    Ok(())
}

pub fn realified_group_sets_verify(seed: u64) -> Result<(), TestCaseError> {
    let tables = group_tables();
    let table = &tables[(seed % tables.len() as u64) as usize];
    let ring = Ring::cyclotomic(24).unwrap();
    let s = group_set(table, &ring).unwrap();
    let r = realify(&s).unwrap();
    prop_assert!(verify_set(&r).unwrap().passed);
    prop_assert!(verify_set(&r.embed(&Ring::rational()).unwrap()).unwrap().passed);
    Ok(())
}

pub fn group_ring_embedding_is_a_homomorphism(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let tables = group_tables();
    let table = Arc::new(tables.choose(&mut rng).unwrap().clone());
    let ring = Ring::cyclotomic(12).unwrap();
    let element = |rng: &mut SeededRng| {
        let coeffs = (0..table.order())
            .map(|_| if rng.gen_bool(0.3) { Ok(ring.zero()) } else { random::nonzero(&ring, rng) })
            .collect::<paraunitary::Result<Vec<_>>>()
            .unwrap();
        GroupRingElement::new(table.clone(), &ring, coeffs).unwrap()
    };
    let u = element(&mut rng);
    let v = element(&mut rng);
    prop_assert_eq!(u.try_mul(&v).unwrap().embed(), u.embed().try_mul(&v.embed()).unwrap());
    prop_assert_eq!(u.try_add(&v).unwrap().embed(), u.embed().try_add(&v.embed()).unwrap());
    prop_assert_eq!(u.transpose().embed(), u.embed().transpose());
    prop_assert_eq!(u.star().embed(), u.embed().adjoint());
    Ok(())
}

pub fn ranks_sum_to_n_and_merge_adds_ranks(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    let n = rng.gen_range(1..=6);
    let s = random::idempotent_set(&ring, n, &mut rng).unwrap();
    let ranks = s.ranks().unwrap();
    prop_assert_eq!(ranks.iter().sum::<usize>(), n);
    for (m, r) in s.members().iter().zip(&ranks) {
        prop_assert_eq!(m.rank().unwrap(), *r);
    }
    let groups = random::partition(s.len(), &mut rng);
    let merged = merge(&s, &groups).unwrap().ranks().unwrap();
    let expected: Vec<usize> = groups.iter().map(|g| g.iter().map(|&i| ranks[i]).sum()).collect();
    prop_assert_eq!(merged, expected);
    Ok(())
}

pub fn determinant_of_paraunitary_is_a_unit(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    let n = rng.gen_range(1..=4);
    let w = paraunitary_in(&ring, n, &["z", "y"], &mut rng);
    let d = w.determinant().unwrap();
    prop_assert!(d.try_mul(&d.star()).unwrap().is_one());
    prop_assert!(d.is_unit_monomial().is_some());
    Ok(())
}

pub fn determinant_of_a_combination(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    let n = rng.gen_range(1..=6);
    let s = random::idempotent_set(&ring, n, &mut rng).unwrap();
    let coeffs: Vec<Scalar> = (0..s.len()).map(|_| random::nonzero(&ring, &mut rng).unwrap()).collect();
    let mut a = PolyMatrix::zeros(&ring, &VarSet::empty(), n, n);
    for (c, m) in coeffs.iter().zip(s.members()) {
        a = a.try_add(&m.scale(c).unwrap()).unwrap();
    }
    let expected = LaurentPoly::constant(product_of_powers(&s, &coeffs), &VarSet::empty());
    prop_assert_eq!(a.determinant().unwrap(), expected.clone());
    prop_assert_eq!(cofactor_det(&a), expected);
    Ok(())
}

pub fn bareiss_matches_cofactor_expansion(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    let n = rng.gen_range(1..=5);
    let names: &[&str] = if rng.gen_bool(0.5) { &[] } else { &["z", "y"] };
    let m = laurent_matrix(&ring, &vars(names), n, &mut rng);
    prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&m));
    Ok(())
}

pub fn latin_square_arrangements(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    let k = rng.gen_range(1..=5);
    // a k-member set: merge the tail of a set on k + 1 or more members
    let mut s = random::idempotent_set(&ring, k + 1, &mut rng).unwrap();
    while s.len() < k {
        s = random::idempotent_set(&ring, k + 1, &mut rng).unwrap();
    }
    if s.len() > k {
        let mut groups: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
        groups[k - 1].extend(k..s.len());
        s = merge(&s, &groups).unwrap();
    }
    let grid = random::latin_square(k, &mut rng);
    let names: Vec<String> = (0..k * k).map(|i| format!("x{i}")).collect();
    let v = VarSet::new(names.iter().map(String::as_str)).unwrap();
    let units = (0..k * k).map(|_| random::unit(&ring, &mut rng).unwrap()).collect::<Vec<_>>();
    let cells: Vec<Vec<LaurentPoly>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| LaurentPoly::monomial_named(units[i * k + j].clone(), &[(&names[i * k + j], 1)]).unwrap())
                .map(|p| p.with_vars(&v).unwrap())
                .collect()
        })
        .collect();
    let plan = ArrangementPlan::new(grid, cells).unwrap();
    prop_assert!(is_pu(&block_arrangement(&s, &plan).unwrap()));
    Ok(())
}

pub fn random_tangle_variants(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = [Ring::cyclotomic(8).unwrap(), Ring::prime_field(7).unwrap(), Ring::prime_field(17).unwrap()]
        .choose(&mut rng)
        .unwrap()
        .clone();
    let n = rng.gen_range(1..=3);
    let variant = *TangleVariant::all().choose(&mut rng).unwrap();
    let a = paraunitary_in(&ring, n, &["x", "y"], &mut rng);
    let b = paraunitary_in(&ring, n, &["z"], &mut rng);
    prop_assert!(is_pu(&tangle(&a, &b, variant).unwrap()));
    Ok(())
}

pub fn star_laws(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    let v = vars(&["z", "y"]);
    let f = laurent(&ring, &v, &mut rng);
    let g = laurent(&ring, &v, &mut rng);
    prop_assert_eq!(f.star().star(), f.clone());
    prop_assert_eq!(f.try_mul(&g).unwrap().star(), f.star().try_mul(&g.star()).unwrap());
    prop_assert_eq!(f.try_add(&g).unwrap().star(), f.star().try_add(&g.star()).unwrap());
    prop_assert_eq!(f.try_mul(&g).unwrap(), g.try_mul(&f).unwrap());
    Ok(())
}

pub fn substitution_laws(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = random::rng(seed);
    let ring = any_ring(&mut rng);
    let v = vars(&["z", "y"]);
    let f = laurent(&ring, &v, &mut rng);
    let g = laurent(&ring, &v, &mut rng);
    let mut units = BTreeMap::new();
    for name in ["z", "y"] {
        let u = random::unit(&ring, &mut rng).unwrap();
        units.insert(name.to_string(), LaurentPoly::constant(u, &VarSet::empty()));
    }
    let at = |p: &LaurentPoly| p.substitute(&units).unwrap();
    prop_assert_eq!(at(&f.try_mul(&g).unwrap()), at(&f).try_mul(&at(&g)).unwrap());
    prop_assert_eq!(at(&f.try_add(&g).unwrap()), at(&f).try_add(&at(&g)).unwrap());
    // evaluating at unit-modulus values commutes with the involution
    let value = |p: LaurentPoly| p.constant_value().unwrap_or_else(|| ring.zero());
    prop_assert_eq!(value(at(&f.star())), value(at(&f)).conj());
    // substituting a unit monomial in another variable is a homomorphism
    let u = random::unit(&ring, &mut rng).unwrap();
    let mut shift = BTreeMap::new();
    shift.insert("z".to_string(), LaurentPoly::monomial_named(u, &[("t", rng.gen_range(-2..=2))]).unwrap());
    let sub = |p: &LaurentPoly| p.substitute(&shift).unwrap();
    prop_assert_eq!(sub(&f.try_mul(&g).unwrap()), sub(&f).try_mul(&sub(&g)).unwrap());
    prop_assert_eq!(sub(&f.star()), sub(&f).star());
    Ok(())
}

pub const ALL: &[(&str, Property)] = &[
    ("closure_of_paraunitarity", closure_of_paraunitarity),
    ("composition_trees", composition_trees),
    ("every_constructor_yields_a_verified_set", every_constructor_yields_a_verified_set),
    ("realified_group_sets_verify", realified_group_sets_verify),
    ("group_ring_embedding_is_a_homomorphism", group_ring_embedding_is_a_homomorphism),
    ("ranks_sum_to_n_and_merge_adds_ranks", ranks_sum_to_n_and_merge_adds_ranks),
    ("determinant_of_paraunitary_is_a_unit", determinant_of_paraunitary_is_a_unit),
    ("determinant_of_a_combination", determinant_of_a_combination),
    ("bareiss_matches_cofactor_expansion", bareiss_matches_cofactor_expansion),
    ("latin_square_arrangements", latin_square_arrangements),
    ("random_tangle_variants", random_tangle_variants),
    ("star_laws", star_laws),
    ("substitution_laws", substitution_laws),
];
