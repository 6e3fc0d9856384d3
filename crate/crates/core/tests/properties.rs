mod common;

use common::props;
use paraunitary::{parse_poly, PolyMatrix, Ring, VarSet};
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(200))]

    #[test]
    fn closure_of_paraunitarity(seed in any::<u64>()) {
        props::closure_of_paraunitarity(seed)?;
    }

    #[test]
    fn composition_trees(seed in any::<u64>()) {
        props::composition_trees(seed)?;
    }

    #[test]
    fn every_constructor_yields_a_verified_set(seed in any::<u64>()) {
        props::every_constructor_yields_a_verified_set(seed)?;
    }

    #[test]
    fn realified_group_sets_verify(seed in any::<u64>()) {
        props::realified_group_sets_verify(seed)?;
    }

    #[test]
    fn group_ring_embedding_is_a_homomorphism(seed in any::<u64>()) {
        props::group_ring_embedding_is_a_homomorphism(seed)?;
    }

    #[test]
    fn ranks_sum_to_n_and_merge_adds_ranks(seed in any::<u64>()) {
        props::ranks_sum_to_n_and_merge_adds_ranks(seed)?;
    }

    #[test]
    fn determinant_of_paraunitary_is_a_unit(seed in any::<u64>()) {
        props::determinant_of_paraunitary_is_a_unit(seed)?;
    }

    #[test]
    fn determinant_of_a_combination(seed in any::<u64>()) {
        props::determinant_of_a_combination(seed)?;
    }

    #[test]
    fn bareiss_matches_cofactor_expansion(seed in any::<u64>()) {
        props::bareiss_matches_cofactor_expansion(seed)?;
    }

    #[test]
    fn latin_square_arrangements(seed in any::<u64>()) {
        props::latin_square_arrangements(seed)?;
    }

    #[test]
    fn random_tangle_variants(seed in any::<u64>()) {
        props::random_tangle_variants(seed)?;
    }

    #[test]
    fn star_laws(seed in any::<u64>()) {
        props::star_laws(seed)?;
    }

    #[test]
    fn substitution_laws(seed in any::<u64>()) {
        props::substitution_laws(seed)?;
    }
}

#[test]
fn cofactor_oracle_small_cases() {
    let q = Ring::rational();
    let m = PolyMatrix::parse_rows(&q, &[&["1", "2"], &["3", "4"]]).unwrap();
    assert_eq!(common::cofactor_det(&m), parse_poly("-2", &q, None).unwrap());
    assert!(common::cofactor_det(&PolyMatrix::identity(&q, &VarSet::empty(), 5)).is_one());
}
