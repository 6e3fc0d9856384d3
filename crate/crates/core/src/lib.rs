//! Exact construction and verification of paraunitary matrices built from
//! complete symmetric orthogonal sets of idempotents.

pub mod catalog;
pub mod constructors;
pub mod error;
pub mod idempotents;
pub mod laurent;
pub mod pipeline;
pub mod polymatrix;
pub mod random;
pub mod scalars;

pub use error::{Error, Result};
pub use idempotents::{verify_set, GroupRingElement, GroupTable, IdempotentSet};
pub use laurent::{parse_poly, LaurentPoly, VarSet};
pub use polymatrix::{PolyMatrix, VerificationReport};
pub use scalars::{Rational, Ring, Scalar};
pub use constructors::{
    belevitch_block, block_arrangement, compose, compose_paraunitary, monomial_clear, monomial_sum, pseudo_from_rows,
    specialize_hadamard, spectral_unitary, tangle, ArrangementPlan, ClearedMatrix, ComposeMode, HadamardReport,
    MonomialAssignment, TangleVariant,
};
