//! Full-separability analysis of four-qubit GHZ-diagonal states.
//!
//! * [`states`]: the three equivalent parameterizations and the named families.
//! * [`witness`]: witness operators and their product-state maxima.
//! * [`matching`]: matched witnesses, `R~`, `L_min` and criteria I-IV.
//! * [`boundaries`]: analytic boundary curves and surfaces.
//! * [`decompositions`]: explicit product-state mixtures on the boundary.
//! * [`oracle`]: brute-force verifiers.

// `!(x >= 0.0)` rejects NaN on purpose; index loops mirror the formulas
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod boundaries;
pub mod decompositions;
pub mod error;
pub mod linalg;
pub mod matching;
pub mod oracle;
pub mod pauli;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
