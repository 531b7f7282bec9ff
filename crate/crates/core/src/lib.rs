//! Exact symbolic engine for the quantum projective line: the coordinate
//! algebra of quantum SU(2) with its PBW rewrite system, the left-covariant
//! 2D calculus in a collapsed push-right model, line bundles with their
//! standard holomorphic structures, first jet modules with the lifted
//! holomorphic structure and splitting-defect machinery, and the bimodule
//! braiding layer. All arithmetic is exact over the field `Q(q^{1/2})`.

pub mod bimodule;
pub mod bundles;
pub mod calculus;
pub mod jet;
pub mod linalg;
pub mod ncalg;
pub mod parser;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod su2;
pub mod suites;

pub use scalar::Scalar;
