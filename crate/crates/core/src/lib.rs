//! Deciding and certifying generic global rigidity of braced plane
//! triangulations in 3-space.
//!
//! A braced plane triangulation is a plane triangulation plus extra bracing
//! edges. Such a graph is generically globally rigid in R^3 exactly when it
//! is 4-connected and has at least one brace. This crate decides the
//! property constructively: the decision procedure emits a machine-checkable
//! certificate (a chain of contractions down to K5 with exact rank witnesses
//! at every step), and an independent randomized stress-matrix oracle
//! cross-checks the verdict.
//!
//! All rank computations are exact, over a 62-bit prime field by default or
//! over arbitrary-precision rationals; the core is generic over that scalar
//! choice.

pub mod braced;
pub mod contractible;
pub mod exact_linalg;
pub mod generate;
pub mod global_rigidity;
pub mod graph;
pub mod io;
pub mod rigidity;
pub mod triangulation;

pub use braced::{decide_braced, verify_certificate, BracedTriangulation, Certificate};
pub use exact_linalg::{FieldSpec, Matrix, RandomSource, Scalar, PRIME, PRIME_ALT};
pub use global_rigidity::{check_global_rigidity, GlobalRigidityVerdict, Verdict3};
pub use graph::{edge, Edge, SimpleGraph};
pub use triangulation::{CycleInfo, NearTriangulation, PlaneTriangulation};

/// Default prime-field scalar.
pub type Fq = exact_linalg::Fp<PRIME>;
/// Independent second prime field for rank cross-checks.
pub type FqAlt = exact_linalg::Fp<PRIME_ALT>;
/// Exact rational scalar: the slow, assumption-free verification path.
pub type Rat = num_rational::BigRational;
