//! Exact reflection representations of Coxeter and Kac-Moody data: realizations,
//! Weyl group elements with reduced words, the Bruhat order, root enumeration
//! and sphericity of parabolic subgroups.
//!
//! All arithmetic is over arbitrary-precision rationals. Only Coxeter matrices
//! with entries in {2, 3, 4, 6, ∞} are accepted, since those are the ones that
//! come from a generalized Cartan matrix.

pub mod datum;
pub mod format;
pub mod group;
pub mod linalg;
pub mod rational;
pub mod realization;
pub mod roots;

pub use datum::{CartanKind, CoxeterDatum, DatumError};
pub use group::GroupElement;
pub use linalg::Matrix;
pub use rational::Q;
pub use realization::Realization;
pub use roots::{ImaginaryPolicy, RealRoot};

/// Default bound for the enumeration fallback of the sphericity test.
pub const SPHERICAL_CAP: usize = 10_000;
