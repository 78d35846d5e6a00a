//! Numerical realization of finite-rank Coxeter groups.
//!
//! The crate enumerates positive roots by depth, decides dominance between
//! roots, canonicalizes reflection subgroups, recognizes affine parabolic
//! subgroups and approximates and classifies limit roots of normalized root
//! systems together with membership in the imaginary cone.
//!
//! Simple roots are the standard basis of `ℝⁿ`; every vector in this crate is
//! a coefficient list over the simple roots. The transverse hyperplane `V₁`
//! is the affine hyperplane of coordinate sum one.

pub mod corpus;
pub mod datum;
pub mod dominance;
pub mod error;
pub mod limits;
pub mod roots;
pub mod subgroups;
pub mod vector;

pub use datum::{parse_datum, Bond, CoxeterDatum, SimpleSubset, DEFAULT_TOLERANCE};
pub use error::{Error, Result};
pub use roots::{
    act, descent, full_support_root, generate_roots, generate_roots_with, inversion_set, reflect,
    reflect_root, reflect_vector, support, EnumerationLimits, InversionSet, Root, RootSlice, Sign,
    Witness, Word,
};
