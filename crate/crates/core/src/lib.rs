//! Numerical toolkit for bounded symmetric domains realised as open unit
//! balls of products of type-I Cartan factors (complex `p x q` matrices).
//!
//! The crate is organised bottom-up:
//!
//! * [`space`] and [`triple`]: the JB*-triple structure, box/quadratic/Bergman
//!   operators and dense operator representations.
//! * [`tripotent`]: tripotents, frames, spectral decompositions, Peirce and
//!   joint Peirce projections, chains.
//! * [`geometry`]: Möbius transformations, Carathéodory and Bergman distances,
//!   flats, geodesic symmetries, almost geodesics.
//! * [`boundary`]: horofunctions, Gromov products, detour cost and the
//!   Hilbert/Thompson cone metrics on parts.
//! * [`maps`]: empirical analysis of linear and distance-preserving maps.
//! * [`verify`]: the seeded identity-checking harness behind `symdom verify`.

pub mod boundary;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod json;
pub mod linalg;
pub mod maps;
pub mod random;
pub mod space;
pub mod triple;
pub mod tripotent;
pub mod verify;

pub use error::{Error, Result};
pub use space::{CMatrix, Element, Factor, TripleSpace, C64};
pub use triple::ComplexLinearOperator;
pub use tripotent::{Frame, SpectralDecomposition, Tripotent};

/// Default relative tolerance for tripotent/orthogonality predicates.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Environment variable overriding [`DEFAULT_TOL`] for the command-line tool.
pub const TOL_ENV_VAR: &str = "SYMDOM_TOL";
