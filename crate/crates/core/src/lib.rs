//! Exact-arithmetic toolkit for moduli of complexes of sheaf-like objects:
//! constructive mutations between spaces of complexes, King-style
//! (semi-)stability for reductive and non-reductive group actions with
//! polarizations, the polarization-transform calculus, and the codimension
//! constants governing existence of projective quotients — with brute-force
//! oracles at desk scale over small prime fields.

pub mod bilinear;
pub mod chain;
pub mod constants;
pub mod context;
pub mod error;
pub mod field;
pub mod io;
pub mod king;
pub mod matrix;
pub mod mutation;
pub mod polar;
pub mod spaces;
pub mod subspace;
pub mod synth;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::Matrix;
pub use subspace::Subspace;
