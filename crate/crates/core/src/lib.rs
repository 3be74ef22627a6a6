//! Supersymmetric sinh-Gordon solitons from Bäcklund transformations.
//!
//! Values live in a Grassmann algebra whose coefficients are [`Jet`]s, so
//! every superfield evaluation carries exact `∂x`, `∂t`, `∂x∂t` and the
//! field equation can be checked pointwise without finite differences.

pub mod analytic;
pub mod backlund;
pub mod cli;
pub mod config;
pub mod error;
pub mod grassmann;
pub mod jet;
pub mod sampling;
pub mod solitons;
pub mod superfield;
pub mod verify;

pub use backlund::{AuxFermion, AuxField, SpectralPair};
pub use error::{Error, Result};
pub use grassmann::{GrassmannNumber, Parity};
pub use jet::Jet;
pub use solitons::{BianchiLattice, OneSoliton, SolitonParams};
pub use superfield::{Components, FieldFunction, Superfield};
