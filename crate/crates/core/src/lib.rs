//! Spectral toolkit for a cubic coupled Schrödinger system on ℝ×𝕋 and its
//! resonant limit dynamics.
//!
//! The crate is organised around three layers:
//!
//! * spectral primitives — grids, the mixed (ξ, p) transform pair and the
//!   weighted Sobolev norms ([`grid`], [`field`], [`norms`]);
//! * the resonant trilinear operator and the finite-dimensional dynamics it
//!   generates — the reduced two-component mode system, the integrable planar
//!   reduction with its beating orbits, and the ξ-parametrised field system
//!   ([`resonant`], [`reduced`], [`beating`], [`resonant_field`]);
//! * a split-step solver for the full dispersive system together with the
//!   profile, decomposition and scattering diagnostics ([`nls`]).
//!
//! Binary snapshots of field pairs use the RSFD format implemented in
//! [`snapshot`].

pub mod beating;
pub mod envelope;
pub mod error;
mod fft;
pub mod field;
pub mod grid;
pub mod nls;
pub mod norms;
pub mod ode;
pub mod quadrature;
pub mod reduced;
pub mod resonant;
pub mod resonant_field;
pub mod sequence;
pub mod snapshot;

pub use error::Error;
pub use field::{ProductField, Representation};
pub use grid::{LineGrid, TorusGrid};
pub use sequence::TorusSequence;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Default Sobolev regularity exponent used by the strong norms and the
/// scattering diagnostics.
pub const SOBOLEV_N: i32 = 12;
