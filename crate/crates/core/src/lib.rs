//! Ground states and phase structure of a quantum Rabi model whose field
//! mode carries an extra quadratic potential conditioned on the photon
//! number `n` of an ancilla cavity.
//!
//! Layers, bottom up: [`fock`] (truncated operators and frame-tagged
//! states), [`eigensolver`], [`model`] (parameters, frames, Hamiltonians and
//! closed-form results), [`observables`] and [`experiments`].

pub mod eigensolver;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod model;
pub mod observables;

pub use error::{Error, Result};
