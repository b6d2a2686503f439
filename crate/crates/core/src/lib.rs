//! Exact and Born-Oppenheimer solutions of a one-dimensional molecule made of
//! two nuclei and one electron joined by harmonic springs.
//!
//! Lengths, masses and energies are in reduced units (`hbar = 1`); see
//! [`model::nondimensionalize`] for the conversion from physical input.

pub mod asymptotics;
pub mod born_oppenheimer;
pub mod cli;
pub mod config;
pub mod error;
pub mod exact;
pub mod hermite;
pub mod homonuclear;
pub mod model;
pub mod normal_modes;
pub mod oracle;

pub use error::{Error, Result};
pub use model::{ForceConstants, ModelParams, PhysicalParams};
