//! Simulator for a quantum-injected parametric amplifier used as an optimal
//! universal cloner and universal-NOT gate.

pub mod channels;
pub mod cli;
pub mod detection;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod params;
pub mod table;
pub mod universality;
pub mod wigner;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, Mode, OccupationKet, SpatialMode, StateVector};
pub use params::{AmplifierParams, PolarizationQubit};
