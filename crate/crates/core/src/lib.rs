//! Simulation of polarization-entangled photon pairs from the biexciton-exciton
//! cascade of a quantum dot with non-zero fine structure splitting, and of the
//! time-dependent differential phase-ramp scheme that removes the random
//! which-time phase from the emitted pair.
//!
//! Units are fixed throughout: time in ns, energy in μeV, angular frequency in
//! rad/ns, phase in rad, voltage in V.

pub mod cascade;
pub mod cli;
pub mod compensation;
pub mod config;
pub mod eom;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod metrics;
pub mod montecarlo;
pub mod oracle;
pub mod state;

pub use cascade::{CascadeParams, EmissionEvent};
pub use compensation::{MismatchSpec, RampParams};
pub use error::{Error, Result};
pub use metrics::MetricsReport;
pub use montecarlo::{McConfig, McResult};
pub use state::{BellTarget, DensityMatrix, TwoPhotonKet};

/// Reduced Planck constant in μeV·ns.
pub const HBAR_UEV_NS: f64 = 0.6582119569;
