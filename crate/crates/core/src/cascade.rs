//! Quantum-dot cascade model: fine-structure precession, emission-time
//! statistics and the uncompensated photon-pair state.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::state::{ket_from_phase_unchecked, TwoPhotonKet};
use crate::HBAR_UEV_NS;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeParams {
    /// Fine structure splitting magnitude, μeV.
    pub fss: f64,
    /// Exciton lifetime, ns.
    pub tau_x: f64,
    /// Biexciton lifetime, ns.
    pub tau_xx: f64,
    /// Mean exciton energy E_x, μeV. Only needed for instantaneous frequencies.
    pub exciton_energy: Option<f64>,
}

impl CascadeParams {
    pub const DEFAULT_TAU_X: f64 = 1.0;
    pub const DEFAULT_TAU_XX: f64 = 0.5;

    pub fn new(fss: f64, tau_x: f64, tau_xx: f64) -> Result<Self> {
        let p = Self { fss, tau_x, tau_xx, exciton_energy: None };
        p.validate()?;
        Ok(p)
    }

    /// Dot with the given splitting and the default lifetimes (1 ns, 0.5 ns).
    pub fn with_fss(fss: f64) -> Result<Self> {
        Self::new(fss, Self::DEFAULT_TAU_X, Self::DEFAULT_TAU_XX)
    }

    pub fn with_exciton_energy(mut self, energy: f64) -> Result<Self> {
        if !energy.is_finite() {
            return Err(invalid("exciton_energy", "must be finite"));
        }
        self.exciton_energy = Some(energy);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fss.is_finite() && self.fss >= 0.0) {
            return Err(invalid("fss", format!("must be finite and >= 0, got {}", self.fss)));
        }
        if !(self.tau_x.is_finite() && self.tau_x > 0.0) {
            return Err(invalid("tau_x", format!("must be finite and > 0, got {}", self.tau_x)));
        }
        if !(self.tau_xx.is_finite() && self.tau_xx > 0.0) {
            return Err(invalid("tau_xx", format!("must be finite and > 0, got {}", self.tau_xx)));
        }
        Ok(())
    }
}

/// Random emission times of one cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionEvent {
    /// Delay of the biexciton photon after excitation, ns.
    pub t1: f64,
    /// Delay of the exciton photon after the biexciton photon, ns.
    pub t2: f64,
}

impl EmissionEvent {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !(t1.is_finite() && t1 >= 0.0) {
            return Err(invalid("t1", "must be finite and >= 0"));
        }
        if !(t2.is_finite() && t2 >= 0.0) {
            return Err(invalid("t2", "must be finite and >= 0"));
        }
        Ok(Self { t1, t2 })
    }
}

/// Precession rate `FSS/ħ` in rad/ns.
pub fn precession_rate(p: &CascadeParams) -> f64 {
    p.fss / HBAR_UEV_NS
}

/// Exponential variate with mean `tau`, by inverse transform on u ∈ (0, 1].
#[inline]
pub fn sample_exponential<R: Rng + ?Sized>(tau: f64, rng: &mut R) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    -tau * u.ln()
}

/// Draws independent biexciton and exciton delays.
pub fn sample_emission<R: Rng + ?Sized>(p: &CascadeParams, rng: &mut R) -> EmissionEvent {
    let t1 = sample_exponential(p.tau_xx, rng);
    let t2 = sample_exponential(p.tau_x, rng);
    EmissionEvent { t1, t2 }
}

/// Pair state without compensation: only the exciton delay matters.
pub fn raw_pair_state(p: &CascadeParams, e: &EmissionEvent) -> TwoPhotonKet {
    ket_from_phase_unchecked(precession_rate(p) * e.t2)
}
