//! Differential phase-ramp compensation.
//!
//! Each photon crosses a polarization-dependent phase gate whose phase grows
//! linearly in time, `φ(t) = K·(t − t_start) + φ⁰`. Collecting the gate
//! phases of both photons and the fine-structure precession gives the
//! relative HH/VV phase
//!
//! ```text
//! Φ = (ΔK_xx + ΔK_x)·t1 + (ΔK_x + FSS/ħ)·t2
//!   + ΔK_xx·(t_prop_xx − t_start_xx) + ΔK_x·(t_prop_x − t_start_x)
//!   + Δφ⁰_xx + Δφ⁰_x
//! ```
//!
//! with `ΔK = K_V − K_H` per branch. The random delays drop out when
//! `ΔK_x = −FSS/ħ` and `ΔK_xx = −ΔK_x`. The residual coefficients of `t2`
//! and `t1` are the mismatches `Δω₁` and `Δω₂`.

use crate::cascade::{precession_rate, CascadeParams, EmissionEvent};
use crate::error::{invalid, Error, Result};
use crate::state::{ket_from_phase_unchecked, TwoPhotonKet};
use crate::HBAR_UEV_NS;

/// Slopes (rad/ns), constant phases (rad) and timing offsets (ns) of the
/// biexciton (`xx`) and exciton (`x`) phase gates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RampParams {
    pub k_vxx: f64,
    pub k_hxx: f64,
    pub k_vx: f64,
    pub k_hx: f64,
    pub phi0_vxx: f64,
    pub phi0_hxx: f64,
    pub phi0_vx: f64,
    pub phi0_hx: f64,
    pub t_prop_xx: f64,
    pub t_prop_x: f64,
    pub t_start_xx: f64,
    pub t_start_x: f64,
}

impl RampParams {
    /// All gates off.
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("k_vxx", self.k_vxx),
            ("k_hxx", self.k_hxx),
            ("k_vx", self.k_vx),
            ("k_hx", self.k_hx),
            ("phi0_vxx", self.phi0_vxx),
            ("phi0_hxx", self.phi0_hxx),
            ("phi0_vx", self.phi0_vx),
            ("phi0_hx", self.phi0_hx),
            ("t_prop_xx", self.t_prop_xx),
            ("t_prop_x", self.t_prop_x),
            ("t_start_xx", self.t_start_xx),
            ("t_start_x", self.t_start_x),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }

    /// Differential slope of the biexciton gate, `K_Vxx − K_Hxx`.
    pub fn delta_k_xx(&self) -> f64 {
        self.k_vxx - self.k_hxx
    }

    /// Differential slope of the exciton gate, `K_Vx − K_Hx`.
    pub fn delta_k_x(&self) -> f64 {
        self.k_vx - self.k_hx
    }

    /// Timing detuning between the two branches.
    pub fn delta_t(&self) -> f64 {
        (self.t_prop_xx - self.t_start_xx) - (self.t_prop_x - self.t_start_x)
    }

    /// Event-independent part of [`total_phase`].
    pub fn constant_phase(&self) -> f64 {
        self.delta_k_xx() * (self.t_prop_xx - self.t_start_xx)
            + self.delta_k_x() * (self.t_prop_x - self.t_start_x)
            + (self.phi0_vxx - self.phi0_hxx + self.phi0_vx - self.phi0_hx)
    }
}

/// Deviations from perfect compensation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MismatchSpec {
    /// Residual coefficient of the exciton delay t2, rad/ns.
    pub d_omega1: f64,
    /// Residual coefficient of the biexciton delay t1, rad/ns.
    pub d_omega2: f64,
    /// Branch timing detuning, ns.
    pub delta_t: f64,
}

impl MismatchSpec {
    pub fn new(d_omega1: f64, d_omega2: f64, delta_t: f64) -> Result<Self> {
        let m = Self { d_omega1, d_omega2, delta_t };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("d_omega1", self.d_omega1), ("d_omega2", self.d_omega2), ("delta_t", self.delta_t)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }
}

/// Relative HH/VV phase after both gates for one emission event.
pub fn total_phase(r: &RampParams, p: &CascadeParams, e: &EmissionEvent) -> f64 {
    let (d_omega1, d_omega2) = mismatch_of(r, p);
    d_omega2 * e.t1 + d_omega1 * e.t2 + r.constant_phase()
}

/// Pair state after the compensation gates.
pub fn compensated_pair_state(r: &RampParams, p: &CascadeParams, e: &EmissionEvent) -> TwoPhotonKet {
    ket_from_phase_unchecked(total_phase(r, p, e))
}

/// Ramp satisfying both compensation conditions on top of the given H
/// baselines, with all constant phases and timing offsets zero.
pub fn ideal_ramp(p: &CascadeParams, k_hx: f64, k_hxx: f64) -> RampParams {
    let w = precession_rate(p);
    RampParams {
        k_hx,
        k_hxx,
        k_vx: k_hx - w,
        k_vxx: k_hxx + w,
        ..RampParams::zero()
    }
}

/// `(Δω₁, Δω₂)`: the coefficients of t2 and t1 in [`total_phase`].
pub fn mismatch_of(r: &RampParams, p: &CascadeParams) -> (f64, f64) {
    let d_omega1 = r.delta_k_x() + precession_rate(p);
    let d_omega2 = r.delta_k_xx() + r.delta_k_x();
    (d_omega1, d_omega2)
}

/// Ramp with zero H slopes realizing the given mismatches, with the timing
/// detuning placed on the biexciton branch.
pub fn ramp_from_mismatch(m: &MismatchSpec, p: &CascadeParams) -> RampParams {
    let k_vx = m.d_omega1 - precession_rate(p);
    let k_vxx = m.d_omega2 - k_vx;
    RampParams {
        k_vx,
        k_vxx,
        t_prop_xx: m.delta_t,
        ..RampParams::zero()
    }
}

/// Instantaneous angular frequencies `(ω_H, ω_V)` of the exciton photon
/// after its phase gate.
pub fn instantaneous_frequencies(r: &RampParams, p: &CascadeParams) -> Result<(f64, f64)> {
    let energy = p.exciton_energy.ok_or(Error::MissingExcitonEnergy)?;
    if !energy.is_finite() {
        return Err(invalid("exciton_energy", "must be finite"));
    }
    let centre = energy / HBAR_UEV_NS;
    let half_split = p.fss / (2.0 * HBAR_UEV_NS);
    let omega_v = centre + half_split + r.k_vx;
    let omega_h = centre - half_split + r.k_hx;
    Ok((omega_h, omega_v))
}
