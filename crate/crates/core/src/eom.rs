//! Electro-optic modulator drive design.
//!
//! A modulator with half-wave voltage `Vπ` imparts `π·V(t)/Vπ` on a photon,
//! so a voltage ramp of slope `dV/dt` yields phase slopes `π·(dV/dt)/Vπ` per
//! polarization. The differential slope must equal `FSS/ħ`.

use std::f64::consts::PI;

use crate::compensation::RampParams;
use crate::error::{invalid, Error, Result};
use crate::HBAR_UEV_NS;

/// Half-wave voltages for V (TM) and H (TE) polarized light.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomSpec {
    pub v_pi_v: f64,
    pub v_pi_h: f64,
}

impl EomSpec {
    pub fn new(v_pi_v: f64, v_pi_h: f64) -> Result<Self> {
        let spec = Self { v_pi_v, v_pi_h };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_pi_v.is_finite() && self.v_pi_v > 0.0) {
            return Err(invalid("v_pi_v", format!("must be finite and > 0, got {}", self.v_pi_v)));
        }
        if !(self.v_pi_h.is_finite() && self.v_pi_h > 0.0) {
            return Err(invalid("v_pi_h", format!("must be finite and > 0, got {}", self.v_pi_h)));
        }
        Ok(())
    }

    /// `π·(1/Vπ^V − 1/Vπ^H)`, rad per volt of differential phase.
    fn differential_gain(&self) -> f64 {
        PI * (1.0 / self.v_pi_v - 1.0 / self.v_pi_h)
    }
}

/// Voltage slope (V/ns) whose differential phase slope cancels the
/// precession. The sign gives the ramp direction.
pub fn required_ramp_slope(e: &EomSpec, fss: f64) -> Result<f64> {
    e.validate()?;
    if !fss.is_finite() {
        return Err(Error::NonFinite("fss"));
    }
    let gain = e.differential_gain();
    if gain == 0.0 {
        return Err(Error::DegenerateHalfWave(e.v_pi_v));
    }
    Ok((fss / HBAR_UEV_NS) / gain)
}

/// Phase slopes `(K_V, K_H)` in rad/ns for a voltage slope in V/ns.
pub fn phase_slopes(e: &EomSpec, dv_dt: f64) -> (f64, f64) {
    (PI * dv_dt / e.v_pi_v, PI * dv_dt / e.v_pi_h)
}

/// Two modulators driven with opposite ramps: `+dv_dt` on the biexciton
/// photon, `−dv_dt` on the exciton photon.
pub fn ramp_from_design(e: &EomSpec, dv_dt: f64) -> RampParams {
    let (k_v, k_h) = phase_slopes(e, dv_dt);
    RampParams {
        k_vxx: k_v,
        k_hxx: k_h,
        k_vx: -k_v,
        k_hx: -k_h,
        ..RampParams::zero()
    }
}

/// First-order Pockels index change `−(n³/2)·Σ_k r_k E_k` for one row of
/// the electro-optic tensor (r in m/V, E in V/m).
pub fn pockels_index_shift(n: f64, r_row: [f64; 3], e_field: [f64; 3]) -> Result<f64> {
    if !(n.is_finite() && n > 0.0) {
        return Err(invalid("n", format!("refractive index must be > 0, got {n}")));
    }
    let contraction: f64 = r_row.iter().zip(e_field.iter()).map(|(r, e)| r * e).sum();
    Ok(-0.5 * n.powi(3) * contraction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{precession_rate, CascadeParams};
    use crate::compensation::mismatch_of;

    fn linbo3() -> EomSpec {
        EomSpec::new(3.0, 9.0).unwrap()
    }

    #[test]
    fn slope_for_one_uev() {
        let s = required_ramp_slope(&linbo3(), 1.0).unwrap();
        assert!((s - 2.176).abs() < 5e-4, "{s}");
        // "around 2 V/(ns·μeV)"
        assert!((s - 2.0).abs() / 2.0 < 0.1);
        assert_eq!(required_ramp_slope(&linbo3(), 0.0).unwrap(), 0.0);
        let s3 = required_ramp_slope(&linbo3(), 3.0).unwrap();
        assert!((s3 - 6.53).abs() < 5e-3, "{s3}");
    }

    #[test]
    fn equal_half_wave_rejected() {
        let e = EomSpec::new(4.0, 4.0).unwrap();
        assert_eq!(required_ramp_slope(&e, 1.0), Err(Error::DegenerateHalfWave(4.0)));
        assert!(EomSpec::new(0.0, 1.0).is_err());
    }

    #[test]
    fn slopes() {
        let (kv, kh) = phase_slopes(&linbo3(), 2.176);
        assert!((kv - kh - 1.5193).abs() < 5e-4);
        assert_eq!(phase_slopes(&linbo3(), 0.0), (0.0, 0.0));

        let dv = required_ramp_slope(&linbo3(), 3.0).unwrap();
        let (kv, kh) = phase_slopes(&linbo3(), dv);
        assert!((kv - kh - 4.5578).abs() < 5e-5);
        assert!((kv - kh - 3.0 / HBAR_UEV_NS).abs() < 1e-9);
    }

    #[test]
    fn swap_is_antisymmetric() {
        let a = required_ramp_slope(&EomSpec::new(3.0, 9.0).unwrap(), 2.0).unwrap();
        let b = required_ramp_slope(&EomSpec::new(9.0, 3.0).unwrap(), 2.0).unwrap();
        assert!((a + b).abs() < 1e-12);
    }

    #[test]
    fn designed_ramp_compensates() {
        let p = CascadeParams::with_fss(3.0).unwrap();
        let dv = required_ramp_slope(&linbo3(), p.fss).unwrap();
        let r = ramp_from_design(&linbo3(), dv);
        assert!((r.delta_k_x() + precession_rate(&p)).abs() < 1e-9);
        let (d1, d2) = mismatch_of(&r, &p);
        assert!(d1.abs() < 1e-9 && d2.abs() < 1e-9);
    }

    #[test]
    fn pockels() {
        assert_eq!(pockels_index_shift(2.2, [1e-12, 2e-12, 3e-12], [0.0; 3]).unwrap(), 0.0);
        let dn = pockels_index_shift(2.2, [0.0, 0.0, 30.8e-12], [0.0, 0.0, 1e6]).unwrap();
        assert!((dn + 1.640e-4).abs() < 5e-8, "{dn}");
        let dn2 = pockels_index_shift(2.2, [0.0, 0.0, 30.8e-12], [0.0, 0.0, 2e6]).unwrap();
        assert!((dn2 - 2.0 * dn).abs() < 1e-18);
        assert!(pockels_index_shift(0.0, [0.0; 3], [0.0; 3]).is_err());
    }
}
