//! Closed-form averages over exponential emission times.
//!
//! For `t ~ Exp(τ)`, `E[e^{iωt}] = 1/(1 − iωτ)`. The averaged pair state is
//! an X-state whose only coherence is `c/2` with
//! `c = e^{iφ₀} / ((1 − iΔω₂τ_xx)(1 − iΔω₁τ_x))`.

use num_complex::Complex64;

use crate::cascade::CascadeParams;
use crate::state::DensityMatrix;

/// Averaged HH–VV coherence factor (twice the ρ₁₄ element).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coherence(pub Complex64);

impl Coherence {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    /// Concurrence of the corresponding X-state.
    pub fn concurrence(&self) -> f64 {
        self.0.norm()
    }

    pub fn fidelity_phi_plus(&self) -> f64 {
        (1.0 + self.0.re) / 2.0
    }

    pub fn fidelity_phi_minus(&self) -> f64 {
        (1.0 - self.0.re) / 2.0
    }

    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + self.0.norm_sqr())
    }
}

/// Characteristic function of an exponential with mean `tau`.
pub fn exponential_characteristic(omega: f64, tau: f64) -> Complex64 {
    Complex64::new(1.0, -omega * tau).inv()
}

pub fn analytic_coherence(d_omega1: f64, d_omega2: f64, const_phase: f64, p: &CascadeParams) -> Coherence {
    let c = Complex64::from_polar(1.0, const_phase)
        * exponential_characteristic(d_omega2, p.tau_xx)
        * exponential_characteristic(d_omega1, p.tau_x);
    Coherence(c)
}

/// `½[[1,0,0,c],[0,0,0,0],[0,0,0,0],[c*,0,0,1]]`.
pub fn density_from_coherence(c: Coherence) -> DensityMatrix {
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(0.5, 0.0);
    let c = c.0;
    DensityMatrix::from_rows([
        [h, z, z, c * 0.5],
        [z, z, z, z],
        [z, z, z, z],
        [c.conj() * 0.5, z, z, h],
    ])
}

/// Average of `|ψ(Φ)⟩⟨ψ(Φ)|`. The ket carries `e^{iΦ}` on VV, so the HH–VV
/// element is `E[e^{−iΦ}]/2`, the conjugate of [`analytic_coherence`].
pub fn analytic_density(d_omega1: f64, d_omega2: f64, const_phase: f64, p: &CascadeParams) -> DensityMatrix {
    let c = analytic_coherence(d_omega1, d_omega2, const_phase, p);
    density_from_coherence(Coherence(c.value().conj()))
}

/// Coherence and acceptance when only pairs with exciton delay below
/// `t_gate` are kept.
///
/// Returns the conditional mean `E[e^{iωt} | t < t_gate]` for `t ~ Exp(τ)`
/// and the kept fraction `1 − e^{−t_gate/τ}`.
pub fn gated_coherence(t_gate: f64, omega: f64, tau: f64) -> (Complex64, f64) {
    let x = t_gate / tau;
    let y = omega * t_gate;
    let acceptance = -(-x).exp_m1();
    if acceptance == 0.0 {
        return (Complex64::new(1.0, 0.0), 0.0);
    }
    // 1 − e^{−x}e^{iy}, written to stay accurate for small gates
    let decay = (-x).exp();
    let half = (0.5 * y).sin();
    let numerator = Complex64::new(acceptance + 2.0 * decay * half * half, -decay * y.sin());
    let c = numerator * exponential_characteristic(omega, tau) / acceptance;
    (c, acceptance)
}
