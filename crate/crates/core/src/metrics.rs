//! Entanglement quantifiers for two-photon density matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat4};
use crate::state::{bell_state, density_from_ket, BellTarget, DensityMatrix, TwoPhotonKet};

/// Validity tolerance applied to metric inputs.
pub const INPUT_TOL: f64 = 1e-8;

/// Off-X entries below this are treated as zero by [`concurrence_xstate`].
pub const XSTATE_TOL: f64 = 1e-9;

/// Spin-flip matrix used in the concurrence.
pub fn sigma() -> Mat4 {
    let z = Complex64::new(0.0, 0.0);
    let p = Complex64::new(1.0, 0.0);
    let n = Complex64::new(-1.0, 0.0);
    #[rustfmt::skip]
    let m = Mat4::new(
        z, z, z, n,
        z, z, p, z,
        z, p, z, z,
        n, z, z, z,
    );
    m
}

fn check(rho: &DensityMatrix) -> Result<()> {
    rho.checked(INPUT_TOL).map(|_| ())
}

/// Uhlmann fidelity `(Tr √(√σ ρ √σ))²` between `rho` and `target`.
pub fn fidelity(rho: &DensityMatrix, target: &DensityMatrix) -> Result<f64> {
    check(rho)?;
    check(target)?;
    let s = linalg::psd_sqrt(target.matrix())?;
    let inner = s * rho.matrix() * s;
    let inner = (inner + inner.adjoint()).scale(0.5);
    let root_sum: f64 = linalg::sqrt_eigenvalues(&inner)?.iter().sum();
    let f = (root_sum * root_sum).clamp(0.0, 1.0);
    Ok(f)
}

/// `⟨ψ|ρ|ψ⟩`, the fidelity to a pure target.
pub fn fidelity_pure(rho: &DensityMatrix, target: &TwoPhotonKet) -> Result<f64> {
    check(rho)?;
    let v = target.as_vector();
    let overlap = (v.adjoint() * rho.matrix() * v)[(0, 0)];
    Ok(overlap.re.clamp(0.0, 1.0))
}

/// Fidelity to one of the Bell states.
pub fn fidelity_to_bell(rho: &DensityMatrix, target: BellTarget) -> Result<f64> {
    let ket = bell_state(target);
    let f = fidelity_pure(rho, &ket)?;
    debug_assert!({
        let general = fidelity(rho, &density_from_ket(&ket)?)?;
        (general - f).abs() < 1e-9
    });
    Ok(f)
}

/// Wootters concurrence.
///
/// The λᵢ are square roots of the eigenvalues of `ρ Σ ρ* Σ`. They are taken
/// from the Hermitian matrix `√ρ Σ ρ* Σ √ρ`, which is similar to it.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    check(rho)?;
    let root = linalg::psd_sqrt(rho.matrix())?;
    let sig = sigma();
    let flipped = sig * rho.matrix().conjugate() * sig;
    let m = root * flipped * root;
    let m = (m + m.adjoint()).scale(0.5);
    let l = linalg::sqrt_eigenvalues(&m)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// Closed-form concurrence of an X-shaped density matrix.
pub fn concurrence_xstate(rho: &DensityMatrix) -> Result<f64> {
    check(rho)?;
    let m = rho.matrix();
    let mut off_x = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                off_x = off_x.max(m[(i, j)].norm());
            }
        }
    }
    if off_x > XSTATE_TOL {
        return Err(Error::NotXState(off_x));
    }
    let d = |i: usize| m[(i, i)].re.max(0.0);
    let outer = m[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    let inner = m[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    Ok((2.0 * outer.max(inner).max(0.0)).min(1.0))
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // Tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ
    rho.matrix().norm_squared()
}

/// Fidelities to Φ±, concurrence and purity of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub fidelity_phi_plus: f64,
    pub fidelity_phi_minus: f64,
    pub concurrence: f64,
    pub purity: f64,
}

impl MetricsReport {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        Ok(Self {
            fidelity_phi_plus: fidelity_to_bell(rho, BellTarget::PhiPlus)?,
            fidelity_phi_minus: fidelity_to_bell(rho, BellTarget::PhiMinus)?,
            concurrence: concurrence(rho)?,
            purity: purity(rho).clamp(0.0, 1.0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::ket_from_phase;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn x_family(coh: Complex64) -> DensityMatrix {
        let z = c(0.0, 0.0);
        let h = c(0.5, 0.0);
        DensityMatrix::from_rows([
            [h, z, z, coh * 0.5],
            [z, z, z, z],
            [z, z, z, z],
            [coh.conj() * 0.5, z, z, h],
        ])
    }

    fn bell(t: BellTarget) -> DensityMatrix {
        density_from_ket(&bell_state(t)).unwrap()
    }

    #[test]
    fn sigma_is_yy() {
        let y = nalgebra::Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0));
        let yy = y.kronecker(&y);
        assert!(linalg::max_abs(&(Mat4::from_iterator(yy.iter().copied()) - sigma())) < 1e-15);
    }

    #[test]
    fn self_and_orthogonal_fidelity() {
        let plus = bell(BellTarget::PhiPlus);
        assert!((fidelity(&plus, &plus).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed();
        assert!((fidelity(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&plus, &bell(BellTarget::PhiMinus)).unwrap() < 1e-12);
    }

    #[test]
    fn fidelity_rejects_invalid() {
        let bad = DensityMatrix::from_real_diagonal([0.5, 0.6, 0.0, -0.1]);
        assert!(fidelity(&bad, &bell(BellTarget::PhiPlus)).is_err());
        assert!(concurrence(&bad).is_err());
    }

    #[test]
    fn concurrence_extremes() {
        assert!((concurrence(&bell(BellTarget::PhiPlus)).unwrap() - 1.0).abs() < 1e-12);
        assert!((concurrence(&bell(BellTarget::PsiMinus)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(concurrence(&DensityMatrix::maximally_mixed()).unwrap(), 0.0);
        let product = DensityMatrix::from_real_diagonal([1.0, 0.0, 0.0, 0.0]);
        assert!(concurrence(&product).unwrap() < 1e-12);
    }

    #[test]
    fn xstate_closed_form() {
        assert!((concurrence_xstate(&bell(BellTarget::PhiPlus)).unwrap() - 1.0).abs() < 1e-15);
        let rho = x_family(c(0.2144, 0.0));
        assert!((concurrence_xstate(&rho).unwrap() - 0.2144).abs() < 1e-12);
        assert!((concurrence(&rho).unwrap() - 0.2144).abs() < 1e-8);

        let not_x = density_from_ket(
            &TwoPhotonKet::normalized([c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap(),
        )
        .unwrap();
        assert!(matches!(concurrence_xstate(&not_x), Err(Error::NotXState(_))));
    }

    #[test]
    fn purity_values() {
        assert!((purity(&density_from_ket(&ket_from_phase(0.3).unwrap()).unwrap()) - 1.0).abs() < 1e-15);
        assert!((purity(&DensityMatrix::maximally_mixed()) - 0.25).abs() < 1e-15);
        let rho = x_family(c(0.2143, 0.0));
        assert!((purity(&rho) - 0.5 * (1.0 + 0.2143f64.powi(2))).abs() < 1e-15);
    }

    #[test]
    fn report_on_phi_minus() {
        let r = MetricsReport::of(&bell(BellTarget::PhiMinus)).unwrap();
        assert!(r.fidelity_phi_plus < 1e-12);
        assert!((r.fidelity_phi_minus - 1.0).abs() < 1e-12);
        assert!((r.concurrence - 1.0).abs() < 1e-12);
        assert!((r.purity - 1.0).abs() < 1e-12);
    }
}
