//! Two-photon polarization states.
//!
//! Basis order is fixed for the whole crate: |HH⟩, |HV⟩, |VH⟩, |VV⟩, the
//! first letter being the biexciton photon.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat4, Vec4};

pub const HH: usize = 0;
pub const HV: usize = 1;
pub const VH: usize = 2;
pub const VV: usize = 3;

/// Tolerance on Σ|amp|² for a ket to count as normalized.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellTarget {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellTarget {
    pub const ALL: [BellTarget; 4] = [
        BellTarget::PhiPlus,
        BellTarget::PhiMinus,
        BellTarget::PsiPlus,
        BellTarget::PsiMinus,
    ];
}

/// Normalized pure state of the photon pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonKet {
    amp: Vec4,
}

impl TwoPhotonKet {
    /// Wraps four amplitudes, rejecting anything off the unit sphere.
    pub fn new(amp: [Complex64; 4]) -> Result<Self> {
        let amp = Vec4::from(amp);
        let norm2 = amp.norm_squared();
        if !norm2.is_finite() {
            return Err(Error::NonFinite("amplitude"));
        }
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::Unnormalized(norm2));
        }
        Ok(Self { amp })
    }

    /// Rescales arbitrary non-zero amplitudes onto the unit sphere.
    pub fn normalized(amp: [Complex64; 4]) -> Result<Self> {
        let v = Vec4::from(amp);
        let n = v.norm();
        if !n.is_finite() {
            return Err(Error::NonFinite("amplitude"));
        }
        if n == 0.0 {
            return Err(Error::Unnormalized(0.0));
        }
        Ok(Self { amp: v.unscale(n) })
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.amp[0], self.amp[1], self.amp[2], self.amp[3]]
    }

    pub fn as_vector(&self) -> &Vec4 {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.norm_squared()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &TwoPhotonKet) -> Complex64 {
        self.amp.dotc(&other.amp)
    }
}

/// The four Bell states.
pub fn bell_state(target: BellTarget) -> TwoPhotonKet {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let z = 0.0;
    let (hh, hv, vh, vv) = match target {
        BellTarget::PhiPlus => (a, z, z, a),
        BellTarget::PhiMinus => (a, z, z, -a),
        BellTarget::PsiPlus => (z, a, a, z),
        BellTarget::PsiMinus => (z, a, -a, z),
    };
    TwoPhotonKet {
        amp: Vec4::new(hh.into(), hv.into(), vh.into(), vv.into()),
    }
}

/// `(|HH⟩ + e^{iφ}|VV⟩)/√2`, the cascade pair with relative phase `phi`.
pub fn ket_from_phase(phi: f64) -> Result<TwoPhotonKet> {
    if !phi.is_finite() {
        return Err(Error::NonFinite("phi"));
    }
    Ok(ket_from_phase_unchecked(phi))
}

#[inline]
pub(crate) fn ket_from_phase_unchecked(phi: f64) -> TwoPhotonKet {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    TwoPhotonKet {
        amp: Vec4::new(Complex64::new(a, 0.0), zero, zero, Complex64::from_polar(a, phi)),
    }
}

/// 4×4 two-photon density matrix. Construction does not enforce the
/// physical constraints; use [`DensityMatrix::validate`] or
/// [`DensityMatrix::checked`] where they matter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Mat4,
}

impl DensityMatrix {
    pub fn new(m: Mat4) -> Self {
        Self { m }
    }

    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Self {
        Self { m: Mat4::from_fn(|i, j| rows[i][j]) }
    }

    pub fn from_real_diagonal(d: [f64; 4]) -> Self {
        Self { m: Mat4::from_diagonal(&Vec4::from_iterator(d.iter().map(|&x| Complex64::new(x, 0.0)))) }
    }

    pub fn maximally_mixed() -> Self {
        Self::from_real_diagonal([0.25; 4])
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn into_matrix(self) -> Mat4 {
        self.m
    }

    /// Entry by zero-based (row, column).
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn validate(&self, tol: f64) -> ValidityReport {
        validate_density(self, tol)
    }

    /// Returns `self` if it passes validation at `tol`.
    pub fn checked(self, tol: f64) -> Result<Self> {
        let report = self.validate(tol);
        if report.passed {
            Ok(self)
        } else {
            Err(Error::InvalidDensity(report.to_string()))
        }
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn density_from_ket(k: &TwoPhotonKet) -> Result<DensityMatrix> {
    let n = k.norm_sqr();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::Unnormalized(n));
    }
    Ok(DensityMatrix { m: k.amp * k.amp.adjoint() })
}

/// Outcome of [`validate_density`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub hermitian_residual: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub tol: f64,
    pub passed: bool,
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: hermitian residual {:.3e}, trace deviation {:.3e}, min eigenvalue {:.3e} (tol {:.1e})",
            if self.passed { "valid" } else { "invalid" },
            self.hermitian_residual,
            self.trace_deviation,
            self.min_eigenvalue,
            self.tol,
        )
    }
}

/// Checks Hermiticity, unit trace and positivity, each against `tol`.
pub fn validate_density(rho: &DensityMatrix, tol: f64) -> ValidityReport {
    let m = &rho.m;
    let hermitian_residual = linalg::hermitian_residual(m);
    let tr = m.trace();
    let trace_deviation = (tr - Complex64::new(1.0, 0.0)).norm();
    // eigenvalues of the Hermitian part; a non-Hermitian input already fails
    let herm = (m + m.adjoint()).scale(0.5);
    let min_eigenvalue = linalg::hermitian_eigs(&herm)
        .map(|v| v[3])
        .unwrap_or(f64::NAN);
    let passed = hermitian_residual < tol
        && trace_deviation < tol
        && min_eigenvalue >= -tol
        && min_eigenvalue.is_finite();
    ValidityReport { hermitian_residual, trace_deviation, min_eigenvalue, tol, passed }
}

fn write_entry(out: &mut impl fmt::Write, z: Complex64) -> fmt::Result {
    write!(out, "{:.11e}{:+.11e}j", z.re, z.im)
}

impl fmt::Display for DensityMatrix {
    /// Four rows of four `re+imj` entries, 12 significant digits each.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..4 {
            for j in 0..4 {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write_entry(f, self.m[(i, j)])?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

fn parse_entry(token: &str) -> Result<Complex64> {
    let body = token
        .strip_suffix('j')
        .ok_or_else(|| Error::Parse(format!("entry `{token}` lacks the `j` suffix")))?;
    // the sign that separates real and imaginary parts is the last one not
    // belonging to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| Error::Parse(format!("entry `{token}` is not of the form re+imj")))?;
    let re: f64 = body[..split]
        .parse()
        .map_err(|_| Error::Parse(format!("bad real part in `{token}`")))?;
    let im: f64 = body[split..]
        .parse()
        .map_err(|_| Error::Parse(format!("bad imaginary part in `{token}`")))?;
    Ok(Complex64::new(re, im))
}

impl FromStr for DensityMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.lines().filter(|l| !l.trim().is_empty()).collect();
        if rows.len() != 4 {
            return Err(Error::Parse(format!("expected 4 rows, found {}", rows.len())));
        }
        let mut m = Mat4::zeros();
        for (i, row) in rows.iter().enumerate() {
            let entries: Vec<&str> = row.split_whitespace().collect();
            if entries.len() != 4 {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected 4",
                    i + 1,
                    entries.len()
                )));
            }
            for (j, token) in entries.iter().enumerate() {
                m[(i, j)] = parse_entry(token)?;
            }
        }
        Ok(DensityMatrix { m })
    }
}
