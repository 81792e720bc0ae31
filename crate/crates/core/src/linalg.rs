//! Small dense linear algebra on 4×4 complex matrices.
//!
//! The eigensolver is a cyclic complex Jacobi iteration. For a Hermitian
//! matrix each rotation is a phase change that makes the pivot real followed
//! by an ordinary real Jacobi rotation, so the iterate stays Hermitian and
//! the accumulated transform stays unitary.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat4 = Matrix4<Complex64>;
pub type Vec4 = Vector4<Complex64>;

/// Hermiticity residual accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Eigenvalues in `[-NEGATIVE_TOL, 0)` are treated as rounding noise and clamped.
pub const NEGATIVE_TOL: f64 = 1e-9;

/// Off-diagonal Frobenius norm at which a sweep is considered converged.
pub const JACOBI_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues below this fraction of the largest one are zero to working precision.
const RANK_CUTOFF: f64 = 64.0 * f64::EPSILON;

/// `max_ij |m_ij - conj(m_ji)|`.
pub fn hermitian_residual(m: &Mat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest absolute entry.
pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

fn off_diagonal_norm(m: &Mat4) -> f64 {
    let mut sum = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues, descending.
    pub values: [f64; 4],
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: Mat4,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V†`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Mat4 {
        let mut out = Mat4::zeros();
        for k in 0..4 {
            let w = f(self.values[k]);
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            out += (v * v.adjoint()).scale(w);
        }
        out
    }

    pub fn reconstruct(&self) -> Mat4 {
        self.map_values(|x| x)
    }
}

/// Full eigen-decomposition of a Hermitian 4×4 matrix by cyclic Jacobi sweeps.
pub fn hermitian_eigh(h: &Mat4) -> Result<HermitianEigen> {
    let residual = hermitian_residual(h);
    if !residual.is_finite() {
        return Err(Error::NonFinite("matrix"));
    }
    if residual >= HERMITIAN_TOL {
        return Err(Error::NotHermitian(residual));
    }

    // symmetrize so rounding in the input cannot leak into the rotations
    let mut a = (h + h.adjoint()).scale(0.5);
    for i in 0..4 {
        a[(i, i)].im = 0.0;
    }
    let mut v = Mat4::identity();
    let scale = a.norm();

    if scale > 0.0 {
        // sweep well past JACOBI_TOL: zero eigenvalues of rank-deficient
        // inputs feed square roots downstream
        let tol = JACOBI_TOL.min(f64::EPSILON * f64::EPSILON * scale);
        let mut previous = f64::INFINITY;
        for _ in 0..MAX_SWEEPS {
            let off = off_diagonal_norm(&a);
            if off <= tol || off >= previous {
                break;
            }
            previous = off;
            for p in 0..3 {
                for q in (p + 1)..4 {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let mut values = [0.0; 4];
    let mut vectors = Mat4::zeros();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = a[(src, src)].re;
        vectors.set_column(dst, &v.column(src));
    }
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `a[p][q]` with a unitary acting on the (p, q) plane.
fn rotate(a: &mut Mat4, v: &mut Mat4, p: usize, q: usize) {
    let b = a[(p, q)];
    let mag = b.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // phase that turns the pivot into the real number |b|
    let phase = (b / mag).conj();

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    if t == 0.0 {
        return;
    }
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // U restricted to (p, q): [[c, s], [-s·phase, c·phase]]
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = phase * -s;
    let uqq = phase * c;

    // A ← A U
    for k in 0..4 {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    // A ← U† A
    for k in 0..4 {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V ← V U
    for k in 0..4 {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

/// Eigenvalues of a Hermitian 4×4 matrix, sorted descending.
pub fn hermitian_eigs(h: &Mat4) -> Result<[f64; 4]> {
    hermitian_eigh(h).map(|e| e.values)
}

/// Clamps eigenvalues that are zero to working precision. Anything more
/// negative than [`NEGATIVE_TOL`] is an error.
pub(crate) fn clamp_psd(values: &[f64; 4]) -> Result<[f64; 4]> {
    let top = values[0].max(0.0);
    let mut out = *values;
    for x in out.iter_mut() {
        if *x < -NEGATIVE_TOL {
            return Err(Error::NotPositive(*x));
        }
        if *x <= RANK_CUTOFF * top {
            *x = 0.0;
        }
    }
    Ok(out)
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(h: &Mat4) -> Result<Mat4> {
    let mut eig = hermitian_eigh(h)?;
    eig.values = clamp_psd(&eig.values)?;
    Ok(eig.map_values(f64::sqrt))
}

/// Square roots of the clamped eigenvalues of a PSD matrix, descending.
pub(crate) fn sqrt_eigenvalues(h: &Mat4) -> Result<[f64; 4]> {
    let values = clamp_psd(&hermitian_eigs(h)?)?;
    Ok(values.map(f64::sqrt))
}
