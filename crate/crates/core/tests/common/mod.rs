#![allow(dead_code)]

use fss_compensation::linalg::{Mat4, Vec4};
use fss_compensation::state::{DensityMatrix, TwoPhotonKet};
use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_ket<R: Rng>(rng: &mut R) -> TwoPhotonKet {
    let amp = [(); 4].map(|_| random_complex(rng));
    TwoPhotonKet::normalized(amp).unwrap()
}

/// `A A† / Tr` with `A` 4×rank, so the result has the requested rank.
pub fn random_density<R: Rng>(rng: &mut R, rank: usize) -> DensityMatrix {
    let mut m = Mat4::zeros();
    for _ in 0..rank {
        let v = Vec4::from_fn(|_, _| random_complex(rng));
        m += v * v.adjoint();
    }
    let tr = m.trace().re;
    DensityMatrix::new(m.unscale(tr))
}

pub fn random_unitary2<R: Rng>(rng: &mut R) -> Matrix2<Complex64> {
    let tau = std::f64::consts::TAU;
    let theta: f64 = rng.random_range(0.0..tau);
    let (a, b, g) = (
        rng.random_range(0.0..tau),
        rng.random_range(0.0..tau),
        rng.random_range(0.0..tau),
    );
    let global = Complex64::from_polar(1.0, a);
    Matrix2::new(
        Complex64::from_polar(theta.cos(), b),
        Complex64::from_polar(theta.sin(), g),
        -Complex64::from_polar(theta.sin(), -g),
        Complex64::from_polar(theta.cos(), -b),
    ) * global
}

pub fn local_unitary<R: Rng>(rng: &mut R) -> Mat4 {
    let k = random_unitary2(rng).kronecker(&random_unitary2(rng));
    Mat4::from_fn(|i, j| k[(i, j)])
}

/// X-state with random populations and coherences, normalized and PSD.
pub fn random_xstate<R: Rng>(rng: &mut R) -> DensityMatrix {
    let d: [f64; 4] = [(); 4].map(|_| rng.random_range(0.0..1.0));
    let tr: f64 = d.iter().sum();
    let d = d.map(|x| x / tr);
    let outer = Complex64::from_polar((d[0] * d[3]).sqrt() * rng.random_range(0.0..1.0), rng.random_range(0.0..6.3));
    let inner = Complex64::from_polar((d[1] * d[2]).sqrt() * rng.random_range(0.0..1.0), rng.random_range(0.0..6.3));
    let z = c(0.0, 0.0);
    DensityMatrix::from_rows([
        [c(d[0], 0.0), z, z, outer],
        [z, c(d[1], 0.0), inner, z],
        [z, inner.conj(), c(d[2], 0.0), z],
        [outer.conj(), z, z, c(d[3], 0.0)],
    ])
}
