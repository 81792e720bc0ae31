//! Monte Carlo averaging of the emitted pair state over random emission
//! times.
//!
//! Samples are drawn in fixed-size batches. Batch `b` owns the ChaCha stream
//! `b` of a generator seeded from the run seed, so the draws of a batch do
//! not depend on which worker computes it. Batches are evaluated in parallel
//! rounds and folded into the running sum strictly in index order; the
//! convergence test runs after every batch. The result is therefore
//! bit-identical for any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cascade::{sample_emission, CascadeParams};
use crate::compensation::{compensated_pair_state, RampParams};
use crate::error::{invalid, Result};
use crate::linalg::{self, Mat4};
use crate::state::DensityMatrix;

/// Batches evaluated per parallel round. Fixed so that the amount of
/// speculative work past the convergence point is independent of the pool.
const ROUND_BATCHES: u64 = 64;

/// Floor on the denominator of [`convergence_metric`].
pub const METRIC_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub seed: u64,
    pub batch_size: u64,
    pub rel_tol: f64,
    pub max_samples: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { seed: 0, batch_size: 10_000, rel_tol: 1e-6, max_samples: 100_000_000 }
    }
}

impl McConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(invalid("batch_size", "must be at least 1"));
        }
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(invalid("rel_tol", format!("must be finite and > 0, got {}", self.rel_tol)));
        }
        if self.max_samples < self.batch_size {
            return Err(invalid(
                "max_samples",
                format!("must be >= batch_size ({}), got {}", self.batch_size, self.max_samples),
            ));
        }
        Ok(())
    }

    fn max_batches(&self) -> u64 {
        self.max_samples / self.batch_size
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub rho: DensityMatrix,
    pub n_samples: u64,
    pub converged: bool,
    /// Metric between the last two running means; infinite if only one
    /// batch was drawn.
    pub last_rel_change: f64,
}

/// Largest element change relative to the largest element of `prev`.
pub fn convergence_metric(prev: &DensityMatrix, curr: &DensityMatrix) -> f64 {
    let change = linalg::max_abs(&(curr.matrix() - prev.matrix()));
    change / linalg::max_abs(prev.matrix()).max(METRIC_FLOOR)
}

/// Online pairwise summation: equal-sized partial sums are merged as in a
/// binary counter, keeping rounding growth logarithmic in the batch count.
#[derive(Debug, Default)]
struct PairwiseSum {
    stack: Vec<(u32, Mat4)>,
}

impl PairwiseSum {
    fn push(&mut self, value: Mat4) {
        let mut level = 0u32;
        let mut value = value;
        while let Some(&(top, _)) = self.stack.last() {
            if top != level {
                break;
            }
            let (_, prev) = self.stack.pop().expect("non-empty");
            value += prev;
            level += 1;
        }
        self.stack.push((level, value));
    }

    fn total(&self) -> Mat4 {
        // smallest partial sums first
        self.stack.iter().rev().fold(Mat4::zeros(), |acc, (_, m)| acc + m)
    }
}

fn batch_sum(p: &CascadeParams, r: &RampParams, cfg: &McConfig, batch: u64) -> Mat4 {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(batch);
    let mut sum = Mat4::zeros();
    for _ in 0..cfg.batch_size {
        let e = sample_emission(p, &mut rng);
        let k = compensated_pair_state(r, p, &e);
        let v = k.as_vector();
        sum += v * v.adjoint();
    }
    sum
}

/// Averages the compensated pair state over sampled emission events until
/// successive running means differ by less than `rel_tol`, or until
/// `max_samples` is reached.
pub fn average_density(p: &CascadeParams, r: &RampParams, cfg: &McConfig) -> Result<McResult> {
    p.validate()?;
    r.validate()?;
    cfg.validate()?;

    let max_batches = cfg.max_batches();
    let mut acc = PairwiseSum::default();
    let mut prev_mean: Option<DensityMatrix> = None;
    let mut last_rel_change = f64::INFINITY;
    let mut batches_done = 0u64;
    let mut converged = false;

    'rounds: while batches_done < max_batches {
        let end = (batches_done + ROUND_BATCHES).min(max_batches);
        let sums: Vec<Mat4> = (batches_done..end)
            .into_par_iter()
            .map(|b| batch_sum(p, r, cfg, b))
            .collect();
        for sum in sums {
            acc.push(sum);
            batches_done += 1;
            let n = (batches_done * cfg.batch_size) as f64;
            let mean = DensityMatrix::new(acc.total().unscale(n));
            if let Some(prev) = &prev_mean {
                last_rel_change = convergence_metric(prev, &mean);
                if last_rel_change < cfg.rel_tol {
                    converged = true;
                    prev_mean = Some(mean);
                    break 'rounds;
                }
            }
            prev_mean = Some(mean);
        }
    }

    Ok(McResult {
        rho: prev_mean.expect("at least one batch is always drawn"),
        n_samples: batches_done * cfg.batch_size,
        converged,
        last_rel_change,
    })
}
