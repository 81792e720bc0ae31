//! Parameter sweeps over mismatch and timing detuning, and the time-gating
//! baseline, written out as CSV tables.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::cascade::{precession_rate, CascadeParams, EmissionEvent};
use crate::compensation::{mismatch_of, ramp_from_mismatch, total_phase, MismatchSpec, RampParams};
use crate::error::{invalid, Error, Result};
use crate::metrics::MetricsReport;
use crate::montecarlo::{average_density, McConfig};
use crate::oracle::{analytic_density, gated_coherence, Coherence};
use crate::state::DensityMatrix;

pub const SWEEP_HEADER: &str =
    "d_omega1_rad_ns,d_omega2_rad_ns,delta_t_ns,fidelity_phi_plus,fidelity_phi_minus,concurrence,purity,n_samples,method";

pub const GATING_HEADER: &str = "t_gate_ns,acceptance,fidelity_phi_plus,concurrence";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    MonteCarlo,
    #[default]
    Analytic,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::MonteCarlo => "monte_carlo",
            Method::Analytic => "analytic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monte_carlo" => Ok(Method::MonteCarlo),
            "analytic" => Ok(Method::Analytic),
            other => Err(invalid("method", format!("expected `monte_carlo` or `analytic`, got `{other}`"))),
        }
    }
}

/// Closed interval sampled at `steps` evenly spaced points, ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, steps: usize) -> Self {
        Self { start, stop, steps }
    }

    fn validate(&self, name: &'static str, min_steps: usize) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(invalid(name, "range bounds must be finite"));
        }
        if self.steps < min_steps {
            return Err(invalid(name, format!("needs at least {min_steps} steps, got {}", self.steps)));
        }
        if self.steps > 1 && self.start == self.stop {
            return Err(invalid(name, "empty range"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub d_omega1: f64,
    pub d_omega2: f64,
    pub delta_t: f64,
    pub fidelity_phi_plus: f64,
    pub fidelity_phi_minus: f64,
    pub concurrence: f64,
    pub purity: f64,
    /// Zero for analytic rows.
    pub n_samples: u64,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GatingRow {
    pub t_gate: f64,
    pub acceptance: f64,
    pub fidelity_phi_plus: f64,
    pub concurrence: f64,
}

/// Averaged state behind a ramp, by either method. Returns the state and
/// the number of samples drawn (zero for the closed form).
pub fn evaluate_ramp(
    p: &CascadeParams,
    r: &RampParams,
    cfg: &McConfig,
    method: Method,
) -> Result<(DensityMatrix, u64)> {
    match method {
        Method::Analytic => {
            let (d1, d2) = mismatch_of(r, p);
            let origin = EmissionEvent { t1: 0.0, t2: 0.0 };
            Ok((analytic_density(d1, d2, total_phase(r, p, &origin), p), 0))
        }
        Method::MonteCarlo => {
            let res = average_density(p, r, cfg)?;
            Ok((res.rho, res.n_samples))
        }
    }
}

fn row_for(p: &CascadeParams, m: MismatchSpec, cfg: &McConfig, method: Method) -> Result<SweepRow> {
    let ramp = ramp_from_mismatch(&m, p);
    let (rho, n_samples) = evaluate_ramp(p, &ramp, cfg, method)?;
    let report = MetricsReport::of(&rho)?;
    Ok(SweepRow {
        d_omega1: m.d_omega1,
        d_omega2: m.d_omega2,
        delta_t: m.delta_t,
        fidelity_phi_plus: report.fidelity_phi_plus,
        fidelity_phi_minus: report.fidelity_phi_minus,
        concurrence: report.concurrence,
        purity: report.purity,
        n_samples,
        method,
    })
}

/// Metrics over a `Δω₁ × Δω₂` grid, Δω₁ varying slowest.
pub fn sweep_mismatch(
    p: &CascadeParams,
    d_omega1: Grid,
    d_omega2: Grid,
    cfg: &McConfig,
    method: Method,
) -> Result<SweepResult> {
    p.validate()?;
    d_omega1.validate("d_omega1", 2)?;
    d_omega2.validate("d_omega2", 2)?;
    if method == Method::MonteCarlo {
        cfg.validate()?;
    }
    let points: Vec<MismatchSpec> = d_omega1
        .points()
        .into_iter()
        .flat_map(|a| d_omega2.points().into_iter().map(move |b| MismatchSpec { d_omega1: a, d_omega2: b, delta_t: 0.0 }))
        .collect();
    let rows = points
        .into_par_iter()
        .map(|m| row_for(p, m, cfg, method))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Metrics versus timing detuning under perfect slope compensation.
pub fn sweep_delay(p: &CascadeParams, delta_t: Grid, cfg: &McConfig, method: Method) -> Result<SweepResult> {
    p.validate()?;
    delta_t.validate("delta_t", 1)?;
    if method == Method::MonteCarlo {
        cfg.validate()?;
    }
    let rows = delta_t
        .points()
        .into_par_iter()
        .map(|dt| row_for(p, MismatchSpec { d_omega1: 0.0, d_omega2: 0.0, delta_t: dt }, cfg, method))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Acceptance and state quality when the uncompensated source is
/// post-selected on exciton delays shorter than the gate.
pub fn gating_tradeoff(p: &CascadeParams, t_gate: Grid) -> Result<Vec<GatingRow>> {
    p.validate()?;
    t_gate.validate("t_gate", 1)?;
    let omega = precession_rate(p);
    t_gate
        .points()
        .into_iter()
        .map(|t| {
            if !(t > 0.0) {
                return Err(invalid("t_gate", format!("gate times must be > 0, got {t}")));
            }
            let (c, acceptance) = gated_coherence(t, omega, p.tau_x);
            let coh = Coherence(c);
            Ok(GatingRow {
                t_gate: t,
                acceptance,
                fidelity_phi_plus: coh.fidelity_phi_plus(),
                concurrence: coh.concurrence(),
            })
        })
        .collect()
}

/// Shortest-form rendering with `digits` significant digits, like C's `%g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    render_sig(x, digits, true)
}

/// Like [`format_sig`] but keeps trailing zeros, so `1.0` at four digits
/// prints as `1.000`.
pub fn format_sig_padded(x: f64, digits: usize) -> String {
    render_sig(x, digits, false)
}

fn render_sig(x: f64, digits: usize, trim: bool) -> String {
    if x == 0.0 && trim {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = if trim { trim_fraction(mantissa) } else { mantissa };
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let fixed = format!("{x:.decimals$}");
    if trim {
        trim_fraction(&fixed).to_string()
    } else {
        fixed
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_num(x: f64) -> String {
    format_sig(x, 9)
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{SWEEP_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                csv_num(r.d_omega1),
                csv_num(r.d_omega2),
                csv_num(r.delta_t),
                csv_num(r.fidelity_phi_plus),
                csv_num(r.fidelity_phi_minus),
                csv_num(r.concurrence),
                csv_num(r.purity),
                r.n_samples,
                r.method,
            )?;
        }
        Ok(())
    }
}

pub fn write_gating_csv<W: Write>(rows: &[GatingRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{GATING_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            csv_num(r.t_gate),
            csv_num(r.acceptance),
            csv_num(r.fidelity_phi_plus),
            csv_num(r.concurrence),
        )?;
    }
    Ok(())
}
