//! Run configuration documents.
//!
//! A flat TOML document with an optional `[ramp]` table:
//!
//! ```toml
//! fss_uev = 3
//! tau_x_ns = 1.0
//! tau_xx_ns = 0.5
//! seed = 42
//! batch_size = 10000
//! rel_tol = 1e-6
//! max_samples = 100000000
//! d_omega1 = 0.0
//! d_omega2 = 0.0
//! delta_t_ns = 0.0
//! method = "monte_carlo"
//!
//! # instead of d_omega1/d_omega2/delta_t_ns:
//! # [ramp]
//! # k_vxx = 4.5578
//! # k_vx = -4.5578
//! # ...
//! ```

use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

use crate::cascade::CascadeParams;
use crate::compensation::{ramp_from_mismatch, MismatchSpec, RampParams};
use crate::experiments::Method;
use crate::montecarlo::McConfig;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{0}")]
    Syntax(String),

    #[error("`{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },

    #[error("`ramp` block conflicts with mismatch key `{0}`; give one or the other")]
    Conflict(&'static str),
}

fn bad(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key, reason: reason.into() }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    fss_uev: Option<f64>,
    tau_x_ns: Option<f64>,
    tau_xx_ns: Option<f64>,
    seed: Option<u64>,
    batch_size: Option<u64>,
    rel_tol: Option<f64>,
    max_samples: Option<u64>,
    d_omega1: Option<f64>,
    d_omega2: Option<f64>,
    delta_t_ns: Option<f64>,
    method: Option<String>,
    ramp: Option<RawRamp>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct RawRamp {
    k_vxx: f64,
    k_hxx: f64,
    k_vx: f64,
    k_hx: f64,
    phi0_vxx: f64,
    phi0_hxx: f64,
    phi0_vx: f64,
    phi0_hx: f64,
    t_prop_xx: f64,
    t_prop_x: f64,
    t_start_xx: f64,
    t_start_x: f64,
}

/// How the phase gates are specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RampSpec {
    Explicit(RampParams),
    Mismatch(MismatchSpec),
}

impl RampSpec {
    pub fn resolve(&self, p: &CascadeParams) -> RampParams {
        match self {
            RampSpec::Explicit(r) => *r,
            RampSpec::Mismatch(m) => ramp_from_mismatch(m, p),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cascade: CascadeParams,
    pub ramp: RampSpec,
    pub mc: McConfig,
    pub output: Option<PathBuf>,
    /// `None` lets each command pick its own default.
    pub method: Option<Method>,
}

fn finite(key: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(key, "must be finite"))
    }
}

fn positive(key: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(key, format!("must be > 0, got {v}")))
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string().trim_end().to_string()))?;

    let fss = raw.fss_uev.ok_or_else(|| bad("fss_uev", "required key is missing"))?;
    if !(fss.is_finite() && fss >= 0.0) {
        return Err(bad("fss_uev", format!("must be >= 0, got {fss}")));
    }
    let tau_x = positive("tau_x_ns", raw.tau_x_ns.unwrap_or(CascadeParams::DEFAULT_TAU_X))?;
    let tau_xx = positive("tau_xx_ns", raw.tau_xx_ns.unwrap_or(CascadeParams::DEFAULT_TAU_XX))?;
    let cascade = CascadeParams { fss, tau_x, tau_xx, exciton_energy: None };

    let defaults = McConfig::default();
    let batch_size = raw.batch_size.unwrap_or(defaults.batch_size);
    if batch_size == 0 {
        return Err(bad("batch_size", "must be at least 1"));
    }
    let rel_tol = positive("rel_tol", raw.rel_tol.unwrap_or(defaults.rel_tol))?;
    let max_samples = raw.max_samples.unwrap_or(defaults.max_samples);
    if max_samples < batch_size {
        return Err(bad("max_samples", format!("must be >= batch_size ({batch_size}), got {max_samples}")));
    }
    let mc = McConfig { seed: raw.seed.unwrap_or(defaults.seed), batch_size, rel_tol, max_samples };

    let ramp = match raw.ramp {
        Some(r) => {
            for (key, present) in [
                ("d_omega1", raw.d_omega1.is_some()),
                ("d_omega2", raw.d_omega2.is_some()),
                ("delta_t_ns", raw.delta_t_ns.is_some()),
            ] {
                if present {
                    return Err(ConfigError::Conflict(key));
                }
            }
            RampSpec::Explicit(RampParams {
                k_vxx: finite("ramp.k_vxx", r.k_vxx)?,
                k_hxx: finite("ramp.k_hxx", r.k_hxx)?,
                k_vx: finite("ramp.k_vx", r.k_vx)?,
                k_hx: finite("ramp.k_hx", r.k_hx)?,
                phi0_vxx: finite("ramp.phi0_vxx", r.phi0_vxx)?,
                phi0_hxx: finite("ramp.phi0_hxx", r.phi0_hxx)?,
                phi0_vx: finite("ramp.phi0_vx", r.phi0_vx)?,
                phi0_hx: finite("ramp.phi0_hx", r.phi0_hx)?,
                t_prop_xx: finite("ramp.t_prop_xx", r.t_prop_xx)?,
                t_prop_x: finite("ramp.t_prop_x", r.t_prop_x)?,
                t_start_xx: finite("ramp.t_start_xx", r.t_start_xx)?,
                t_start_x: finite("ramp.t_start_x", r.t_start_x)?,
            })
        }
        None => RampSpec::Mismatch(MismatchSpec {
            d_omega1: finite("d_omega1", raw.d_omega1.unwrap_or(0.0))?,
            d_omega2: finite("d_omega2", raw.d_omega2.unwrap_or(0.0))?,
            delta_t: finite("delta_t_ns", raw.delta_t_ns.unwrap_or(0.0))?,
        }),
    };

    let method = raw
        .method
        .map(|m| m.parse::<Method>().map_err(|_| bad("method", format!("expected `monte_carlo` or `analytic`, got `{m}`"))))
        .transpose()?;

    Ok(RunConfig { cascade, ramp, mc, output: None, method })
}
