//! Parameter schedules, error/cost exponents and the ε-planner.

use std::fmt;
use std::str::FromStr;

use crate::mean_estimation::ceil_tolerant;

use super::SolverError;

/// Information model: randomized classical or quantum queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    Rand,
    Quant,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Setting::Rand => "rand",
            Setting::Quant => "quant",
        })
    }
}

impl FromStr for Setting {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "rand" | "randomized" => Ok(Setting::Rand),
            "quant" | "quantum" => Ok(Setting::Quant),
            other => Err(format!("unknown setting '{other}' (expected rand|quant)")),
        }
    }
}

/// `(m, l, N, ε₁)` used to build level `s + 1` from level `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelParams {
    /// Basic parameter handed to the level-`s` solver on each macro step.
    pub m: usize,
    /// Extra subdivision factor of the micro grid.
    pub l: usize,
    /// Midpoint knots per micro interval.
    pub knots: usize,
    pub epsilon1: f64,
}

impl LevelParams {
    pub fn micro_intervals(&self) -> usize {
        self.m * self.l
    }

    pub fn population(&self) -> usize {
        self.m * self.l * self.knots
    }
}

fn checked_pow(n: usize, e: u32) -> Result<usize, SolverError> {
    n.checked_pow(e)
        .ok_or_else(|| SolverError::InvalidConfig(format!("{n}^{e} overflows")))
}

fn pow2(s: usize) -> u32 {
    1u32 << s
}

pub fn params_for_level(n: usize, s: usize, setting: Setting) -> Result<LevelParams, SolverError> {
    if n == 0 || s == 0 {
        return Err(SolverError::InvalidConfig("n and s must be at least 1".into()));
    }
    let (m, l, knots) = match setting {
        Setting::Rand => (
            checked_pow(n, 2)?,
            checked_pow(n, pow2(s + 1) - 4)?,
            checked_pow(n, pow2(s) - 1)?,
        ),
        Setting::Quant => (n, checked_pow(n, s as u32 - 1)?, checked_pow(n, s as u32)?),
    };
    Ok(LevelParams { m, l, knots, epsilon1: 1.0 / knots as f64 })
}

/// Per-estimate failure probability `δ₁`, from the top-level `n` and `k`.
pub fn delta1_of(delta: f64, n: usize, k: usize, setting: Setting) -> f64 {
    let exponent = match setting {
        Setting::Rand => (pow2(k) - 1) as f64,
        Setting::Quant => k as f64,
    };
    let events = (n as f64).powf(exponent);
    // 1 - (1-δ)^(1/M) without cancellation
    -((-delta).ln_1p() / events).exp_m1()
}

pub fn alpha_exponent(s: usize, q: f64, setting: Setting) -> f64 {
    match setting {
        Setting::Rand => {
            let p = pow2(s) as f64;
            q * (p - 1.0) + p / 2.0 - 1.0
        }
        Setting::Quant => q * s as f64 + s as f64 - 1.0,
    }
}

pub fn beta_exponent(s: usize, setting: Setting) -> u32 {
    match setting {
        Setting::Rand => pow2(s) - 1,
        Setting::Quant => s as u32,
    }
}

/// Number of uniform polynomial pieces in the level-`s` approximation.
pub fn piece_count(n: usize, s: usize, setting: Setting) -> Option<u128> {
    (n as u128).checked_pow(beta_exponent(s, setting))
}

/// Number of probabilistic events `ψ(n, s)` whose joint success backs the
/// level-`s` error bound.
pub fn psi_count(n: usize, s: usize, setting: Setting) -> u128 {
    let n = n as u128;
    (1..s)
        .map(|i| match setting {
            Setting::Rand => n.pow(pow2(i) - 1),
            Setting::Quant => n.pow(i as u32),
        })
        .sum()
}

/// Top level `k` for a target exponent slack `γ ∈ (0, 1)`.
pub fn choose_k(gamma: f64, setting: Setting) -> Result<usize, SolverError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(SolverError::InvalidConfig(format!("gamma = {gamma} must lie in (0, 1)")));
    }
    let k = match setting {
        Setting::Rand => ceil_tolerant((1.0 / gamma + 1.0).log2()),
        Setting::Quant => ceil_tolerant(2.0 / gamma),
    };
    Ok(k.max(1) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanRequest {
    pub epsilon: f64,
    pub gamma: f64,
    /// Deterministic bound on the error of the top-level algorithm.
    pub k_bound: f64,
    /// Error constant in `error ≤ C̄ n^{-α_k}`.
    pub c_bar: f64,
    pub q: f64,
    pub setting: Setting,
    /// Failure probability kept as is in the quantum setting.
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plan {
    pub k: usize,
    pub n: usize,
    pub delta: f64,
    pub alpha_k: f64,
    pub beta_k: u32,
}

pub fn plan_for_epsilon(req: &PlanRequest) -> Result<Plan, SolverError> {
    for (name, v) in [("epsilon", req.epsilon), ("K", req.k_bound), ("Cbar", req.c_bar)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(SolverError::InvalidConfig(format!("{name} = {v} must be positive")));
        }
    }
    let k = choose_k(req.gamma, req.setting)?;
    let delta = match req.setting {
        Setting::Rand => {
            let d = 3.0 * req.epsilon * req.epsilon / (4.0 * req.k_bound * req.k_bound);
            if d >= 0.5 {
                return Err(SolverError::InvalidPlan(format!(
                    "delta = 3ε²/(4K²) = {d} is not below 1/2; epsilon is too large for K = {}",
                    req.k_bound
                )));
            }
            d
        }
        Setting::Quant => {
            if !(req.delta > 0.0 && req.delta < 0.5) {
                return Err(SolverError::InvalidConfig(format!(
                    "delta = {} must lie in (0, 1/2)",
                    req.delta
                )));
            }
            req.delta
        }
    };
    let alpha_k = alpha_exponent(k, req.q, req.setting);
    let n = ceil_tolerant((2.0 * req.c_bar / req.epsilon).powf(1.0 / alpha_k)).max(1) as usize;
    Ok(Plan { k, n, delta, alpha_k, beta_k: beta_exponent(k, req.setting) })
}
