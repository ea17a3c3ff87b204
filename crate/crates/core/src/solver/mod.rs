//! The recursive algorithm family `A_1, A_2, ...`.
//!
//! `A_1` is the Taylor method of order `r + 1`. `A_{s+1}` walks a macro grid
//! of `n` steps; on each step it runs `A_s` with basic parameter `m` to get a
//! local approximation `l_i`, integrates the degree-`r` Taylor polynomials
//! `w_ij` of `f` along `l_i` exactly, and corrects with an estimated mean of
//! the normalized residuals `g_ij = (f∘l_i - w_ij∘l_i) / h̄^q`. The returned
//! approximation is the concatenation of the `l_i`.

mod cost;
mod schedule;

use std::error::Error as StdError;
use std::fmt;
use std::sync::Arc;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use thiserror::Error;

pub use cost::{CostLedger, LevelCost};
pub use schedule::{
    LevelParams, Plan, PlanRequest, Setting, alpha_exponent, beta_exponent, choose_k, delta1_of,
    params_for_level, piece_count, plan_for_epsilon, psi_count,
};

use crate::jets::{JetError, RhsProgram, VectorJet, ode_taylor_coeffs};
use crate::mean_estimation::{
    EstimationError, MeanMode, MeanRequest, Perturbation, estimate_mean, midpoint_nodes,
};
use crate::piecewise::{GaussLegendre, LocalTaylor, PiecewiseError, PiecewisePoly, integrate_on_piece};
use crate::rng;

/// Pieces beyond this count are refused up front.
const MAX_PIECES: u128 = 1 << 26;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("level {level}: local approximation has {got} pieces, micro grid has {expected}")]
    GridMismatch { level: usize, expected: usize, got: usize },
    #[error("level {level}, step {step}: {source}")]
    Jet {
        level: usize,
        step: usize,
        #[source]
        source: JetError,
    },
    #[error("level {level}, step {step}: mean estimation failed: {source}")]
    Estimation {
        level: usize,
        step: usize,
        #[source]
        source: EstimationError,
    },
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
}

/// A residual sample `g_ij(u_k)` could not be evaluated.
#[derive(Debug)]
pub struct SampleFailure {
    pub micro_interval: usize,
    pub knot: usize,
    pub source: JetError,
}

impl fmt::Display for SampleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g[{}](u_{}): {}", self.micro_interval, self.knot, self.source)
    }
}

impl StdError for SampleFailure {
    fn source(&self) -> Option<&(dyn StdError + 'static)> {
        Some(&self.source)
    }
}

pub type ReferenceSolution = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// `z' = f(z)`, `z(a) = η` on `[a, b]`.
#[derive(Clone)]
pub struct IvProblem {
    pub rhs: Arc<dyn RhsProgram>,
    pub eta: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub reference: Option<ReferenceSolution>,
}

impl fmt::Debug for IvProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IvProblem")
            .field("dim", &self.rhs.dim())
            .field("eta", &self.eta)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("reference", &self.reference.is_some())
            .finish()
    }
}

impl IvProblem {
    pub fn new(rhs: Arc<dyn RhsProgram>, eta: Vec<f64>, a: f64, b: f64) -> Self {
        Self { rhs, eta, a, b, reference: None }
    }

    pub fn with_reference(mut self, reference: ReferenceSolution) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn dim(&self) -> usize {
        self.rhs.dim()
    }

    fn validate(&self) -> Result<(), SolverError> {
        if !(self.a < self.b) {
            return Err(SolverError::InvalidConfig(format!("need a < b, got [{}, {}]", self.a, self.b)));
        }
        if self.eta.len() != self.rhs.dim() {
            return Err(SolverError::InvalidConfig(format!(
                "initial value has {} components, rhs has dimension {}",
                self.eta.len(),
                self.rhs.dim()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub r: usize,
    pub rho: f64,
    pub setting: Setting,
    /// Level `s` of the algorithm to run.
    pub level: usize,
    /// Global top level `k`, which fixes `δ₁`.
    pub top_level: usize,
    pub n: usize,
    pub delta: f64,
    pub mean_mode: MeanMode,
    pub bound_g: f64,
    pub perturbation: Perturbation,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            r: 1,
            rho: 1.0,
            setting: Setting::Rand,
            level: 1,
            top_level: 1,
            n: 4,
            delta: 0.1,
            mean_mode: MeanMode::Exact,
            bound_g: 1.0,
            perturbation: Perturbation::None,
            seed: 0,
        }
    }
}

impl SolverConfig {
    /// Level `s` with `k = s`, everything else defaulted.
    pub fn at_level(setting: Setting, level: usize, n: usize) -> Self {
        Self { setting, level, top_level: level, n, ..Self::default() }
    }

    /// Regularity `q = r + ρ`.
    pub fn q(&self) -> f64 {
        self.r as f64 + self.rho
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidConfig(m));
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return bad(format!("rho = {} must lie in (0, 1]", self.rho));
        }
        if self.q() < 1.0 {
            return bad(format!("q = r + rho = {} must be at least 1", self.q()));
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.level == 0 || self.top_level < self.level {
            return bad(format!("need 1 <= s <= k, got s = {}, k = {}", self.level, self.top_level));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return bad(format!("delta = {} must lie in (0, 1/2)", self.delta));
        }
        if !(self.bound_g > 0.0 && self.bound_g.is_finite()) {
            return bad(format!("bound_g = {} must be positive", self.bound_g));
        }
        match piece_count(self.n, self.level, self.setting) {
            Some(p) if p <= MAX_PIECES => Ok(()),
            _ => bad(format!(
                "level {} with n = {} needs more than {MAX_PIECES} polynomial pieces",
                self.level, self.n
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub approx: PiecewisePoly,
    pub ledger: CostLedger,
    /// Largest `‖g_ij(u)‖∞` evaluated, per level (index `s - 1`; zero for level 1).
    pub max_abs_residual: Vec<f64>,
}

/// One Taylor step of order `r + 1`: returns `y_{i+1}` and the local polynomial
/// in `τ = t - x_i`.
pub fn taylor_step(
    f: &dyn RhsProgram,
    y: &[f64],
    h: f64,
    r: usize,
) -> Result<(Vec<f64>, VectorJet), JetError> {
    let local = ode_taylor_coeffs(f, y, r + 1)?;
    Ok((local.eval(h), local))
}

/// Runs `A_s` for `s = cfg.level`.
pub fn solve(problem: &IvProblem, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    problem.validate()?;
    cfg.validate()?;
    let ctx = Context::new(problem.rhs.as_ref(), cfg);
    let mut ledger = CostLedger::new(cfg.level);
    let approx = ctx.run_level(cfg.level, cfg.n, problem.a, problem.b, &problem.eta, cfg.seed, &mut ledger)?;
    let max_abs_residual = ctx.max_g.iter().map(|a| f64::from_bits(a.load(Ordering::Relaxed))).collect();
    Ok(Solution { approx, ledger, max_abs_residual })
}

/// `A_1`: the Taylor method.
pub fn solve_a1(problem: &IvProblem, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    if cfg.level != 1 {
        return Err(SolverError::InvalidConfig(format!("solve_a1 needs s = 1, got {}", cfg.level)));
    }
    solve(problem, cfg)
}

struct Context<'a> {
    f: &'a dyn RhsProgram,
    r: usize,
    q: f64,
    setting: Setting,
    delta1: f64,
    mode: MeanMode,
    bound_g: f64,
    perturbation: Perturbation,
    rule: GaussLegendre,
    max_g: Vec<AtomicU64>,
}

impl<'a> Context<'a> {
    fn new(f: &'a dyn RhsProgram, cfg: &SolverConfig) -> Self {
        Self {
            f,
            r: cfg.r,
            q: cfg.q(),
            setting: cfg.setting,
            delta1: delta1_of(cfg.delta, cfg.n, cfg.top_level, cfg.setting),
            mode: cfg.mean_mode,
            bound_g: cfg.bound_g,
            perturbation: cfg.perturbation,
            rule: GaussLegendre::for_composed_degree(cfg.r),
            max_g: (0..cfg.level).map(|_| AtomicU64::new(0f64.to_bits())).collect(),
        }
    }

    fn record_g(&self, level: usize, g: &[f64]) {
        let m = g.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        // nonnegative floats order like their bit patterns
        self.max_g[level - 1].fetch_max(m.to_bits(), Ordering::Relaxed);
    }

    #[allow(clippy::too_many_arguments)]
    fn run_level(
        &self,
        level: usize,
        n: usize,
        a: f64,
        b: f64,
        eta: &[f64],
        key: u64,
        ledger: &mut CostLedger,
    ) -> Result<PiecewisePoly, SolverError> {
        if level == 1 {
            self.taylor_method(n, a, b, eta, ledger)
        } else {
            self.recursive_level(level, n, a, b, eta, key, ledger)
        }
    }

    fn taylor_method(
        &self,
        n: usize,
        a: f64,
        b: f64,
        eta: &[f64],
        ledger: &mut CostLedger,
    ) -> Result<PiecewisePoly, SolverError> {
        let d = eta.len();
        let degree = self.r + 1;
        let h = (b - a) / n as f64;
        let mut coeffs = Vec::with_capacity(n * (degree + 1) * d);
        let mut y = eta.to_vec();
        for i in 0..n {
            let (next, local) =
                taylor_step(self.f, &y, h, self.r).map_err(|source| SolverError::Jet { level: 1, step: i, source })?;
            for k in 0..=degree {
                coeffs.extend(local.components().iter().map(|c| c.coeff(k)));
            }
            y = next;
        }
        // one jet evaluation of order r+1 is charged as r+2 calls
        ledger.charge(
            1,
            LevelCost {
                charged_queries: (n * (degree + 1)) as u64,
                actual_evaluations: (n * degree) as u64,
                classical_derivative_evals: (n * (degree + 1)) as u64,
            },
        );
        Ok(PiecewisePoly::new(a, b, n, degree, d, coeffs)?)
    }

    #[allow(clippy::too_many_arguments)]
    fn recursive_level(
        &self,
        level: usize,
        n: usize,
        a: f64,
        b: f64,
        eta: &[f64],
        key: u64,
        ledger: &mut CostLedger,
    ) -> Result<PiecewisePoly, SolverError> {
        let params = params_for_level(n, level - 1, self.setting)?;
        let micro = params.micro_intervals();
        let knots = midpoint_nodes(params.knots);
        let mut y = eta.to_vec();
        let mut parts = Vec::with_capacity(n);

        for i in 0..n {
            let x0 = a + (b - a) * i as f64 / n as f64;
            let x1 = a + (b - a) * (i + 1) as f64 / n as f64;
            let step_key = rng::derive_path(key, &[level as u64, i as u64]);
            let local = self.run_level(level - 1, params.m, x0, x1, &y, step_key, ledger)?;
            if local.pieces() != micro {
                return Err(SolverError::GridMismatch { level, expected: micro, got: local.pieces() });
            }
            let hbar = local.piece_width();
            let jet_err = |source| SolverError::Jet { level, step: i, source };

            let taylors: Vec<LocalTaylor<'_>> = (0..micro)
                .map(|j| LocalTaylor::new(self.f, local.eval_piece(j, 0.0), self.r))
                .collect();

            let integrals: Vec<Result<Vec<f64>, PiecewiseError>> = taylors
                .par_iter()
                .enumerate()
                .map(|(j, w)| integrate_on_piece(w, &local, j, 0.0, hbar, &self.rule))
                .collect();
            let mut increment = vec![0.0; y.len()];
            for part in integrals {
                let part = part.map_err(|e| match e {
                    PiecewiseError::Jet(source) => jet_err(source),
                    other => SolverError::Piecewise(other),
                })?;
                for (acc, v) in increment.iter_mut().zip(part) {
                    *acc += v;
                }
            }

            let hq = hbar.powf(self.q);
            let n_knots = params.knots;
            let oracle = |idx: usize| -> Result<Vec<f64>, crate::mean_estimation::OracleError> {
                let (j, k) = (idx / n_knots, idx % n_knots);
                let fail = |source| SampleFailure { micro_interval: j, knot: k, source };
                let point = local.eval_piece(j, knots[k] * hbar);
                let fy = self.f.eval_real(&point).map_err(fail)?;
                let wy = taylors[j].eval(&point).map_err(fail)?;
                let g: Vec<f64> = fy.iter().zip(&wy).map(|(a, b)| (a - b) / hq).collect();
                self.record_g(level, &g);
                Ok(g)
            };
            let est = estimate_mean(&MeanRequest {
                population_size: params.population(),
                dim: y.len(),
                sample_oracle: &oracle,
                epsilon1: params.epsilon1,
                delta1: self.delta1,
                mode: self.mode,
                bound_g: self.bound_g,
                perturbation: self.perturbation,
                seed: rng::derive(step_key, 0x6d65_616e),
            })
            .map_err(|source| match source {
                EstimationError::OracleFailure { source: inner, index } => match inner.downcast::<SampleFailure>() {
                    Ok(s) => SolverError::Jet { level, step: i, source: s.source },
                    Err(inner) => SolverError::Estimation {
                        level,
                        step: i,
                        source: EstimationError::OracleFailure { index, source: inner },
                    },
                },
                other => SolverError::Estimation { level, step: i, source: other },
            })?;

            let weight = hbar.powf(self.q + 1.0) * micro as f64;
            for ((yc, inc), ap) in y.iter_mut().zip(&increment).zip(&est.estimate) {
                *yc += inc + weight * ap;
            }

            let classical = (micro * (self.r + 1)) as u64;
            ledger.charge(
                level,
                LevelCost {
                    charged_queries: classical + est.charged_queries,
                    actual_evaluations: (micro * self.rule.len()) as u64 + est.actual_evaluations,
                    classical_derivative_evals: classical,
                },
            );
            parts.push(local);
        }
        Ok(PiecewisePoly::concat(a, b, parts)?)
    }
}
