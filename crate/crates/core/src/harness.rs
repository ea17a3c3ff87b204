//! Convergence and cost experiments: error metrics, log-log fits, CSV output.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::mean_estimation::{MeanMode, Perturbation, quantum_charge, randomized_charge};
use crate::piecewise::{PiecewiseError, sup_norm_distance};
use crate::problems::{NamedProblem, ProblemError, builtin};
use crate::rng;
use crate::solver::{
    CostLedger, Setting, SolverConfig, SolverError, alpha_exponent, beta_exponent, delta1_of,
    params_for_level, solve,
};

/// Errors below this are treated as round-off and left out of fits.
pub const ERROR_FLOOR: f64 = 100.0 * f64::EPSILON;

pub const SAMPLES_PER_PIECE: usize = 8;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// 2 for invalid input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::InvalidSpec(_) | HarnessError::Problem(_) => 2,
            HarnessError::Solver(SolverError::InvalidConfig(_) | SolverError::InvalidPlan(_)) => 2,
            HarnessError::Io(_) | HarnessError::Csv(_) => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: String,
    pub setting: Setting,
    pub level: usize,
    pub n_grid: Vec<usize>,
    pub repetitions: usize,
    pub mean_mode: MeanMode,
    pub perturbation: Perturbation,
    pub r: usize,
    pub rho: f64,
    pub delta: f64,
    /// Overrides the problem's recommended bound.
    pub bound_g: Option<f64>,
    pub seed: u64,
    /// When false, `wall_ms` is written as 0 so output is reproducible byte for byte.
    pub record_timing: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            problem: "exp_growth".into(),
            setting: Setting::Rand,
            level: 1,
            n_grid: vec![2, 4, 8],
            repetitions: 1,
            mean_mode: MeanMode::Exact,
            perturbation: Perturbation::None,
            r: 1,
            rho: 1.0,
            delta: 0.1,
            bound_g: None,
            seed: 0,
            record_timing: true,
        }
    }
}

impl ExperimentSpec {
    pub fn q(&self) -> f64 {
        self.r as f64 + self.rho
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n_grid.is_empty() {
            return Err(HarnessError::InvalidSpec("n grid is empty".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::InvalidSpec(format!(
                "n grid {:?} must be strictly increasing",
                self.n_grid
            )));
        }
        if self.repetitions == 0 {
            return Err(HarnessError::InvalidSpec("repetitions must be at least 1".into()));
        }
        Ok(())
    }

    pub fn named_problem(&self) -> Result<NamedProblem, HarnessError> {
        Ok(builtin(&self.problem)?)
    }

    pub fn solver_config(&self, problem: &NamedProblem, n: usize, seed: u64) -> SolverConfig {
        SolverConfig {
            r: self.r,
            rho: self.rho,
            setting: self.setting,
            level: self.level,
            top_level: self.level,
            n,
            delta: self.delta,
            mean_mode: self.mean_mode,
            bound_g: self.bound_g.unwrap_or(problem.bound_g),
            perturbation: self.perturbation,
            seed,
        }
    }

    /// Seed of repetition `rep`; repetition 0 uses the master seed itself.
    pub fn repetition_seed(&self, rep: usize) -> u64 {
        if rep == 0 { self.seed } else { rng::derive(self.seed, rep as u64) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub error: f64,
    pub ledger: CostLedger,
    pub wall_ms: f64,
}

pub fn run_once(spec: &ExperimentSpec, problem: &NamedProblem, n: usize, seed: u64) -> Result<RunRecord, HarnessError> {
    let cfg = spec.solver_config(problem, n, seed);
    let start = Instant::now();
    let sol = solve(&problem.problem, &cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let reference = problem.reference();
    let error = sup_norm_distance(&sol.approx, |t| reference(t), SAMPLES_PER_PIECE)?;
    Ok(RunRecord {
        error,
        ledger: sol.ledger,
        wall_ms: if spec.record_timing { wall_ms } else { 0.0 },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorStatistic {
    /// Root mean square of the sup-norm errors.
    pub rms: f64,
    /// Sample standard deviation of the sup-norm errors.
    pub std_dev: f64,
    pub errors: Vec<f64>,
    pub first: RunRecord,
}

fn repeated_runs(spec: &ExperimentSpec, problem: &NamedProblem, n: usize) -> Result<Vec<RunRecord>, HarnessError> {
    (0..spec.repetitions)
        .into_par_iter()
        .map(|rep| run_once(spec, problem, n, spec.repetition_seed(rep)))
        .collect()
}

/// Randomized-setting error: RMS of the sup-norm error over seeded runs.
pub fn randomized_error(spec: &ExperimentSpec, n: usize) -> Result<ErrorStatistic, HarnessError> {
    spec.validate()?;
    if spec.repetitions < 2 {
        return Err(HarnessError::InvalidSpec("randomized error needs at least 2 repetitions".into()));
    }
    let problem = spec.named_problem()?;
    let runs = repeated_runs(spec, &problem, n)?;
    let errors: Vec<f64> = runs.iter().map(|r| r.error).collect();
    let count = errors.len() as f64;
    let rms = (errors.iter().map(|e| e * e).sum::<f64>() / count).sqrt();
    let mean = errors.iter().sum::<f64>() / count;
    let var = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (count - 1.0);
    Ok(ErrorStatistic { rms, std_dev: var.sqrt(), errors, first: runs[0].clone() })
}

/// Smallest `α` among the observed errors with empirical `P(error > α) ≤ δ`.
pub fn empirical_quantile(errors: &[f64], delta: f64) -> Option<f64> {
    let mut sorted = errors.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .find(|(i, e)| {
            let above = sorted[*i..].iter().filter(|x| x > e).count();
            above as f64 <= delta * total
        })
        .map(|(_, e)| *e)
}

/// Quantum-setting error: empirical `(1-δ)`-quantile of sup-norm errors.
pub fn quantile_error(spec: &ExperimentSpec, n: usize, delta: f64) -> Result<f64, HarnessError> {
    spec.validate()?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(HarnessError::InvalidSpec(format!("quantile delta = {delta} must lie in (0, 1)")));
    }
    let problem = spec.named_problem()?;
    let errors: Vec<f64> = repeated_runs(spec, &problem, n)?.into_iter().map(|r| r.error).collect();
    Ok(empirical_quantile(&errors, delta).expect("at least one repetition"))
}

/// Least-squares slope of `log y` against `log n`, skipping floored values.
/// `None` when fewer than two points remain.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y > ERROR_FLOOR && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 { None } else { Some(sxy / sxx) }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub error: f64,
    pub error_std: f64,
    pub charged_queries: u64,
    pub actual_evaluations: u64,
    pub classical_derivative_evals: u64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ExperimentRow>,
    /// `-slope` of log(error) vs log(n); `None` if errors sit at the floor.
    pub fitted_order: Option<f64>,
    pub alpha: f64,
}

impl ConvergenceReport {
    pub fn order_summary(&self) -> String {
        match self.fitted_order {
            Some(o) => format!("fitted order {o:.3} (alpha = {})", self.alpha),
            None => "order undefined (errors below floor)".to_string(),
        }
    }
}

fn row_for(spec: &ExperimentSpec, problem: &NamedProblem, n: usize) -> Result<ExperimentRow, HarnessError> {
    let stochastic = spec.mean_mode != MeanMode::Exact && spec.repetitions >= 2;
    let (error, error_std, first) = if stochastic {
        let stat = randomized_error(spec, n)?;
        (stat.rms, stat.std_dev, stat.first)
    } else {
        let run = run_once(spec, problem, n, spec.seed)?;
        (run.error, 0.0, run)
    };
    Ok(ExperimentRow {
        n,
        error,
        error_std,
        charged_queries: first.ledger.charged_queries(),
        actual_evaluations: first.ledger.actual_evaluations(),
        classical_derivative_evals: first.ledger.classical_derivative_evals(),
        wall_ms: first.wall_ms,
    })
}

fn rows(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>, HarnessError> {
    spec.validate()?;
    let problem = spec.named_problem()?;
    let mut rows = spec
        .n_grid
        .par_iter()
        .map(|&n| row_for(spec, &problem, n))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by_key(|r| r.n);
    Ok(rows)
}

pub fn convergence_study(spec: &ExperimentSpec) -> Result<ConvergenceReport, HarnessError> {
    if spec.n_grid.len() < 3 {
        return Err(HarnessError::InvalidSpec("a convergence study needs at least 3 grid points".into()));
    }
    let rows = rows(spec)?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.error)).collect();
    Ok(ConvergenceReport {
        fitted_order: fit_loglog_slope(&pts).map(|s| -s),
        alpha: alpha_exponent(spec.level, spec.q(), spec.setting),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub rows: Vec<ExperimentRow>,
    pub fitted_exponent: Option<f64>,
    pub beta: u32,
    /// Hand-recomputed charge for the smallest `n`.
    pub expected_charge_smallest: u64,
    pub formula_matches: bool,
}

/// Charged queries of `A_s` recomputed from the schedule alone:
/// `C(1, n) = (r+2) n`, `C(s+1, n) = n C(s, m) + n·ml·(r+1) + n·E(mlN)` where
/// `E` is the estimator charge of the configured mean mode.
pub fn expected_charged_queries(
    level: usize,
    n: usize,
    r: usize,
    setting: Setting,
    mode: MeanMode,
    delta1: f64,
    bound_g: f64,
) -> Result<u64, HarnessError> {
    if level == 1 {
        return Ok(((r + 2) * n) as u64);
    }
    let p = params_for_level(n, level - 1, setting)?;
    let micro = (p.m * p.l) as u64;
    let pop = p.population();
    let estimator = match mode {
        MeanMode::Exact => pop as u64,
        MeanMode::Randomized => randomized_charge(pop, p.epsilon1, delta1, bound_g),
        MeanMode::QuantumSim => quantum_charge(pop, p.epsilon1, delta1),
    };
    let inner = expected_charged_queries(level - 1, p.m, r, setting, mode, delta1, bound_g)?;
    Ok(n as u64 * inner + n as u64 * micro * (r as u64 + 1) + n as u64 * estimator)
}

pub fn cost_study(spec: &ExperimentSpec) -> Result<CostReport, HarnessError> {
    if spec.n_grid.len() < 3 {
        return Err(HarnessError::InvalidSpec("a cost study needs at least 3 grid points".into()));
    }
    let single = ExperimentSpec { repetitions: 1, ..spec.clone() };
    let rows = rows(&single)?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.charged_queries as f64)).collect();
    let problem = spec.named_problem()?;
    let n0 = rows[0].n;
    let delta1 = delta1_of(spec.delta, n0, spec.level, spec.setting);
    let expected = expected_charged_queries(
        spec.level,
        n0,
        spec.r,
        spec.setting,
        spec.mean_mode,
        delta1,
        spec.bound_g.unwrap_or(problem.bound_g),
    )?;
    Ok(CostReport {
        fitted_exponent: fit_loglog_slope(&pts),
        beta: beta_exponent(spec.level, spec.setting),
        formula_matches: expected == rows[0].charged_queries,
        expected_charge_smallest: expected,
        rows,
    })
}

/// `n,error,charged_queries,actual_evaluations,wall_ms`
pub fn write_convergence_csv<W: Write>(rows: &[ExperimentRow], writer: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record(["n", "error", "charged_queries", "actual_evaluations", "wall_ms"])?;
    for r in rows {
        w.write_record(&[
            r.n.to_string(),
            format!("{:e}", r.error),
            r.charged_queries.to_string(),
            r.actual_evaluations.to_string(),
            format!("{:.3}", r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `n,charged_queries,actual_evaluations,classical_derivative_evals,wall_ms`
pub fn write_cost_csv<W: Write>(rows: &[ExperimentRow], writer: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record(["n", "charged_queries", "actual_evaluations", "classical_derivative_evals", "wall_ms"])?;
    for r in rows {
        w.write_record(&[
            r.n.to_string(),
            r.charged_queries.to_string(),
            r.actual_evaluations.to_string(),
            r.classical_derivative_evals.to_string(),
            format!("{:.3}", r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::InvalidSpec(format!("line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [2.0, 3.0, 5.0].iter().map(|&n: &f64| (n, 0.3 * n.powf(-4.5))).collect();
        assert_relative_eq!(fit_loglog_slope(&pts).unwrap(), -4.5, epsilon = 1e-12);
        let floored = [(2.0, 1e-17), (4.0, 0.0), (8.0, 1e-3)];
        assert_eq!(fit_loglog_slope(&floored), None);
    }

    #[test]
    fn quantile_examples() {
        let errs = [0.5, 0.1, 0.3, 0.2, 0.4];
        assert_eq!(empirical_quantile(&errs, 1e-9), Some(0.5));
        assert_eq!(empirical_quantile(&errs, 0.2), Some(0.4));
        assert_eq!(empirical_quantile(&errs, 0.4), Some(0.3));
        assert_eq!(empirical_quantile(&[0.7; 4], 0.25), Some(0.7));
    }

    #[test]
    fn key_value_parsing() {
        let map = parse_key_values("# experiment\nproblem = logistic\nn_grid=2,3,4 # inline\n\n--seed = 5\n").unwrap();
        assert_eq!(map["problem"], "logistic");
        assert_eq!(map["n-grid"], "2,3,4");
        assert_eq!(map["seed"], "5");
        assert!(parse_key_values("novalue").is_err());
    }

    #[test]
    fn spec_validation() {
        let bad = ExperimentSpec { n_grid: vec![2, 2, 3], ..Default::default() };
        assert!(matches!(bad.validate(), Err(HarnessError::InvalidSpec(_))));
        let bad = ExperimentSpec { repetitions: 0, ..Default::default() };
        assert!(bad.validate().is_err());
        let short = ExperimentSpec { n_grid: vec![2, 4], ..Default::default() };
        assert!(convergence_study(&short).is_err());
        let unknown = ExperimentSpec { problem: "nope".into(), ..Default::default() };
        assert_eq!(convergence_study(&unknown).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn zero_rhs_has_zero_randomized_error() {
        let spec = ExperimentSpec {
            problem: "const_zero".into(),
            level: 2,
            repetitions: 4,
            mean_mode: MeanMode::Randomized,
            ..Default::default()
        };
        let stat = randomized_error(&spec, 3).unwrap();
        assert_eq!(stat.rms, 0.0);
        assert_eq!(stat.std_dev, 0.0);
    }
}
