//! Approximate means of large finite populations of vectors.
//!
//! Three modes share one contract: the returned estimate is within
//! `epsilon1` of the population mean in every component with probability at
//! least `1 - delta1` (given `‖g‖∞ ≤ bound_g`), and each result reports the
//! model cost charged for it next to the work actually done.
//!
//! * `Exact` evaluates the whole population.
//! * `Randomized` is median-of-means over uniform draws with replacement.
//! * `QuantumSim` stands in for amplitude-estimation based mean estimation:
//!   it computes the true mean, perturbs it within `epsilon1`, and charges
//!   the quantum query count.

use std::error::Error as StdError;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::rng;

pub type OracleError = Box<dyn StdError + Send + Sync>;

/// `index ↦ sample`; must be safe to call concurrently.
pub type SampleOracle<'a> = dyn Fn(usize) -> Result<Vec<f64>, OracleError> + Sync + 'a;

#[derive(Debug, Error)]
pub enum EstimationError {
    #[error("sample oracle failed at index {index}: {source}")]
    OracleFailure {
        index: usize,
        #[source]
        source: OracleError,
    },
    #[error("invalid mean request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeanMode {
    Exact,
    Randomized,
    QuantumSim,
}

/// How the simulated quantum estimate deviates from the true mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Perturbation {
    #[default]
    None,
    UniformRandom,
    AdversarialSign,
}

impl fmt::Display for MeanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            MeanMode::Exact => "exact",
            MeanMode::Randomized => "randomized",
            MeanMode::QuantumSim => "quantum-sim",
        })
    }
}

impl FromStr for MeanMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "exact" => Ok(MeanMode::Exact),
            "randomized" | "random" => Ok(MeanMode::Randomized),
            "quantum-sim" | "quantum" => Ok(MeanMode::QuantumSim),
            other => Err(format!("unknown mean mode '{other}' (expected exact|randomized|quantum-sim)")),
        }
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Perturbation::None => "none",
            Perturbation::UniformRandom => "uniform",
            Perturbation::AdversarialSign => "adversarial",
        })
    }
}

impl FromStr for Perturbation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Perturbation::None),
            "uniform" => Ok(Perturbation::UniformRandom),
            "adversarial" => Ok(Perturbation::AdversarialSign),
            other => Err(format!("unknown perturbation '{other}' (expected none|uniform|adversarial)")),
        }
    }
}

pub struct MeanRequest<'a> {
    pub population_size: usize,
    pub dim: usize,
    pub sample_oracle: &'a SampleOracle<'a>,
    pub epsilon1: f64,
    pub delta1: f64,
    pub mode: MeanMode,
    pub bound_g: f64,
    pub perturbation: Perturbation,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanResult {
    pub estimate: Vec<f64>,
    pub charged_queries: u64,
    pub actual_evaluations: u64,
}

/// Composite midpoint knots `u_k = (2k+1)/(2N)`.
pub fn midpoint_nodes(n: usize) -> Vec<f64> {
    let denom = 2.0 * n as f64;
    (0..n).map(|k| (2 * k + 1) as f64 / denom).collect()
}

/// `⌈x⌉`, treating values within relative 1e-9 of an integer as that
/// integer so that e.g. `1/(1/49)` does not round up to 50.
pub fn ceil_tolerant(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        nearest as u64
    } else {
        x.ceil() as u64
    }
}

/// Odd repetition count `2⌈log₂(1/δ₁)⌉ + 1` used for median amplification.
pub fn repetitions(delta1: f64) -> u64 {
    2 * ceil_tolerant((1.0 / delta1).log2()) + 1
}

/// Per-repetition sample size `⌈4 G² / ε₁²⌉` (Chebyshev, success ≥ 3/4).
pub fn chebyshev_sample_size(bound_g: f64, epsilon1: f64) -> u64 {
    ceil_tolerant(4.0 * bound_g * bound_g / (epsilon1 * epsilon1)).max(1)
}

/// Quantum query count for one estimate: `min{size, ⌈1/ε₁⌉} · R`.
pub fn quantum_charge(population_size: usize, epsilon1: f64, delta1: f64) -> u64 {
    (population_size as u64).min(ceil_tolerant(1.0 / epsilon1)) * repetitions(delta1)
}

/// Randomized charge `R·S`, or the population size when `S` covers it.
pub fn randomized_charge(population_size: usize, epsilon1: f64, delta1: f64, bound_g: f64) -> u64 {
    let s = chebyshev_sample_size(bound_g, epsilon1);
    if s >= population_size as u64 {
        population_size as u64
    } else {
        s * repetitions(delta1)
    }
}

fn validate(req: &MeanRequest<'_>) -> Result<(), EstimationError> {
    let bad = |msg: String| Err(EstimationError::InvalidRequest(msg));
    if req.population_size == 0 {
        return bad("population_size must be at least 1".into());
    }
    if req.dim == 0 {
        return bad("dim must be at least 1".into());
    }
    if !(req.epsilon1 > 0.0 && req.epsilon1.is_finite()) {
        return bad(format!("epsilon1 = {} must be positive", req.epsilon1));
    }
    if !(req.delta1 > 0.0 && req.delta1 < 0.5) {
        return bad(format!("delta1 = {} must lie in (0, 1/2)", req.delta1));
    }
    if !(req.bound_g > 0.0 && req.bound_g.is_finite()) {
        return bad(format!("bound_g = {} must be positive", req.bound_g));
    }
    Ok(())
}

fn sample(req: &MeanRequest<'_>, index: usize) -> Result<Vec<f64>, EstimationError> {
    let v = (req.sample_oracle)(index)
        .map_err(|source| EstimationError::OracleFailure { index, source })?;
    if v.len() != req.dim {
        return Err(EstimationError::OracleFailure {
            index,
            source: format!("expected {} components, got {}", req.dim, v.len()).into(),
        });
    }
    Ok(v)
}

const BLOCK: usize = 1024;

struct PopulationSummary {
    mean: Vec<f64>,
    constant: Vec<bool>,
}

/// Mean as `x_0 + Σ (x_k - x_0) / N`: returns `x_0` bitwise for a constant
/// population. Blocks are reduced in index order, so the result does not
/// depend on the thread count.
fn full_mean(req: &MeanRequest<'_>) -> Result<PopulationSummary, EstimationError> {
    let n = req.population_size;
    let shift = sample(req, 0)?;
    let blocks: Vec<Result<(Vec<f64>, Vec<bool>), EstimationError>> = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut sum = vec![0.0; req.dim];
            let mut constant = vec![true; req.dim];
            for idx in b * BLOCK..((b + 1) * BLOCK).min(n) {
                let x = if idx == 0 { shift.clone() } else { sample(req, idx)? };
                for c in 0..req.dim {
                    let dev = x[c] - shift[c];
                    sum[c] += dev;
                    constant[c] &= dev == 0.0;
                }
            }
            Ok((sum, constant))
        })
        .collect();
    let mut total = vec![0.0; req.dim];
    let mut constant = vec![true; req.dim];
    for block in blocks {
        let (s, k) = block?;
        for c in 0..req.dim {
            total[c] += s[c];
            constant[c] &= k[c];
        }
    }
    let mean = shift.iter().zip(&total).map(|(x0, s)| x0 + s / n as f64).collect();
    Ok(PopulationSummary { mean, constant })
}

fn median_of_means(req: &MeanRequest<'_>, per_rep: usize, reps: usize) -> Result<Vec<f64>, EstimationError> {
    let means: Vec<Result<Vec<f64>, EstimationError>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rng::substream(req.seed, &[rep as u64]);
            let mut shift: Option<Vec<f64>> = None;
            let mut sum = vec![0.0; req.dim];
            for _ in 0..per_rep {
                let x = sample(req, rng.gen_range(0..req.population_size))?;
                let s = shift.get_or_insert_with(|| x.clone());
                for c in 0..req.dim {
                    sum[c] += x[c] - s[c];
                }
            }
            let s = shift.expect("per_rep >= 1");
            Ok(s.iter().zip(&sum).map(|(x0, d)| x0 + d / per_rep as f64).collect())
        })
        .collect();
    let means = means.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok((0..req.dim)
        .map(|c| {
            let mut col: Vec<f64> = means.iter().map(|m| m[c]).collect();
            col.sort_by(f64::total_cmp);
            col[col.len() / 2]
        })
        .collect())
}

pub fn estimate_mean(req: &MeanRequest<'_>) -> Result<MeanResult, EstimationError> {
    validate(req)?;
    let n = req.population_size;
    match req.mode {
        MeanMode::Exact => Ok(MeanResult {
            estimate: full_mean(req)?.mean,
            charged_queries: n as u64,
            actual_evaluations: n as u64,
        }),
        MeanMode::Randomized => {
            let s = chebyshev_sample_size(req.bound_g, req.epsilon1);
            if s >= n as u64 {
                return Ok(MeanResult {
                    estimate: full_mean(req)?.mean,
                    charged_queries: n as u64,
                    actual_evaluations: n as u64,
                });
            }
            let r = repetitions(req.delta1);
            let estimate = median_of_means(req, s as usize, r as usize)?;
            Ok(MeanResult { estimate, charged_queries: r * s, actual_evaluations: r * s })
        }
        MeanMode::QuantumSim => {
            let summary = full_mean(req)?;
            let mut estimate = summary.mean;
            let eps = req.epsilon1;
            let mut rng = rng::substream(req.seed, &[u64::MAX]);
            for (e, constant) in estimate.iter_mut().zip(summary.constant) {
                let delta = match req.perturbation {
                    Perturbation::None => 0.0,
                    Perturbation::UniformRandom => rng.gen_range(-eps..=eps),
                    Perturbation::AdversarialSign => {
                        if rng.gen::<bool>() {
                            eps
                        } else {
                            -eps
                        }
                    }
                };
                // a constant component is pinned by any single query
                if !constant {
                    *e += delta;
                }
            }
            Ok(MeanResult {
                estimate,
                charged_queries: quantum_charge(n, eps, req.delta1),
                actual_evaluations: n as u64,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request<'a>(oracle: &'a SampleOracle<'a>, n: usize, dim: usize, mode: MeanMode) -> MeanRequest<'a> {
        MeanRequest {
            population_size: n,
            dim,
            sample_oracle: oracle,
            epsilon1: 0.125,
            delta1: 1.0 / 16.0,
            mode,
            bound_g: 1.0,
            perturbation: Perturbation::None,
            seed: 11,
        }
    }

    #[test]
    fn midpoint_examples() {
        assert_eq!(midpoint_nodes(1), vec![0.5]);
        assert_eq!(midpoint_nodes(2), vec![0.25, 0.75]);
        let u = midpoint_nodes(3);
        assert_eq!(u, vec![1.0 / 6.0, 0.5, 5.0 / 6.0]);
    }

    #[test]
    fn tolerant_ceiling() {
        for n in 1..2000u64 {
            assert_eq!(ceil_tolerant(1.0 / (1.0 / n as f64)), n);
            let eps = 1.0 / n as f64;
            assert_eq!(ceil_tolerant(4.0 / (eps * eps)), 4 * n * n);
        }
        assert_eq!(ceil_tolerant(2.5), 3);
        assert_eq!(repetitions(1.0 / 16.0), 9);
        assert_eq!(repetitions(0.25), 5);
        assert_eq!(repetitions(0.1), 9);
    }

    #[test]
    fn exact_mean_small() {
        let oracle = |i: usize| Ok(vec![(i + 1) as f64]);
        let res = estimate_mean(&request(&oracle, 4, 1, MeanMode::Exact)).unwrap();
        assert_eq!(res.estimate, vec![2.5]);
        assert_eq!(res.charged_queries, 4);
        assert_eq!(res.actual_evaluations, 4);
    }

    #[test]
    fn constant_population_is_exact_in_every_mode() {
        let oracle = |_: usize| Ok(vec![0.1, -3.7]);
        for mode in [MeanMode::Exact, MeanMode::Randomized, MeanMode::QuantumSim] {
            for pert in [Perturbation::None, Perturbation::UniformRandom, Perturbation::AdversarialSign] {
                for seed in 0..5 {
                    let mut req = request(&oracle, 5000, 2, mode);
                    req.perturbation = pert;
                    req.seed = seed;
                    assert_eq!(estimate_mean(&req).unwrap().estimate, vec![0.1, -3.7]);
                }
            }
        }
    }

    #[test]
    fn quantum_charge_example() {
        let oracle = |i: usize| Ok(vec![(i % 7) as f64 / 7.0]);
        let req = request(&oracle, 512, 1, MeanMode::QuantumSim);
        let res = estimate_mean(&req).unwrap();
        assert_eq!(res.charged_queries, 72);
        assert_eq!(res.actual_evaluations, 512);
        let exact = estimate_mean(&request(&oracle, 512, 1, MeanMode::Exact)).unwrap();
        assert_eq!(res.estimate, exact.estimate);
    }

    #[test]
    fn perturbations_stay_within_epsilon() {
        let oracle = |i: usize| Ok(vec![(i as f64).sin(), (i as f64 * 0.3).cos()]);
        let exact = estimate_mean(&request(&oracle, 300, 2, MeanMode::Exact)).unwrap().estimate;
        for seed in 0..50 {
            let mut req = request(&oracle, 300, 2, MeanMode::QuantumSim);
            req.seed = seed;
            req.perturbation = Perturbation::UniformRandom;
            let est = estimate_mean(&req).unwrap().estimate;
            for c in 0..2 {
                assert!((est[c] - exact[c]).abs() <= req.epsilon1);
            }
            req.perturbation = Perturbation::AdversarialSign;
            let est = estimate_mean(&req).unwrap().estimate;
            for c in 0..2 {
                let d = (est[c] - exact[c]).abs();
                assert!((d - req.epsilon1).abs() < 1e-12, "{d}");
            }
        }
    }

    #[test]
    fn randomized_falls_back_to_exact_when_population_is_small() {
        let oracle = |i: usize| Ok(vec![i as f64]);
        // S = 4/ε² = 256 >= 100
        let res = estimate_mean(&request(&oracle, 100, 1, MeanMode::Randomized)).unwrap();
        assert_eq!(res.estimate, vec![49.5]);
        assert_eq!(res.charged_queries, 100);
    }

    #[test]
    fn randomized_charges_r_times_s() {
        let oracle = |i: usize| Ok(vec![if i % 2 == 0 { 1.0 } else { -1.0 }]);
        let res = estimate_mean(&request(&oracle, 10_000, 1, MeanMode::Randomized)).unwrap();
        assert_eq!(res.charged_queries, 9 * 256);
        assert_eq!(res.actual_evaluations, 9 * 256);
        assert!(res.estimate[0].abs() <= 0.125);
    }

    #[test]
    fn deterministic_under_seed() {
        let oracle = |i: usize| Ok(vec![((i * 37) % 101) as f64 / 101.0]);
        for mode in [MeanMode::Randomized, MeanMode::QuantumSim] {
            let mut req = request(&oracle, 20_000, 1, mode);
            req.perturbation = Perturbation::UniformRandom;
            let a = estimate_mean(&req).unwrap();
            let b = estimate_mean(&req).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn invalid_requests() {
        let oracle = |_: usize| Ok(vec![0.0]);
        let mut req = request(&oracle, 0, 1, MeanMode::Exact);
        assert!(matches!(estimate_mean(&req), Err(EstimationError::InvalidRequest(_))));
        req.population_size = 3;
        req.delta1 = 0.5;
        assert!(matches!(estimate_mean(&req), Err(EstimationError::InvalidRequest(_))));
        req.delta1 = 0.1;
        req.epsilon1 = 0.0;
        assert!(matches!(estimate_mean(&req), Err(EstimationError::InvalidRequest(_))));
        req.epsilon1 = 0.1;
        req.bound_g = -1.0;
        assert!(matches!(estimate_mean(&req), Err(EstimationError::InvalidRequest(_))));
    }

    #[test]
    fn oracle_failure_propagates() {
        let oracle = |i: usize| {
            if i == 2 {
                Err("not evaluable".into())
            } else {
                Ok(vec![1.0])
            }
        };
        let err = estimate_mean(&request(&oracle, 5, 1, MeanMode::Exact)).unwrap_err();
        assert!(matches!(err, EstimationError::OracleFailure { index: 2, .. }));
        let wrong_dim = |_: usize| Ok(vec![1.0, 2.0]);
        let err = estimate_mean(&request(&wrong_dim, 5, 1, MeanMode::Exact)).unwrap_err();
        assert!(matches!(err, EstimationError::OracleFailure { index: 0, .. }));
    }
}
