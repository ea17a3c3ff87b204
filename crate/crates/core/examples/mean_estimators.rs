//! The three mean estimators on one population, with their charged costs.
//!
//! cargo run --example mean_estimators

use std::error::Error;

use ivpcomp::mean_estimation::{MeanMode, MeanRequest, OracleError, Perturbation, estimate_mean};

fn main() -> Result<(), Box<dyn Error>> {
    let population = 1 << 14;
    let oracle = |i: usize| -> Result<Vec<f64>, OracleError> {
        let u = (i as f64 + 0.5) / population as f64;
        Ok(vec![(6.0 * u).sin(), u * u])
    };
    let truth = [(1.0 - 6f64.cos()) / 6.0, 1.0 / 3.0];
    println!("true mean {truth:?}");
    for (mode, perturbation) in [
        (MeanMode::Exact, Perturbation::None),
        (MeanMode::Randomized, Perturbation::None),
        (MeanMode::QuantumSim, Perturbation::UniformRandom),
        (MeanMode::QuantumSim, Perturbation::AdversarialSign),
    ] {
        let res = estimate_mean(&MeanRequest {
            population_size: population,
            dim: 2,
            sample_oracle: &oracle,
            epsilon1: 0.1,
            delta1: 0.01,
            mode,
            bound_g: 1.0,
            perturbation,
            seed: 7,
        })?;
        println!(
            "{mode:>11} {perturbation:>11}: estimate {:?}, charged {}, evaluated {}",
            res.estimate, res.charged_queries, res.actual_evaluations
        );
    }
    Ok(())
}
