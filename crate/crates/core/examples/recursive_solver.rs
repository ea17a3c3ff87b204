//! A_2 and A_3 on the logistic equation in both information settings.
//!
//! cargo run --release --example recursive_solver

use std::error::Error;

use ivpcomp::mean_estimation::{MeanMode, Perturbation};
use ivpcomp::piecewise::sup_norm_distance;
use ivpcomp::problems::builtin;
use ivpcomp::solver::{Setting, SolverConfig, solve};

fn main() -> Result<(), Box<dyn Error>> {
    let problem = builtin("logistic")?;
    let runs = [
        (Setting::Rand, 2, 4, MeanMode::Exact),
        (Setting::Rand, 2, 4, MeanMode::Randomized),
        (Setting::Rand, 3, 2, MeanMode::Randomized),
        (Setting::Quant, 2, 8, MeanMode::QuantumSim),
        (Setting::Quant, 3, 4, MeanMode::QuantumSim),
    ];
    for (setting, level, n, mode) in runs {
        let cfg = SolverConfig {
            mean_mode: mode,
            perturbation: Perturbation::UniformRandom,
            bound_g: problem.bound_g,
            seed: 1,
            ..SolverConfig::at_level(setting, level, n)
        };
        let sol = solve(&problem.problem, &cfg)?;
        let err = sup_norm_distance(&sol.approx, |t| problem.reference()(t), 8)?;
        println!(
            "{setting} A_{level} n={n} {mode}: {} pieces, error {err:.3e}, max |g| per level {:?}",
            sol.approx.pieces(),
            sol.max_abs_residual
        );
        for (s, cost) in sol.ledger.levels().iter().enumerate() {
            println!(
                "    level {}: charged {}, evaluated {}",
                s + 1,
                cost.charged_queries,
                cost.actual_evaluations
            );
        }
    }
    Ok(())
}
