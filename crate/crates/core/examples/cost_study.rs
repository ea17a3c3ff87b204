//! Cost study: charged queries against n, fitted exponent, ledger check.
//!
//! cargo run --release --example cost_study

use std::error::Error;
use std::io;

use ivpcomp::harness::{ExperimentSpec, cost_study, write_cost_csv};
use ivpcomp::mean_estimation::MeanMode;
use ivpcomp::solver::Setting;

fn main() -> Result<(), Box<dyn Error>> {
    for (setting, mode, grid) in [
        (Setting::Rand, MeanMode::Randomized, vec![2, 3, 4, 6]),
        (Setting::Quant, MeanMode::QuantumSim, vec![2, 4, 8, 12]),
    ] {
        let spec = ExperimentSpec {
            problem: "logistic".into(),
            setting,
            level: 2,
            n_grid: grid,
            mean_mode: mode,
            ..Default::default()
        };
        let report = cost_study(&spec)?;
        write_cost_csv(&report.rows, io::stdout())?;
        println!(
            "{setting}: fitted exponent {:.3} (beta = {}), ledger formula {}",
            report.fitted_exponent.unwrap_or(f64::NAN),
            report.beta,
            if report.formula_matches { "matches" } else { "differs" }
        );
    }
    Ok(())
}
