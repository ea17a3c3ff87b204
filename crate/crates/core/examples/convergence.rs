//! Convergence study: error against n and the fitted order, CSV on stdout.
//!
//! cargo run --release --example convergence

use std::error::Error;
use std::io;

use ivpcomp::harness::{ExperimentSpec, convergence_study, write_convergence_csv};
use ivpcomp::mean_estimation::MeanMode;
use ivpcomp::solver::Setting;

fn main() -> Result<(), Box<dyn Error>> {
    let spec = ExperimentSpec {
        problem: "logistic".into(),
        setting: Setting::Rand,
        level: 2,
        n_grid: vec![2, 3, 4, 6],
        repetitions: 20,
        mean_mode: MeanMode::Randomized,
        seed: 3,
        ..Default::default()
    };
    let report = convergence_study(&spec)?;
    write_convergence_csv(&report.rows, io::stdout())?;
    println!("{}", report.order_summary());
    Ok(())
}
