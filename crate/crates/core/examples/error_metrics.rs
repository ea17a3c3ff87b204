//! Randomized error (RMS over seeded runs) and the empirical quantile error.
//!
//! cargo run --release --example error_metrics

use std::error::Error;

use ivpcomp::harness::{ExperimentSpec, quantile_error, randomized_error};
use ivpcomp::mean_estimation::{MeanMode, Perturbation};
use ivpcomp::solver::Setting;

fn main() -> Result<(), Box<dyn Error>> {
    let rand = ExperimentSpec {
        problem: "logistic".into(),
        level: 2,
        repetitions: 40,
        mean_mode: MeanMode::Randomized,
        seed: 12,
        ..Default::default()
    };
    let stat = randomized_error(&rand, 2)?;
    println!("RAND n=2: rms error {:.3e} ± {:.1e}", stat.rms, stat.std_dev);

    for perturbation in [Perturbation::None, Perturbation::UniformRandom, Perturbation::AdversarialSign] {
        let quant = ExperimentSpec {
            setting: Setting::Quant,
            mean_mode: MeanMode::QuantumSim,
            perturbation,
            ..rand.clone()
        };
        println!("QUANT n=4 {perturbation}: 0.9-quantile {:.3e}", quantile_error(&quant, 4, 0.1)?);
    }
    Ok(())
}
