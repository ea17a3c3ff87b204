//! Plugging in a right-hand side, including a time-dependent one through
//! autonomization.
//!
//! cargo run --release --example custom_problem

use std::error::Error;
use std::sync::Arc;

use ivpcomp::jets::{JetError, RhsFn, Scalar};
use ivpcomp::mean_estimation::MeanMode;
use ivpcomp::piecewise::{Side, sup_norm_distance};
use ivpcomp::problems::{TimeRhsFn, autonomize};
use ivpcomp::solver::{IvProblem, Setting, SolverConfig, solve};

/// Damped oscillator `x'' = -x - x'/2` as a first-order system.
struct Damped;

impl RhsFn for Damped {
    fn dim(&self) -> usize {
        2
    }
    fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>, JetError> {
        Ok(vec![y[1].clone(), -y[0].clone() - y[1].clone() * 0.5])
    }
}

/// `z' = cos(t) z`, solution `exp(sin t)`.
struct Modulated;

impl TimeRhsFn for Modulated {
    fn dim(&self) -> usize {
        1
    }
    fn eval<S: Scalar>(&self, t: &S, z: &[S]) -> Result<Vec<S>, JetError> {
        Ok(vec![t.cos() * z[0].clone()])
    }
}

fn main() -> Result<(), Box<dyn Error>> {
    let damped = IvProblem::new(Arc::new(Damped), vec![1.0, 0.0], 0.0, 2.0);
    let sol = solve(&damped, &SolverConfig::at_level(Setting::Quant, 2, 6))?;
    println!("damped oscillator at t = 2: {:?}", sol.approx.eval(2.0, Side::LeftLimit)?);

    let problem = autonomize(Modulated, 0.0, 1.0, &[1.0]);
    let cfg = SolverConfig { mean_mode: MeanMode::Randomized, bound_g: 4.0, ..SolverConfig::at_level(Setting::Rand, 2, 3) };
    let sol = solve(&problem, &cfg)?;
    let err = sup_norm_distance(&sol.approx, |t| vec![t, t.sin().exp()], 8)?;
    println!("z' = cos(t) z on [0, 1]: sup error {err:.3e} over {} pieces", sol.approx.pieces());
    Ok(())
}
