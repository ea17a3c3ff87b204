//! The base algorithm: the Taylor method of order r + 1.
//!
//! cargo run --example taylor_method

use std::error::Error;

use ivpcomp::piecewise::sup_norm_distance;
use ivpcomp::problems::builtin;
use ivpcomp::solver::{Setting, SolverConfig, solve};

fn main() -> Result<(), Box<dyn Error>> {
    let problem = builtin("exp_growth")?;
    for n in [4, 8, 16, 32] {
        let cfg = SolverConfig { r: 2, ..SolverConfig::at_level(Setting::Rand, 1, n) };
        let sol = solve(&problem.problem, &cfg)?;
        let err = sup_norm_distance(&sol.approx, |t| problem.reference()(t), 8)?;
        println!("n = {n:>2}: sup error {err:.3e}, charged {}", sol.ledger.charged_queries());
    }
    Ok(())
}
