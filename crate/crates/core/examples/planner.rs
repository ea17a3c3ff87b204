//! Choosing the level and basic parameter for a target accuracy, and the
//! exponent tables behind that choice.
//!
//! cargo run --example planner

use std::error::Error;

use ivpcomp::solver::{PlanRequest, Setting, alpha_exponent, beta_exponent, plan_for_epsilon};

fn main() -> Result<(), Box<dyn Error>> {
    let q = 2.0;
    for setting in [Setting::Rand, Setting::Quant] {
        print!("{setting} alpha_s/beta_s:");
        for s in 1..=6 {
            print!(" {:.4}", alpha_exponent(s, q, setting) / beta_exponent(s, setting) as f64);
        }
        println!();
    }
    for (setting, gamma) in [(Setting::Rand, 0.5), (Setting::Rand, 0.2), (Setting::Quant, 0.5)] {
        for epsilon in [1e-3, 1e-6] {
            let plan = plan_for_epsilon(&PlanRequest {
                epsilon,
                gamma,
                k_bound: 1.0,
                c_bar: 1.0,
                q,
                setting,
                delta: 0.1,
            })?;
            println!(
                "{setting} gamma={gamma} eps={epsilon:e}: k={} n={} delta={:e} (alpha={}, beta={})",
                plan.k, plan.n, plan.delta, plan.alpha_k, plan.beta_k
            );
        }
    }
    Ok(())
}
