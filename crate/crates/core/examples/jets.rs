//! Truncated power series and Taylor coefficients of ODE solutions.
//!
//! cargo run --example jets

use ivpcomp::jets::{Jet, JetError, RhsFn, Scalar, ode_taylor_coeffs, truncated_taylor_of_f};

/// Riccati equation `z' = z²`, solution `1/(1-t)` from `z(0) = 1`.
struct Riccati;

impl RhsFn for Riccati {
    fn dim(&self) -> usize {
        1
    }
    fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>, JetError> {
        Ok(vec![y[0].clone() * y[0].clone()])
    }
}

fn main() -> Result<(), JetError> {
    let t = Jet::variable(0.0, 5);
    let one_minus_t = Jet::constant(1.0, 5) - t.clone();
    println!("1/(1-t)  = {:?}", Jet::constant(1.0, 5).checked_div(&one_minus_t)?.coeffs());
    println!("exp(t)   = {:?}", t.exp().coeffs());
    let (s, c) = t.sin_cos();
    println!("sin(t)   = {:?}", s.coeffs());
    println!("cos(t)   = {:?}", c.coeffs());
    println!("ln(1+t)  = {:?}", (t.clone() + 1.0).checked_ln()?.coeffs());

    let z = ode_taylor_coeffs(&Riccati, &[1.0], 6)?;
    println!("z' = z^2, z(0) = 1: coefficients {:?}", z.components()[0].coeffs());

    // homogeneous parts of s ↦ f(x + s v)
    let h = truncated_taylor_of_f(&Riccati, &[1.0], &[0.5], 3)?;
    println!("f(1 + s/2) by degree: {h:?}");
    Ok(())
}
