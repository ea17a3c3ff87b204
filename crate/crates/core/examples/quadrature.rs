//! Piecewise polynomials, left limits, and exact integration of a Taylor
//! model of `f` composed with a polynomial path.
//!
//! cargo run --example quadrature

use std::error::Error;

use ivpcomp::jets::{JetError, RhsFn, Scalar};
use ivpcomp::piecewise::{GaussLegendre, LocalTaylor, PiecewisePoly, Side, integrate_composed, sup_norm_distance};

struct Cube;

impl RhsFn for Cube {
    fn dim(&self) -> usize {
        1
    }
    fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>, JetError> {
        Ok(vec![y[0].clone() * y[0].clone() * y[0].clone()])
    }
}

fn main() -> Result<(), Box<dyn Error>> {
    // two linear pieces on [0, 1]: 1 + t, then 2 - 2τ
    let p = PiecewisePoly::new(0.0, 1.0, 2, 1, 1, vec![1.0, 1.0, 2.0, -2.0])?;
    println!("p(0.5)  = {:?}", p.eval(0.5, Side::Right)?);
    println!("p(0.5-) = {:?}", p.eval(0.5, Side::LeftLimit)?);

    // degree-2 Taylor model of y³ about 1, integrated along the first piece
    let rule = GaussLegendre::for_composed_degree(2);
    let w = LocalTaylor::new(&Cube, vec![1.0], 2);
    let integral = integrate_composed(&w, &p, 0.0, 0.5, &rule)?;
    println!("{} Gauss nodes, integral of w(1 + t) over [0, 1/2] = {integral:?}", rule.len());

    let d = sup_norm_distance(&p, |t| vec![1.0 + t], 8)?;
    println!("sup distance to 1 + t: {d}");
    Ok(())
}
