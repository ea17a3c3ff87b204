//! Built-in test problems with analytic solutions, and autonomization of
//! time-dependent right-hand sides.

use std::sync::Arc;

use thiserror::Error;

use crate::jets::{JetError, RhsFn, Scalar};
use crate::solver::{IvProblem, ReferenceSolution};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("unknown problem '{0}' (known: {known})", known = BUILTIN_NAMES.join(", "))]
    UnknownProblem(String),
}

pub const BUILTIN_NAMES: &[&str] = &[
    "const_zero",
    "exp_growth",
    "exp_decay",
    "riccati",
    "logistic",
    "harmonic_2d",
    "nonauto_poly",
];

#[derive(Clone)]
pub struct NamedProblem {
    pub name: &'static str,
    pub problem: IvProblem,
    /// A priori bound on the normalized residuals `‖g‖∞` for `r ≤ 2`.
    pub bound_g: f64,
    pub smoothness: &'static str,
}

impl NamedProblem {
    pub fn reference(&self) -> &ReferenceSolution {
        self.problem.reference.as_ref().expect("built-in problems carry a reference")
    }
}

/// `f(t, z)` over an abstract scalar, `z ∈ R^d`.
pub trait TimeRhsFn: Send + Sync {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, t: &S, z: &[S]) -> Result<Vec<S>, JetError>;
}

/// The system `u' = 1`, `z' = f(u, z)` of dimension `d + 1`.
pub struct Autonomized<F>(pub F);

impl<F: TimeRhsFn> RhsFn for Autonomized<F> {
    fn dim(&self) -> usize {
        self.0.dim() + 1
    }

    fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>, JetError> {
        let mut out = Vec::with_capacity(y.len());
        out.push(y[0].constant_like(1.0));
        out.extend(self.0.eval(&y[0], &y[1..])?);
        Ok(out)
    }
}

/// Turns `z' = f(t, z)`, `z(a) = η` into an autonomous problem on `[a, b]`
/// whose first component is the time `u(t) = t`.
pub fn autonomize<F: TimeRhsFn + 'static>(f: F, a: f64, b: f64, eta: &[f64]) -> IvProblem {
    let mut y0 = Vec::with_capacity(eta.len() + 1);
    y0.push(a);
    y0.extend_from_slice(eta);
    IvProblem::new(Arc::new(Autonomized(f)), y0, a, b)
}

macro_rules! scalar_rhs {
    ($name:ident, $dim:expr, |$y:ident| $body:expr) => {
        pub struct $name;
        impl RhsFn for $name {
            fn dim(&self) -> usize {
                $dim
            }
            fn eval<S: Scalar>(&self, $y: &[S]) -> Result<Vec<S>, JetError> {
                Ok($body)
            }
        }
    };
}

scalar_rhs!(ConstZero, 1, |y| vec![y[0].constant_like(0.0)]);
scalar_rhs!(ExpGrowth, 1, |y| vec![y[0].clone()]);
scalar_rhs!(ExpDecay, 1, |y| vec![-y[0].clone()]);
scalar_rhs!(Riccati, 1, |y| vec![y[0].clone() * y[0].clone()]);
scalar_rhs!(Logistic, 1, |y| vec![y[0].clone() * (y[0].constant_like(1.0) - y[0].clone())]);
scalar_rhs!(Harmonic, 2, |y| vec![y[1].clone(), -y[0].clone()]);

/// `z' = 2 t z`.
pub struct GaussianGrowth;

impl TimeRhsFn for GaussianGrowth {
    fn dim(&self) -> usize {
        1
    }

    fn eval<S: Scalar>(&self, t: &S, z: &[S]) -> Result<Vec<S>, JetError> {
        Ok(vec![t.clone() * z[0].clone() * 2.0])
    }
}

fn reference(f: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> ReferenceSolution {
    Arc::new(f)
}

pub fn builtin(name: &str) -> Result<NamedProblem, ProblemError> {
    let (name, problem, bound_g, smoothness): (&'static str, IvProblem, f64, &'static str) = match name {
        "const_zero" => (
            "const_zero",
            IvProblem::new(Arc::new(ConstZero), vec![1.0], 0.0, 1.0).with_reference(reference(|_| vec![1.0])),
            1.0,
            "any r, rho",
        ),
        "exp_growth" => (
            "exp_growth",
            IvProblem::new(Arc::new(ExpGrowth), vec![1.0], 0.0, 1.0)
                .with_reference(reference(|t| vec![t.exp()])),
            3.0,
            "any r, rho; linear, so g vanishes for r >= 1",
        ),
        "exp_decay" => (
            "exp_decay",
            IvProblem::new(Arc::new(ExpDecay), vec![1.0], 0.0, 1.0)
                .with_reference(reference(|t| vec![(-t).exp()])),
            1.0,
            "any r, rho; linear, so g vanishes for r >= 1",
        ),
        "riccati" => (
            "riccati",
            IvProblem::new(Arc::new(Riccati), vec![1.0], 0.0, 0.5)
                .with_reference(reference(|t| vec![1.0 / (1.0 - t)])),
            16.0,
            "any r, rho on [0, 0.5]; blows up at t = 1",
        ),
        "logistic" => (
            "logistic",
            IvProblem::new(Arc::new(Logistic), vec![0.5], 0.0, 1.0)
                .with_reference(reference(|t| vec![1.0 / (1.0 + (-t).exp())])),
            0.25,
            "any r, rho; quadratic, so g vanishes for r >= 2",
        ),
        "harmonic_2d" => (
            "harmonic_2d",
            IvProblem::new(Arc::new(Harmonic), vec![0.0, 1.0], 0.0, 1.0)
                .with_reference(reference(|t| vec![t.sin(), t.cos()])),
            1.0,
            "any r, rho; linear, so g vanishes for r >= 1",
        ),
        "nonauto_poly" => (
            "nonauto_poly",
            autonomize(GaussianGrowth, 0.0, 1.0, &[1.0])
                .with_reference(reference(|t| vec![t, (t * t).exp()])),
            20.0,
            "any r, rho; z' = 2tz autonomized to dimension 2",
        ),
        other => return Err(ProblemError::UnknownProblem(other.to_string())),
    };
    Ok(NamedProblem { name, problem, bound_g, smoothness })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// max over a 1000-point grid of ‖ref'(t) - f(ref(t))‖∞, ref' by central differences
    fn ode_residual(p: &NamedProblem) -> f64 {
        let reference = p.reference();
        let (a, b) = (p.problem.a, p.problem.b);
        let h = 1e-5 * (b - a);
        let mut worst: f64 = 0.0;
        for k in 0..1000 {
            let t = a + h + (b - a - 2.0 * h) * k as f64 / 999.0;
            let fwd = reference(t + h);
            let bwd = reference(t - h);
            let f = p.problem.rhs.eval_real(&reference(t)).unwrap();
            for c in 0..f.len() {
                worst = worst.max(((fwd[c] - bwd[c]) / (2.0 * h) - f[c]).abs());
            }
        }
        worst
    }

    #[test]
    fn references_solve_their_odes() {
        for name in BUILTIN_NAMES {
            let p = builtin(name).unwrap();
            assert_eq!(p.name, *name);
            let res = ode_residual(&p);
            assert!(res <= 1e-6, "{name}: residual {res}");
            let r0 = p.reference()(p.problem.a);
            assert_eq!(r0.len(), p.problem.eta.len());
            for (x, y) in r0.iter().zip(&p.problem.eta) {
                assert!((x - y).abs() < 1e-15, "{name}");
            }
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(builtin("lorenz"), Err(ProblemError::UnknownProblem(_))));
    }

    struct TimeOnly;
    impl TimeRhsFn for TimeOnly {
        fn dim(&self) -> usize {
            1
        }
        fn eval<S: Scalar>(&self, t: &S, _z: &[S]) -> Result<Vec<S>, JetError> {
            Ok(vec![t.clone()])
        }
    }

    struct Ignores;
    impl TimeRhsFn for Ignores {
        fn dim(&self) -> usize {
            1
        }
        fn eval<S: Scalar>(&self, _t: &S, z: &[S]) -> Result<Vec<S>, JetError> {
            Ok(vec![z[0].clone() * -0.5])
        }
    }

    #[test]
    fn autonomized_system_shape() {
        let p = autonomize(TimeOnly, 0.0, 1.0, &[0.0]);
        assert_eq!(p.eta, vec![0.0, 0.0]);
        assert_eq!(p.rhs.eval_real(&[0.3, 7.0]).unwrap(), vec![1.0, 0.3]);

        let p = autonomize(Ignores, 2.0, 3.0, &[4.0]);
        assert_eq!(p.eta, vec![2.0, 4.0]);
        assert_eq!(p.rhs.eval_real(&[123.0, 4.0]).unwrap(), vec![1.0, -2.0]);
    }
}
