//! Truncated Taylor (jet) arithmetic.
//!
//! A [`Jet`] of order `R` holds the coefficients `c_0..=c_R` of a univariate
//! power series truncated after `t^R`. Right-hand sides are written once
//! against the [`Scalar`] trait and can then be evaluated on plain `f64`
//! values or on jets; the latter yields the composed truncated expansion.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a series with zero constant term")]
    DivisionByZeroJet,
    #[error("{op} is undefined at {value}")]
    DomainError { op: &'static str, value: f64 },
    #[error("jet orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Truncated power series `c_0 + c_1 t + ... + c_R t^R`.
#[derive(Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{:?}", self.coeffs)
    }
}

impl Jet {
    /// Builds a jet from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient vector.
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { coeffs }
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The series `x + t`: the independent variable expanded about `x`.
    pub fn variable(x: f64, order: usize) -> Self {
        Self::line(x, 1.0, order)
    }

    /// The series `base + slope * t`.
    pub fn line(base: f64, slope: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = base;
        if order >= 1 {
            coeffs[1] = slope;
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Evaluates the truncated polynomial at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    fn check_order(&self, other: &Jet) -> Result<(), JetError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(JetError::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn checked_div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        self.check_order(rhs)?;
        let b0 = rhs.coeffs[0];
        if b0 == 0.0 {
            return Err(JetError::DivisionByZeroJet);
        }
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * out[k - j];
            }
            out[k] = acc / b0;
        }
        Ok(Jet { coeffs: out })
    }

    pub fn exp(&self) -> Jet {
        let a = &self.coeffs;
        let n = a.len();
        let mut e = vec![0.0; n];
        e[0] = a[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * a[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Jet { coeffs: e }
    }

    pub fn checked_ln(&self) -> Result<Jet, JetError> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(JetError::DomainError { op: "ln", value: a[0] });
        }
        let n = a.len();
        let mut l = vec![0.0; n];
        l[0] = a[0].ln();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * l[j] * a[k - j];
            }
            l[k] = (a[k] - acc / k as f64) / a[0];
        }
        Ok(Jet { coeffs: l })
    }

    /// Returns `(sin a, cos a)`; the two series are coupled.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let n = a.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..n {
            let mut acc_s = 0.0;
            let mut acc_c = 0.0;
            for j in 1..=k {
                let ja = j as f64 * a[j];
                acc_s += ja * c[k - j];
                acc_c += ja * s[k - j];
            }
            s[k] = acc_s / k as f64;
            c[k] = -acc_c / k as f64;
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    /// `a^p` for real `p`; needs a positive constant term.
    pub fn checked_powf(&self, p: f64) -> Result<Jet, JetError> {
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(JetError::DomainError { op: "powf", value: a[0] });
        }
        let n = a.len();
        let mut b = vec![0.0; n];
        b[0] = a[0].powf(p);
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((p + 1.0) * j as f64 - k as f64) * a[j] * b[k - j];
            }
            b[k] = acc / (k as f64 * a[0]);
        }
        Ok(Jet { coeffs: b })
    }

    /// Integer power by repeated squaring; negative exponents divide.
    pub fn checked_powi(&self, exponent: i32) -> Result<Jet, JetError> {
        let mut result = Jet::constant(1.0, self.order());
        let mut base = self.clone();
        let mut e = exponent.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        if exponent < 0 {
            Jet::constant(1.0, self.order()).checked_div(&result)
        } else {
            Ok(result)
        }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.order(), rhs.order());
        Jet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.order(), rhs.order());
        Jet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.order(), rhs.order());
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Jet { coeffs: out }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        self.coeffs.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        self.coeffs.iter_mut().for_each(|c| *c *= rhs);
        self
    }
}

/// Binary jet operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Unary elementary functions on jets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Powf(f64),
    Powi(i32),
}

pub fn jet_arith(a: &Jet, b: &Jet, op: JetOp) -> Result<Jet, JetError> {
    a.check_order(b)?;
    Ok(match op {
        JetOp::Add => a + b,
        JetOp::Sub => a - b,
        JetOp::Mul => a * b,
        JetOp::Div => a.checked_div(b)?,
    })
}

pub fn jet_elementary(a: &Jet, f: Elementary) -> Result<Jet, JetError> {
    a.apply(f)
}

/// Arithmetic a right-hand side program may use.
///
/// Implemented for `f64` (plain evaluation) and [`Jet`] (truncated series).
/// Fallible operations report the same errors in both instantiations so a
/// program behaves identically whichever way it is evaluated.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    /// A constant with the same shape (jet order) as `self`.
    fn constant_like(&self, value: f64) -> Self;

    /// The value at the expansion point.
    fn value(&self) -> f64;

    fn apply(&self, f: Elementary) -> Result<Self, JetError>;

    fn try_div(&self, rhs: &Self) -> Result<Self, JetError>;

    fn exp(&self) -> Self {
        self.apply(Elementary::Exp).expect("exp is total")
    }

    fn sin(&self) -> Self {
        self.apply(Elementary::Sin).expect("sin is total")
    }

    fn cos(&self) -> Self {
        self.apply(Elementary::Cos).expect("cos is total")
    }

    fn try_ln(&self) -> Result<Self, JetError> {
        self.apply(Elementary::Ln)
    }

    fn try_sqrt(&self) -> Result<Self, JetError> {
        self.apply(Elementary::Sqrt)
    }

    fn try_powf(&self, p: f64) -> Result<Self, JetError> {
        self.apply(Elementary::Powf(p))
    }

    fn try_powi(&self, n: i32) -> Result<Self, JetError> {
        self.apply(Elementary::Powi(n))
    }
}

impl Scalar for f64 {
    fn constant_like(&self, value: f64) -> Self {
        value
    }

    fn value(&self) -> f64 {
        *self
    }

    fn apply(&self, f: Elementary) -> Result<Self, JetError> {
        let x = *self;
        Ok(match f {
            Elementary::Exp => x.exp(),
            Elementary::Sin => x.sin(),
            Elementary::Cos => x.cos(),
            Elementary::Ln => {
                if !(x > 0.0) {
                    return Err(JetError::DomainError { op: "ln", value: x });
                }
                x.ln()
            }
            Elementary::Sqrt => {
                if !(x > 0.0) {
                    return Err(JetError::DomainError { op: "sqrt", value: x });
                }
                x.sqrt()
            }
            Elementary::Powf(p) => {
                if !(x > 0.0) {
                    return Err(JetError::DomainError { op: "powf", value: x });
                }
                x.powf(p)
            }
            Elementary::Powi(n) => {
                if n < 0 && x == 0.0 {
                    return Err(JetError::DivisionByZeroJet);
                }
                x.powi(n)
            }
        })
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, JetError> {
        if *rhs == 0.0 {
            Err(JetError::DivisionByZeroJet)
        } else {
            Ok(self / rhs)
        }
    }
}

impl Scalar for Jet {
    fn constant_like(&self, value: f64) -> Self {
        Jet::constant(value, self.order())
    }

    fn value(&self) -> f64 {
        self.coeffs[0]
    }

    fn apply(&self, f: Elementary) -> Result<Self, JetError> {
        match f {
            Elementary::Exp => Ok(Jet::exp(self)),
            Elementary::Ln => self.checked_ln(),
            Elementary::Sin => Ok(self.sin_cos().0),
            Elementary::Cos => Ok(self.sin_cos().1),
            Elementary::Sqrt => {
                if !(self.coeffs[0] > 0.0) {
                    return Err(JetError::DomainError { op: "sqrt", value: self.coeffs[0] });
                }
                self.checked_powf(0.5)
            }
            Elementary::Powf(p) => self.checked_powf(p),
            Elementary::Powi(n) => self.checked_powi(n),
        }
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, JetError> {
        self.checked_div(rhs)
    }
}

/// A right-hand side `f: R^d -> R^d` written over an abstract scalar.
///
/// Implement this for plug-in problems; the blanket impl turns it into an
/// object-safe [`RhsProgram`].
pub trait RhsFn: Send + Sync {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>, JetError>;
}

/// Object-safe view of a right-hand side, evaluable on reals and on jets.
pub trait RhsProgram: Send + Sync {
    fn dim(&self) -> usize;
    fn eval_real(&self, y: &[f64]) -> Result<Vec<f64>, JetError>;
    fn eval_jet(&self, y: &[Jet]) -> Result<Vec<Jet>, JetError>;
}

fn check_dims<T>(expected: usize, input: &[T]) -> Result<(), JetError> {
    if input.len() != expected {
        return Err(JetError::DimensionMismatch { expected, got: input.len() });
    }
    Ok(())
}

impl<F: RhsFn> RhsProgram for F {
    fn dim(&self) -> usize {
        RhsFn::dim(self)
    }

    fn eval_real(&self, y: &[f64]) -> Result<Vec<f64>, JetError> {
        check_dims(RhsFn::dim(self), y)?;
        let out = self.eval(y)?;
        check_dims(RhsFn::dim(self), &out)?;
        Ok(out)
    }

    fn eval_jet(&self, y: &[Jet]) -> Result<Vec<Jet>, JetError> {
        check_dims(RhsFn::dim(self), y)?;
        let out = self.eval(y)?;
        check_dims(RhsFn::dim(self), &out)?;
        Ok(out)
    }
}

/// `d` jets sharing one truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorJet {
    components: Vec<Jet>,
}

impl VectorJet {
    pub fn new(components: Vec<Jet>) -> Result<Self, JetError> {
        let order = components.first().map(Jet::order).unwrap_or(0);
        if let Some(bad) = components.iter().find(|c| c.order() != order) {
            return Err(JetError::OrderMismatch(order, bad.order()));
        }
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> usize {
        self.components.first().map(Jet::order).unwrap_or(0)
    }

    pub fn components(&self) -> &[Jet] {
        &self.components
    }

    /// Coefficient `k` of every component.
    pub fn coeff_vector(&self, k: usize) -> Vec<f64> {
        self.components.iter().map(|c| c.coeff(k)).collect()
    }

    /// Evaluates every component polynomial at `t`.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(t)).collect()
    }
}

/// Normalized Taylor coefficients `z^{(j)}(0)/j!`, `j = 0..=degree`, of the
/// solution of `z' = f(z)`, `z(0) = y`.
///
/// Uses the recurrence `(j+1) z_{j+1} = (f∘z)_j`: coefficient `j` of `f∘z`
/// only depends on `z_0..=z_j`, so one sweep per degree suffices.
pub fn ode_taylor_coeffs(
    f: &dyn RhsProgram,
    y: &[f64],
    degree: usize,
) -> Result<VectorJet, JetError> {
    check_dims(f.dim(), y)?;
    let mut z: Vec<Jet> = y.iter().map(|&v| Jet::constant(v, degree)).collect();
    for j in 0..degree {
        let fz = f.eval_jet(&z)?;
        for (zc, fc) in z.iter_mut().zip(&fz) {
            zc.coeffs[j + 1] = fc.coeff(j) / (j + 1) as f64;
        }
    }
    VectorJet::new(z)
}

/// Homogeneous parts `h_k = f^{(k)}(x)(v)^k / k!`, `k = 0..=r`, read off as
/// the `s^k` coefficients of `s ↦ f(x + s v)`.
pub fn truncated_taylor_of_f(
    f: &dyn RhsProgram,
    x: &[f64],
    v: &[f64],
    r: usize,
) -> Result<Vec<Vec<f64>>, JetError> {
    check_dims(f.dim(), x)?;
    check_dims(f.dim(), v)?;
    let input: Vec<Jet> = x.iter().zip(v).map(|(&xi, &vi)| Jet::line(xi, vi, r)).collect();
    let out = f.eval_jet(&input)?;
    Ok((0..=r).map(|k| out.iter().map(|c| c.coeff(k)).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    struct Square;
    impl RhsFn for Square {
        fn dim(&self) -> usize {
            1
        }
        fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>, JetError> {
            Ok(vec![y[0].clone() * y[0].clone()])
        }
    }

    struct Identity;
    impl RhsFn for Identity {
        fn dim(&self) -> usize {
            1
        }
        fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>, JetError> {
            Ok(vec![y[0].clone()])
        }
    }

    struct Constant(f64);
    impl RhsFn for Constant {
        fn dim(&self) -> usize {
            1
        }
        fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>, JetError> {
            Ok(vec![y[0].constant_like(self.0)])
        }
    }

    struct Affine;
    impl RhsFn for Affine {
        fn dim(&self) -> usize {
            2
        }
        fn eval<S: Scalar>(&self, y: &[S]) -> Result<Vec<S>, JetError> {
            Ok(vec![
                y[0].clone() * 2.0 - y[1].clone() + 0.5,
                y[1].clone() * -3.0 + 1.0,
            ])
        }
    }

    #[test]
    fn arith_examples() {
        let a = Jet::new(vec![1.0, 1.0, 0.0]);
        assert_eq!(jet_arith(&a, &a, JetOp::Mul).unwrap().coeffs(), &[1.0, 2.0, 1.0]);
        let one = Jet::constant(1.0, 2);
        assert_eq!(jet_arith(&one, &a, JetOp::Div).unwrap().coeffs(), &[1.0, -1.0, 1.0]);
        let t = Jet::variable(0.0, 3);
        let e = jet_elementary(&t, Elementary::Exp).unwrap();
        for (got, want) in e.coeffs().iter().zip([1.0, 1.0, 0.5, 1.0 / 6.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn arith_errors() {
        let a = Jet::new(vec![1.0, 1.0]);
        let z = Jet::new(vec![0.0, 1.0]);
        assert_eq!(jet_arith(&a, &z, JetOp::Div), Err(JetError::DivisionByZeroJet));
        assert!(matches!(
            jet_elementary(&z, Elementary::Ln),
            Err(JetError::DomainError { op: "ln", .. })
        ));
        assert!(matches!(
            jet_elementary(&-a.clone(), Elementary::Powf(0.5)),
            Err(JetError::DomainError { .. })
        ));
        assert!(matches!(
            jet_arith(&a, &Jet::constant(1.0, 3), JetOp::Add),
            Err(JetError::OrderMismatch(1, 3))
        ));
        assert_eq!(2.0f64.try_div(&0.0), Err(JetError::DivisionByZeroJet));
    }

    #[test]
    fn elementary_series() {
        // ln(1+t) = t - t^2/2 + t^3/3
        let l = Jet::variable(1.0, 3).checked_ln().unwrap();
        for (got, want) in l.coeffs().iter().zip([0.0, 1.0, -0.5, 1.0 / 3.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-15);
        }
        let (s, c) = Jet::variable(0.0, 4).sin_cos();
        for (got, want) in s.coeffs().iter().zip([0.0, 1.0, 0.0, -1.0 / 6.0, 0.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-15);
        }
        for (got, want) in c.coeffs().iter().zip([1.0, 0.0, -0.5, 0.0, 1.0 / 24.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-15);
        }
        // sqrt(1+t) = 1 + t/2 - t^2/8 + t^3/16
        let r = Jet::variable(1.0, 3).try_sqrt().unwrap();
        for (got, want) in r.coeffs().iter().zip([1.0, 0.5, -0.125, 0.0625]) {
            assert_relative_eq!(*got, want, epsilon = 1e-15);
        }
        // (1+t)^-2 = 1 - 2t + 3t^2 - 4t^3
        let p = Jet::variable(1.0, 3).checked_powi(-2).unwrap();
        assert_eq!(p.coeffs(), &[1.0, -2.0, 3.0, -4.0]);
    }

    #[test]
    fn ode_coeffs_examples() {
        let z = ode_taylor_coeffs(&Identity, &[1.0], 3).unwrap();
        let c = z.components()[0].coeffs();
        for (got, want) in c.iter().zip([1.0, 1.0, 0.5, 1.0 / 6.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-15);
        }
        let z = ode_taylor_coeffs(&Constant(0.7), &[-2.0], 3).unwrap();
        assert_eq!(z.components()[0].coeffs(), &[-2.0, 0.7, 0.0, 0.0]);
        // z' = z^2, z(0) = 1 has solution 1/(1-t) = sum t^j
        let z = ode_taylor_coeffs(&Square, &[1.0], 3).unwrap();
        assert_eq!(z.components()[0].coeffs(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn ode_coeffs_satisfy_recurrence() {
        let z = ode_taylor_coeffs(&Affine, &[0.3, -1.2], 5).unwrap();
        let fz = Affine.eval_jet(z.components()).unwrap();
        assert_eq!(z.coeff_vector(0), vec![0.3, -1.2]);
        for j in 0..5 {
            for c in 0..2 {
                assert_relative_eq!(
                    (j + 1) as f64 * z.components()[c].coeff(j + 1),
                    fz[c].coeff(j),
                    max_relative = 1e-14
                );
            }
        }
    }

    #[test]
    fn directional_taylor_examples() {
        let h = truncated_taylor_of_f(&Square, &[1.0], &[1.0], 1).unwrap();
        assert_eq!(h, vec![vec![1.0], vec![2.0]]);
        let h = truncated_taylor_of_f(&Square, &[0.4], &[0.0], 3).unwrap();
        assert_relative_eq!(h[0][0], 0.16, max_relative = 1e-15);
        assert_eq!(&h[1..], &[vec![0.0], vec![0.0], vec![0.0]]);

        let x = [0.25, -1.5];
        let v = [0.75, 2.0];
        let h = truncated_taylor_of_f(&Affine, &x, &v, 3).unwrap();
        assert_eq!(h[2], vec![0.0, 0.0]);
        assert_eq!(h[3], vec![0.0, 0.0]);
        let y: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + b).collect();
        let fy = Affine.eval_real(&y).unwrap();
        for c in 0..2 {
            assert_relative_eq!(h.iter().map(|hk| hk[c]).sum::<f64>(), fy[c], epsilon = 1e-14);
        }
    }

    #[test]
    fn polynomial_f_reproduced_when_r_covers_degree() {
        // f(z) = z^2: degree 2, so r = 2 reproduces f(x+v)
        let h = truncated_taylor_of_f(&Square, &[1.5], &[-0.25], 2).unwrap();
        let sum: f64 = h.iter().map(|hk| hk[0]).sum();
        assert_relative_eq!(sum, 1.25 * 1.25, epsilon = 1e-15);
    }

    #[test]
    fn dimension_checked() {
        assert!(matches!(
            Affine.eval_real(&[1.0]),
            Err(JetError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }
}
