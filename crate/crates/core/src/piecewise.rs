//! Piecewise polynomials on uniform grids.
//!
//! Piece `j` covers `[a + jΔ, a + (j+1)Δ)` and stores its coefficients in the
//! local variable `τ = t - (a + jΔ)`; the last piece is closed at `b`.
//! Values at breakpoints are taken from the right unless a left limit is
//! requested explicitly, because the approximations built here are in
//! general discontinuous.

use std::io::Write;

use thiserror::Error;

use crate::jets::{JetError, RhsProgram, truncated_taylor_of_f};

#[derive(Debug, Error)]
pub enum PiecewiseError {
    #[error("t = {t} lies outside [{a}, {b}]")]
    OutOfDomain { t: f64, a: f64, b: f64 },
    #[error("interval [{start}, {end}] does not coincide with a single piece")]
    GridMismatch { start: f64, end: f64 },
    #[error("invalid piecewise shape: {0}")]
    InvalidShape(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    LeftLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    a: f64,
    b: f64,
    pieces: usize,
    degree: usize,
    dim: usize,
    // [piece][coeff][component]
    coeffs: Vec<f64>,
}

impl PiecewisePoly {
    pub fn new(
        a: f64,
        b: f64,
        pieces: usize,
        degree: usize,
        dim: usize,
        coeffs: Vec<f64>,
    ) -> Result<Self, PiecewiseError> {
        if pieces == 0 || dim == 0 {
            return Err(PiecewiseError::InvalidShape("need at least one piece and one component".into()));
        }
        if !(b > a) {
            return Err(PiecewiseError::InvalidShape(format!("empty interval [{a}, {b}]")));
        }
        let expected = pieces * (degree + 1) * dim;
        if coeffs.len() != expected {
            return Err(PiecewiseError::InvalidShape(format!(
                "coefficient table has {} entries, expected {expected}",
                coeffs.len()
            )));
        }
        Ok(Self { a, b, pieces, degree, dim, coeffs })
    }

    /// One constant piece.
    pub fn constant(a: f64, b: f64, value: &[f64]) -> Result<Self, PiecewiseError> {
        Self::new(a, b, 1, 0, value.len(), value.to_vec())
    }

    /// Joins polynomials on consecutive equal-length subintervals of `[a, b]`.
    pub fn concat(a: f64, b: f64, parts: Vec<PiecewisePoly>) -> Result<Self, PiecewiseError> {
        let first = parts
            .first()
            .ok_or_else(|| PiecewiseError::InvalidShape("nothing to concatenate".into()))?;
        let (per, degree, dim) = (first.pieces, first.degree, first.dim);
        if parts.iter().any(|p| p.pieces != per || p.degree != degree || p.dim != dim) {
            return Err(PiecewiseError::InvalidShape("parts have different shapes".into()));
        }
        let total = per * parts.len();
        let mut coeffs = Vec::with_capacity(total * (degree + 1) * dim);
        for p in parts {
            coeffs.extend(p.coeffs);
        }
        Self::new(a, b, total, degree, dim, coeffs)
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn pieces(&self) -> usize {
        self.pieces
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn piece_width(&self) -> f64 {
        (self.b - self.a) / self.pieces as f64
    }

    pub fn piece_start(&self, j: usize) -> f64 {
        self.a + j as f64 * self.piece_width()
    }

    /// Coefficient `k` of component `c` on piece `j`.
    pub fn coeff(&self, j: usize, k: usize, c: usize) -> f64 {
        self.coeffs[(j * (self.degree + 1) + k) * self.dim + c]
    }

    fn piece_slice(&self, j: usize) -> &[f64] {
        let stride = (self.degree + 1) * self.dim;
        &self.coeffs[j * stride..(j + 1) * stride]
    }

    /// Evaluates piece `j` at local offset `tau` (no domain check).
    pub fn eval_piece(&self, j: usize, tau: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_piece_into(j, tau, &mut out);
        out
    }

    pub fn eval_piece_into(&self, j: usize, tau: f64, out: &mut [f64]) {
        let table = self.piece_slice(j);
        for (c, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in (0..=self.degree).rev() {
                acc = acc * tau + table[k * self.dim + c];
            }
            *o = acc;
        }
    }

    /// Piece index and local offset for `t`, honouring the side convention.
    pub fn locate(&self, t: f64, side: Side) -> Result<(usize, f64), PiecewiseError> {
        if !(t >= self.a && t <= self.b) {
            return Err(PiecewiseError::OutOfDomain { t, a: self.a, b: self.b });
        }
        let width = self.piece_width();
        let x = (t - self.a) / width;
        let nearest = x.round();
        let at_break = (x - nearest).abs() <= 1e-9 * nearest.max(1.0);
        let j = if at_break {
            let k = nearest as usize;
            match side {
                Side::LeftLimit if k > 0 => k - 1,
                _ => k.min(self.pieces - 1),
            }
        } else {
            (x.floor() as usize).min(self.pieces - 1)
        };
        Ok((j, t - self.piece_start(j)))
    }

    pub fn eval(&self, t: f64, side: Side) -> Result<Vec<f64>, PiecewiseError> {
        let (j, tau) = self.locate(t, side)?;
        Ok(self.eval_piece(j, tau))
    }

    /// Writes the coefficient table as `piece_index,coeff_index,component,value`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), PiecewiseError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["piece_index", "coeff_index", "component", "value"])?;
        for j in 0..self.pieces {
            for k in 0..=self.degree {
                for c in 0..self.dim {
                    w.write_record(&[
                        j.to_string(),
                        k.to_string(),
                        c.to_string(),
                        format!("{:e}", self.coeff(j, k, c)),
                    ])?;
                }
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Rule able to integrate `w ∘ path` exactly when `w` has degree `r`
    /// and the path has degree `r + 1`.
    pub fn for_composed_degree(r: usize) -> Self {
        Self::new((r * (r + 1) + 1).div_ceil(2).max(1))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[0, length]`.
    pub fn scaled(&self, length: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * length;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (half * (x + 1.0), half * w))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The degree-`r` Taylor polynomial `w(y) = Σ_k f^{(k)}(c)(y-c)^k / k!` of a
/// right-hand side about a fixed center `c`.
pub struct LocalTaylor<'a> {
    f: &'a dyn RhsProgram,
    center: Vec<f64>,
    r: usize,
}

impl<'a> LocalTaylor<'a> {
    pub fn new(f: &'a dyn RhsProgram, center: Vec<f64>, r: usize) -> Self {
        Self { f, center, r }
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Homogeneous parts `h_0..=h_r` along the direction `y - c`.
    pub fn parts(&self, y: &[f64]) -> Result<Vec<Vec<f64>>, JetError> {
        let v: Vec<f64> = y.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        truncated_taylor_of_f(self.f, &self.center, &v, self.r)
    }

    pub fn eval(&self, y: &[f64]) -> Result<Vec<f64>, JetError> {
        let parts = self.parts(y)?;
        let mut out = vec![0.0; y.len()];
        for h in &parts {
            for (o, x) in out.iter_mut().zip(h) {
                *o += x;
            }
        }
        Ok(out)
    }
}

/// `∫_{start}^{start+length} w(path(t)) dt` where `path` is the piece of
/// `path` containing the interval.
///
/// The integrand is a polynomial of degree at most `r(r+1)` in `t`, so the
/// Gauss rule from [`GaussLegendre::for_composed_degree`] is exact.
pub fn integrate_composed(
    w: &LocalTaylor<'_>,
    path: &PiecewisePoly,
    start: f64,
    length: f64,
    rule: &GaussLegendre,
) -> Result<Vec<f64>, PiecewiseError> {
    let (j, offset) = path.locate(start, Side::Right)?;
    let width = path.piece_width();
    let tol = 1e-9 * width;
    if offset + length > width + tol {
        return Err(PiecewiseError::GridMismatch { start, end: start + length });
    }
    integrate_on_piece(w, path, j, offset, length, rule)
}

/// Same as [`integrate_composed`] for piece `j`, from local offset `offset`.
pub fn integrate_on_piece(
    w: &LocalTaylor<'_>,
    path: &PiecewisePoly,
    j: usize,
    offset: f64,
    length: f64,
    rule: &GaussLegendre,
) -> Result<Vec<f64>, PiecewiseError> {
    let mut total = vec![0.0; path.dim()];
    let mut y = vec![0.0; path.dim()];
    for (tau, weight) in rule.scaled(length) {
        path.eval_piece_into(j, offset + tau, &mut y);
        let wy = w.eval(&y)?;
        for (acc, v) in total.iter_mut().zip(wy) {
            *acc += weight * v;
        }
    }
    Ok(total)
}

/// Discretized sup-norm distance `max_t ‖reference(t) - p(t)‖_∞`.
///
/// Each piece is sampled at `samples_per_piece` equispaced points including
/// both ends; the right end uses the piece's own polynomial (left limit).
pub fn sup_norm_distance<F>(
    p: &PiecewisePoly,
    reference: F,
    samples_per_piece: usize,
) -> Result<f64, PiecewiseError>
where
    F: Fn(f64) -> Vec<f64>,
{
    if samples_per_piece < 2 {
        return Err(PiecewiseError::InvalidShape("need at least two samples per piece".into()));
    }
    let width = p.piece_width();
    let mut worst: f64 = 0.0;
    let mut y = vec![0.0; p.dim()];
    for j in 0..p.pieces() {
        let start = p.piece_start(j);
        for k in 0..samples_per_piece {
            let tau = width * k as f64 / (samples_per_piece - 1) as f64;
            p.eval_piece_into(j, tau, &mut y);
            let z = reference(start + tau);
            for (zc, yc) in z.iter().zip(&y) {
                worst = worst.max((zc - yc).abs());
            }
        }
    }
    Ok(worst)
}
