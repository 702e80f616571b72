//! Scalar-generic curves, functions and two-parameter maps, with exact
//! derivative extraction at the origin.
//!
//! Every derivative the bracket construction needs is either `(f∘c)'(0)` or
//! a mixed partial `∂²(f∘γ)/∂s∂t(0,0)`. Both are read off a single
//! evaluation over [`Jet2`]: seed the parameter(s), read `ds` or `dst`.

mod expr;
mod program;
pub mod random;
mod scalar;

pub use expr::Expr;
pub use program::{GenericProgram, Program, SmoothMap};
pub use scalar::{lift, values, DualBase, Scalar};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet2;

/// Step for central first differences.
pub const FD_STEP_FIRST: f64 = 1e-4;
/// Step for central second differences.
pub const FD_STEP_SECOND: f64 = 1e-3;
/// Step of the five-point first-derivative stencil in the smoothness probe.
pub const PROBE_STEP_FIRST: f64 = 1e-3;
/// Step of the five-point second-derivative stencil in the smoothness probe.
pub const PROBE_STEP_SECOND: f64 = 1e-2;

fn check_arity(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::ArityMismatch { expected, got });
    }
    Ok(())
}

fn check_space(expected: &str, got: &str) -> Result<()> {
    if expected != got {
        return Err(Error::SpaceMismatch { expected: expected.into(), got: got.into() });
    }
    Ok(())
}

/// A smooth curve `ℝ → X`, given by a one-parameter program.
#[derive(Clone, Debug)]
pub struct Curve {
    target: String,
    map: SmoothMap,
}

impl Curve {
    pub fn new(target: impl Into<String>, map: SmoothMap) -> Result<Self> {
        check_arity(1, map.arity_in())?;
        Ok(Self { target: target.into(), map })
    }

    pub fn from_exprs(target: impl Into<String>, coords: Vec<Expr>) -> Result<Self> {
        Self::new(target, SmoothMap::from_exprs(1, coords)?)
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn point_arity(&self) -> usize {
        self.map.arity_out()
    }

    pub fn eval<S: Scalar>(&self, u: S) -> Result<Vec<S>> {
        self.map.eval(&[u])
    }

    pub fn at(&self, u: f64) -> Result<Vec<f64>> {
        self.eval(u)
    }

    /// `u ↦ self(offset + rate·u)`.
    pub fn reparametrize(&self, offset: f64, rate: f64) -> Self {
        let affine = SmoothMap::from_exprs(1, vec![Expr::var(0) * rate + offset]).expect("unary");
        Self { target: self.target.clone(), map: affine.then(&self.map).expect("unary") }
    }

    /// `φ ∘ self`, landing in `target`.
    pub fn push_forward(&self, phi: &SmoothMap, target: impl Into<String>) -> Result<Self> {
        Self::new(target, self.map.then(phi)?)
    }
}

/// A smooth function `X → ℝ`.
#[derive(Clone, Debug)]
pub struct RealFunction {
    source: String,
    map: SmoothMap,
}

impl RealFunction {
    pub fn new(source: impl Into<String>, map: SmoothMap) -> Result<Self> {
        check_arity(1, map.arity_out())?;
        Ok(Self { source: source.into(), map })
    }

    pub fn from_expr(source: impl Into<String>, arity: usize, e: Expr) -> Result<Self> {
        Self::new(source, SmoothMap::from_exprs(arity, vec![e])?)
    }

    /// The coordinate function `x ↦ xᵢ`.
    pub fn coordinate(source: impl Into<String>, arity: usize, i: usize) -> Result<Self> {
        Self::new(source, SmoothMap::select(arity, vec![i])?)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn arity(&self) -> usize {
        self.map.arity_in()
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> Result<S> {
        Ok(self.map.eval(x)?[0])
    }

    /// `f ∘ φ` for `φ` landing in this function's source.
    pub fn pull_back(&self, phi: &SmoothMap, source: impl Into<String>) -> Result<Self> {
        Self::new(source, phi.then(&self.map)?)
    }

    /// `Σ αᵢ fᵢ` over functions on a common source.
    pub fn linear_combination(terms: &[(f64, RealFunction)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?;
        for (_, f) in terms {
            check_space(first.1.source(), f.source())?;
        }
        let parts = terms.iter().map(|(_, f)| f.map.clone()).collect();
        let sum = terms
            .iter()
            .enumerate()
            .map(|(i, (a, _))| Expr::var(i) * *a)
            .reduce(|x, y| x + y)
            .expect("nonempty");
        let outer = SmoothMap::from_exprs(terms.len(), vec![sum])?;
        Self::new(first.1.source(), SmoothMap::concat(parts)?.then(&outer)?)
    }
}

/// A two-parameter map `γ: ℝ² → X`.
#[derive(Clone, Debug)]
pub struct TwoParamMap {
    target: String,
    map: SmoothMap,
}

impl TwoParamMap {
    pub fn new(target: impl Into<String>, map: SmoothMap) -> Result<Self> {
        check_arity(2, map.arity_in())?;
        Ok(Self { target: target.into(), map })
    }

    pub fn from_exprs(target: impl Into<String>, coords: Vec<Expr>) -> Result<Self> {
        Self::new(target, SmoothMap::from_exprs(2, coords)?)
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn eval<S: Scalar>(&self, s: S, t: S) -> Result<Vec<S>> {
        self.map.eval(&[s, t])
    }

    pub fn at(&self, s: f64, t: f64) -> Result<Vec<f64>> {
        self.eval(s, t)
    }

    /// The curve `t ↦ γ(s₀, t)`.
    pub fn slice_t(&self, s0: f64) -> Curve {
        let m = SmoothMap::from_exprs(1, vec![Expr::constant(s0), Expr::var(0)]).expect("unary");
        Curve { target: self.target.clone(), map: m.then(&self.map).expect("binary") }
    }

    /// The curve `s ↦ γ(s, t₀)`.
    pub fn slice_s(&self, t0: f64) -> Curve {
        let m = SmoothMap::from_exprs(1, vec![Expr::var(0), Expr::constant(t0)]).expect("unary");
        Curve { target: self.target.clone(), map: m.then(&self.map).expect("binary") }
    }

    /// `(s, t) ↦ φ(γ(s, t))`.
    pub fn push_forward(&self, phi: &SmoothMap, target: impl Into<String>) -> Result<Self> {
        Self::new(target, self.map.then(phi)?)
    }
}

/// `(f∘c)'(0)`.
pub fn deriv_at_zero(f: &RealFunction, c: &Curve) -> Result<f64> {
    check_space(f.source(), c.target())?;
    check_arity(f.arity(), c.point_arity())?;
    Ok(f.eval(&c.eval(Jet2::seed_s(0.0))?)?.ds)
}

/// `∂²(f∘γ)/∂s∂t` at the origin.
pub fn mixed_partial_at_zero(f: &RealFunction, g: &TwoParamMap) -> Result<f64> {
    check_space(f.source(), g.target())?;
    Ok(f.eval(&g.eval(Jet2::seed_s(0.0), Jet2::seed_t(0.0))?)?.dst)
}

/// Deviation between a jet derivative and its finite-difference estimate,
/// relative to `max(1, |jet|)`.
pub fn relative_deviation(jet: f64, fd: f64) -> f64 {
    let d = (jet - fd).abs() / jet.abs().max(1.0);
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

/// Compares first and second jet derivatives of a univariate program at
/// `u0` against five-point central differences. Returns the worse relative
/// deviation.
pub fn probe_univariate(
    real: &dyn Fn(f64) -> Result<f64>,
    jet: &dyn Fn(Jet2) -> Result<Jet2>,
    u0: f64,
) -> Result<f64> {
    let stencil = |h: f64| -> Result<[f64; 4]> { Ok([real(u0 - 2.0 * h)?, real(u0 - h)?, real(u0 + h)?, real(u0 + 2.0 * h)?]) };
    let h = PROBE_STEP_FIRST;
    let j1 = jet(Jet2::seed_s(u0))?.ds;
    let [m2, m1, p1, p2] = stencil(h)?;
    let fd1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let h = PROBE_STEP_SECOND;
    let j2 = jet(Jet2::seed_both(u0))?.dst;
    let [m2, m1, p1, p2] = stencil(h)?;
    let fd2 = (-m2 + 16.0 * m1 - 30.0 * real(u0)? + 16.0 * p1 - p2) / (12.0 * h * h);
    Ok(relative_deviation(j1, fd1).max(relative_deviation(j2, fd2)))
}

/// One failing sample in a probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeFailure {
    pub sample: f64,
    pub reason: String,
}

/// Outcome of [`smoothness_probe`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub pass: bool,
    pub worst_deviation: f64,
    pub failures: Vec<ProbeFailure>,
}

impl SmoothnessReport {
    pub(crate) fn empty() -> Self {
        Self { pass: true, worst_deviation: 0.0, failures: Vec::new() }
    }

    pub(crate) fn record(&mut self, sample: f64, outcome: Result<f64>, tol: f64) {
        match outcome {
            Ok(dev) => {
                self.worst_deviation = self.worst_deviation.max(dev);
                if !(dev <= tol) {
                    self.pass = false;
                    self.failures.push(ProbeFailure {
                        sample,
                        reason: format!("deviation {dev:e} exceeds {tol:e}"),
                    });
                }
            }
            Err(e) => {
                self.pass = false;
                self.worst_deviation = f64::INFINITY;
                self.failures.push(ProbeFailure { sample, reason: e.to_string() });
            }
        }
    }

    pub(crate) fn merge(&mut self, other: SmoothnessReport) {
        self.pass &= other.pass;
        self.worst_deviation = self.worst_deviation.max(other.worst_deviation);
        self.failures.extend(other.failures);
    }
}

/// Checks that `f∘c` is smooth to second order at each sample: the curve is
/// reparametrized by `u ↦ u₀ + u` and its jet derivatives are compared with
/// central differences.
pub fn smoothness_probe(f: &RealFunction, c: &Curve, samples: &[f64], tol: f64) -> Result<SmoothnessReport> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("smoothness probe needs samples".into()));
    }
    check_space(f.source(), c.target())?;
    check_arity(f.arity(), c.point_arity())?;
    let mut report = SmoothnessReport::empty();
    for &u0 in samples {
        let c0 = c.reparametrize(u0, 1.0);
        let real = |u: f64| f.eval(&c0.eval(u)?);
        let jet = |u: Jet2| f.eval(&c0.eval(u)?);
        report.record(u0, probe_univariate(&real, &jet, 0.0), tol);
    }
    Ok(report)
}
