use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Dual, HyperDual, Jet2};
use crate::smooth::{lift, Expr, Scalar};

/// Object-safe face of a scalar-generic map `ℝⁿ → ℝᵐ`.
///
/// Implement [`GenericProgram`] instead; it provides this trait.
pub trait Program: Send + Sync {
    fn arity_in(&self) -> usize;
    fn arity_out(&self) -> usize;
    fn eval_f64(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn eval_jet(&self, x: &[Jet2]) -> Result<Vec<Jet2>>;
    fn eval_dual(&self, x: &[Dual<f64>]) -> Result<Vec<Dual<f64>>>;
    fn eval_hyper(&self, x: &[HyperDual]) -> Result<Vec<HyperDual>>;
}

/// A map written once against the [`Scalar`] contract.
pub trait GenericProgram: Send + Sync {
    fn arity_in(&self) -> usize;
    fn arity_out(&self) -> usize;
    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>>;
}

impl<P: GenericProgram> Program for P {
    fn arity_in(&self) -> usize {
        GenericProgram::arity_in(self)
    }

    fn arity_out(&self) -> usize {
        GenericProgram::arity_out(self)
    }

    fn eval_f64(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.apply(x)
    }

    fn eval_jet(&self, x: &[Jet2]) -> Result<Vec<Jet2>> {
        self.apply(x)
    }

    fn eval_dual(&self, x: &[Dual<f64>]) -> Result<Vec<Dual<f64>>> {
        self.apply(x)
    }

    fn eval_hyper(&self, x: &[HyperDual]) -> Result<Vec<HyperDual>> {
        self.apply(x)
    }
}

/// Shared handle to a scalar-generic program with checked arities.
#[derive(Clone)]
pub struct SmoothMap(Arc<dyn Program>);

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmoothMap({} -> {})", self.arity_in(), self.arity_out())
    }
}

impl SmoothMap {
    pub fn new<P: GenericProgram + 'static>(p: P) -> Self {
        SmoothMap(Arc::new(p))
    }

    pub fn arity_in(&self) -> usize {
        self.0.arity_in()
    }

    pub fn arity_out(&self) -> usize {
        self.0.arity_out()
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.arity_in() {
            return Err(Error::ArityMismatch { expected: self.arity_in(), got: x.len() });
        }
        let out = S::run(&*self.0, x)?;
        debug_assert_eq!(out.len(), self.arity_out());
        Ok(out)
    }

    /// Map whose outputs are the given expressions in `arity_in` variables.
    pub fn from_exprs(arity_in: usize, outputs: Vec<Expr>) -> Result<Self> {
        if let Some(e) = outputs.iter().find(|e| e.arity() > arity_in) {
            return Err(Error::ArityMismatch { expected: arity_in, got: e.arity() });
        }
        Ok(Self::new(ExprMap { arity_in, outputs }))
    }

    pub fn identity(n: usize) -> Self {
        Self::select(n, (0..n).collect()).expect("indices in range")
    }

    /// Picks coordinates `indices` out of an `arity_in`-vector.
    pub fn select(arity_in: usize, indices: Vec<usize>) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i >= arity_in) {
            return Err(Error::ArityMismatch { expected: arity_in, got: i + 1 });
        }
        Ok(Self::new(Select { arity_in, indices }))
    }

    pub fn constant(arity_in: usize, value: Vec<f64>) -> Self {
        Self::new(Constant { arity_in, value })
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &SmoothMap) -> Result<Self> {
        if outer.arity_in() != self.arity_out() {
            return Err(Error::ArityMismatch { expected: outer.arity_in(), got: self.arity_out() });
        }
        Ok(Self::new(Compose { inner: self.clone(), outer: outer.clone() }))
    }

    /// `x ↦ (m₁(x), m₂(x), …)` for maps sharing their input.
    pub fn concat(parts: Vec<SmoothMap>) -> Result<Self> {
        let arity_in = parts.first().map(SmoothMap::arity_in).unwrap_or(0);
        if let Some(p) = parts.iter().find(|p| p.arity_in() != arity_in) {
            return Err(Error::ArityMismatch { expected: arity_in, got: p.arity_in() });
        }
        Ok(Self::new(Concat { arity_in, parts }))
    }

    /// `(x, y) ↦ (a(x), b(y))`.
    pub fn parallel(a: &SmoothMap, b: &SmoothMap) -> Self {
        let n = a.arity_in() + b.arity_in();
        let left = Self::select(n, (0..a.arity_in()).collect()).expect("in range");
        let right = Self::select(n, (a.arity_in()..n).collect()).expect("in range");
        Self::concat(vec![
            left.then(a).expect("arity matches"),
            right.then(b).expect("arity matches"),
        ])
        .expect("shared arity")
    }
}

struct ExprMap {
    arity_in: usize,
    outputs: Vec<Expr>,
}

impl GenericProgram for ExprMap {
    fn arity_in(&self) -> usize {
        self.arity_in
    }

    fn arity_out(&self) -> usize {
        self.outputs.len()
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        self.outputs.iter().map(|e| e.eval(x)).collect()
    }
}

struct Select {
    arity_in: usize,
    indices: Vec<usize>,
}

impl GenericProgram for Select {
    fn arity_in(&self) -> usize {
        self.arity_in
    }

    fn arity_out(&self) -> usize {
        self.indices.len()
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        Ok(self.indices.iter().map(|&i| x[i]).collect())
    }
}

struct Constant {
    arity_in: usize,
    value: Vec<f64>,
}

impl GenericProgram for Constant {
    fn arity_in(&self) -> usize {
        self.arity_in
    }

    fn arity_out(&self) -> usize {
        self.value.len()
    }

    fn apply<S: Scalar>(&self, _x: &[S]) -> Result<Vec<S>> {
        Ok(lift(&self.value))
    }
}

struct Compose {
    inner: SmoothMap,
    outer: SmoothMap,
}

impl GenericProgram for Compose {
    fn arity_in(&self) -> usize {
        self.inner.arity_in()
    }

    fn arity_out(&self) -> usize {
        self.outer.arity_out()
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        self.outer.eval(&self.inner.eval(x)?)
    }
}

struct Concat {
    arity_in: usize,
    parts: Vec<SmoothMap>,
}

impl GenericProgram for Concat {
    fn arity_in(&self) -> usize {
        self.arity_in
    }

    fn arity_out(&self) -> usize {
        self.parts.iter().map(SmoothMap::arity_out).sum()
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(GenericProgram::arity_out(self));
        for p in &self.parts {
            out.extend(p.eval(x)?);
        }
        Ok(out)
    }
}
