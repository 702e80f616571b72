use std::cell::Cell;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::smooth::random::{random_expr, trial_rng};
use crate::smooth::{Curve, Expr, GenericProgram, RealFunction, Scalar, SmoothMap};
use crate::space::{Chart, SpaceDescriptor};

/// A function on `ℝ^J` that factors through the coordinates in `support`.
#[derive(Clone, Debug)]
pub struct FiniteSupportFunction {
    j_size: usize,
    support: Vec<usize>,
    core: SmoothMap,
}

impl FiniteSupportFunction {
    pub fn new(j_size: usize, support: Vec<usize>, core: SmoothMap) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidParameter("support must be non-empty".into()));
        }
        if let Some(&j) = support.iter().find(|&&j| j >= j_size) {
            return Err(Error::InvalidParameter(format!("support index {j} outside J of size {j_size}")));
        }
        if core.arity_in() != support.len() || core.arity_out() != 1 {
            return Err(Error::ArityMismatch { expected: support.len(), got: core.arity_in() });
        }
        Ok(Self { j_size, support, core })
    }

    /// The projection `x ↦ x_j`.
    pub fn projection(j_size: usize, j: usize) -> Result<Self> {
        Self::new(j_size, vec![j], SmoothMap::identity(1))
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn core(&self) -> &SmoothMap {
        &self.core
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> Result<S> {
        self.eval_with(|j| x[j])
    }

    /// Evaluation through a coordinate accessor; only support indices are
    /// requested.
    pub fn eval_with<S: Scalar>(&self, read: impl Fn(usize) -> S) -> Result<S> {
        let gathered: Vec<S> = self.support.iter().map(|&j| read(j)).collect();
        Ok(self.core.eval(&gathered)?[0])
    }

    /// Value and number of coordinate reads.
    pub fn eval_counted(&self, x: &[f64]) -> Result<(f64, usize)> {
        let reads = Cell::new(0usize);
        let v = self.eval_with(|j| {
            reads.set(reads.get() + 1);
            x[j]
        })?;
        Ok((v, reads.get()))
    }

    pub fn to_real_function(&self, source: impl Into<String>) -> Result<RealFunction> {
        RealFunction::new(source, SmoothMap::new(Supported(self.clone())))
    }
}

struct Supported(FiniteSupportFunction);

impl GenericProgram for Supported {
    fn arity_in(&self) -> usize {
        self.0.j_size
    }

    fn arity_out(&self) -> usize {
        1
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        Ok(vec![self.0.eval(x)?])
    }
}

/// Parameters of the `ℝ^J` builtin.
#[derive(Clone, Debug, PartialEq)]
pub struct RPowerConfig {
    pub j_size: usize,
    /// Declared supports; random ones are drawn when empty.
    pub supports: Vec<Vec<usize>>,
    pub max_support: usize,
    pub seed: u64,
}

impl Default for RPowerConfig {
    fn default() -> Self {
        Self { j_size: 100, supports: Vec::new(), max_support: 5, seed: 0x52_4A }
    }
}

impl RPowerConfig {
    pub fn with_size(j_size: usize) -> Self {
        Self { j_size, ..Self::default() }
    }

    /// Declared supports, or `j_size / 5` seeded random ones of size
    /// `1..=max_support`.
    pub fn resolved_supports(&self) -> Vec<Vec<usize>> {
        if !self.supports.is_empty() {
            return self.supports.clone();
        }
        let mut rng = trial_rng(self.seed, 1);
        let hi = self.max_support.min(self.j_size).max(1);
        (0..(self.j_size / 5).max(1))
            .map(|_| {
                let k = rng.gen_range(1..=hi);
                let mut s = sample(&mut rng, self.j_size, k).into_vec();
                s.sort_unstable();
                s
            })
            .collect()
    }
}

/// The name used for `ℝ^J` with `|J| = j_size`.
pub fn r_power_name(j_size: usize) -> String {
    format!("R^J({j_size})")
}

/// `ℝ^J` at finite `J`, returned with its finite-support functions.
///
/// Functions are the coordinate projections followed by one random core
/// per declared support; curves are coordinate lines plus two
/// componentwise curves moving every coordinate.
pub fn r_power(config: &RPowerConfig) -> Result<(SpaceDescriptor, Vec<FiniteSupportFunction>)> {
    let n = config.j_size;
    if n == 0 {
        return Err(Error::InvalidParameter("J must be non-empty".into()));
    }
    let supports = config.resolved_supports();
    if let Some(s) = supports.iter().find(|s| s.len() > config.max_support) {
        return Err(Error::InvalidParameter(format!("support of size {} exceeds {}", s.len(), config.max_support)));
    }
    let name = r_power_name(n);
    let mut fsf = (0..n)
        .map(|j| FiniteSupportFunction::projection(n, j))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = trial_rng(config.seed, 2);
    for s in &supports {
        let core = loop {
            let e = random_expr(&mut rng, s.len(), 3);
            if e.arity() > 0 {
                break e;
            }
        };
        fsf.push(FiniteSupportFunction::new(n, s.clone(), SmoothMap::from_exprs(s.len(), vec![core])?)?);
    }
    let functions = fsf
        .iter()
        .map(|f| f.to_real_function(name.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut curves = (0..n)
        .map(|i| {
            let coords = (0..n)
                .map(|j| if i == j { Expr::var(0) } else { Expr::constant(0.0) })
                .collect();
            Curve::from_exprs(name.clone(), coords)
        })
        .collect::<Result<Vec<_>>>()?;
    let nf = n as f64;
    curves.push(Curve::from_exprs(
        name.clone(),
        (0..n).map(|j| (Expr::var(0) * (1.0 + j as f64 / nf)).sin()).collect(),
    )?);
    curves.push(Curve::from_exprs(
        name.clone(),
        (0..n).map(|j| Expr::var(0).square() * (j as f64 / nf - 0.5)).collect(),
    )?);
    let space = SpaceDescriptor::new(name, n, Arc::new(|_| true))?
        .with_functions(functions)?
        .with_curves(curves)?
        .with_chart(Chart::identity(n))?;
    Ok((space, fsf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluations_touch_only_the_support() {
        let (space, fsf) = r_power(&RPowerConfig::default()).unwrap();
        assert_eq!(space.point_arity(), 100);
        let x: Vec<f64> = (0..100).map(|j| (j as f64 * 0.37).sin()).collect();
        for f in &fsf {
            assert!(f.support().len() <= 5);
            let (v, reads) = f.eval_counted(&x).unwrap();
            assert!(reads <= 5);
            assert_eq!(reads, f.support().len());
            assert_eq!(v, f.eval(&x).unwrap());
        }
    }

    #[test]
    fn poisoning_off_support_coordinates_is_harmless() {
        let (space, fsf) = r_power(&RPowerConfig::default()).unwrap();
        let x: Vec<f64> = (0..100).map(|j| (j as f64 * 0.11).cos()).collect();
        for (f, rf) in fsf.iter().zip(space.gen_functions()) {
            let mut poisoned = vec![f64::NAN; 100];
            for &j in f.support() {
                poisoned[j] = x[j];
            }
            let a = rf.eval(&x).unwrap();
            let b = rf.eval(&poisoned).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn invalid_supports_rejected() {
        assert!(FiniteSupportFunction::projection(3, 3).is_err());
        let bad = RPowerConfig { j_size: 10, supports: vec![(0..6).collect()], ..RPowerConfig::default() };
        assert!(r_power(&bad).is_err());
        assert!(r_power(&RPowerConfig::with_size(0)).is_err());
    }
}
