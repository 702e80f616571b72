//! Space descriptors: a point representation plus finite generating sets of
//! curves and functions, optionally with a chart.
//!
//! The saturated structure is never materialized. Claims quantified over
//! all functions are probed over the declared generators plus a few seeded
//! random smooth combinations of them ([`SpaceDescriptor::probes`]).
//!
//! Each descriptor must declare a *separating* set of generating functions:
//! two tangent vectors are compared only through them.

mod rpower;

pub use rpower::{r_power, r_power_name, FiniteSupportFunction, RPowerConfig};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::smooth::random::{random_expr, trial_rng};
use crate::smooth::{smoothness_probe, Curve, Expr, RealFunction, SmoothMap, SmoothnessReport};

/// Default point-equality tolerance.
pub const DEFAULT_EQ_TOL: f64 = 1e-9;
/// Parameters at which generator pairs are probed for smoothness.
pub const SATURATION_SAMPLES: [f64; 5] = [-1.0, -0.3, 0.0, 0.3, 1.0];
/// Parameters at which curves are checked against membership.
pub const MEMBERSHIP_SAMPLES: [f64; 5] = [-0.05, -0.01, 0.0, 0.01, 0.05];
/// Number of random combinations added to the generators when probing.
pub const DEFAULT_EXTRA_PROBES: usize = 20;
/// Seed for the random probe combinations.
pub const DEFAULT_PROBE_SEED: u64 = 0x5EED;

/// Predicate on ambient coordinates.
pub type Membership = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// A chart: mutually inverse maps between a neighbourhood and `ℝⁿ`.
#[derive(Clone)]
pub struct Chart {
    dim: usize,
    to_coords: SmoothMap,
    from_coords: SmoothMap,
    domain: Membership,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart").field("dim", &self.dim).finish()
    }
}

impl Chart {
    pub fn new(to_coords: SmoothMap, from_coords: SmoothMap, domain: Membership) -> Result<Self> {
        if to_coords.arity_out() != from_coords.arity_in() || to_coords.arity_in() != from_coords.arity_out() {
            return Err(Error::ArityMismatch { expected: to_coords.arity_out(), got: from_coords.arity_in() });
        }
        Ok(Self { dim: to_coords.arity_out(), to_coords, from_coords, domain })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(SmoothMap::identity(n), SmoothMap::identity(n), Arc::new(|_| true)).expect("square")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_coords(&self) -> &SmoothMap {
        &self.to_coords
    }

    pub fn from_coords(&self) -> &SmoothMap {
        &self.from_coords
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        (self.domain)(point)
    }

    pub fn coords(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.to_coords.eval(point)
    }

    pub fn point(&self, coords: &[f64]) -> Result<Vec<f64>> {
        self.from_coords.eval(coords)
    }

    /// The chart line `t ↦ chart⁻¹(base_coords + t·direction)`.
    pub fn line(&self, target: &str, base_coords: &[f64], direction: &[f64]) -> Result<Curve> {
        if base_coords.len() != self.dim || direction.len() != self.dim {
            return Err(Error::ArityMismatch { expected: self.dim, got: direction.len() });
        }
        let exprs = base_coords
            .iter()
            .zip(direction)
            .map(|(&b, &d)| Expr::var(0) * d + b)
            .collect();
        Curve::new(target, SmoothMap::from_exprs(1, exprs)?.then(&self.from_coords)?)
    }
}

/// A Frölicher space at probe scale.
#[derive(Clone)]
pub struct SpaceDescriptor {
    name: String,
    point_arity: usize,
    membership: Membership,
    gen_functions: Vec<RealFunction>,
    gen_curves: Vec<Curve>,
    chart: Option<Chart>,
    eq_tol: f64,
    factors: Option<(Arc<SpaceDescriptor>, Arc<SpaceDescriptor>)>,
}

impl fmt::Debug for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpaceDescriptor")
            .field("name", &self.name)
            .field("point_arity", &self.point_arity)
            .field("gen_functions", &self.gen_functions.len())
            .field("gen_curves", &self.gen_curves.len())
            .field("chart", &self.chart)
            .finish()
    }
}

impl SpaceDescriptor {
    /// A space with the given membership and no generators yet.
    pub fn new(name: impl Into<String>, point_arity: usize, membership: Membership) -> Result<Self> {
        if point_arity == 0 {
            return Err(Error::InvalidParameter("point arity must be positive".into()));
        }
        Ok(Self {
            name: name.into(),
            point_arity,
            membership,
            gen_functions: Vec::new(),
            gen_curves: Vec::new(),
            chart: None,
            eq_tol: DEFAULT_EQ_TOL,
            factors: None,
        })
    }

    /// Installs generating functions. They must separate points and tangent
    /// vectors: equality tests probe only these and random combinations.
    pub fn with_functions(mut self, fs: Vec<RealFunction>) -> Result<Self> {
        for f in &fs {
            self.check_function(f)?;
        }
        self.gen_functions = fs;
        Ok(self)
    }

    /// Installs generating curves after checking them against membership.
    pub fn with_curves(mut self, cs: Vec<Curve>) -> Result<Self> {
        for c in &cs {
            self.check_curve(c)?;
        }
        self.gen_curves = cs;
        Ok(self)
    }

    pub fn with_chart(mut self, chart: Chart) -> Result<Self> {
        if chart.to_coords.arity_in() != self.point_arity {
            return Err(Error::ArityMismatch { expected: self.point_arity, got: chart.to_coords.arity_in() });
        }
        self.chart = Some(chart);
        Ok(self)
    }

    pub fn with_eq_tol(mut self, eq_tol: f64) -> Self {
        self.eq_tol = eq_tol;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn point_arity(&self) -> usize {
        self.point_arity
    }

    pub fn gen_functions(&self) -> &[RealFunction] {
        &self.gen_functions
    }

    pub fn gen_curves(&self) -> &[Curve] {
        &self.gen_curves
    }

    pub fn chart(&self) -> Option<&Chart> {
        self.chart.as_ref()
    }

    pub fn require_chart(&self) -> Result<&Chart> {
        self.chart.as_ref().ok_or_else(|| Error::NoChart(self.name.clone()))
    }

    pub fn eq_tol(&self) -> f64 {
        self.eq_tol
    }

    pub fn factors(&self) -> Option<(&Arc<SpaceDescriptor>, &Arc<SpaceDescriptor>)> {
        self.factors.as_ref().map(|(a, b)| (a, b))
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.point_arity && point.iter().all(|x| x.is_finite()) && (self.membership)(point)
    }

    /// Coordinate-wise equality within `eq_tol`.
    pub fn points_equal(&self, a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= self.eq_tol)
    }

    fn check_function(&self, f: &RealFunction) -> Result<()> {
        if f.source() != self.name {
            return Err(Error::SpaceMismatch { expected: self.name.clone(), got: f.source().into() });
        }
        if f.arity() != self.point_arity {
            return Err(Error::ArityMismatch { expected: self.point_arity, got: f.arity() });
        }
        Ok(())
    }

    /// Checks a curve's target, arity and membership at [`MEMBERSHIP_SAMPLES`].
    pub fn check_curve(&self, c: &Curve) -> Result<()> {
        self.check_curve_at(c, &MEMBERSHIP_SAMPLES)
    }

    pub fn check_curve_at(&self, c: &Curve, params: &[f64]) -> Result<()> {
        if c.target() != self.name {
            return Err(Error::SpaceMismatch { expected: self.name.clone(), got: c.target().into() });
        }
        if c.point_arity() != self.point_arity {
            return Err(Error::ArityMismatch { expected: self.point_arity, got: c.point_arity() });
        }
        for &u in params {
            if !self.contains(&c.at(u)?) {
                return Err(Error::CurveOutsideSpace { space: self.name.clone(), param: u });
            }
        }
        Ok(())
    }

    /// Generators followed by `extra` seeded random smooth combinations of
    /// one to three generators each.
    pub fn probes(&self, extra: usize, seed: u64) -> Vec<RealFunction> {
        let mut out = self.gen_functions.clone();
        if self.gen_functions.is_empty() {
            return out;
        }
        let mut rng = trial_rng(seed, 0);
        while out.len() < self.gen_functions.len() + extra {
            use rand::Rng;
            let k = rng.gen_range(1..=3usize.min(self.gen_functions.len()));
            let picked: Vec<SmoothMap> = (0..k)
                .map(|_| self.gen_functions[rng.gen_range(0..self.gen_functions.len())].map().clone())
                .collect();
            let combo = random_expr(&mut rng, k, 3);
            if combo.arity() == 0 {
                continue;
            }
            let outer = SmoothMap::from_exprs(k, vec![combo]).expect("arity checked");
            let map = SmoothMap::concat(picked).and_then(|m| m.then(&outer)).expect("shared arity");
            out.push(RealFunction::new(self.name.clone(), map).expect("scalar output"));
        }
        out
    }

    /// Generators plus [`DEFAULT_EXTRA_PROBES`] random combinations.
    pub fn default_probes(&self) -> Vec<RealFunction> {
        self.probes(DEFAULT_EXTRA_PROBES, DEFAULT_PROBE_SEED)
    }

    /// Probes every generator pair `(f, c)` for smoothness at `samples`.
    pub fn saturation_check(&self, samples: &[f64], tol: f64) -> Result<SmoothnessReport> {
        let mut report = SmoothnessReport::empty();
        for f in &self.gen_functions {
            for c in &self.gen_curves {
                report.merge(smoothness_probe(f, c, samples, tol)?);
            }
        }
        Ok(report)
    }

    /// Worst deviation of `chart⁻¹(chart(p))` from `p` over `points`.
    pub fn chart_round_trip(&self, points: &[Vec<f64>]) -> Result<f64> {
        let chart = self.require_chart()?;
        let mut worst = 0.0f64;
        for p in points {
            if !chart.contains(p) {
                return Err(Error::ChartDomain(self.name.clone()));
            }
            let back = chart.point(&chart.coords(p)?)?;
            for (a, b) in p.iter().zip(&back) {
                worst = worst.max((a - b).abs());
            }
        }
        Ok(worst)
    }
}

/// Product structure: functions pulled back along the projections, curves
/// the pairs of generator curves.
pub fn product(a: &Arc<SpaceDescriptor>, b: &Arc<SpaceDescriptor>) -> Result<SpaceDescriptor> {
    let name = format!("{}×{}", a.name, b.name);
    let (na, nb) = (a.point_arity, b.point_arity);
    let n = na + nb;
    let pa = SmoothMap::select(n, (0..na).collect())?;
    let pb = SmoothMap::select(n, (na..n).collect())?;
    let mut functions = Vec::new();
    for f in &a.gen_functions {
        functions.push(f.pull_back(&pa, name.clone())?);
    }
    for f in &b.gen_functions {
        functions.push(f.pull_back(&pb, name.clone())?);
    }
    let mut curves = Vec::new();
    for ca in &a.gen_curves {
        for cb in &b.gen_curves {
            curves.push(pair_curves(&name, ca, cb)?);
        }
    }
    let (ma, mb) = (a.membership.clone(), b.membership.clone());
    let membership: Membership = Arc::new(move |p: &[f64]| ma(&p[..na]) && mb(&p[na..]));
    let mut space = SpaceDescriptor::new(name, n, membership)?
        .with_functions(functions)?
        .with_curves(curves)?
        .with_eq_tol(a.eq_tol.max(b.eq_tol));
    if let (Some(ca), Some(cb)) = (&a.chart, &b.chart) {
        let (da, db) = (ca.domain.clone(), cb.domain.clone());
        let chart = Chart::new(
            SmoothMap::parallel(&ca.to_coords, &cb.to_coords),
            SmoothMap::parallel(&ca.from_coords, &cb.from_coords),
            Arc::new(move |p: &[f64]| da(&p[..na]) && db(&p[na..])),
        )?;
        space = space.with_chart(chart)?;
    }
    space.factors = Some((a.clone(), b.clone()));
    Ok(space)
}

/// `s ↦ (a(s), b(s))` in the named product.
pub fn pair_curves(target: &str, a: &Curve, b: &Curve) -> Result<Curve> {
    Curve::new(target, SmoothMap::concat(vec![a.map().clone(), b.map().clone()])?)
}

/// Subset structure: parent functions restricted, curves as provided.
pub fn subset(
    parent: &SpaceDescriptor,
    name: impl Into<String>,
    member: Membership,
    curves_into: Vec<Curve>,
) -> Result<SpaceDescriptor> {
    let name = name.into();
    let parent_member = parent.membership.clone();
    let inner = member.clone();
    let membership: Membership = Arc::new(move |p: &[f64]| parent_member(p) && inner(p));
    let mut curves = Vec::with_capacity(curves_into.len());
    for (index, c) in curves_into.into_iter().enumerate() {
        for &u in &SATURATION_SAMPLES {
            let p = c.at(u)?;
            if !membership(&p) {
                return Err(Error::CurveEscapesSubset { index, param: u });
            }
        }
        curves.push(Curve::new(name.clone(), c.map().clone())?);
    }
    let functions = parent
        .gen_functions
        .iter()
        .map(|f| RealFunction::new(name.clone(), f.map().clone()))
        .collect::<Result<Vec<_>>>()?;
    SpaceDescriptor::new(name, parent.point_arity, membership)?
        .with_functions(functions)?
        .with_curves(curves)
        .map(|s| s.with_eq_tol(parent.eq_tol))
}

/// `ℝⁿ` with coordinate functions, coordinate lines and the identity chart.
pub fn euclidean(n: usize) -> Result<SpaceDescriptor> {
    if n == 0 {
        return Err(Error::InvalidParameter("euclidean dimension must be at least 1".into()));
    }
    let name = format!("R^{n}");
    let functions = (0..n)
        .map(|i| RealFunction::coordinate(name.clone(), n, i))
        .collect::<Result<Vec<_>>>()?;
    let curves = (0..n)
        .map(|i| {
            let coords = (0..n)
                .map(|j| if i == j { Expr::var(0) } else { Expr::constant(0.0) })
                .collect();
            Curve::from_exprs(name.clone(), coords)
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceDescriptor::new(name, n, Arc::new(|_| true))?
        .with_functions(functions)?
        .with_curves(curves)?
        .with_chart(Chart::identity(n))
}

/// The unit circle in `ℝ²` with the angle chart at angle 0.
pub fn circle() -> Result<SpaceDescriptor> {
    circle_with_basepoint(0.0)
}

/// The unit circle with an angle chart centred at `theta0`; the chart
/// domain excludes the antipode of the basepoint.
pub fn circle_with_basepoint(theta0: f64) -> Result<SpaceDescriptor> {
    let name = "S1".to_string();
    let tol = DEFAULT_EQ_TOL;
    let membership: Membership = Arc::new(move |p: &[f64]| (p[0] * p[0] + p[1] * p[1] - 1.0).abs() <= tol);
    let functions = vec![
        RealFunction::coordinate(name.clone(), 2, 0)?,
        RealFunction::coordinate(name.clone(), 2, 1)?,
    ];
    let curve = Curve::from_exprs(name.clone(), vec![Expr::var(0).cos(), Expr::var(0).sin()])?;
    let (s0, c0) = theta0.sin_cos();
    let (x, y) = (Expr::var(0), Expr::var(1));
    // angle of the point rotated by −θ₀
    let rel = (y.clone() * c0 - x.clone() * s0).atan2(x * c0 + y * s0);
    let to = SmoothMap::from_exprs(2, vec![rel])?;
    let phi = Expr::var(0) + theta0;
    let from = SmoothMap::from_exprs(1, vec![phi.clone().cos(), phi.sin()])?;
    let domain: Membership = Arc::new(move |p: &[f64]| {
        let (xr, yr) = (p[0] * c0 + p[1] * s0, p[1] * c0 - p[0] * s0);
        !(xr < 0.0 && yr.abs() < 1e-6)
    });
    SpaceDescriptor::new(name, 2, membership)?
        .with_functions(functions)?
        .with_curves(vec![curve])?
        .with_chart(Chart::new(to, from, domain)?)
}

/// The coordinate cross `{(x, y) : xy = 0}` in `ℝ²` with its two axes as
/// generating curves.
pub fn coordinate_cross() -> Result<SpaceDescriptor> {
    let plane = euclidean(2)?;
    let tol = DEFAULT_EQ_TOL;
    let axes = vec![
        Curve::from_exprs(plane.name(), vec![Expr::var(0), Expr::constant(0.0)])?,
        Curve::from_exprs(plane.name(), vec![Expr::constant(0.0), Expr::var(0)])?,
    ];
    subset(&plane, "cross", Arc::new(move |p: &[f64]| (p[0] * p[1]).abs() <= tol), axes)
}

/// Builtin space names for listings.
pub const BUILTIN_SPACES: [&str; 4] = ["euclidean", "circle", "coordinate_cross", "r_power"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_counts() {
        let e3 = euclidean(3).unwrap();
        assert_eq!(e3.point_arity(), 3);
        assert_eq!(e3.gen_functions().len(), 3);
        assert_eq!(e3.gen_curves().len(), 3);
        assert!(euclidean(0).is_err());
    }

    #[test]
    fn products() {
        let r1 = Arc::new(euclidean(1).unwrap());
        let p = product(&r1, &r1).unwrap();
        assert_eq!(p.point_arity(), 2);
        assert_eq!(p.gen_functions().len(), 2);
        assert_eq!(p.gen_functions()[1].eval(&[3.0, 4.0]).unwrap(), 4.0);

        let s1 = Arc::new(circle().unwrap());
        let torus = product(&s1, &s1).unwrap();
        assert_eq!(torus.point_arity(), 4);
        for c in torus.gen_curves() {
            for u in SATURATION_SAMPLES {
                let q = c.at(u).unwrap();
                assert!((q[0] * q[0] + q[1] * q[1] - 1.0).abs() < 1e-12);
                assert!((q[2] * q[2] + q[3] * q[3] - 1.0).abs() < 1e-12);
            }
        }
        assert!(!torus.contains(&[1.0, 0.0, 0.5, 0.5]));

        let r2 = Arc::new(euclidean(2).unwrap());
        let mixed = product(&r2, &s1).unwrap();
        assert_eq!(mixed.point_arity(), 4);
        assert_eq!(mixed.gen_functions().len(), 4);
        assert_eq!(mixed.chart().unwrap().dim(), 3);
    }

    #[test]
    fn subsets() {
        let cross = coordinate_cross().unwrap();
        assert_eq!(cross.gen_curves().len(), 2);
        assert!(cross.contains(&[0.0, 5.0]));
        assert!(!cross.contains(&[1.0, 1.0]));

        let plane = euclidean(2).unwrap();
        let whole = subset(&plane, "R^2", Arc::new(|_| true), plane.gen_curves().to_vec()).unwrap();
        assert_eq!(whole.gen_functions().len(), plane.gen_functions().len());
        assert_eq!(whole.gen_curves().len(), plane.gen_curves().len());

        let circ = Curve::from_exprs("R^2", vec![Expr::var(0).cos(), Expr::var(0).sin()]).unwrap();
        let on_circle: Membership = Arc::new(|p: &[f64]| (p[0] * p[0] + p[1] * p[1] - 1.0).abs() < 1e-9);
        assert!(subset(&plane, "S1'", on_circle.clone(), vec![circ]).is_ok());
        let line = plane.gen_curves()[0].clone();
        assert!(matches!(
            subset(&plane, "S1'", on_circle, vec![line]),
            Err(Error::CurveEscapesSubset { index: 0, .. })
        ));
    }

    #[test]
    fn saturation_of_builtins_and_products() {
        let spaces = [euclidean(3).unwrap(), circle().unwrap(), coordinate_cross().unwrap()];
        for s in &spaces {
            let r = s.saturation_check(&SATURATION_SAMPLES, 1e-5).unwrap();
            assert!(r.pass, "{}: {:?}", s.name(), r.failures);
        }
        let r2 = Arc::new(euclidean(2).unwrap());
        let s1 = Arc::new(circle().unwrap());
        let p = product(&r2, &s1).unwrap();
        assert!(p.saturation_check(&SATURATION_SAMPLES, 1e-5).unwrap().pass);
    }

    #[test]
    fn circle_chart() {
        let s = circle().unwrap();
        let pts: Vec<Vec<f64>> = [-2.5, -1.0, 0.0, 0.7, 3.0]
            .iter()
            .map(|&t: &f64| vec![t.cos(), t.sin()])
            .collect();
        assert!(s.chart_round_trip(&pts).unwrap() < 1e-12);
        assert!(!s.chart().unwrap().contains(&[-1.0, 0.0]));
        let shifted = circle_with_basepoint(std::f64::consts::PI).unwrap();
        assert!(shifted.chart().unwrap().contains(&[-1.0, 0.0]));
        assert!(matches!(shifted.chart_round_trip(&pts), Err(Error::ChartDomain(_))));
        assert!(shifted.chart_round_trip(&pts[..2]).unwrap() < 1e-12);
    }

    #[test]
    fn probes_are_deterministic() {
        let s = euclidean(2).unwrap();
        let a = s.probes(5, 9);
        let b = s.probes(5, 9);
        assert_eq!(a.len(), 7);
        for (f, g) in a.iter().zip(&b) {
            assert_eq!(f.eval(&[0.3, -0.2]).unwrap(), g.eval(&[0.3, -0.2]).unwrap());
        }
    }
}
