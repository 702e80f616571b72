//! Frölicher groups with a chart at the identity, and the group structure
//! of `TG`.
//!
//! Every group must carry a chart sending the identity to `0`; the bracket
//! is read off in its coordinates.

mod builtin;
pub(crate) mod programs;

pub use builtin::{builtin_group, heisenberg_center_quotient, registry, GroupKind, RegistryEntry};

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::smooth::{lift, Curve, Expr, Scalar, SmoothMap};
use crate::space::{Chart, SpaceDescriptor};
use crate::tangent::{chart_consistency, TangentVector};

/// Default number of sampled elements in axiom checks.
pub const DEFAULT_GROUP_SAMPLES: usize = 50;

/// A group object: smooth multiplication and inversion on a space with a
/// chart at the identity.
#[derive(Clone)]
pub struct FrolicherGroup {
    name: String,
    space: Arc<SpaceDescriptor>,
    mul: SmoothMap,
    inv: SmoothMap,
    identity: Vec<f64>,
    lie_dim: usize,
    sample_radius: f64,
}

impl fmt::Debug for FrolicherGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrolicherGroup")
            .field("name", &self.name)
            .field("point_arity", &self.space.point_arity())
            .field("lie_dim", &self.lie_dim)
            .finish()
    }
}

impl FrolicherGroup {
    /// Registers a group. Fails unless the space has a chart with
    /// `chart(identity) = 0` and the maps have matching arities.
    pub fn new(
        name: impl Into<String>,
        space: SpaceDescriptor,
        mul: SmoothMap,
        inv: SmoothMap,
        identity: Vec<f64>,
    ) -> Result<Self> {
        let n = space.point_arity();
        if mul.arity_in() != 2 * n || mul.arity_out() != n {
            return Err(Error::ArityMismatch { expected: 2 * n, got: mul.arity_in() });
        }
        if inv.arity_in() != n || inv.arity_out() != n {
            return Err(Error::ArityMismatch { expected: n, got: inv.arity_in() });
        }
        if !space.contains(&identity) {
            return Err(Error::InvalidParameter("identity is not a point of the space".into()));
        }
        let chart = space.require_chart()?;
        if !chart.contains(&identity) || chart.coords(&identity)?.iter().any(|&x| x != 0.0) {
            return Err(Error::InvalidParameter("chart must send the identity to 0".into()));
        }
        let lie_dim = chart.dim();
        Ok(Self { name: name.into(), space: Arc::new(space), mul, inv, identity, lie_dim, sample_radius: 0.5 })
    }

    pub(crate) fn with_sample_radius(mut self, r: f64) -> Self {
        self.sample_radius = r;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Arc<SpaceDescriptor> {
        &self.space
    }

    pub fn chart(&self) -> &Chart {
        self.space.chart().expect("checked at registration")
    }

    pub fn identity(&self) -> &[f64] {
        &self.identity
    }

    pub fn lie_dim(&self) -> usize {
        self.lie_dim
    }

    pub fn point_arity(&self) -> usize {
        self.space.point_arity()
    }

    pub fn mul_map(&self) -> &SmoothMap {
        &self.mul
    }

    pub fn inv_map(&self) -> &SmoothMap {
        &self.inv
    }

    pub fn mul<S: Scalar>(&self, a: &[S], b: &[S]) -> Result<Vec<S>> {
        let mut ab = Vec::with_capacity(a.len() + b.len());
        ab.extend_from_slice(a);
        ab.extend_from_slice(b);
        self.mul.eval(&ab)
    }

    pub fn inv<S: Scalar>(&self, a: &[S]) -> Result<Vec<S>> {
        self.inv.eval(a)
    }

    pub fn points_equal(&self, a: &[f64], b: &[f64]) -> bool {
        self.space.points_equal(a, b)
    }

    /// Curve-level product `s ↦ a(s)·b(s)` of maps sharing their input.
    pub fn mul_maps(&self, a: &SmoothMap, b: &SmoothMap) -> Result<SmoothMap> {
        SmoothMap::concat(vec![a.clone(), b.clone()])?.then(&self.mul)
    }

    pub fn inv_map_of(&self, a: &SmoothMap) -> Result<SmoothMap> {
        a.then(&self.inv)
    }

    /// The constant map with value `g` on `arity` inputs.
    pub fn constant_map(&self, arity: usize, g: &[f64]) -> SmoothMap {
        SmoothMap::constant(arity, g.to_vec())
    }

    /// `x ↦ h·x·h⁻¹`.
    pub fn conjugation_map(&self, h: &[f64]) -> Result<SmoothMap> {
        let n = self.point_arity();
        let left = self.mul_maps(&self.constant_map(n, h), &SmoothMap::identity(n))?;
        self.mul_maps(&left, &self.constant_map(n, &self.inv(h)?))
    }

    /// `chart⁻¹(coords)`.
    pub fn from_coords(&self, coords: &[f64]) -> Result<Vec<f64>> {
        self.chart().point(coords)
    }

    pub fn to_coords(&self, g: &[f64]) -> Result<Vec<f64>> {
        if !self.chart().contains(g) {
            return Err(Error::ChartDomain(self.name.clone()));
        }
        self.chart().coords(g)
    }

    /// A curve into the group from an arbitrary one-parameter map.
    pub fn curve(&self, map: SmoothMap) -> Result<Curve> {
        Curve::new(self.space.name(), map)
    }

    /// `chart⁻¹` of coordinates uniform in `[−r, r]`.
    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let r = self.sample_radius;
        loop {
            let coords: Vec<f64> = (0..self.lie_dim).map(|_| rng.gen_range(-r..r)).collect();
            let g = self.from_coords(&coords)?;
            if self.space.contains(&g) && self.chart().contains(&g) {
                return Ok(g);
            }
        }
    }

    pub fn random_coords(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..self.lie_dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    /// A vector at the identity with Lie coordinates `a`, represented by
    /// the curve `u ↦ chart⁻¹(u·a + u²·b)`.
    pub fn vector_with_curvature(&self, a: &[f64], b: &[f64]) -> Result<TangentVector> {
        if a.len() != self.lie_dim || b.len() != self.lie_dim {
            return Err(Error::ArityMismatch { expected: self.lie_dim, got: a.len() });
        }
        let u = Expr::var(0);
        let exprs = a
            .iter()
            .zip(b)
            .map(|(&ai, &bi)| u.clone() * ai + u.clone().square() * bi)
            .collect();
        let map = SmoothMap::from_exprs(1, exprs)?.then(self.chart().from_coords())?;
        TangentVector::new(self.space.clone(), self.curve(map)?)
    }

    /// The chart line `t ↦ chart⁻¹(t·coords)`.
    pub fn line(&self, coords: &[f64]) -> Result<TangentVector> {
        let zero = vec![0.0; self.lie_dim];
        let curve = self.chart().line(self.space.name(), &zero, coords)?;
        TangentVector::new(self.space.clone(), curve)
    }

    /// A random vector at the identity with a curved representative, and
    /// its Lie coordinates.
    pub fn random_vector(&self, rng: &mut ChaCha8Rng) -> Result<(TangentVector, Vec<f64>)> {
        let a = self.random_coords(rng);
        let b: Vec<f64> = self.random_coords(rng).iter().map(|x| 0.5 * x).collect();
        Ok((self.vector_with_curvature(&a, &b)?, a))
    }

    /// Lie coordinates of a vector at the identity.
    pub fn lie_coords(&self, v: &TangentVector) -> Result<Vec<f64>> {
        self.require_identity(v)?;
        chart_consistency(v)
    }

    pub(crate) fn require_identity(&self, v: &TangentVector) -> Result<()> {
        self.check_vector(v)?;
        if !self.points_equal(v.base(), &self.identity) {
            return Err(Error::BasePointMismatch);
        }
        Ok(())
    }

    pub(crate) fn check_vector(&self, v: &TangentVector) -> Result<()> {
        if v.space().name() != self.space.name() {
            return Err(Error::SpaceMismatch { expected: self.space.name().into(), got: v.space().name().into() });
        }
        Ok(())
    }

    fn vector(&self, map: SmoothMap) -> Result<TangentVector> {
        TangentVector::new(self.space.clone(), self.curve(map)?)
    }

    /// The zero vector at `g`.
    pub fn zero_vector(&self, g: &[f64]) -> Result<TangentVector> {
        TangentVector::zero(self.space.clone(), g)
    }

    /// `[c] + [d] = [s ↦ c(s)·g⁻¹·d(s)]` for vectors at `g`.
    pub fn tangent_add(&self, v: &TangentVector, w: &TangentVector) -> Result<TangentVector> {
        self.check_vector(v)?;
        self.check_vector(w)?;
        if !self.points_equal(v.base(), w.base()) {
            return Err(Error::BasePointMismatch);
        }
        let g_inv = self.constant_map(1, &self.inv(v.base())?);
        let left = self.mul_maps(v.rep().map(), &g_inv)?;
        self.vector(self.mul_maps(&left, w.rep().map())?)
    }

    /// `−[c] = [s ↦ g·c(s)⁻¹·g]`.
    pub fn tangent_neg(&self, v: &TangentVector) -> Result<TangentVector> {
        self.check_vector(v)?;
        let g = self.constant_map(1, v.base());
        let left = self.mul_maps(&g, &self.inv_map_of(v.rep().map())?)?;
        self.vector(self.mul_maps(&left, &g)?)
    }

    /// `Tm([c], [d]) = [s ↦ c(s)·d(s)]`, based at the product of bases.
    pub fn tg_mul(&self, v: &TangentVector, w: &TangentVector) -> Result<TangentVector> {
        self.check_vector(v)?;
        self.check_vector(w)?;
        self.vector(self.mul_maps(v.rep().map(), w.rep().map())?)
    }

    /// `g·[c] = [s ↦ g·c(s)]`.
    pub fn left_translate(&self, g: &[f64], v: &TangentVector) -> Result<TangentVector> {
        self.check_vector(v)?;
        self.vector(self.mul_maps(&self.constant_map(1, g), v.rep().map())?)
    }

    /// `[c]·g = [s ↦ c(s)·g]`.
    pub fn right_translate(&self, v: &TangentVector, g: &[f64]) -> Result<TangentVector> {
        self.check_vector(v)?;
        self.vector(self.mul_maps(v.rep().map(), &self.constant_map(1, g))?)
    }

    /// Sampled group-law deviations over `samples` random elements.
    pub fn axiom_deviation(&self, samples: usize, seed: u64) -> Result<GroupAxiomDeviation> {
        let mut dev = GroupAxiomDeviation::default();
        let e = &self.identity;
        for i in 0..samples {
            let mut rng = crate::smooth::random::trial_rng(seed, i as u64);
            let g = self.random_element(&mut rng)?;
            let h = self.random_element(&mut rng)?;
            let k = self.random_element(&mut rng)?;
            dev.identity = dev.identity.max(max_diff(&self.mul(e, &g)?, &g)).max(max_diff(&self.mul(&g, e)?, &g));
            dev.inverse = dev.inverse.max(max_diff(&self.mul(&g, &self.inv(&g)?)?, e));
            let left = self.mul(&self.mul(&g, &h)?, &k)?;
            let right = self.mul(&g, &self.mul(&h, &k)?)?;
            dev.associativity = dev.associativity.max(max_diff(&left, &right));
            let jets: Vec<crate::jet::Jet2> = lift(&g);
            let jh: Vec<crate::jet::Jet2> = lift(&h);
            let vals: Vec<f64> = self.mul(&jets, &jh)?.iter().map(|j| j.val).collect();
            dev.jet_value = dev.jet_value.max(max_diff(&vals, &self.mul(&g, &h)?));
        }
        Ok(dev)
    }
}

/// Worst deviations found by [`FrolicherGroup::axiom_deviation`].
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct GroupAxiomDeviation {
    pub identity: f64,
    pub inverse: f64,
    pub associativity: f64,
    /// Difference between jet value parts and plain evaluation.
    pub jet_value: f64,
}

impl GroupAxiomDeviation {
    pub fn max(&self) -> f64 {
        self.identity.max(self.inverse).max(self.associativity).max(self.jet_value)
    }
}

pub(crate) fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::random::trial_rng;
    use crate::tangent::TANGENT_TOL;

    fn all_groups() -> Vec<FrolicherGroup> {
        [
            GroupKind::Gl(2),
            GroupKind::Gl(3),
            GroupKind::So3,
            GroupKind::Sl2,
            GroupKind::Heisenberg3,
            GroupKind::Additive(3),
            GroupKind::Torus2,
            GroupKind::RPower(crate::space::RPowerConfig::with_size(20)),
            GroupKind::Loop { modes: 1, target: Box::new(GroupKind::So3) },
        ]
        .iter()
        .map(|k| builtin_group(k).unwrap())
        .collect()
    }

    #[test]
    fn group_laws_hold_on_samples() {
        for g in all_groups() {
            let d = g.axiom_deviation(20, 1).unwrap();
            assert!(d.max() < 1e-9, "{}: {d:?}", g.name());
        }
    }

    #[test]
    fn vector_space_structure_at_g() {
        for grp in all_groups() {
            let mut rng = trial_rng(3, 0);
            let g = grp.random_element(&mut rng).unwrap();
            let probes = grp.space().probes(5, 11);
            let vec_at = |rng: &mut ChaCha8Rng| grp.left_translate(&g, &grp.random_vector(rng).unwrap().0).unwrap();
            let (u, v, w) = (vec_at(&mut rng), vec_at(&mut rng), vec_at(&mut rng));
            let eq = |a: &TangentVector, b: &TangentVector| {
                crate::tangent::tangent_distance(a, b, &probes).unwrap()
            };
            let uv = grp.tangent_add(&u, &v).unwrap();
            assert!(eq(&uv, &grp.tangent_add(&v, &u).unwrap()) < TANGENT_TOL, "{}", grp.name());
            let l = grp.tangent_add(&uv, &w).unwrap();
            let r = grp.tangent_add(&u, &grp.tangent_add(&v, &w).unwrap()).unwrap();
            assert!(eq(&l, &r) < TANGENT_TOL, "{}", grp.name());
            let z = grp.tangent_add(&u, &grp.tangent_neg(&u).unwrap()).unwrap();
            for f in &probes {
                assert!(z.pairing(f).unwrap().abs() < TANGENT_TOL, "{}", grp.name());
            }
        }
    }

    #[test]
    fn chart_coordinates_are_additive_at_identity() {
        for grp in all_groups() {
            let mut rng = trial_rng(5, 0);
            let (v, a) = grp.random_vector(&mut rng).unwrap();
            let (w, b) = grp.random_vector(&mut rng).unwrap();
            let sum = grp.lie_coords(&grp.tangent_add(&v, &w).unwrap()).unwrap();
            let scaled = grp.lie_coords(&v.scalar_mul(-1.5)).unwrap();
            for i in 0..grp.lie_dim() {
                assert!((sum[i] - a[i] - b[i]).abs() < 1e-9, "{}", grp.name());
                assert!((scaled[i] + 1.5 * a[i]).abs() < 1e-9, "{}", grp.name());
            }
        }
    }

    #[test]
    fn tg_multiplication() {
        let grp = builtin_group(&GroupKind::Additive(2)).unwrap();
        let e = grp.identity().to_vec();
        let z = grp.zero_vector(&e).unwrap();
        let zz = grp.tg_mul(&z, &z).unwrap();
        assert!(zz.equals(&z).unwrap());
        let v = grp.line(&[1.0, 2.0]).unwrap();
        let w = grp.line(&[-3.0, 0.5]).unwrap();
        assert!(grp.tg_mul(&v, &w).unwrap().equals(&grp.tangent_add(&v, &w).unwrap()).unwrap());

        let gl = builtin_group(&GroupKind::Gl(2)).unwrap();
        let mut rng = trial_rng(9, 0);
        let h = gl.random_element(&mut rng).unwrap();
        let (v, a) = gl.random_vector(&mut rng).unwrap();
        let moved = gl.tg_mul(&v, &gl.zero_vector(&h).unwrap()).unwrap();
        assert!(gl.points_equal(moved.base(), &h));
        // d/ds (I + sA)h = A·h in chart coordinates A − I
        let am = crate::jet::Matrix::square(&a).unwrap();
        let hm = crate::jet::Matrix::square(&h).unwrap();
        let expect = am.matmul(&hm).unwrap();
        let got = chart_consistency(&moved).unwrap();
        for (x, y) in got.iter().zip(expect.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn left_translation() {
        let gl = builtin_group(&GroupKind::Gl(2)).unwrap();
        let mut rng = trial_rng(2, 0);
        let g = gl.random_element(&mut rng).unwrap();
        let (v, a) = gl.random_vector(&mut rng).unwrap();
        assert!(gl.left_translate(gl.identity(), &v).unwrap().equals(&v).unwrap());
        let moved = chart_consistency(&gl.left_translate(&g, &v).unwrap()).unwrap();
        let expect = crate::jet::Matrix::square(&g).unwrap().matmul(&crate::jet::Matrix::square(&a).unwrap()).unwrap();
        for (x, y) in moved.iter().zip(expect.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }

        let add = builtin_group(&GroupKind::Additive(3)).unwrap();
        let v = add.line(&[0.2, -0.1, 4.0]).unwrap();
        let moved = add.left_translate(&[1.0, 2.0, 3.0], &v).unwrap();
        assert_eq!(chart_consistency(&moved).unwrap(), vec![0.2, -0.1, 4.0]);
    }

    #[test]
    fn registration_requires_a_centred_chart() {
        let space = crate::space::euclidean(1).unwrap();
        let add = SmoothMap::from_exprs(2, vec![Expr::var(0) + Expr::var(1)]).unwrap();
        let neg = SmoothMap::from_exprs(1, vec![-Expr::var(0)]).unwrap();
        assert!(FrolicherGroup::new("R", space.clone(), add.clone(), neg.clone(), vec![0.0]).is_ok());
        assert!(FrolicherGroup::new("R", space.clone(), add.clone(), neg.clone(), vec![1.0]).is_err());
        let bare = crate::space::SpaceDescriptor::new("bare", 1, Arc::new(|_| true)).unwrap();
        assert!(matches!(FrolicherGroup::new("R", bare, add, neg, vec![0.0]), Err(Error::NoChart(_))));
    }
}
