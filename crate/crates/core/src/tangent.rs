//! Tangent vectors as curve representatives, compared through pairings
//! with functions.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::smooth::{
    deriv_at_zero, mixed_partial_at_zero, relative_deviation, smoothness_probe, Curve, RealFunction, SmoothMap,
    SmoothnessReport, TwoParamMap, FD_STEP_FIRST, FD_STEP_SECOND,
};
use crate::space::{SpaceDescriptor, MEMBERSHIP_SAMPLES, SATURATION_SAMPLES};

/// Default tolerance for [`tangent_equal`].
pub const TANGENT_TOL: f64 = 1e-9;
/// Default tolerance for [`tx_curve_check`].
pub const TX_TOL: f64 = 1e-5;

/// `[c] ∈ T_xX`, held as a representative curve with `c(0) = x`.
#[derive(Clone, Debug)]
pub struct TangentVector {
    space: Arc<SpaceDescriptor>,
    base: Vec<f64>,
    rep: Curve,
}

impl TangentVector {
    /// Vector represented by `rep`, based at `rep(0)`.
    pub fn new(space: Arc<SpaceDescriptor>, rep: Curve) -> Result<Self> {
        space.check_curve_at(&rep, &MEMBERSHIP_SAMPLES)?;
        let base = rep.at(0.0)?;
        Ok(Self { space, base, rep })
    }

    /// Like [`TangentVector::new`], also checking `rep(0) = base`.
    pub fn at(space: Arc<SpaceDescriptor>, base: &[f64], rep: Curve) -> Result<Self> {
        let v = Self::new(space, rep)?;
        if !v.space.points_equal(&v.base, base) {
            return Err(Error::BasePointMismatch);
        }
        Ok(v)
    }

    /// The class of the constant curve at `base`.
    pub fn zero(space: Arc<SpaceDescriptor>, base: &[f64]) -> Result<Self> {
        let rep = Curve::new(space.name(), SmoothMap::constant(1, base.to_vec()))?;
        Self::new(space, rep)
    }

    pub fn space(&self) -> &Arc<SpaceDescriptor> {
        &self.space
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn rep(&self) -> &Curve {
        &self.rep
    }

    /// `b([c], f) = (f∘c)'(0)`.
    pub fn pairing(&self, f: &RealFunction) -> Result<f64> {
        deriv_at_zero(f, &self.rep)
    }

    /// Pairings against the space's generating functions.
    pub fn coordinates(&self) -> Result<Vec<f64>> {
        self.space.gen_functions().iter().map(|f| self.pairing(f)).collect()
    }

    /// `s·[c] = [u ↦ c(s·u)]`.
    pub fn scalar_mul(&self, s: f64) -> Self {
        Self { space: self.space.clone(), base: self.base.clone(), rep: self.rep.reparametrize(0.0, s) }
    }

    /// Equality against the space's default probe set at [`TANGENT_TOL`].
    pub fn equals(&self, other: &TangentVector) -> Result<bool> {
        tangent_equal(self, other, &self.space.default_probes(), TANGENT_TOL)
    }
}

/// True iff every probe pairs to the same value on `v` and `w` within `tol`.
pub fn tangent_equal(v: &TangentVector, w: &TangentVector, probes: &[RealFunction], tol: f64) -> Result<bool> {
    Ok(tangent_distance(v, w, probes)? <= tol)
}

/// Largest pairing difference over `probes`.
pub fn tangent_distance(v: &TangentVector, w: &TangentVector, probes: &[RealFunction]) -> Result<f64> {
    if v.space.name() != w.space.name() {
        return Err(Error::SpaceMismatch { expected: v.space.name().into(), got: w.space.name().into() });
    }
    if !v.space.points_equal(&v.base, &w.base) {
        return Err(Error::BasePointMismatch);
    }
    let mut worst = 0.0f64;
    for f in probes {
        let d = (v.pairing(f)? - w.pairing(f)?).abs();
        worst = worst.max(if d.is_nan() { f64::INFINITY } else { d });
    }
    Ok(worst)
}

/// `Tφ([c]) = [φ∘c]`, landing in `target`.
pub fn tangent_map(phi: &SmoothMap, target: &Arc<SpaceDescriptor>, v: &TangentVector) -> Result<TangentVector> {
    if phi.arity_in() != v.space.point_arity() {
        return Err(Error::ArityMismatch { expected: v.space.point_arity(), got: phi.arity_in() });
    }
    TangentVector::new(target.clone(), v.rep.push_forward(phi, target.name())?)
}

/// `(Tπ₁ v, Tπ₂ v)` for a vector on a product.
pub fn product_split(v: &TangentVector) -> Result<(TangentVector, TangentVector)> {
    let (a, b) = v
        .space
        .factors()
        .ok_or_else(|| Error::NotAProductSpace(v.space.name().into()))?;
    let n = v.space.point_arity();
    let na = a.point_arity();
    let pa = SmoothMap::select(n, (0..na).collect())?;
    let pb = SmoothMap::select(n, (na..n).collect())?;
    Ok((tangent_map(&pa, a, v)?, tangent_map(&pb, b, v)?))
}

/// `([c], [d]) ↦ [s ↦ (c(s), d(s))]`.
pub fn product_join(product: &Arc<SpaceDescriptor>, v: &TangentVector, w: &TangentVector) -> Result<TangentVector> {
    let (a, b) = product
        .factors()
        .ok_or_else(|| Error::NotAProductSpace(product.name().into()))?;
    for (factor, x) in [(a, v), (b, w)] {
        if factor.name() != x.space.name() {
            return Err(Error::SpaceMismatch { expected: factor.name().into(), got: x.space.name().into() });
        }
    }
    let map = SmoothMap::concat(vec![v.rep.map().clone(), w.rep.map().clone()])?;
    TangentVector::new(product.clone(), Curve::new(product.name(), map)?)
}

/// `d/du (chart∘c)(0)`: the classical coordinates of `v`.
pub fn chart_consistency(v: &TangentVector) -> Result<Vec<f64>> {
    let chart = v.space.require_chart()?;
    if !chart.contains(&v.base) {
        return Err(Error::ChartDomain(v.space.name().into()));
    }
    let path = v.rep.eval(Jet2::seed_s(0.0))?;
    Ok(chart.to_coords().eval(&path)?.iter().map(|j| j.ds).collect())
}

/// `ξ ∈ T²X` represented by a two-parameter map.
#[derive(Clone, Debug)]
pub struct SecondTangentVector {
    space: Arc<SpaceDescriptor>,
    base: Vec<f64>,
    rep: TwoParamMap,
}

impl SecondTangentVector {
    pub fn new(space: Arc<SpaceDescriptor>, rep: TwoParamMap) -> Result<Self> {
        if rep.target() != space.name() {
            return Err(Error::SpaceMismatch { expected: space.name().into(), got: rep.target().into() });
        }
        let base = rep.at(0.0, 0.0)?;
        if !space.contains(&base) {
            return Err(Error::CurveOutsideSpace { space: space.name().into(), param: 0.0 });
        }
        Ok(Self { space, base, rep })
    }

    pub fn space(&self) -> &Arc<SpaceDescriptor> {
        &self.space
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn rep(&self) -> &TwoParamMap {
        &self.rep
    }

    /// `∂²(f∘γ)/∂s∂t (0, 0)`.
    pub fn mixed_partial(&self, f: &RealFunction) -> Result<f64> {
        mixed_partial_at_zero(f, &self.rep)
    }

    pub fn check(&self, s_samples: &[f64], tol: f64) -> Result<TxCurveReport> {
        tx_curve_check(&self.rep, &self.space, s_samples, tol)
    }
}

/// `T²φ(ξ)`, represented by `φ∘γ`.
pub fn second_tangent_map(
    phi: &SmoothMap,
    target: &Arc<SpaceDescriptor>,
    xi: &SecondTangentVector,
) -> Result<SecondTangentVector> {
    SecondTangentVector::new(target.clone(), xi.rep.push_forward(phi, target.name())?)
}

/// Outcome of [`tx_curve_check`], one report per condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TxCurveReport {
    pub pass: bool,
    pub slices_smooth: SmoothnessReport,
    pub base_curve_smooth: SmoothnessReport,
    pub derivative_smooth: SmoothnessReport,
}

/// Checks that `g` represents a curve into `TX`: (i) every slice
/// `t ↦ g(s, t)` is smooth, (ii) `s ↦ g(s, 0)` is smooth and (iii)
/// `h(s) = ∂ₜ(f∘g)(s, 0)` is smooth for every generator `f`.
///
/// For (iii) the jet value of `h'(s)` (the mixed coefficient) is compared
/// with a central difference of `h`, and a second difference of `h` with a
/// central difference of `h'`.
pub fn tx_curve_check(g: &TwoParamMap, space: &SpaceDescriptor, s_samples: &[f64], tol: f64) -> Result<TxCurveReport> {
    if g.target() != space.name() {
        return Err(Error::SpaceMismatch { expected: space.name().into(), got: g.target().into() });
    }
    let mut slices = SmoothnessReport::empty();
    let mut base = SmoothnessReport::empty();
    let mut deriv = SmoothnessReport::empty();
    let c0 = g.slice_s(0.0);
    for f in space.gen_functions() {
        for &s in s_samples {
            slices.merge(smoothness_probe(f, &g.slice_t(s), s_samples, tol)?);
        }
        base.merge(smoothness_probe(f, &c0, s_samples, tol)?);
        let h = |s: f64| -> Result<Jet2> { f.eval(&g.eval(Jet2::seed_s(s), Jet2::seed_t(0.0))?) };
        for &s in s_samples {
            let outcome = (|| {
                let j = h(s)?;
                let d1 = FD_STEP_FIRST;
                let fd1 = (h(s + d1)?.dt - h(s - d1)?.dt) / (2.0 * d1);
                let d2 = FD_STEP_SECOND;
                let (lo, hi) = (h(s - d2)?, h(s + d2)?);
                let fd2_h = (hi.dt - 2.0 * j.dt + lo.dt) / (d2 * d2);
                let fd2_dh = (hi.dst - lo.dst) / (2.0 * d2);
                Ok(relative_deviation(j.dst, fd1).max(relative_deviation(fd2_dh, fd2_h)))
            })();
            deriv.record(s, outcome, tol);
        }
    }
    Ok(TxCurveReport {
        pass: slices.pass && base.pass && deriv.pass,
        slices_smooth: slices,
        base_curve_smooth: base,
        derivative_smooth: deriv,
    })
}

/// [`tx_curve_check`] at the default samples and tolerance.
pub fn tx_curve_check_default(g: &TwoParamMap, space: &SpaceDescriptor) -> Result<TxCurveReport> {
    tx_curve_check(g, space, &SATURATION_SAMPLES, TX_TOL)
}

/// Exhaustive search result for a curve in the coordinate cross whose
/// velocity at the origin is the sum of the two axis velocities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossWitness {
    pub curves_checked: usize,
    /// Pairings `((x₁∘c)'(0), (x₂∘c)'(0))` of every checked curve.
    pub pairings: Vec<(f64, f64)>,
    /// Whether any checked curve pairs to `(1, 1)`.
    pub sum_found: bool,
    /// Whether the naive candidate `t ↦ (t, t)` leaves the cross.
    pub diagonal_escapes: bool,
}

/// Rates applied to each generator when enumerating the curve family.
pub const CROSS_RATES: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

/// Searches the generating curves of `cross` through the origin, under the
/// reparametrizations `u ↦ c(αu)` for `α` in [`CROSS_RATES`], for a curve
/// pairing to `(1, 1)` against the two coordinate functions.
pub fn coordinate_cross_witness(cross: &SpaceDescriptor) -> Result<CrossWitness> {
    let fs = cross.gen_functions();
    if fs.len() < 2 || cross.point_arity() != 2 {
        return Err(Error::InvalidParameter("expected a planar space with two coordinate functions".into()));
    }
    let mut pairings = Vec::new();
    for c in cross.gen_curves() {
        if !cross.points_equal(&c.at(0.0)?, &[0.0, 0.0]) {
            continue;
        }
        for &a in &CROSS_RATES {
            let r = c.reparametrize(0.0, a);
            pairings.push((deriv_at_zero(&fs[0], &r)?, deriv_at_zero(&fs[1], &r)?));
        }
    }
    let sum_found = pairings
        .iter()
        .any(|&(x, y)| (x - 1.0).abs() <= TANGENT_TOL && (y - 1.0).abs() <= TANGENT_TOL);
    let diagonal_escapes = [0.01, 0.1, 0.5].iter().any(|&t| !cross.contains(&[t, t]));
    Ok(CrossWitness { curves_checked: pairings.len(), pairings, sum_found, diagonal_escapes })
}
