//! The Lie bracket of a Frölicher group with a chart at the identity, and
//! the surrounding machinery: trivializations of `TG` and `T²G`, the map
//! `Ξ`, derivations, and verification suites.
//!
//! For `v = [c]`, `w = [d]` at the identity the bracket is
//! `Ξ⁻¹` of the commutator curve `γ(s,t) = c(s)d(t)c(s)⁻¹d(t)⁻¹`, and `Ξ⁻¹`
//! reads the mixed partials of the chart coordinates of `γ` at the origin.

mod rj;
mod verify;

pub use rj::{rj_isomorphism_check, RjReport};
pub use verify::{
    pushforward_bracket_check, verify_comm_identity, verify_lie_axioms, verify_mixed_partial_identity,
    verify_product_iso, verify_saturation, verify_t2_corollary, verify_tangent_functoriality,
    verify_trivialization, verify_xi_section, AxiomReport, AxiomTolerances, Report, HOMOMORPHISM_TOL,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FrolicherGroup;
use crate::jet::Jet2;
use crate::smooth::{Expr, RealFunction, SmoothMap, TwoParamMap};
use crate::tangent::{SecondTangentVector, TangentVector};

/// Chart coordinates of an element of the Lie algebra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieVector {
    pub coords: Vec<f64>,
}

impl LieVector {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The chart line `t ↦ chart⁻¹(t·coords)`.
    pub fn to_tangent(&self, group: &FrolicherGroup) -> Result<TangentVector> {
        group.line(&self.coords)
    }

    /// `Σ kᵢ·vᵢ` coordinatewise.
    pub fn combination(terms: &[(f64, &LieVector)]) -> LieVector {
        let dim = terms.first().map_or(0, |(_, v)| v.dim());
        let mut out = vec![0.0; dim];
        for (k, v) in terms {
            for (o, x) in out.iter_mut().zip(&v.coords) {
                *o += k * x;
            }
        }
        LieVector::new(out)
    }

    /// Max-norm distance.
    pub fn distance(&self, other: &LieVector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, |m, d| if d.is_nan() { f64::INFINITY } else { m.max(d) })
    }

    pub fn max_abs(&self) -> f64 {
        self.distance(&LieVector::zero(self.dim()))
    }
}

/// `Φ([c]) = (c(0), c(0)⁻¹[c])`.
#[derive(Clone, Debug)]
pub struct TrivializedTangent {
    pub base: Vec<f64>,
    pub body: TangentVector,
}

pub fn trivialize(group: &FrolicherGroup, v: &TangentVector) -> Result<TrivializedTangent> {
    let base = v.base().to_vec();
    let body = group.left_translate(&group.inv(&base)?, v)?;
    Ok(TrivializedTangent { base, body })
}

/// `(g, w) ↦ g·w`.
pub fn untrivialize(group: &FrolicherGroup, t: &TrivializedTangent) -> Result<TangentVector> {
    group.left_translate(&t.base, &t.body)
}

/// `Ad(h)v = [s ↦ h·c(s)·h⁻¹]` for `v` at the identity.
pub fn adjoint(group: &FrolicherGroup, h: &[f64], v: &TangentVector) -> Result<TangentVector> {
    group.require_identity(v)?;
    group.right_translate(&group.left_translate(h, v)?, &group.inv(h)?)
}

/// `(g, v)(h, w) = (gh, Ad(h⁻¹)v + w)`.
pub fn semidirect_mul(group: &FrolicherGroup, a: &TrivializedTangent, b: &TrivializedTangent) -> Result<TrivializedTangent> {
    let base = group.mul(&a.base, &b.base)?;
    let twisted = adjoint(group, &group.inv(&b.base)?, &a.body)?;
    Ok(TrivializedTangent { base, body: group.tangent_add(&twisted, &b.body)? })
}

/// The components `(π₁, π₂, π₃, π₄)` of `ξ ∈ T²G`.
#[derive(Clone, Debug)]
pub struct T2Decomposition {
    pub p1: Vec<f64>,
    pub p2: TangentVector,
    pub p3: TangentVector,
    pub p4: SecondTangentVector,
}

/// `γ(0,0)`, `[s ↦ g⁻¹γ(s,0)]`, `[t ↦ g⁻¹γ(0,t)]` and
/// `[(s,t) ↦ γ(0,t)⁻¹·g·γ(s,0)⁻¹·γ(s,t)]`.
pub fn t2_decompose(group: &FrolicherGroup, gamma: &TwoParamMap) -> Result<T2Decomposition> {
    let g = gamma.at(0.0, 0.0)?;
    let g_inv = group.inv(&g)?;
    let along_s = gamma.slice_s(0.0);
    let along_t = gamma.slice_t(0.0);
    let p2 = TangentVector::new(
        group.space().clone(),
        group.curve(group.mul_maps(&group.constant_map(1, &g_inv), along_s.map())?)?,
    )?;
    let p3 = TangentVector::new(
        group.space().clone(),
        group.curve(group.mul_maps(&group.constant_map(1, &g_inv), along_t.map())?)?,
    )?;
    let first = SmoothMap::select(2, vec![0])?;
    let second = SmoothMap::select(2, vec![1])?;
    let g0t_inv = group.inv_map_of(&second.then(along_t.map())?)?;
    let gs0_inv = group.inv_map_of(&first.then(along_s.map())?)?;
    let m = group.mul_maps(&g0t_inv, &group.constant_map(2, &g))?;
    let m = group.mul_maps(&m, &gs0_inv)?;
    let m = group.mul_maps(&m, gamma.map())?;
    let p4 = SecondTangentVector::new(group.space().clone(), TwoParamMap::new(group.space().name(), m)?)?;
    Ok(T2Decomposition { p1: g, p2, p3, p4 })
}

/// `γ(s,t) = c(s)·d(t)·c(s)⁻¹·d(t)⁻¹`.
pub fn commutator_curve(group: &FrolicherGroup, v: &TangentVector, w: &TangentVector) -> Result<TwoParamMap> {
    group.check_vector(v)?;
    group.check_vector(w)?;
    let c = SmoothMap::select(2, vec![0])?.then(v.rep().map())?;
    let d = SmoothMap::select(2, vec![1])?.then(w.rep().map())?;
    let cd = group.mul_maps(&c, &d)?;
    let cdc = group.mul_maps(&cd, &group.inv_map_of(&c)?)?;
    TwoParamMap::new(group.space().name(), group.mul_maps(&cdc, &group.inv_map_of(&d)?)?)
}

/// `Ξ(v)`, represented by `(s,t) ↦ c(st)`.
pub fn xi(group: &FrolicherGroup, v: &TangentVector) -> Result<SecondTangentVector> {
    group.require_identity(v)?;
    let st = SmoothMap::from_exprs(2, vec![Expr::var(0) * Expr::var(1)])?;
    SecondTangentVector::new(group.space().clone(), TwoParamMap::new(group.space().name(), st.then(v.rep().map())?)?)
}

/// `Ξ⁻¹(ξ)`: mixed partials of the chart coordinates of the representative.
pub fn xi_inverse(group: &FrolicherGroup, xi: &SecondTangentVector) -> Result<LieVector> {
    let chart = group.chart();
    if !chart.contains(xi.base()) {
        return Err(Error::ChartDomain(group.name().into()));
    }
    let path = xi.rep().eval(Jet2::seed_s(0.0), Jet2::seed_t(0.0))?;
    Ok(LieVector::new(chart.to_coords().eval(&path)?.iter().map(|j| j.dst).collect()))
}

/// `[v, w] = Ξ⁻¹` of the commutator curve, for `v`, `w` at the identity.
pub fn bracket(group: &FrolicherGroup, v: &TangentVector, w: &TangentVector) -> Result<LieVector> {
    group.require_identity(v)?;
    group.require_identity(w)?;
    let gamma = commutator_curve(group, v, w)?;
    xi_inverse(group, &SecondTangentVector::new(group.space().clone(), gamma)?)
}

/// The bracket as a tangent vector along its chart line.
pub fn bracket_vector(group: &FrolicherGroup, v: &TangentVector, w: &TangentVector) -> Result<TangentVector> {
    bracket(group, v, w)?.to_tangent(group)
}

/// Bracket of chart lines with the given coordinates.
pub fn bracket_coords(group: &FrolicherGroup, a: &[f64], b: &[f64]) -> Result<LieVector> {
    bracket(group, &group.line(a)?, &group.line(b)?)
}

/// `D_v f(g) = (f∘λ_g∘c)'(0)`.
pub fn derivation_apply(group: &FrolicherGroup, v: &TangentVector, f: &RealFunction, g: &[f64]) -> Result<f64> {
    group.check_vector(v)?;
    let c = v.rep().eval(Jet2::seed_s(0.0))?;
    let gj: Vec<Jet2> = g.iter().map(|&x| Jet2::constant(x)).collect();
    Ok(f.eval(&group.mul(&gj, &c)?)?.ds)
}

/// `∂²/∂s∂t f(g·c(s)·d(t))` at the origin.
pub fn derivation_second(
    group: &FrolicherGroup,
    v: &TangentVector,
    w: &TangentVector,
    f: &RealFunction,
    g: &[f64],
) -> Result<f64> {
    group.check_vector(v)?;
    group.check_vector(w)?;
    let c = SmoothMap::select(2, vec![0])?.then(v.rep().map())?;
    let d = SmoothMap::select(2, vec![1])?.then(w.rep().map())?;
    let path = group.mul_maps(&group.mul_maps(&group.constant_map(2, g), &c)?, &d)?;
    Ok(f.eval(&path.eval(&[Jet2::seed_s(0.0), Jet2::seed_t(0.0)])?)?.dst)
}

/// `D_v D_w f(g) − D_w D_v f(g)` as the mixed partial of
/// `f(g·c(s)·d(t)) − f(g·d(t)·c(s))`, with `v = [c]` seeded in `s` and
/// `w = [d]` in `t` on both sides.
pub fn derivation_commutator(
    group: &FrolicherGroup,
    v: &TangentVector,
    w: &TangentVector,
    f: &RealFunction,
    g: &[f64],
) -> Result<f64> {
    group.check_vector(v)?;
    group.check_vector(w)?;
    let c = SmoothMap::select(2, vec![0])?.then(v.rep().map())?;
    let d = SmoothMap::select(2, vec![1])?.then(w.rep().map())?;
    let g = group.constant_map(2, g);
    let seeds = [Jet2::seed_s(0.0), Jet2::seed_t(0.0)];
    let vw = group.mul_maps(&group.mul_maps(&g, &c)?, &d)?;
    let wv = group.mul_maps(&group.mul_maps(&g, &d)?, &c)?;
    Ok(f.eval(&vw.eval(&seeds)?)?.dst - f.eval(&wv.eval(&seeds)?)?.dst)
}

/// Brackets of the chart basis lines: `c[i][j]` holds `[eᵢ, eⱼ]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureTable {
    pub dim: usize,
    pub c: Vec<Vec<Vec<f64>>>,
}

impl StructureTable {
    /// `max |c[i][j] + c[j][i]|`.
    pub fn antisymmetry_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    worst = worst.max((self.c[i][j][k] + self.c[j][i][k]).abs());
                }
            }
        }
        worst
    }

    /// Rows `(i, j, k, c)` with `c ≠ 0`.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let c = self.c[i][j][k];
                    if c != 0.0 {
                        out.push((i, j, k, c));
                    }
                }
            }
        }
        out
    }
}

pub fn structure_constants(group: &FrolicherGroup) -> Result<StructureTable> {
    let dim = group.lie_dim();
    let basis: Vec<TangentVector> = (0..dim)
        .map(|i| {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            group.line(&e)
        })
        .collect::<Result<_>>()?;
    let mut c = vec![vec![vec![0.0; dim]; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            c[i][j] = bracket(group, &basis[i], &basis[j])?.coords;
        }
    }
    Ok(StructureTable { dim, c })
}
