use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{max_diff, FrolicherGroup};
use crate::jet::Jet2;
use crate::lie::{
    bracket, bracket_vector, commutator_curve, derivation_apply, derivation_commutator, derivation_second, semidirect_mul, t2_decompose,
    trivialize, untrivialize, xi, xi_inverse, LieVector,
};
use crate::smooth::random::trial_rng;
use crate::smooth::{Curve, Expr, RealFunction, SmoothMap};
use crate::space::{product, SpaceDescriptor, SATURATION_SAMPLES};
use crate::tangent::{product_join, product_split, tangent_distance, tangent_map, TangentVector};

/// Tolerance of the sampled homomorphism check.
pub const HOMOMORPHISM_TOL: f64 = 1e-9;
/// Probe sets larger than this are sampled per trial.
const FULL_PROBE_LIMIT: usize = 32;
const SAMPLED_PROBES: usize = 8;
const HOMOMORPHISM_SAMPLES: u64 = 10;

/// Outcome of a verification suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub group: String,
    pub trials: usize,
    pub worst_abs_dev: f64,
    pub pass: bool,
    pub seed: u64,
}

impl Report {
    pub fn new(suite: impl Into<String>, group: impl Into<String>, trials: usize, seed: u64) -> Self {
        Self { suite: suite.into(), group: group.into(), trials, worst_abs_dev: 0.0, pass: true, seed }
    }

    /// Folds one deviation in; NaN counts as infinite.
    pub fn record(&mut self, dev: f64, tol: f64) {
        let dev = if dev.is_nan() { f64::INFINITY } else { dev };
        self.worst_abs_dev = self.worst_abs_dev.max(dev);
        self.pass &= dev <= tol;
    }

    pub fn fail(&mut self) {
        self.pass = false;
    }

    /// Combines reports of the same suite, group and seed over disjoint
    /// trial ranges.
    pub fn merge(&self, other: &Report) -> Result<Report> {
        if self.suite != other.suite || self.group != other.group || self.seed != other.seed {
            return Err(Error::InvalidParameter("reports of different runs cannot be merged".into()));
        }
        Ok(Report {
            trials: self.trials + other.trials,
            worst_abs_dev: self.worst_abs_dev.max(other.worst_abs_dev),
            pass: self.pass && other.pass,
            ..self.clone()
        })
    }

    /// A single report for a suite made of several parts.
    pub fn combine(suite: impl Into<String>, parts: &[Report]) -> Report {
        let first = parts.first();
        Report {
            suite: suite.into(),
            group: first.map(|r| r.group.clone()).unwrap_or_default(),
            trials: parts.iter().map(|r| r.trials).max().unwrap_or(0),
            worst_abs_dev: parts.iter().map(|r| r.worst_abs_dev).fold(0.0, f64::max),
            pass: parts.iter().all(|r| r.pass),
            seed: first.map_or(0, |r| r.seed),
        }
    }
}

fn pick_probes<'a>(probes: &'a [RealFunction], trial: usize, rng: &mut ChaCha8Rng) -> Vec<&'a RealFunction> {
    if probes.len() <= FULL_PROBE_LIMIT {
        return probes.iter().collect();
    }
    let mut out = vec![&probes[trial % probes.len()]];
    out.extend((1..SAMPLED_PROBES).map(|_| &probes[rng.gen_range(0..probes.len())]));
    out
}

/// `D_{[v,w]}f(g) = D_v D_w f(g) − D_w D_v f(g)` at sampled `v, w, f, g`.
/// The left side goes through the commutator curve, the right through
/// translated products.
pub fn verify_comm_identity(group: &FrolicherGroup, trials: usize, tol: f64, seed: u64) -> Result<Report> {
    let mut report = Report::new("comm", group.name(), trials, seed);
    let probes = group.space().default_probes();
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let (v, _) = group.random_vector(&mut rng)?;
        let (w, _) = group.random_vector(&mut rng)?;
        let g = group.random_element(&mut rng)?;
        let b = bracket_vector(group, &v, &w)?;
        for f in pick_probes(&probes, i, &mut rng) {
            let lhs = derivation_apply(group, &b, f, &g)?;
            let rhs = derivation_commutator(group, &v, &w, f, &g)?;
            report.record((lhs - rhs).abs(), tol);
        }
    }
    Ok(report)
}

/// `∂²f(g·γ(s,t)) = ∂²[f(g·c(s)d(t)) − f(g·d(s)c(t))]` at the origin for the
/// commutator curve `γ`.
pub fn verify_mixed_partial_identity(group: &FrolicherGroup, trials: usize, tol: f64, seed: u64) -> Result<Report> {
    let mut report = Report::new("mixed", group.name(), trials, seed);
    let probes = group.space().default_probes();
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let (v, _) = group.random_vector(&mut rng)?;
        let (w, _) = group.random_vector(&mut rng)?;
        let g = group.random_element(&mut rng)?;
        let gamma = commutator_curve(group, &v, &w)?;
        let path = group.mul_maps(&group.constant_map(2, &g), gamma.map())?;
        let jets = path.eval(&[Jet2::seed_s(0.0), Jet2::seed_t(0.0)])?;
        for f in pick_probes(&probes, i, &mut rng) {
            let lhs = f.eval(&jets)?.dst;
            let rhs = derivation_second(group, &v, &w, f, &g)? - derivation_second(group, &w, &v, f, &g)?;
            report.record((lhs - rhs).abs(), tol);
        }
    }
    Ok(report)
}

/// Per-axiom tolerances for [`verify_lie_axioms`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxiomTolerances {
    pub antisymmetry: f64,
    pub bilinearity: f64,
    pub jacobi: f64,
}

impl AxiomTolerances {
    pub fn uniform(tol: f64) -> Self {
        Self { antisymmetry: tol, bilinearity: tol, jacobi: tol }
    }
}

impl Default for AxiomTolerances {
    fn default() -> Self {
        Self { antisymmetry: 1e-10, bilinearity: 1e-9, jacobi: 1e-8 }
    }
}

/// One report per Lie algebra axiom.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub antisymmetry: Report,
    pub bilinearity: Report,
    pub jacobi: Report,
}

impl AxiomReport {
    pub fn overall(&self) -> Report {
        Report::combine("axioms", &[self.antisymmetry.clone(), self.bilinearity.clone(), self.jacobi.clone()])
    }
}

/// Antisymmetry, bilinearity (through the vector space structure of the
/// tangent space) and the Jacobi identity, on random triples.
pub fn verify_lie_axioms(group: &FrolicherGroup, trials: usize, tols: AxiomTolerances, seed: u64) -> Result<AxiomReport> {
    let name = group.name();
    let mut anti = Report::new("antisymmetry", name, trials, seed);
    let mut bilin = Report::new("bilinearity", name, trials, seed);
    let mut jac = Report::new("jacobi", name, trials, seed);
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let (u, _) = group.random_vector(&mut rng)?;
        let (v, _) = group.random_vector(&mut rng)?;
        let (w, _) = group.random_vector(&mut rng)?;
        let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));

        let vw = bracket(group, &v, &w)?;
        let wv = bracket(group, &w, &v)?;
        anti.record(LieVector::combination(&[(1.0, &vw), (1.0, &wv)]).max_abs(), tols.antisymmetry);
        anti.record(bracket(group, &v, &v)?.max_abs(), tols.antisymmetry);

        let combo = group.tangent_add(&u.scalar_mul(a), &v.scalar_mul(b))?;
        let uw = bracket(group, &u, &w)?;
        let lhs = bracket(group, &combo, &w)?;
        bilin.record(lhs.distance(&LieVector::combination(&[(a, &uw), (b, &vw)])), tols.bilinearity);
        let wu = bracket(group, &w, &u)?;
        let lhs = bracket(group, &w, &combo)?;
        bilin.record(lhs.distance(&LieVector::combination(&[(a, &wu), (b, &wv)])), tols.bilinearity);

        let uv = bracket(group, &u, &v)?;
        let t1 = bracket(group, &u, &vw.to_tangent(group)?)?;
        let t2 = bracket(group, &v, &wu.to_tangent(group)?)?;
        let t3 = bracket(group, &w, &uv.to_tangent(group)?)?;
        jac.record(LieVector::combination(&[(1.0, &t1), (1.0, &t2), (1.0, &t3)]).max_abs(), tols.jacobi);
    }
    Ok(AxiomReport { antisymmetry: anti, bilinearity: bilin, jacobi: jac })
}

/// `Ξ⁻¹(Ξ(v))` against the Lie coordinates of `v`.
pub fn verify_xi_section(group: &FrolicherGroup, trials: usize, tol: f64, seed: u64) -> Result<Report> {
    let mut report = Report::new("xi-section", group.name(), trials, seed);
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let (v, a) = group.random_vector(&mut rng)?;
        let back = xi_inverse(group, &xi(group, &v)?)?;
        report.record(back.distance(&LieVector::new(a)), tol);
    }
    Ok(report)
}

fn random_vector_at(group: &FrolicherGroup, rng: &mut ChaCha8Rng) -> Result<TangentVector> {
    let g = group.random_element(rng)?;
    group.left_translate(&g, &group.random_vector(rng)?.0)
}

/// `Φ(vw) = Φ(v)Φ(w)` for the semidirect law, and `Φ⁻¹Φ = id`.
pub fn verify_trivialization(group: &FrolicherGroup, trials: usize, tol: f64, seed: u64) -> Result<Report> {
    let mut report = Report::new("trivialization", group.name(), trials, seed);
    let probes = group.space().default_probes();
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let v = random_vector_at(group, &mut rng)?;
        let w = random_vector_at(group, &mut rng)?;
        let lhs = trivialize(group, &group.tg_mul(&v, &w)?)?;
        let rhs = semidirect_mul(group, &trivialize(group, &v)?, &trivialize(group, &w)?)?;
        report.record(max_diff(&lhs.base, &rhs.base), tol);
        report.record(tangent_distance(&lhs.body, &rhs.body, &probes)?, tol);
        let back = untrivialize(group, &trivialize(group, &v)?)?;
        report.record(tangent_distance(&back, &v, &probes)?, tol);
    }
    Ok(report)
}

/// For commutator curves: `π₁ = e` exactly, `π₂`, `π₃` pair to zero, and
/// `π₄` is represented by the curve itself.
pub fn verify_t2_corollary(group: &FrolicherGroup, trials: usize, tol: f64, seed: u64) -> Result<Report> {
    let mut report = Report::new("t2", group.name(), trials, seed);
    let probes = group.space().default_probes();
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let (v, _) = group.random_vector(&mut rng)?;
        let (w, _) = group.random_vector(&mut rng)?;
        let gamma = commutator_curve(group, &v, &w)?;
        let d = t2_decompose(group, &gamma)?;
        if d.p1 != group.identity() {
            report.record(max_diff(&d.p1, group.identity()), 0.0);
            report.fail();
        }
        for f in &probes {
            report.record(d.p2.pairing(f)?.abs(), tol);
            report.record(d.p3.pairing(f)?.abs(), tol);
        }
        for (s, t) in [(0.2, -0.3), (-0.4, 0.1)] {
            report.record(max_diff(&d.p4.rep().at(s, t)?, &gamma.at(s, t)?), tol);
        }
    }
    Ok(report)
}

/// Checks `alpha(gh) = alpha(g)alpha(h)` and `alpha(e) = e` at samples,
/// returning the worst deviation.
fn homomorphism_deviation(source: &FrolicherGroup, target: &FrolicherGroup, alpha: &SmoothMap, seed: u64) -> Result<f64> {
    if alpha.arity_in() != source.point_arity() || alpha.arity_out() != target.point_arity() {
        return Err(Error::ArityMismatch { expected: source.point_arity(), got: alpha.arity_in() });
    }
    let mut worst = max_diff(&alpha.eval(source.identity())?, target.identity());
    for i in 0..HOMOMORPHISM_SAMPLES {
        let mut rng = trial_rng(seed ^ 0xA1FA, i);
        let g = source.random_element(&mut rng)?;
        let h = source.random_element(&mut rng)?;
        let lhs = alpha.eval(&source.mul(&g, &h)?)?;
        let rhs = target.mul(&alpha.eval(&g)?, &alpha.eval(&h)?)?;
        worst = worst.max(max_diff(&lhs, &rhs));
    }
    Ok(worst)
}

/// `Tα[v, w] = [Tα v, Tα w]` for a homomorphism `alpha: source → target`.
pub fn pushforward_bracket_check(
    source: &FrolicherGroup,
    target: &FrolicherGroup,
    alpha: &SmoothMap,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<Report> {
    let deviation = homomorphism_deviation(source, target, alpha, seed)?;
    if !(deviation <= HOMOMORPHISM_TOL) {
        return Err(Error::NotAHomomorphism { deviation });
    }
    let mut report = Report::new("functorial", source.name(), trials, seed);
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let (v, _) = source.random_vector(&mut rng)?;
        let (w, _) = source.random_vector(&mut rng)?;
        let pushed = tangent_map(alpha, target.space(), &bracket_vector(source, &v, &w)?)?;
        let lhs = LieVector::new(target.lie_coords(&pushed)?);
        let rhs = bracket(
            target,
            &tangent_map(alpha, target.space(), &v)?,
            &tangent_map(alpha, target.space(), &w)?,
        )?;
        report.record(lhs.distance(&rhs), tol);
    }
    Ok(report)
}

/// `T(ψ∘φ) = Tψ∘Tφ` for random conjugations `φ`, `ψ` and random vectors.
pub fn verify_tangent_functoriality(group: &FrolicherGroup, trials: usize, tol: f64, seed: u64) -> Result<Report> {
    let mut report = Report::new("tangent-functor", group.name(), trials, seed);
    let probes = group.space().default_probes();
    let space = group.space();
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let phi = group.conjugation_map(&group.random_element(&mut rng)?)?;
        let psi = group.conjugation_map(&group.random_element(&mut rng)?)?;
        let v = random_vector_at(group, &mut rng)?;
        let once = tangent_map(&phi.then(&psi)?, space, &v)?;
        let twice = tangent_map(&psi, space, &tangent_map(&phi, space, &v)?)?;
        report.record(tangent_distance(&once, &twice, &probes)?, tol);
    }
    Ok(report)
}

/// `u ↦ chart⁻¹(p + u·a + u²·b)` for random chart coordinates `p, a, b`.
pub(crate) fn random_chart_vector(space: &Arc<SpaceDescriptor>, rng: &mut ChaCha8Rng) -> Result<TangentVector> {
    let chart = space.require_chart()?;
    let u = Expr::var(0);
    let exprs = (0..chart.dim())
        .map(|_| {
            let (p, a, b): (f64, f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5));
            u.clone() * a + u.clone().square() * b + p
        })
        .collect();
    let map = SmoothMap::from_exprs(1, exprs)?.then(chart.from_coords())?;
    TangentVector::new(space.clone(), Curve::new(space.name(), map)?)
}

/// Split/join round trips on `a × b`, in both directions.
pub fn verify_product_iso(
    a: &Arc<SpaceDescriptor>,
    b: &Arc<SpaceDescriptor>,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<Report> {
    let prod = Arc::new(product(a, b)?);
    let mut report = Report::new("product-iso", prod.name(), trials, seed);
    let (pa, pb, pp) = (a.default_probes(), b.default_probes(), prod.default_probes());
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let v = random_chart_vector(&prod, &mut rng)?;
        let (x, y) = product_split(&v)?;
        report.record(tangent_distance(&product_join(&prod, &x, &y)?, &v, &pp)?, tol);
        let x = random_chart_vector(a, &mut rng)?;
        let y = random_chart_vector(b, &mut rng)?;
        let (x2, y2) = product_split(&product_join(&prod, &x, &y)?)?;
        report.record(tangent_distance(&x2, &x, &pa)?, tol);
        report.record(tangent_distance(&y2, &y, &pb)?, tol);
    }
    Ok(report)
}

/// Saturation probe over all generator pairs; deviations are relative to
/// the finite-difference estimate.
pub fn verify_saturation(space: &SpaceDescriptor, tol: f64, seed: u64) -> Result<Report> {
    let probe = space.saturation_check(&SATURATION_SAMPLES, tol)?;
    let mut report = Report::new("saturation", space.name(), space.gen_functions().len() * space.gen_curves().len(), seed);
    report.record(probe.worst_deviation, tol);
    if !probe.pass {
        report.fail();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{builtin_group, heisenberg_center_quotient, GroupKind};
    use crate::space::{circle, euclidean};

    #[test]
    fn suites_pass_on_small_groups() {
        for k in [GroupKind::Gl(2), GroupKind::So3, GroupKind::Heisenberg3, GroupKind::Additive(2)] {
            let g = builtin_group(&k).unwrap();
            for r in [
                verify_comm_identity(&g, 5, 1e-8, 1).unwrap(),
                verify_mixed_partial_identity(&g, 5, 1e-9, 1).unwrap(),
                verify_xi_section(&g, 5, 1e-10, 1).unwrap(),
                verify_trivialization(&g, 5, 1e-9, 1).unwrap(),
                verify_t2_corollary(&g, 5, 1e-10, 1).unwrap(),
                verify_tangent_functoriality(&g, 5, 1e-9, 1).unwrap(),
                verify_lie_axioms(&g, 5, AxiomTolerances::default(), 1).unwrap().overall(),
            ] {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn pushforward_rejects_non_homomorphisms() {
        let h = builtin_group(&GroupKind::Heisenberg3).unwrap();
        let a2 = builtin_group(&GroupKind::Additive(2)).unwrap();
        let r = pushforward_bracket_check(&h, &a2, &heisenberg_center_quotient().unwrap(), 5, 1e-9, 3).unwrap();
        assert!(r.pass && r.worst_abs_dev == 0.0);
        let squash = SmoothMap::from_exprs(
            9,
            vec![Expr::var(1).square(), Expr::var(5)],
        )
        .unwrap();
        assert!(matches!(
            pushforward_bracket_check(&h, &a2, &squash, 5, 1e-9, 3),
            Err(Error::NotAHomomorphism { .. })
        ));
    }

    #[test]
    fn product_iso_and_saturation() {
        let r2 = Arc::new(euclidean(2).unwrap());
        let s1 = Arc::new(circle().unwrap());
        assert!(verify_product_iso(&r2, &s1, 10, 1e-9, 4).unwrap().pass);
        let r = verify_saturation(&s1, 1e-5, 0).unwrap();
        assert!(r.pass && r.worst_abs_dev < 1e-5);
    }

    #[test]
    fn report_merge() {
        let mut a = Report::new("comm", "so3", 3, 42);
        a.record(1e-12, 1e-8);
        let mut b = Report::new("comm", "so3", 2, 42);
        b.record(1e-6, 1e-8);
        let m = a.merge(&b).unwrap();
        assert_eq!((m.trials, m.pass, m.worst_abs_dev), (5, false, 1e-6));
        assert!(a.merge(&Report::new("mixed", "so3", 1, 42)).is_err());
        let mut n = Report::new("comm", "so3", 1, 42);
        n.record(f64::NAN, 1.0);
        assert!(!n.pass && n.worst_abs_dev.is_infinite());
    }
}
