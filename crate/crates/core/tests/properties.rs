use std::sync::Arc;

use frolic::group::{builtin_group, GroupKind};
use frolic::jet::{Dual, HyperDual, Jet2};
use frolic::lie::{bracket_coords, LieVector, Report};
use frolic::smooth::random::{random_expr, trial_rng};
use frolic::smooth::{Curve, Expr, SmoothMap};
use frolic::space::{euclidean, r_power, RPowerConfig};
use frolic::tangent::{tangent_equal, TangentVector};
use proptest::prelude::*;

fn jet() -> impl Strategy<Value = Jet2> {
    (-4.0..4.0f64, -4.0..4.0f64, -4.0..4.0f64, -4.0..4.0f64).prop_map(|(a, b, c, d)| Jet2::new(a, b, c, d))
}

fn close(a: Jet2, b: Jet2, tol: f64) -> bool {
    [(a.val, b.val), (a.ds, b.ds), (a.dt, b.dt), (a.dst, b.dst)]
        .iter()
        .all(|&(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn report() -> impl Strategy<Value = Report> {
    (1usize..20, 0.0..1e-6f64, 1e-9..1e-7f64).prop_map(|(trials, dev, tol)| {
        let mut r = Report::new("comm", "so3", trials, 42);
        r.record(dev, tol);
        r
    })
}

fn plane_vector(a: f64, b: f64, c: f64, d: f64) -> TangentVector {
    let r2 = Arc::new(euclidean(2).unwrap());
    let u = Expr::var(0);
    let curve = Curve::from_exprs(r2.name(), vec![u.clone() * a + u.clone().square() * c, (u.clone() * b).sin() + u.square() * d]).unwrap();
    TangentVector::new(r2, curve).unwrap()
}

proptest! {
    #[test]
    fn jet_ring_laws(a in jet(), b in jet(), c in jet()) {
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a + b, b + a);
        prop_assert!(close((a * b) * c, a * (b * c), 1e-12));
        prop_assert!(close(a * (b + c), a * b + a * c, 1e-12));
        prop_assert_eq!(a * Jet2::ONE, a);
        prop_assert_eq!(a + Jet2::ZERO, a);
    }

    #[test]
    fn infinitesimals_are_nilpotent(x in -1e6..1e6f64, y in -1e6..1e6f64) {
        let s = Jet2::new(0.0, x, 0.0, 0.0);
        let t = Jet2::new(0.0, 0.0, y, 0.0);
        prop_assert_eq!(s * s, Jet2::ZERO);
        prop_assert_eq!(t * t, Jet2::ZERO);
        prop_assert_eq!(s * t * s, Jet2::ZERO);
    }

    #[test]
    fn jets_agree_with_hyperduals(seed in any::<u64>(), s0 in -1.0..1.0f64, t0 in -1.0..1.0f64) {
        let e = random_expr(&mut trial_rng(seed, 0), 2, 5);
        let j = e.eval(&[Jet2::seed_s(s0), Jet2::seed_t(t0)]).unwrap();
        let s: HyperDual = Dual::new(Dual::new(s0, 0.0), Dual::new(1.0, 0.0));
        let t: HyperDual = Dual::new(Dual::new(t0, 1.0), Dual::new(0.0, 0.0));
        let h = e.eval(&[s, t]).unwrap();
        let hyper = Jet2::new(h.re.re, h.eps.re, h.re.eps, h.eps.eps);
        prop_assert!(close(j, hyper, 1e-9), "{:?} vs {:?} for {}", j, hyper, e);
    }

    #[test]
    fn report_merge_is_associative(a in report(), b in report(), c in report()) {
        let left = a.merge(&b).unwrap().merge(&c).unwrap();
        let right = a.merge(&b.merge(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(a.merge(&b).unwrap(), b.merge(&a).unwrap());
    }

    #[test]
    fn tangent_equality_is_an_equivalence(
        a in -2.0..2.0f64, b in -2.0..2.0f64,
        c1 in -1.0..1.0f64, c2 in -1.0..1.0f64, c3 in -1.0..1.0f64,
        d1 in -1.0..1.0f64, d2 in -1.0..1.0f64, d3 in -1.0..1.0f64,
    ) {
        let (u, v, w) = (plane_vector(a, b, c1, d1), plane_vector(a, b, c2, d2), plane_vector(a, b, c3, d3));
        let probes = u.space().default_probes();
        prop_assert!(tangent_equal(&u, &u, &probes, 1e-9).unwrap());
        prop_assert!(tangent_equal(&u, &v, &probes, 1e-9).unwrap());
        prop_assert!(tangent_equal(&v, &u, &probes, 1e-9).unwrap());
        prop_assert!(tangent_equal(&v, &w, &probes, 1e-9).unwrap());
        prop_assert!(tangent_equal(&u, &w, &probes, 1e-9).unwrap());
        let off = plane_vector(a + 0.5, b, c1, d1);
        prop_assert!(!tangent_equal(&u, &off, &probes, 1e-9).unwrap());
    }

    #[test]
    fn finite_support_functions_factor(seed in any::<u64>(), noise in prop::collection::vec(-1e3..1e3f64, 30)) {
        let config = RPowerConfig { seed, ..RPowerConfig::with_size(30) };
        let (_, fsf) = r_power(&config).unwrap();
        let x: Vec<f64> = (0..30).map(|j| (j as f64 * 0.21).sin()).collect();
        for f in &fsf {
            let mut y = noise.clone();
            for &j in f.support() {
                y[j] = x[j];
            }
            prop_assert_eq!(f.eval(&x).unwrap().to_bits(), f.eval(&y).unwrap().to_bits());
        }
    }

    #[test]
    fn so3_bracket_is_the_cross_product(
        a in prop::array::uniform3(-2.0..2.0f64),
        b in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let g = builtin_group(&GroupKind::So3).unwrap();
        let got = bracket_coords(&g, &a, &b).unwrap();
        let cross = LieVector::new(vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]);
        prop_assert!(got.distance(&cross) < 1e-12);
        let back = bracket_coords(&g, &b, &a).unwrap();
        prop_assert!(LieVector::combination(&[(1.0, &got), (1.0, &back)]).max_abs() < 1e-14);
    }

    #[test]
    fn group_laws_hold_on_gl2(c in prop::collection::vec(-0.2..0.2f64, 12)) {
        let g = builtin_group(&GroupKind::Gl(2)).unwrap();
        let x = g.from_coords(&c[0..4]).unwrap();
        let y = g.from_coords(&c[4..8]).unwrap();
        let z = g.from_coords(&c[8..12]).unwrap();
        let lhs = g.mul(&g.mul(&x, &y).unwrap(), &z).unwrap();
        let rhs = g.mul(&x, &g.mul(&y, &z).unwrap()).unwrap();
        prop_assert!(g.points_equal(&lhs, &rhs));
        prop_assert!(g.points_equal(&g.mul(&x, &g.inv(&x).unwrap()).unwrap(), g.identity()));
    }

    #[test]
    fn composition_of_programs_is_associative(seed in any::<u64>(), x in -1.0..1.0f64) {
        let mut rng = trial_rng(seed, 7);
        let f = SmoothMap::from_exprs(1, vec![random_expr(&mut rng, 1, 3)]).unwrap();
        let g = SmoothMap::from_exprs(1, vec![random_expr(&mut rng, 1, 3)]).unwrap();
        let h = SmoothMap::from_exprs(1, vec![random_expr(&mut rng, 1, 3)]).unwrap();
        let left = f.then(&g).unwrap().then(&h).unwrap().eval(&[x]).unwrap();
        let right = f.then(&g.then(&h).unwrap()).unwrap().eval(&[x]).unwrap();
        prop_assert_eq!(left[0].to_bits(), right[0].to_bits());
    }
}
