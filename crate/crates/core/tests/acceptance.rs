//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::sync::Arc;
use std::time::Instant;

use frolic::group::{builtin_group, heisenberg_center_quotient, FrolicherGroup, GroupKind};
use frolic::jet::Jet2;
use frolic::lie::{
    bracket, commutator_curve, pushforward_bracket_check, rj_isomorphism_check, structure_constants,
    verify_comm_identity, verify_lie_axioms, verify_mixed_partial_identity, verify_product_iso, verify_t2_corollary,
    verify_trivialization, verify_xi_section, AxiomTolerances, Report,
};
use frolic::smooth::random::{random_expr, trial_rng};
use frolic::space::{circle, coordinate_cross, euclidean, RPowerConfig};
use frolic::tangent::{coordinate_cross_witness, TANGENT_TOL};
use rand::Rng;

const SEED: u64 = 42;

type Outcome = Result<(bool, String), frolic::Error>;

fn group(kind: GroupKind) -> FrolicherGroup {
    builtin_group(&kind).expect("builtin group")
}

fn matrix_kinds() -> Vec<GroupKind> {
    vec![GroupKind::Gl(2), GroupKind::Sl2, GroupKind::So3, GroupKind::Heisenberg3]
}

fn all_kinds() -> Vec<GroupKind> {
    vec![
        GroupKind::Gl(2),
        GroupKind::Gl(3),
        GroupKind::So3,
        GroupKind::Sl2,
        GroupKind::Heisenberg3,
        GroupKind::Additive(3),
        GroupKind::Torus2,
        GroupKind::RPower(RPowerConfig::with_size(100)),
        GroupKind::Loop { modes: 1, target: Box::new(GroupKind::So3) },
        GroupKind::Loop { modes: 2, target: Box::new(GroupKind::Heisenberg3) },
    ]
}

/// Runs `suite` on every kind and summarizes.
fn over_groups(kinds: Vec<GroupKind>, suite: impl Fn(&FrolicherGroup) -> Result<Report, frolic::Error>) -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    for k in kinds {
        let r = suite(&group(k))?;
        worst = worst.max(r.worst_abs_dev);
        if !r.pass {
            pass = false;
            failed.push(format!("{} ({:e})", r.group, r.worst_abs_dev));
        }
    }
    let detail = if failed.is_empty() {
        format!("worst deviation {worst:e}")
    } else {
        format!("worst deviation {worst:e}; failing: {}", failed.join(", "))
    };
    Ok((pass, detail))
}

// Plain matrix arithmetic for the commutator oracle.

type Mat = Vec<Vec<f64>>;

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn commutator(a: &Mat, b: &Mat) -> Mat {
    let (ab, ba) = (matmul(a, b), matmul(b, a));
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// Velocity matrix at `I` of a curve with chart velocity `a`.
fn linearize(kind: &GroupKind, a: &[f64]) -> Mat {
    match kind {
        GroupKind::Gl(n) => (0..*n).map(|i| a[i * n..(i + 1) * n].to_vec()).collect(),
        GroupKind::Sl2 => vec![vec![a[0], a[1]], vec![a[2], -a[0]]],
        GroupKind::So3 => vec![vec![0.0, -a[2], a[1]], vec![a[2], 0.0, -a[0]], vec![-a[1], a[0], 0.0]],
        GroupKind::Heisenberg3 => vec![vec![0.0, a[0], a[2]], vec![0.0, 0.0, a[1]], vec![0.0; 3]],
        _ => unreachable!(),
    }
}

/// Chart velocity of a curve with velocity matrix `x` at `I`.
fn chart_linear(kind: &GroupKind, x: &Mat) -> Vec<f64> {
    match kind {
        GroupKind::Gl(_) => x.concat(),
        GroupKind::Sl2 => vec![x[0][0], x[0][1], x[1][0]],
        GroupKind::So3 => vec![x[2][1], x[0][2], x[1][0]],
        GroupKind::Heisenberg3 => vec![x[0][1], x[1][2], x[0][2]],
        _ => unreachable!(),
    }
}

fn c1_matrix_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for kind in matrix_kinds() {
        let g = group(kind.clone());
        for i in 0..100 {
            let mut rng = trial_rng(SEED, i);
            let (v, a) = g.random_vector(&mut rng)?;
            let (w, b) = g.random_vector(&mut rng)?;
            let got = bracket(&g, &v, &w)?;
            let want = chart_linear(&kind, &commutator(&linearize(&kind, &a), &linearize(&kind, &b)));
            let dev = got.coords.iter().zip(&want).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            worst = worst.max(if dev.is_nan() { f64::INFINITY } else { dev });
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((worst <= 1e-9 && secs < 5.0, format!("worst deviation {worst:e}, {secs:.2} s for 400 pairs")))
}

fn c2_structure_constants() -> Outcome {
    let eps = |i: usize, j: usize, k: usize| -> f64 {
        match (i, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    };
    let heis = |i: usize, j: usize, k: usize| -> f64 {
        match (i, j, k) {
            (0, 1, 2) => 1.0,
            (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    };
    let mut worst = 0.0f64;
    for (kind, want) in [(GroupKind::So3, &eps as &dyn Fn(usize, usize, usize) -> f64), (GroupKind::Heisenberg3, &heis)] {
        let t = structure_constants(&group(kind))?;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    worst = worst.max((t.c[i][j][k] - want(i, j, k)).abs());
                }
            }
        }
    }
    Ok((worst <= 1e-10, format!("so3 = ε, heisenberg3 = [ex,ey] = ez; worst deviation {worst:e}")))
}

fn c3_abelian() -> Outcome {
    let kinds = vec![
        GroupKind::Additive(1),
        GroupKind::Additive(3),
        GroupKind::Additive(10),
        GroupKind::Torus2,
        GroupKind::RPower(RPowerConfig::with_size(100)),
    ];
    let mut worst = 0.0f64;
    for kind in kinds {
        let g = group(kind.clone());
        for i in 0..20 {
            let mut rng = trial_rng(SEED, i);
            let (v, _) = g.random_vector(&mut rng)?;
            let (w, _) = g.random_vector(&mut rng)?;
            worst = worst.max(bracket(&g, &v, &w)?.max_abs());
            let gamma = commutator_curve(&g, &v, &w)?;
            for (s, t) in [(0.3, -0.2), (-0.7, 0.5), (0.1, 0.9)] {
                let p = gamma.at(s, t)?;
                let dev = p.iter().zip(g.identity()).map(|(x, e)| (x - e).abs()).fold(0.0, f64::max);
                worst = worst.max(dev);
            }
        }
        if !matches!(kind, GroupKind::RPower(_)) {
            let t = structure_constants(&g)?;
            worst = worst.max(t.c.iter().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs())));
        }
    }
    Ok((worst <= 1e-12, format!("brackets and commutator curves constant; worst {worst:e}")))
}

fn c4_comm() -> Outcome {
    over_groups(all_kinds(), |g| verify_comm_identity(g, 50, 1e-8, SEED))
}

fn c5_mixed() -> Outcome {
    over_groups(all_kinds(), |g| verify_mixed_partial_identity(g, 50, 1e-9, SEED))
}

fn c6_axioms() -> Outcome {
    let mut kinds = matrix_kinds();
    kinds.push(GroupKind::Gl(3));
    over_groups(kinds, |g| Ok(verify_lie_axioms(g, 50, AxiomTolerances::default(), SEED)?.overall()))
}

fn c7_trivialization() -> Outcome {
    over_groups(all_kinds(), |g| verify_trivialization(g, 100, 1e-9, SEED))
}

fn c8_t2() -> Outcome {
    over_groups(all_kinds(), |g| verify_t2_corollary(g, 50, 1e-10, SEED))
}

fn c9_xi() -> Outcome {
    over_groups(all_kinds(), |g| verify_xi_section(g, 100, 1e-10, SEED))
}

fn c10_functoriality() -> Outcome {
    let mut parts = Vec::new();
    for kind in [GroupKind::Gl(2), GroupKind::So3] {
        let g = group(kind);
        for i in 0..5 {
            let h = g.random_element(&mut trial_rng(SEED ^ 0xC0, i))?;
            parts.push(pushforward_bracket_check(&g, &g, &g.conjugation_map(&h)?, 20, 1e-9, SEED + i)?);
        }
    }
    let h = group(GroupKind::Heisenberg3);
    let a2 = group(GroupKind::Additive(2));
    parts.push(pushforward_bracket_check(&h, &a2, &heisenberg_center_quotient()?, 50, 1e-9, SEED)?);
    let r = Report::combine("functorial", &parts);
    Ok((r.pass, format!("10 conjugations and the heisenberg3 quotient; worst {:e}", r.worst_abs_dev)))
}

fn c11_rj() -> Outcome {
    let config = RPowerConfig::with_size(100);
    let small = config.resolved_supports().iter().all(|s| s.len() <= 5);
    let r = rj_isomorphism_check(&config, 50, 1e-10, SEED)?;
    let exact = r.inverse.worst_abs_dev == 0.0 && r.forward.worst_abs_dev <= 1e-10;
    Ok((
        small && exact && r.overall.pass,
        format!(
            "forward {:e}, inverse {:e}, kernel {:e}, smoothness {}",
            r.forward.worst_abs_dev,
            r.inverse.worst_abs_dev,
            r.kernel.worst_abs_dev,
            if r.smoothness.pass { "ok" } else { "failed" }
        ),
    ))
}

fn c12_product() -> Outcome {
    let e2 = Arc::new(euclidean(2)?);
    let e3 = Arc::new(euclidean(3)?);
    let s1 = Arc::new(circle()?);
    let a = verify_product_iso(&e2, &e3, 100, TANGENT_TOL, SEED)?;
    let b = verify_product_iso(&e2, &s1, 100, TANGENT_TOL, SEED)?;
    Ok((
        a.pass && b.pass,
        format!("R^2×R^3 {:e}, R^2×S1 {:e}", a.worst_abs_dev, b.worst_abs_dev),
    ))
}

fn c13_jets() -> Outcome {
    const H: f64 = 1e-4;
    const BOUND: f64 = 100.0;
    let mut worst = 0.0f64;
    let (mut accepted, mut skipped, mut draw) = (0, 0, 0u64);
    while accepted < 100 {
        let mut rng = trial_rng(SEED ^ 0x13, draw);
        draw += 1;
        let e = random_expr(&mut rng, 2, 6);
        assert!(e.depth() <= 6);
        let p = |s: f64, t: f64| e.eval(&[s, t]);
        let vals = [p(H, H)?, p(H, -H)?, p(-H, H)?, p(-H, -H)?, p(0.0, 0.0)?];
        if vals.iter().any(|v| !(v.abs() <= BOUND)) {
            skipped += 1;
            continue;
        }
        accepted += 1;
        let fd = (vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * H * H);
        let jet = e.eval(&[Jet2::seed_s(0.0), Jet2::seed_t(0.0)])?.dst;
        let dev = (jet - fd).abs() / jet.abs().max(1.0);
        worst = worst.max(if dev.is_nan() { f64::INFINITY } else { dev });
    }
    let mut nilpotent = true;
    let mut rng = trial_rng(SEED, 1313);
    for _ in 0..100 {
        let (a, b): (f64, f64) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let sigma = Jet2::new(0.0, a, 0.0, 0.0);
        let tau = Jet2::new(0.0, 0.0, b, 0.0);
        nilpotent &= sigma * sigma == Jet2::ZERO && tau * tau == Jet2::ZERO;
        nilpotent &= sigma * tau == Jet2::new(0.0, 0.0, 0.0, a * b);
    }
    Ok((
        worst <= 1e-5 && nilpotent,
        format!("worst relative deviation {worst:e} over 100 programs ({skipped} unbounded draws skipped); nilpotency exact: {nilpotent}"),
    ))
}

fn c14_cross() -> Outcome {
    let cross = coordinate_cross()?;
    let w = coordinate_cross_witness(&cross)?;
    let one_axis = w.pairings.iter().all(|&(x, y)| x == 0.0 || y == 0.0);
    Ok((
        !w.sum_found && one_axis && w.diagonal_escapes && w.curves_checked > 0,
        format!("{} curves checked, none pairs to (1,1); t ↦ (t,t) leaves the cross", w.curves_checked),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("matrix-commutator oracle", c1_matrix_oracle),
        ("structure constants", c2_structure_constants),
        ("abelian degeneracy", c3_abelian),
        ("D_[v,w] = [D_v, D_w]", c4_comm),
        ("mixed partial identity", c5_mixed),
        ("Lie algebra axioms", c6_axioms),
        ("trivialization homomorphism", c7_trivialization),
        ("second tangent decomposition", c8_t2),
        ("Xi section identity", c9_xi),
        ("functoriality", c10_functoriality),
        ("T_0 R^J = R^J", c11_rj),
        ("T(X×Y) = TX×TY", c12_product),
        ("jet engine", c13_jets),
        ("coordinate cross witness", c14_cross),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.2} s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
