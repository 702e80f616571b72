use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::jet::Jet2;
use crate::lie::Report;
use crate::smooth::random::trial_rng;
use crate::smooth::{deriv_at_zero, Curve, Expr, SmoothMap, TwoParamMap};
use crate::space::{r_power, RPowerConfig, SpaceDescriptor, SATURATION_SAMPLES};
use crate::tangent::{tx_curve_check, TX_TOL};

const SMOOTHNESS_TRIALS: usize = 3;

/// Outcome of [`rj_isomorphism_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RjReport {
    pub forward: Report,
    pub inverse: Report,
    pub kernel: Report,
    pub smoothness: Report,
    pub overall: Report,
}

/// `φ̄(c)_j = c_j'(0)`.
fn phi_bar(c: &Curve) -> Result<Vec<f64>> {
    Ok(c.eval(Jet2::seed_s(0.0))?.iter().map(|j| j.ds).collect())
}

fn line(name: &str, x: &[f64]) -> Result<Curve> {
    Curve::from_exprs(name, x.iter().map(|&xi| Expr::var(0) * xi).collect())
}

/// Checks `T₀ℝ^J ≅ ℝ^J` through `φ̄(c)_j = c_j'(0)`:
/// (a) random curves map to their componentwise derivatives and pair like
/// the line through `φ̄(c)`; (b) `x ↦ [t ↦ tx]` followed by `φ̄` returns `x`
/// exactly; (c) curves `t ↦ t²a` pair to zero against every declared
/// function; (d) `(s,t) ↦ t·c(s)` is a smooth curve into `Tℝ^J` as seen by
/// the declared-support functions.
pub fn rj_isomorphism_check(config: &RPowerConfig, trials: usize, tol: f64, seed: u64) -> Result<RjReport> {
    let (space, _) = r_power(config)?;
    let name = space.name().to_string();
    let n = config.j_size;
    let group_name = format!("r_power({n})");
    let mut forward = Report::new("rj-forward", &group_name, trials, seed);
    let mut inverse = Report::new("rj-inverse", &group_name, trials, seed);
    let mut kernel = Report::new("rj-kernel", &group_name, trials, seed);
    let functions = space.gen_functions();
    for i in 0..trials {
        let mut rng = trial_rng(seed, i as u64);
        let mut coords = Vec::with_capacity(n);
        let mut expected = Vec::with_capacity(n);
        for _ in 0..n {
            let (x, y, z): (f64, f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let t = Expr::var(0);
            coords.push(t.clone() * x + t.clone().square() * y + (t * z).sin());
            expected.push(x + z);
        }
        let c = Curve::from_exprs(&name, coords)?;
        let image = phi_bar(&c)?;
        forward.record(max_abs_diff(&image, &expected), tol);
        let through = line(&name, &image)?;
        for f in functions {
            forward.record((deriv_at_zero(f, &c)? - deriv_at_zero(f, &through)?).abs(), tol);
        }

        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let back = phi_bar(&line(&name, &x)?)?;
        let exact = back.iter().zip(&x).all(|(a, b)| a.to_bits() == b.to_bits());
        inverse.record(max_abs_diff(&back, &x), tol);
        if !exact {
            inverse.fail();
        }

        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let k = Curve::from_exprs(&name, a.iter().map(|&aj| Expr::var(0).square() * aj).collect())?;
        kernel.record(max_abs_diff(&phi_bar(&k)?, &vec![0.0; n]), tol);
        for f in functions {
            kernel.record(deriv_at_zero(f, &k)?.abs(), tol);
        }
    }

    let declared = SpaceDescriptor::new(&name, n, Arc::new(|_| true))?
        .with_functions(functions[n.min(functions.len())..].to_vec())?;
    let smooth_trials = trials.min(SMOOTHNESS_TRIALS);
    let mut smoothness = Report::new("rj-smoothness", &group_name, smooth_trials, seed);
    for i in 0..smooth_trials {
        let mut rng = trial_rng(seed ^ 0xD15C, i as u64);
        let (s, t) = (Expr::var(0), Expr::var(1));
        let coords = (0..n)
            .map(|_| {
                let (p, q): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0));
                t.clone() * ((s.clone() * q).sin() + p)
            })
            .collect();
        let g = TwoParamMap::new(&name, SmoothMap::from_exprs(2, coords)?)?;
        let r = tx_curve_check(&g, &declared, &SATURATION_SAMPLES, TX_TOL)?;
        smoothness.record(r.derivative_smooth.worst_deviation.max(r.slices_smooth.worst_deviation), TX_TOL);
        if !r.pass {
            smoothness.fail();
        }
    }

    let mut overall = Report::combine("rj", &[forward.clone(), inverse.clone(), kernel.clone()]);
    overall.pass &= smoothness.pass;
    Ok(RjReport { forward, inverse, kernel, smoothness, overall })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, |m, d| if d.is_nan() { f64::INFINITY } else { m.max(d) })
}
