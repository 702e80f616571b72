//! Seeded random scalar programs.
//!
//! Every generated program is defined on all of `ℝⁿ`: logarithms, roots,
//! reciprocals and fractional powers are only ever applied to `1 + e²`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::smooth::Expr;

/// Deterministic generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, n_vars: usize, budget: usize) -> Expr {
    if n_vars == 0 || rng.gen_bool(0.2) {
        return Expr::constant(rng.gen_range(-1.0..1.0));
    }
    let v = Expr::var(rng.gen_range(0..n_vars));
    if budget >= 1 && rng.gen_bool(0.5) {
        v + rng.gen_range(-0.5..0.5)
    } else {
        v
    }
}

/// Random program in `n_vars` variables with [`Expr::depth`] at most
/// `max_depth`.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, n_vars: usize, max_depth: usize) -> Expr {
    if max_depth == 0 || rng.gen_bool(0.15) {
        return leaf(rng, n_vars, max_depth);
    }
    let d = max_depth - 1;
    let choice = if max_depth >= 3 {
        rng.gen_range(0..12)
    } else if max_depth == 2 {
        rng.gen_range(0..7)
    } else {
        rng.gen_range(0..6)
    };
    match choice {
        0 => random_expr(rng, n_vars, d) + random_expr(rng, n_vars, d),
        1 => random_expr(rng, n_vars, d) - random_expr(rng, n_vars, d),
        2 | 3 => random_expr(rng, n_vars, d) * random_expr(rng, n_vars, d),
        4 => random_expr(rng, n_vars, d).sin(),
        5 => random_expr(rng, n_vars, d).cos(),
        6 => (random_expr(rng, n_vars, d - 1) * 0.5).exp(),
        7 => (random_expr(rng, n_vars, d - 2).square() + 1.0).ln(),
        8 => (random_expr(rng, n_vars, d - 2).square() + 1.0).sqrt(),
        9 => (random_expr(rng, n_vars, d - 2).square() + 1.0).recip(),
        10 => {
            let p = rng.gen_range(-1.5..2.5);
            (random_expr(rng, n_vars, d - 2).square() + 1.0).powf(p)
        }
        _ => {
            let y = random_expr(rng, n_vars, d);
            let x = random_expr(rng, n_vars, d - 2).cos() + 1.5;
            y.atan2(x)
        }
    }
}
