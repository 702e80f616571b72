use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::programs::{MatInv, MatMul, Pointwise, Sl2FromCoords, So3Exp, So3Log, Wrap, WrapOp};
use crate::group::FrolicherGroup;
use crate::jet::Matrix;
use crate::smooth::{Curve, Expr, RealFunction, SmoothMap};
use crate::space::{euclidean, r_power, Chart, Membership, RPowerConfig, SpaceDescriptor, DEFAULT_EQ_TOL};

/// Largest matrix size accepted for `gl(n)`.
pub const MAX_GL_N: usize = 4;
/// Largest mode count accepted for loop groups.
pub const MAX_LOOP_MODES: usize = 3;

/// Parameterized names of the builtin groups.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupKind {
    Gl(usize),
    So3,
    Sl2,
    Heisenberg3,
    Additive(usize),
    Torus2,
    RPower(RPowerConfig),
    /// Loops with `2·modes + 1` nodes in a matrix group.
    Loop { modes: usize, target: Box<GroupKind> },
}

impl GroupKind {
    /// Display name, also used as the group's name.
    pub fn label(&self) -> String {
        match self {
            GroupKind::Gl(n) => format!("gl({n})"),
            GroupKind::So3 => "so3".into(),
            GroupKind::Sl2 => "sl2".into(),
            GroupKind::Heisenberg3 => "heisenberg3".into(),
            GroupKind::Additive(n) => format!("additive({n})"),
            GroupKind::Torus2 => "torus2".into(),
            GroupKind::RPower(c) => format!("r_power({})", c.j_size),
            GroupKind::Loop { modes, target } => format!("loop_group({modes},{})", target.label()),
        }
    }

    pub fn is_matrix_group(&self) -> bool {
        matches!(self, GroupKind::Gl(_) | GroupKind::So3 | GroupKind::Sl2 | GroupKind::Heisenberg3)
    }
}

/// One row of the builtin registry.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RegistryEntry {
    pub kind: &'static str,
    pub params: &'static str,
    pub lie_dim: &'static str,
}

/// The builtin groups and their parameters.
pub fn registry() -> Vec<RegistryEntry> {
    let e = |kind, params, lie_dim| RegistryEntry { kind, params, lie_dim };
    vec![
        e("gl", "n in 1..=4", "n^2"),
        e("so3", "", "3"),
        e("sl2", "", "3"),
        e("heisenberg3", "", "3"),
        e("additive", "n >= 1", "n"),
        e("torus2", "", "2"),
        e("r_power", "J_size >= 1, supports (lists of <= 5 indices)", "J_size"),
        e("loop_group", "modes in 0..=3, target in {gl(n), so3, sl2, heisenberg3}", "(2*modes+1)*dim(target)"),
    ]
}

/// Builds a builtin group.
pub fn builtin_group(kind: &GroupKind) -> Result<FrolicherGroup> {
    match kind {
        GroupKind::Gl(n) => gl(*n),
        GroupKind::So3 => so3(),
        GroupKind::Sl2 => sl2(),
        GroupKind::Heisenberg3 => heisenberg3(),
        GroupKind::Additive(n) => additive(*n),
        GroupKind::Torus2 => torus2(),
        GroupKind::RPower(config) => r_power_group(config),
        GroupKind::Loop { modes, target } => loop_group(*modes, target),
    }
}

fn entry_functions(name: &str, arity: usize) -> Result<Vec<RealFunction>> {
    (0..arity).map(|i| RealFunction::coordinate(name, arity, i)).collect()
}

fn matrix_curves(name: &str, curves: Vec<Vec<Expr>>) -> Result<Vec<Curve>> {
    curves.into_iter().map(|c| Curve::from_exprs(name, c)).collect()
}

/// `I` with entries replaced as given, as expressions in `t`.
fn identity_with(n: usize, entries: &[(usize, Expr)]) -> Vec<Expr> {
    let mut m: Vec<Expr> = (0..n * n)
        .map(|k| Expr::constant(if k / n == k % n { 1.0 } else { 0.0 }))
        .collect();
    for (k, e) in entries {
        m[*k] = e.clone();
    }
    m
}

fn matrix_group(
    name: String,
    n: usize,
    membership: Membership,
    curves: Vec<Vec<Expr>>,
    chart: Chart,
) -> Result<FrolicherGroup> {
    let space = SpaceDescriptor::new(name.clone(), n * n, membership)?
        .with_functions(entry_functions(&name, n * n)?)?
        .with_curves(matrix_curves(&name, curves)?)?
        .with_chart(chart)?;
    let identity = Matrix::<f64>::identity(n).into_vec();
    FrolicherGroup::new(name, space, SmoothMap::new(MatMul(n)), SmoothMap::new(MatInv(n)), identity)
}

fn gl(n: usize) -> Result<FrolicherGroup> {
    if n == 0 || n > MAX_GL_N {
        return Err(Error::InvalidParameter(format!("gl(n) needs 1 <= n <= {MAX_GL_N}, got {n}")));
    }
    let membership: Membership = Arc::new(move |p: &[f64]| {
        Matrix::new(n, n, p.to_vec()).map(|m| m.det().abs() > 1e-12).unwrap_or(false)
    });
    let t = Expr::var(0);
    let curves = (0..n * n)
        .map(|k| {
            let e = if k / n == k % n { t.clone().exp() } else { t.clone() };
            identity_with(n, &[(k, e)])
        })
        .collect();
    let shift: Vec<f64> = Matrix::<f64>::identity(n).into_vec();
    let to = SmoothMap::from_exprs(n * n, (0..n * n).map(|k| Expr::var(k) + -shift[k]).collect())?;
    let from = SmoothMap::from_exprs(n * n, (0..n * n).map(|k| Expr::var(k) + shift[k]).collect())?;
    let chart = Chart::new(to, from, Arc::new(|_| true))?;
    Ok(matrix_group(format!("gl({n})"), n, membership, curves, chart)?.with_sample_radius(0.5 / n as f64))
}

fn so3() -> Result<FrolicherGroup> {
    let membership: Membership = Arc::new(|p: &[f64]| {
        let m = Matrix::square(p).expect("9 entries");
        m.transpose().matmul(&m).expect("square").max_abs_diff(&Matrix::identity(3)) <= DEFAULT_EQ_TOL
            && m.det() > 0.0
    });
    let (c, s) = (Expr::var(0).cos(), Expr::var(0).sin());
    let curves = vec![
        identity_with(3, &[(4, c.clone()), (5, -s.clone()), (7, s.clone()), (8, c.clone())]),
        identity_with(3, &[(0, c.clone()), (2, s.clone()), (6, -s.clone()), (8, c.clone())]),
        identity_with(3, &[(0, c.clone()), (1, -s.clone()), (3, s), (4, c)]),
    ];
    let domain: Membership = Arc::new(|p: &[f64]| (p[0] + p[4] + p[8] - 1.0) / 2.0 > -0.999);
    let chart = Chart::new(SmoothMap::new(So3Log), SmoothMap::new(So3Exp), domain)?;
    matrix_group("so3".into(), 3, membership, curves, chart)
}

fn sl2() -> Result<FrolicherGroup> {
    let membership: Membership = Arc::new(|p: &[f64]| (p[0] * p[3] - p[1] * p[2] - 1.0).abs() <= DEFAULT_EQ_TOL);
    let t = Expr::var(0);
    let curves = vec![
        identity_with(2, &[(0, t.clone().exp()), (3, (-t.clone()).exp())]),
        identity_with(2, &[(1, t.clone())]),
        identity_with(2, &[(2, t)]),
    ];
    let to = SmoothMap::from_exprs(4, vec![Expr::var(0) + -1.0, Expr::var(1), Expr::var(2)])?;
    let chart = Chart::new(to, SmoothMap::new(Sl2FromCoords), Arc::new(|p: &[f64]| p[0] > 1e-6))?;
    matrix_group("sl2".into(), 2, membership, curves, chart)
}

fn heisenberg3() -> Result<FrolicherGroup> {
    let tol = DEFAULT_EQ_TOL;
    let membership: Membership = Arc::new(move |p: &[f64]| {
        [0, 4, 8].iter().all(|&k| (p[k] - 1.0).abs() <= tol) && [3, 6, 7].iter().all(|&k| p[k].abs() <= tol)
    });
    let t = Expr::var(0);
    let curves = vec![
        identity_with(3, &[(1, t.clone())]),
        identity_with(3, &[(5, t.clone())]),
        identity_with(3, &[(2, t)]),
    ];
    let to = SmoothMap::select(9, vec![1, 5, 2])?;
    let c = |i| Expr::var(i);
    let from = SmoothMap::from_exprs(3, identity_with(3, &[(1, c(0)), (5, c(1)), (2, c(2))]))?;
    let chart = Chart::new(to, from, Arc::new(|_| true))?;
    matrix_group("heisenberg3".into(), 3, membership, curves, chart)
}

fn additive_maps(n: usize) -> Result<(SmoothMap, SmoothMap)> {
    let mul = SmoothMap::from_exprs(2 * n, (0..n).map(|i| Expr::var(i) + Expr::var(n + i)).collect())?;
    let inv = SmoothMap::from_exprs(n, (0..n).map(|i| -Expr::var(i)).collect())?;
    Ok((mul, inv))
}

fn additive(n: usize) -> Result<FrolicherGroup> {
    let space = euclidean(n)?;
    let (mul, inv) = additive_maps(n)?;
    FrolicherGroup::new(format!("additive({n})"), space, mul, inv, vec![0.0; n])
}

fn r_power_group(config: &RPowerConfig) -> Result<FrolicherGroup> {
    let (space, _) = r_power(config)?;
    let n = config.j_size;
    let (mul, inv) = additive_maps(n)?;
    FrolicherGroup::new(format!("r_power({n})"), space, mul, inv, vec![0.0; n])
}

fn torus2() -> Result<FrolicherGroup> {
    let name = "T2";
    let membership: Membership = Arc::new(|p: &[f64]| p.iter().all(|&x| (-PI..PI).contains(&x)));
    let th = |i| Expr::var(i);
    let functions = vec![
        RealFunction::from_expr(name, 2, th(0).cos())?,
        RealFunction::from_expr(name, 2, th(0).sin())?,
        RealFunction::from_expr(name, 2, th(1).cos())?,
        RealFunction::from_expr(name, 2, th(1).sin())?,
    ];
    let wrap = SmoothMap::new(Wrap { n: 2, op: WrapOp::Identity });
    let curves = vec![
        Curve::new(name, SmoothMap::from_exprs(1, vec![Expr::var(0), Expr::constant(0.0)])?.then(&wrap)?)?,
        Curve::new(name, SmoothMap::from_exprs(1, vec![Expr::constant(0.0), Expr::var(0)])?.then(&wrap)?)?,
    ];
    let domain: Membership = Arc::new(|p: &[f64]| p.iter().all(|x| x.abs() < PI - 1e-6));
    let chart = Chart::new(SmoothMap::identity(2), wrap, domain)?;
    let space = SpaceDescriptor::new(name, 2, membership)?
        .with_functions(functions)?
        .with_curves(curves)?
        .with_chart(chart)?;
    FrolicherGroup::new(
        "torus2",
        space,
        SmoothMap::new(Wrap { n: 2, op: WrapOp::Add }),
        SmoothMap::new(Wrap { n: 2, op: WrapOp::Neg }),
        vec![0.0, 0.0],
    )
}

/// Normalized Dirichlet kernel: the weight of node value `k` in the
/// trigonometric interpolant through `m` equally spaced nodes.
fn dirichlet(m: usize, u: f64) -> f64 {
    let half = (u / 2.0).sin();
    if half.abs() < 1e-14 {
        1.0
    } else {
        (m as f64 * u / 2.0).sin() / (m as f64 * half)
    }
}

/// Loops sampled at `2·modes + 1` equally spaced nodes, multiplied
/// pointwise.
fn loop_group(modes: usize, target_kind: &GroupKind) -> Result<FrolicherGroup> {
    if modes > MAX_LOOP_MODES {
        return Err(Error::InvalidParameter(format!("loop_group modes must be <= {MAX_LOOP_MODES}")));
    }
    if !target_kind.is_matrix_group() {
        return Err(Error::InvalidParameter("loop_group target must be a matrix group".into()));
    }
    let target = builtin_group(target_kind)?;
    let m = 2 * modes + 1;
    let d = target.point_arity();
    let n = m * d;
    let name = format!("loop_group({modes},{})", target.name());
    let nodes: Vec<f64> = (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect();

    let tspace = target.space().clone();
    let membership: Membership = Arc::new(move |p: &[f64]| p.chunks(d).all(|c| tspace.contains(c)));

    let mut functions = entry_functions(&name, n)?;
    for j in 0..m {
        let phi = nodes[j] + PI / m as f64;
        let weights: Vec<f64> = nodes.iter().map(|&th| dirichlet(m, phi - th)).collect();
        for e in 0..d {
            let sum = (0..m)
                .map(|k| Expr::var(k * d + e) * weights[k])
                .reduce(|a, b| a + b)
                .expect("at least one node");
            functions.push(RealFunction::from_expr(&name, n, sum)?);
        }
    }

    let e = target.identity().to_vec();
    let mut curves = Vec::new();
    for c in target.space().gen_curves() {
        for j in 0..m {
            let parts = (0..m)
                .map(|k| if k == j { c.map().clone() } else { SmoothMap::constant(1, e.clone()) })
                .collect();
            curves.push(Curve::new(&name, SmoothMap::concat(parts)?)?);
        }
        for wave in [f64::cos, f64::sin] {
            let parts = nodes
                .iter()
                .map(|&th| SmoothMap::from_exprs(1, vec![Expr::var(0) * wave(th)])?.then(c.map()))
                .collect::<Result<Vec<_>>>()?;
            curves.push(Curve::new(&name, SmoothMap::concat(parts)?)?);
        }
    }

    let tchart = target.chart().clone();
    let td = tchart.dim();
    let domain_chart = tchart.clone();
    let domain: Membership = Arc::new(move |p: &[f64]| p.chunks(d).all(|c| domain_chart.contains(c)));
    let pointwise = |map: &SmoothMap, operands| SmoothMap::new(Pointwise { copies: m, operands, map: map.clone() });
    let chart = Chart::new(pointwise(tchart.to_coords(), 1), pointwise(tchart.from_coords(), 1), domain)?;
    debug_assert_eq!(chart.dim(), m * td);

    let space = SpaceDescriptor::new(name.clone(), n, membership)?
        .with_functions(functions)?
        .with_curves(curves)?
        .with_chart(chart)?;
    let identity = e.repeat(m);
    FrolicherGroup::new(name, space, pointwise(target.mul_map(), 2), pointwise(target.inv_map(), 1), identity)
        .map(|g| g.with_sample_radius(target.sample_radius))
}

/// The homomorphism `heisenberg3 → additive(2)` forgetting the centre.
pub fn heisenberg_center_quotient() -> Result<SmoothMap> {
    SmoothMap::select(9, vec![1, 5])
}
