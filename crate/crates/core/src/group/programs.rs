use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jet::Matrix;
use crate::smooth::{GenericProgram, Scalar, SmoothMap};

/// Below this value of `θ²` (or `sin²θ`) the rotation formulas switch to
/// their power series.
pub const SERIES_SWITCH: f64 = 1e-6;

/// `(A, B) ↦ AB` on flattened `n×n` matrices.
pub(crate) struct MatMul(pub usize);

impl GenericProgram for MatMul {
    fn arity_in(&self) -> usize {
        2 * self.0 * self.0
    }

    fn arity_out(&self) -> usize {
        self.0 * self.0
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        let m = self.0 * self.0;
        let a = Matrix::new(self.0, self.0, x[..m].to_vec())?;
        let b = Matrix::new(self.0, self.0, x[m..].to_vec())?;
        Ok(a.matmul(&b)?.into_vec())
    }
}

/// `A ↦ A⁻¹` on flattened `n×n` matrices.
pub(crate) struct MatInv(pub usize);

impl GenericProgram for MatInv {
    fn arity_in(&self) -> usize {
        self.0 * self.0
    }

    fn arity_out(&self) -> usize {
        self.0 * self.0
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        Ok(Matrix::new(self.0, self.0, x.to_vec())?.inverse()?.into_vec())
    }
}

/// Shifts a value by the multiple of `2π` that brings its value part into
/// `[−π, π)`.
pub(crate) fn wrap_angle<S: Scalar>(x: S) -> S {
    let k = ((x.value() + PI) / (2.0 * PI)).floor();
    if k == 0.0 {
        x
    } else {
        x - S::from_f64(2.0 * PI * k)
    }
}

/// Componentwise `x ↦ wrap(x)`, optionally after adding two operands.
pub(crate) struct Wrap {
    pub n: usize,
    pub op: WrapOp,
}

#[derive(Clone, Copy)]
pub(crate) enum WrapOp {
    Identity,
    Add,
    Neg,
}

impl GenericProgram for Wrap {
    fn arity_in(&self) -> usize {
        match self.op {
            WrapOp::Add => 2 * self.n,
            _ => self.n,
        }
    }

    fn arity_out(&self) -> usize {
        self.n
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        Ok((0..self.n)
            .map(|i| {
                wrap_angle(match self.op {
                    WrapOp::Identity => x[i],
                    WrapOp::Add => x[i] + x[self.n + i],
                    WrapOp::Neg => -x[i],
                })
            })
            .collect())
    }
}

fn hat<S: Scalar>(w: &[S]) -> Matrix<S> {
    let z = S::zero();
    Matrix::square(&[z, -w[2], w[1], w[2], z, -w[0], -w[1], w[0], z]).expect("3x3")
}

/// `ω ↦ exp(ω̂)` by Rodrigues' formula.
pub(crate) struct So3Exp;

impl GenericProgram for So3Exp {
    fn arity_in(&self) -> usize {
        3
    }

    fn arity_out(&self) -> usize {
        9
    }

    fn apply<S: Scalar>(&self, w: &[S]) -> Result<Vec<S>> {
        let x = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
        let (a, b) = if x.value() < SERIES_SWITCH {
            // sin θ/θ and (1 − cos θ)/θ² in powers of θ²
            let x2 = x * x;
            let x3 = x2 * x;
            (
                S::one() - x.scale(1.0 / 6.0) + x2.scale(1.0 / 120.0) - x3.scale(1.0 / 5040.0),
                S::from_f64(0.5) - x.scale(1.0 / 24.0) + x2.scale(1.0 / 720.0) - x3.scale(1.0 / 40320.0),
            )
        } else {
            let th = x.sqrt()?;
            (th.sin().div(th)?, (S::one() - th.cos()).div(x)?)
        };
        let k = hat(w);
        let k2 = k.matmul(&k)?;
        Ok(Matrix::identity(3).add(&k.scale_by(a)).add(&k2.scale_by(b)).into_vec())
    }
}

/// `R ↦ log(R)` in skew coordinates; fails near rotations by `π`.
pub(crate) struct So3Log;

impl GenericProgram for So3Log {
    fn arity_in(&self) -> usize {
        9
    }

    fn arity_out(&self) -> usize {
        3
    }

    fn apply<S: Scalar>(&self, r: &[S]) -> Result<Vec<S>> {
        let v = [
            (r[7] - r[5]).scale(0.5),
            (r[2] - r[6]).scale(0.5),
            (r[3] - r[1]).scale(0.5),
        ];
        let c = (r[0] + r[4] + r[8] - S::one()).scale(0.5);
        let y = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        let ratio = if y.value() < SERIES_SWITCH {
            if c.value() <= 0.0 {
                return Err(Error::ChartDomain("so3".into()));
            }
            // asin(√y)/√y
            let y2 = y * y;
            S::one()
                + y.scale(1.0 / 6.0)
                + y2.scale(3.0 / 40.0)
                + (y2 * y).scale(5.0 / 112.0)
                + (y2 * y2).scale(35.0 / 1152.0)
        } else {
            let s = y.sqrt()?;
            s.atan2(c)?.div(s)?
        };
        Ok(v.iter().map(|&vi| ratio * vi).collect())
    }
}

/// sl2 chart inverse `(a − 1, b, c) ↦ [[a, b], [c, (1 + bc)/a]]`.
pub(crate) struct Sl2FromCoords;

impl GenericProgram for Sl2FromCoords {
    fn arity_in(&self) -> usize {
        3
    }

    fn arity_out(&self) -> usize {
        4
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        let a = x[0] + S::one();
        Ok(vec![a, x[1], x[2], (S::one() + x[1] * x[2]).div(a)?])
    }
}

/// Applies `map` independently on `copies` blocks. The input holds
/// `operands` consecutive groups of `copies` blocks each.
pub(crate) struct Pointwise {
    pub copies: usize,
    pub operands: usize,
    pub map: SmoothMap,
}

impl GenericProgram for Pointwise {
    fn arity_in(&self) -> usize {
        self.copies * self.map.arity_in()
    }

    fn arity_out(&self) -> usize {
        self.copies * self.map.arity_out()
    }

    fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        let d = self.map.arity_in() / self.operands;
        let stride = self.copies * d;
        let mut out = Vec::with_capacity(GenericProgram::arity_out(self));
        let mut args = Vec::with_capacity(self.map.arity_in());
        for k in 0..self.copies {
            args.clear();
            for o in 0..self.operands {
                args.extend_from_slice(&x[o * stride + k * d..o * stride + (k + 1) * d]);
            }
            out.extend(self.map.eval(&args)?);
        }
        Ok(out)
    }
}

trait ScaleBy<S> {
    fn scale_by(&self, k: S) -> Self;
}

impl<S: Scalar> ScaleBy<S> for Matrix<S> {
    fn scale_by(&self, k: S) -> Self {
        Matrix::from_fn(self.rows(), self.cols(), |i, j| k * self.get(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet2;

    #[test]
    fn so3_exp_and_log_are_inverse() {
        let exp = SmoothMap::new(So3Exp);
        let log = SmoothMap::new(So3Log);
        for w in [[0.0, 0.0, 0.0], [1e-5, -2e-5, 3e-6], [0.3, -0.2, 0.5], [1.2, 0.9, -1.0]] {
            let r = exp.eval(&w).unwrap();
            let m = Matrix::square(&r).unwrap();
            assert!(m.transpose().matmul(&m).unwrap().max_abs_diff(&Matrix::identity(3)) < 1e-14);
            let back = log.eval(&r).unwrap();
            for (a, b) in w.iter().zip(&back) {
                assert!((a - b).abs() < 1e-13, "{w:?} -> {back:?}");
            }
        }
        let flip = exp.eval(&[PI, 0.0, 0.0]).unwrap();
        assert!(matches!(log.eval(&flip), Err(Error::ChartDomain(_))));
    }

    #[test]
    fn series_branch_has_exact_jets_at_zero() {
        let exp = SmoothMap::new(So3Exp);
        let w = [Jet2::seed_s(0.0), Jet2::seed_t(0.0), Jet2::ZERO];
        let r = exp.eval(&w).unwrap();
        // d/ds exp = hat(e1), d/dt = hat(e2), d²/dsdt = (hat e1 hat e2 + hat e2 hat e1)/2
        assert_eq!(r[7].ds, 1.0);
        assert_eq!(r[2].dt, 1.0);
        assert_eq!(r[1].dst, 0.5);
        assert_eq!(r[3].dst, 0.5);
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_angle(0.5f64), 0.5);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(-PI - 0.1) - (PI - 0.1)).abs() < 1e-15);
        let j = wrap_angle(Jet2::new(4.0, 1.0, 2.0, 3.0));
        assert_eq!((j.ds, j.dt, j.dst), (1.0, 2.0, 3.0));
    }
}
