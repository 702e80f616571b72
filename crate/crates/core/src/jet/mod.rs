//! Truncated bivariate jets.
//!
//! A [`Jet2`] is an element `v + a·σ + b·τ + c·στ` of the ring
//! `ℝ[σ,τ]/(σ², τ²)`. Seeding one argument of a program with `σ` and another
//! with `τ` and evaluating the program over this ring yields, in the `στ`
//! coefficient, the exact mixed partial `∂²/∂s∂t` at the seed point.

mod dual;
mod matrix;

pub use dual::{Dual, HyperDual};
pub use matrix::{Jet2Matrix, Matrix};

use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Second-order bivariate jet: value, `∂/∂s`, `∂/∂t` and `∂²/∂s∂t`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2 {
    pub val: f64,
    pub ds: f64,
    pub dt: f64,
    pub dst: f64,
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Jet2 = Jet2::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(val: f64, ds: f64, dt: f64, dst: f64) -> Self {
        Self { val, ds, dt, dst }
    }

    pub const fn constant(val: f64) -> Self {
        Self::new(val, 0.0, 0.0, 0.0)
    }

    /// `val + σ`: the seed for the first parameter.
    pub const fn seed_s(val: f64) -> Self {
        Self::new(val, 1.0, 0.0, 0.0)
    }

    /// `val + τ`: the seed for the second parameter.
    pub const fn seed_t(val: f64) -> Self {
        Self::new(val, 0.0, 1.0, 0.0)
    }

    /// `val + σ + τ`: both seeds on one parameter, so `dst` is the second
    /// derivative of a one-parameter program.
    pub const fn seed_both(val: f64) -> Self {
        Self::new(val, 1.0, 1.0, 0.0)
    }

    /// The nilpotent part `self - val`.
    pub fn nilpotent(self) -> Self {
        Self::new(0.0, self.ds, self.dt, self.dst)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.val, k * self.ds, k * self.dt, k * self.dst)
    }

    /// Composes a scalar function with this jet given `f(v)`, `f'(v)` and
    /// `f''(v)`. Only the `n²` cross term `2·ds·dt` survives in `στ`.
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self::new(
            f0,
            f1 * self.ds,
            f1 * self.dt,
            f1 * self.dst + f2 * self.ds * self.dt,
        )
    }

    /// `1/a` through the terminating expansion `v⁻¹(1 − n/v + (n/v)²)`.
    pub fn invert(self) -> Result<Self> {
        if self.val == 0.0 {
            return Err(Error::ZeroValuePart);
        }
        let r = 1.0 / self.val;
        let q = self.nilpotent().scale(r);
        let series = Jet2::ONE - q + q * q;
        Ok(series.scale(r))
    }

    pub fn div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.invert()?)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.val.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Result<Self> {
        if !(self.val > 0.0) {
            return Err(Error::Domain { op: "log", value: self.val });
        }
        let r = 1.0 / self.val;
        Ok(self.chain(self.val.ln(), r, -r * r))
    }

    pub fn sqrt(self) -> Result<Self> {
        if !(self.val > 0.0) {
            return Err(Error::Domain { op: "sqrt", value: self.val });
        }
        let s = self.val.sqrt();
        Ok(self.chain(s, 0.5 / s, -0.25 / (s * self.val)))
    }

    /// Real power `a^p`. Non-integer exponents need a positive value part.
    pub fn powf(self, p: f64) -> Result<Self> {
        let v = self.val;
        if p == 0.0 {
            return Ok(Jet2::ONE);
        }
        let integral = p.fract() == 0.0;
        if !integral && !(v > 0.0) {
            return Err(Error::Domain { op: "pow", value: v });
        }
        if integral && p < 0.0 && v == 0.0 {
            return Err(Error::Domain { op: "pow", value: v });
        }
        let f1 = if p == 1.0 { 1.0 } else { p * v.powf(p - 1.0) };
        let f2 = if p == 1.0 {
            0.0
        } else if p == 2.0 {
            2.0
        } else {
            p * (p - 1.0) * v.powf(p - 2.0)
        };
        Ok(self.chain(v.powf(p), f1, f2))
    }

    /// `atan2(self, x)`; see [`crate::smooth::Scalar::atan2`] for the
    /// rotation identity used.
    pub fn atan2(self, x: Self) -> Result<Self> {
        atan2_by_rotation(self, x)
    }

    /// `|a|` with derivative sign taken as `+1` at zero (one-sided).
    pub fn abs(self) -> Self {
        if self.val < 0.0 {
            -self
        } else {
            self
        }
    }
}

/// `atan2(y, x)` for scalars whose nilpotent part cubes to zero.
///
/// Rotating `(x, y)` by the value-part angle `θ₀` gives `(x', y')` with
/// `y'` nilpotent; `atan(u) = u + O(u³)` then makes `θ₀ + y'/x'` exact.
pub(crate) fn atan2_by_rotation<S: crate::smooth::Scalar>(y: S, x: S) -> Result<S> {
    let (yv, xv) = (y.value(), x.value());
    if xv == 0.0 && yv == 0.0 {
        return Err(Error::Domain { op: "atan2", value: 0.0 });
    }
    let theta = yv.atan2(xv);
    let (s, c) = theta.sin_cos();
    let xr = x.scale(c) + y.scale(s);
    let yr = y.scale(c) - x.scale(s);
    let u = yr.div(xr)?;
    Ok(S::from_f64(theta) + u.nilpotent_part())
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, b: Jet2) -> Jet2 {
        Jet2::new(self.val + b.val, self.ds + b.ds, self.dt + b.dt, self.dst + b.dst)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, b: Jet2) -> Jet2 {
        Jet2::new(self.val - b.val, self.ds - b.ds, self.dt - b.dt, self.dst - b.dst)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, b: Jet2) -> Jet2 {
        let a = self;
        Jet2::new(
            a.val * b.val,
            a.val * b.ds + a.ds * b.val,
            a.val * b.dt + a.dt * b.val,
            (a.val * b.dst + a.dst * b.val) + (a.ds * b.dt + a.dt * b.ds),
        )
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        self.scale(k)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.val, -self.ds, -self.dt, -self.dst)
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, b: Jet2) {
        *self = *self + b;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, b: Jet2) {
        *self = *self - b;
    }
}

impl MulAssign for Jet2 {
    fn mul_assign(&mut self, b: Jet2) {
        *self = *self * b;
    }
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Jet2::constant(v)
    }
}
