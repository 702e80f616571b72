use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::jet::{atan2_by_rotation, Dual, Jet2, Matrix};
use crate::smooth::Program;

/// Evaluation contract for scalar-generic programs.
///
/// Implemented by `f64`, [`Jet2`], `Dual<f64>` and [`crate::jet::HyperDual`].
/// Evaluating a program over plain reals gives exactly the value part of
/// its evaluation over any of the nilpotent extensions.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;

    /// Real value part.
    fn value(&self) -> f64;

    /// `self − value`.
    fn nilpotent_part(self) -> Self;

    fn scale(self, k: f64) -> Self;

    fn recip(self) -> Result<Self>;

    fn sin(self) -> Self;

    fn cos(self) -> Self;

    fn exp(self) -> Self;

    fn ln(self) -> Result<Self>;

    fn sqrt(self) -> Result<Self>;

    fn powf(self, p: f64) -> Result<Self>;

    /// Absolute value; derivative sign is `+1` at zero.
    fn abs(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.recip()?)
    }

    /// `atan2(self, x)`.
    fn atan2(self, x: Self) -> Result<Self> {
        atan2_by_rotation(self, x)
    }

    fn invert_matrix(m: &Matrix<Self>) -> Result<Matrix<Self>> {
        m.gauss_jordan_inverse()
    }

    #[doc(hidden)]
    fn run(p: &dyn Program, x: &[Self]) -> Result<Vec<Self>>;
}

fn check_pow(v: f64, p: f64) -> Result<()> {
    let integral = p.fract() == 0.0;
    if (!integral && !(v > 0.0)) || (integral && p < 0.0 && v == 0.0) {
        return Err(Error::Domain { op: "pow", value: v });
    }
    Ok(())
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }

    fn value(&self) -> f64 {
        *self
    }

    fn nilpotent_part(self) -> Self {
        0.0
    }

    fn scale(self, k: f64) -> Self {
        k * self
    }

    fn recip(self) -> Result<Self> {
        if self == 0.0 {
            return Err(Error::ZeroValuePart);
        }
        Ok(1.0 / self)
    }

    fn sin(self) -> Self {
        f64::sin(self)
    }

    fn cos(self) -> Self {
        f64::cos(self)
    }

    fn exp(self) -> Self {
        f64::exp(self)
    }

    fn ln(self) -> Result<Self> {
        if !(self > 0.0) {
            return Err(Error::Domain { op: "log", value: self });
        }
        Ok(f64::ln(self))
    }

    fn sqrt(self) -> Result<Self> {
        if !(self > 0.0) {
            return Err(Error::Domain { op: "sqrt", value: self });
        }
        Ok(f64::sqrt(self))
    }

    fn powf(self, p: f64) -> Result<Self> {
        if p == 0.0 {
            return Ok(1.0);
        }
        check_pow(self, p)?;
        Ok(f64::powf(self, p))
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn atan2(self, x: Self) -> Result<Self> {
        if self == 0.0 && x == 0.0 {
            return Err(Error::Domain { op: "atan2", value: 0.0 });
        }
        Ok(f64::atan2(self, x))
    }

    fn run(p: &dyn Program, x: &[Self]) -> Result<Vec<Self>> {
        p.eval_f64(x)
    }
}

impl Scalar for Jet2 {
    fn from_f64(v: f64) -> Self {
        Jet2::constant(v)
    }

    fn value(&self) -> f64 {
        self.val
    }

    fn nilpotent_part(self) -> Self {
        self.nilpotent()
    }

    fn scale(self, k: f64) -> Self {
        Jet2::scale(self, k)
    }

    fn recip(self) -> Result<Self> {
        self.invert()
    }

    fn sin(self) -> Self {
        Jet2::sin(self)
    }

    fn cos(self) -> Self {
        Jet2::cos(self)
    }

    fn exp(self) -> Self {
        Jet2::exp(self)
    }

    fn ln(self) -> Result<Self> {
        Jet2::ln(self)
    }

    fn sqrt(self) -> Result<Self> {
        Jet2::sqrt(self)
    }

    fn powf(self, p: f64) -> Result<Self> {
        Jet2::powf(self, p)
    }

    fn abs(self) -> Self {
        Jet2::abs(self)
    }

    fn invert_matrix(m: &Matrix<Self>) -> Result<Matrix<Self>> {
        m.invert_nilpotent()
    }

    fn run(p: &dyn Program, x: &[Self]) -> Result<Vec<Self>> {
        p.eval_jet(x)
    }
}

/// Coefficient rings that may sit under a [`Dual`].
#[doc(hidden)]
pub trait DualBase: Scalar {
    fn run_dual(p: &dyn Program, x: &[Dual<Self>]) -> Result<Vec<Dual<Self>>>;
}

impl DualBase for f64 {
    fn run_dual(p: &dyn Program, x: &[Dual<f64>]) -> Result<Vec<Dual<f64>>> {
        p.eval_dual(x)
    }
}

impl DualBase for Dual<f64> {
    fn run_dual(p: &dyn Program, x: &[Dual<Dual<f64>>]) -> Result<Vec<Dual<Dual<f64>>>> {
        p.eval_hyper(x)
    }
}

impl<S: DualBase> Scalar for Dual<S> {
    fn from_f64(v: f64) -> Self {
        Dual::new(S::from_f64(v), S::zero())
    }

    fn value(&self) -> f64 {
        self.re.value()
    }

    fn nilpotent_part(self) -> Self {
        Dual::new(self.re.nilpotent_part(), self.eps)
    }

    fn scale(self, k: f64) -> Self {
        Dual::new(self.re.scale(k), self.eps.scale(k))
    }

    fn recip(self) -> Result<Self> {
        let r = self.re.recip()?;
        Ok(Dual::new(r, -(self.eps * r * r)))
    }

    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.eps * self.re.cos())
    }

    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.eps * self.re.sin()))
    }

    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual::new(e, self.eps * e)
    }

    fn ln(self) -> Result<Self> {
        Ok(Dual::new(self.re.ln()?, self.eps.div(self.re)?))
    }

    fn sqrt(self) -> Result<Self> {
        let s = self.re.sqrt()?;
        Ok(Dual::new(s, self.eps.div(s.scale(2.0))?))
    }

    fn powf(self, p: f64) -> Result<Self> {
        if p == 0.0 {
            return Ok(Self::one());
        }
        if p == 1.0 {
            return Ok(self);
        }
        check_pow(self.value(), p)?;
        let d = self.re.powf(p - 1.0)?;
        Ok(Dual::new(self.re.powf(p)?, self.eps * d.scale(p)))
    }

    fn abs(self) -> Self {
        if self.value() < 0.0 {
            -self
        } else {
            self
        }
    }

    fn run(p: &dyn Program, x: &[Self]) -> Result<Vec<Self>> {
        S::run_dual(p, x)
    }
}

/// Lifts real constants into any scalar ring.
pub fn lift<S: Scalar>(xs: &[f64]) -> Vec<S> {
    xs.iter().map(|&x| S::from_f64(x)).collect()
}

/// Value parts of a scalar slice.
pub fn values<S: Scalar>(xs: &[S]) -> Vec<f64> {
    xs.iter().map(Scalar::value).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::HyperDual;

    fn hyper(v: f64, ds: f64, dt: f64) -> HyperDual {
        Dual::new(Dual::new(v, dt), Dual::new(ds, 0.0))
    }

    #[test]
    fn hyperdual_agrees_with_jet_on_elementaries() {
        let j = Jet2::new(0.7, 1.0, 1.0, 0.0);
        let h = hyper(0.7, 1.0, 1.0);
        let pairs: [(Jet2, HyperDual); 5] = [
            (j.sin(), Scalar::sin(h)),
            (j.exp() * j.cos(), Scalar::exp(h) * Scalar::cos(h)),
            (j.ln().unwrap(), Scalar::ln(h).unwrap()),
            (j.sqrt().unwrap(), Scalar::sqrt(h).unwrap()),
            (j.powf(2.5).unwrap(), Scalar::powf(h, 2.5).unwrap()),
        ];
        for (a, b) in pairs {
            assert!((a.val - b.re.re).abs() < 1e-14);
            assert!((a.ds - b.eps.re).abs() < 1e-14);
            assert!((a.dt - b.re.eps).abs() < 1e-14);
            assert!((a.dst - b.eps.eps).abs() < 1e-13);
        }
    }

    #[test]
    fn atan2_generic_on_hyperdual() {
        let y = hyper(0.4, 1.0, 0.0);
        let x = hyper(1.2, 0.0, 1.0);
        let a = y.atan2(x).unwrap();
        let j = Jet2::seed_s(0.4).atan2(Jet2::seed_t(1.2)).unwrap();
        assert!((a.re.re - j.val).abs() < 1e-15);
        assert!((a.eps.eps - j.dst).abs() < 1e-14);
    }

    #[test]
    fn real_domain_errors_match_jets() {
        assert_eq!(Scalar::recip(0.0f64), Err(Error::ZeroValuePart));
        assert!(Scalar::ln(-1.0f64).is_err());
        assert!(Scalar::sqrt(0.0f64).is_err());
        assert!(Scalar::powf(-1.0f64, 0.5).is_err());
        assert_eq!(Scalar::powf(-2.0f64, 3.0).unwrap(), -8.0);
    }
}
