use std::ops::{Add, Mul, Neg, Sub};

/// First-order dual number `re + eps·ε` with `ε² = 0`, generic over its
/// coefficient ring.
///
/// Nesting gives [`HyperDual`], an arithmetic for mixed partials that shares
/// no code with [`super::Jet2`] and serves as an independent oracle for it.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dual<S> {
    pub re: S,
    pub eps: S,
}

/// `Dual<Dual<f64>>`: outer `ε₁` over inner `ε₂`; the mixed partial lives in
/// `.eps.eps`.
pub type HyperDual = Dual<Dual<f64>>;

impl<S> Dual<S> {
    pub const fn new(re: S, eps: S) -> Self {
        Self { re, eps }
    }
}

impl<S: Copy + Add<Output = S>> Add for Dual<S> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Dual::new(self.re + b.re, self.eps + b.eps)
    }
}

impl<S: Copy + Sub<Output = S>> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Dual::new(self.re - b.re, self.eps - b.eps)
    }
}

impl<S: Copy + Add<Output = S> + Mul<Output = S>> Mul for Dual<S> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Dual::new(self.re * b.re, self.re * b.eps + self.eps * b.re)
    }
}

impl<S: Copy + Neg<Output = S>> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}
