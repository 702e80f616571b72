use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::smooth::Scalar;

#[derive(Debug)]
enum Node {
    Var(usize),
    Const(f64),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Neg(Expr),
    Recip(Expr),
    Sin(Expr),
    Cos(Expr),
    Exp(Expr),
    Ln(Expr),
    Sqrt(Expr),
    Powf(Expr, f64),
    Atan2(Expr, Expr),
    Abs(Expr),
}

/// Closed-form scalar expression over numbered variables.
///
/// Cheap to clone; subexpressions are shared.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn node(n: Node) -> Self {
        Expr(Arc::new(n))
    }

    pub fn var(i: usize) -> Self {
        Self::node(Node::Var(i))
    }

    pub fn constant(c: f64) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn recip(self) -> Self {
        Self::node(Node::Recip(self))
    }

    pub fn sin(self) -> Self {
        Self::node(Node::Sin(self))
    }

    pub fn cos(self) -> Self {
        Self::node(Node::Cos(self))
    }

    pub fn exp(self) -> Self {
        Self::node(Node::Exp(self))
    }

    pub fn ln(self) -> Self {
        Self::node(Node::Ln(self))
    }

    pub fn sqrt(self) -> Self {
        Self::node(Node::Sqrt(self))
    }

    pub fn powf(self, p: f64) -> Self {
        Self::node(Node::Powf(self, p))
    }

    pub fn atan2(self, x: Expr) -> Self {
        Self::node(Node::Atan2(self, x))
    }

    pub fn abs(self) -> Self {
        Self::node(Node::Abs(self))
    }

    pub fn square(self) -> Self {
        self.clone() * self
    }

    /// One more than the largest variable index, or 0 for a closed term.
    pub fn arity(&self) -> usize {
        match &*self.0 {
            Node::Var(i) => i + 1,
            Node::Const(_) => 0,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Atan2(a, b) => {
                a.arity().max(b.arity())
            }
            Node::Neg(a)
            | Node::Recip(a)
            | Node::Sin(a)
            | Node::Cos(a)
            | Node::Exp(a)
            | Node::Ln(a)
            | Node::Sqrt(a)
            | Node::Powf(a, _)
            | Node::Abs(a) => a.arity(),
        }
    }

    pub fn depth(&self) -> usize {
        match &*self.0 {
            Node::Var(_) | Node::Const(_) => 0,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Atan2(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Node::Neg(a)
            | Node::Recip(a)
            | Node::Sin(a)
            | Node::Cos(a)
            | Node::Exp(a)
            | Node::Ln(a)
            | Node::Sqrt(a)
            | Node::Powf(a, _)
            | Node::Abs(a) => 1 + a.depth(),
        }
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> Result<S> {
        Ok(match &*self.0 {
            Node::Var(i) => *x
                .get(*i)
                .ok_or(Error::ArityMismatch { expected: i + 1, got: x.len() })?,
            Node::Const(c) => S::from_f64(*c),
            Node::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Node::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Node::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Node::Neg(a) => -a.eval(x)?,
            Node::Recip(a) => a.eval(x)?.recip()?,
            Node::Sin(a) => a.eval(x)?.sin(),
            Node::Cos(a) => a.eval(x)?.cos(),
            Node::Exp(a) => a.eval(x)?.exp(),
            Node::Ln(a) => a.eval(x)?.ln()?,
            Node::Sqrt(a) => a.eval(x)?.sqrt()?,
            Node::Powf(a, p) => a.eval(x)?.powf(*p)?,
            Node::Atan2(y, xx) => y.eval(x)?.atan2(xx.eval(x)?)?,
            Node::Abs(a) => a.eval(x)?.abs(),
        })
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Var(i) => write!(f, "x{i}"),
            Node::Const(c) => write!(f, "{c}"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Neg(a) => write!(f, "-{a}"),
            Node::Recip(a) => write!(f, "1/{a}"),
            Node::Sin(a) => write!(f, "sin({a})"),
            Node::Cos(a) => write!(f, "cos({a})"),
            Node::Exp(a) => write!(f, "exp({a})"),
            Node::Ln(a) => write!(f, "log({a})"),
            Node::Sqrt(a) => write!(f, "sqrt({a})"),
            Node::Powf(a, p) => write!(f, "{a}^{p}"),
            Node::Atan2(y, x) => write!(f, "atan2({y}, {x})"),
            Node::Abs(a) => write!(f, "|{a}|"),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, b: Expr) -> Expr {
        Expr::node(Node::Add(self, b))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, b: Expr) -> Expr {
        Expr::node(Node::Sub(self, b))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, b: Expr) -> Expr {
        Expr::node(Node::Mul(self, b))
    }
}

impl Mul<f64> for Expr {
    type Output = Expr;
    fn mul(self, k: f64) -> Expr {
        Expr::node(Node::Mul(Expr::constant(k), self))
    }
}

impl Add<f64> for Expr {
    type Output = Expr;
    fn add(self, k: f64) -> Expr {
        Expr::node(Node::Add(self, Expr::constant(k)))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::node(Node::Neg(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet2;

    #[test]
    fn arity_and_depth() {
        let e = (Expr::var(0) * Expr::var(2)).sin() + Expr::constant(1.0);
        assert_eq!(e.arity(), 3);
        assert_eq!(e.depth(), 3);
        assert_eq!(Expr::constant(2.0).arity(), 0);
    }

    #[test]
    fn real_eval_is_value_of_jet_eval() {
        let e = (Expr::var(0).exp() * Expr::var(1).cos()).atan2(Expr::var(1).square() + 1.0)
            + (Expr::var(0).square() + 2.0).ln().sqrt();
        let x = [0.3, -0.8];
        let r = e.eval(&x).unwrap();
        let j = e.eval(&[Jet2::seed_s(0.3), Jet2::seed_t(-0.8)]).unwrap();
        assert_eq!(r, j.val);
    }

    #[test]
    fn domain_errors_propagate() {
        let e = Expr::var(0).ln();
        assert!(e.eval(&[-1.0]).is_err());
        assert!(Expr::var(3).eval(&[1.0]).is_err());
    }
}
