//! Second-order forward-mode differentiation.
//!
//! [`Jet2`] carries a value, its gradient and its (symmetric) Hessian with
//! respect to a fixed list of active variables. It is generic over the
//! [`Scalar`] it is built on, so `Jet2<Jet2<f64>>` differentiates twice more:
//! the outer Hessian entries are themselves jets, which is how curvature of a
//! metric derived from a Kähler potential (fourth derivatives) is obtained.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::dsl::{eval_generic, Expr};
use crate::error::{GeoError, Result};

/// Number-like types the expression evaluator can run on.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when the type carries derivatives (domain rules are stricter).
    const DIFFERENTIABLE: bool;

    fn constant(v: f64) -> Self;
    /// The underlying real value, used for domain checks.
    fn primal(&self) -> f64;
    fn scale(&self, k: f64) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tan(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn tanh(&self) -> Self;
    fn atan(&self) -> Self;
    /// Every component finite.
    fn is_finite(&self) -> bool;
}

impl Scalar for f64 {
    const DIFFERENTIABLE: bool = false;

    fn constant(v: f64) -> Self {
        v
    }
    fn primal(&self) -> f64 {
        *self
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn tan(&self) -> Self {
        f64::tan(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn tanh(&self) -> Self {
        f64::tanh(*self)
    }
    fn atan(&self) -> Self {
        f64::atan(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Value, gradient and Hessian of a function of `n` variables.
///
/// An empty gradient marks a constant (zero gradient and Hessian of any
/// length); a non-empty gradient with an empty Hessian has zero Hessian.
/// The Hessian is stored dense, row-major, and is exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2<T = f64> {
    pub value: T,
    pub gradient: Vec<T>,
    pub hessian: Vec<T>,
}

fn zero<T: Scalar>() -> T {
    T::constant(0.0)
}

impl<T: Scalar> Jet2<T> {
    pub fn from_value(value: T) -> Self {
        Self {
            value,
            gradient: Vec::new(),
            hessian: Vec::new(),
        }
    }

    /// Number of active variables, 0 for an unseeded constant.
    pub fn nvars(&self) -> usize {
        self.gradient.len()
    }

    pub fn grad(&self, i: usize) -> T {
        self.gradient.get(i).cloned().unwrap_or_else(zero)
    }

    pub fn hess(&self, i: usize, j: usize) -> T {
        let n = self.gradient.len();
        if self.hessian.is_empty() {
            zero()
        } else {
            self.hessian[i * n + j].clone()
        }
    }

    /// Builds a jet from the upper triangle of a Hessian rule `h(i, j)`,
    /// mirroring it so the stored matrix is exactly symmetric.
    fn assemble(value: T, gradient: Vec<T>, h: impl Fn(usize, usize) -> T) -> Self {
        let n = gradient.len();
        let mut hessian = vec![zero::<T>(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = h(i, j);
                hessian[j * n + i] = v.clone();
                hessian[i * n + j] = v;
            }
        }
        Self {
            value,
            gradient,
            hessian,
        }
    }

    fn common_n(a: &Self, b: &Self) -> usize {
        let (na, nb) = (a.nvars(), b.nvars());
        debug_assert!(na == 0 || nb == 0 || na == nb, "jets over different variable sets");
        na.max(nb)
    }

    /// Applies a smooth unary function given its value and first two
    /// derivatives at `self.value`.
    pub fn chain(&self, f: T, df: T, d2f: T) -> Self {
        let n = self.nvars();
        if n == 0 {
            return Self::from_value(f);
        }
        let gradient = (0..n).map(|i| df.clone() * self.grad(i)).collect();
        Self::assemble(f, gradient, |i, j| {
            df.clone() * self.hess(i, j) + d2f.clone() * (self.grad(i) * self.grad(j))
        })
    }
}

/// Seeds variable `index` of `point`: value `point[index]`, unit gradient,
/// zero Hessian.
pub fn seed(point: &[f64], index: usize) -> Result<Jet2<f64>> {
    seed_generic(point, index)
}

/// Seeds variable `index` for an arbitrary scalar. For `Jet2<Jet2<f64>>` the
/// inner value is itself seeded on the same variable set.
pub fn seed_generic<T: Seedable>(point: &[f64], index: usize) -> Result<Jet2<T>> {
    if index >= point.len() {
        return Err(GeoError::SeedIndex {
            index,
            len: point.len(),
        });
    }
    let n = point.len();
    let gradient = (0..n)
        .map(|i| T::constant(if i == index { 1.0 } else { 0.0 }))
        .collect();
    Ok(Jet2 {
        value: T::seeded(point, index)?,
        gradient,
        hessian: vec![T::constant(0.0); n * n],
    })
}

/// Scalars that can stand for coordinate `index` of a point.
pub trait Seedable: Scalar {
    fn seeded(point: &[f64], index: usize) -> Result<Self>;
}

impl Seedable for f64 {
    fn seeded(point: &[f64], index: usize) -> Result<Self> {
        Ok(point[index])
    }
}

impl<T: Seedable> Seedable for Jet2<T> {
    fn seeded(point: &[f64], index: usize) -> Result<Self> {
        seed_generic(point, index)
    }
}

impl<T: Scalar> Add for Jet2<T> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let n = Self::common_n(&self, &b);
        if n == 0 {
            return Self::from_value(self.value + b.value);
        }
        let gradient = (0..n).map(|i| self.grad(i) + b.grad(i)).collect();
        Self::assemble(self.value.clone() + b.value.clone(), gradient, |i, j| {
            self.hess(i, j) + b.hess(i, j)
        })
    }
}

impl<T: Scalar> Sub for Jet2<T> {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        let n = Self::common_n(&self, &b);
        if n == 0 {
            return Self::from_value(self.value - b.value);
        }
        let gradient = (0..n).map(|i| self.grad(i) - b.grad(i)).collect();
        Self::assemble(self.value.clone() - b.value.clone(), gradient, |i, j| {
            self.hess(i, j) - b.hess(i, j)
        })
    }
}

impl<T: Scalar> Mul for Jet2<T> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let n = Self::common_n(&self, &b);
        if n == 0 {
            return Self::from_value(self.value * b.value);
        }
        let (av, bv) = (self.value.clone(), b.value.clone());
        let gradient = (0..n)
            .map(|i| self.grad(i) * bv.clone() + b.grad(i) * av.clone())
            .collect();
        Self::assemble(av.clone() * bv.clone(), gradient, |i, j| {
            self.hess(i, j) * bv.clone()
                + b.hess(i, j) * av.clone()
                + self.grad(i) * b.grad(j)
                + b.grad(i) * self.grad(j)
        })
    }
}

impl<T: Scalar> Div for Jet2<T> {
    type Output = Self;
    /// Quotient rule written on q = a / b so the value is computed exactly
    /// as `a.value / b.value`.
    fn div(self, b: Self) -> Self {
        let n = Self::common_n(&self, &b);
        let q = self.value.clone() / b.value.clone();
        if n == 0 {
            return Self::from_value(q);
        }
        let bv = b.value.clone();
        let dq: Vec<T> = (0..n)
            .map(|i| (self.grad(i) - q.clone() * b.grad(i)) / bv.clone())
            .collect();
        Self::assemble(q.clone(), dq.clone(), |i, j| {
            (self.hess(i, j) - dq[i].clone() * b.grad(j) - dq[j].clone() * b.grad(i) - q.clone() * b.hess(i, j))
                / bv.clone()
        })
    }
}

impl<T: Scalar> Neg for Jet2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: -self.value,
            gradient: self.gradient.into_iter().map(|g| -g).collect(),
            hessian: self.hessian.into_iter().map(|h| -h).collect(),
        }
    }
}

impl<T: Scalar> Scalar for Jet2<T> {
    const DIFFERENTIABLE: bool = true;

    fn constant(v: f64) -> Self {
        Self::from_value(T::constant(v))
    }
    fn primal(&self) -> f64 {
        self.value.primal()
    }
    fn scale(&self, k: f64) -> Self {
        Self {
            value: self.value.scale(k),
            gradient: self.gradient.iter().map(|g| g.scale(k)).collect(),
            hessian: self.hessian.iter().map(|h| h.scale(k)).collect(),
        }
    }
    fn powi(&self, n: i32) -> Self {
        let v = &self.value;
        match n {
            0 => Self::constant(1.0),
            1 => self.clone(),
            _ => {
                let d1 = v.powi(n - 1).scale(n as f64);
                let d2 = v.powi(n - 2).scale((n * (n - 1)) as f64);
                self.chain(v.powi(n), d1, d2)
            }
        }
    }
    fn sin(&self) -> Self {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.chain(s.clone(), c, -s)
    }
    fn cos(&self) -> Self {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.chain(c.clone(), -s, -c)
    }
    fn tan(&self) -> Self {
        let t = self.value.tan();
        let d1 = T::constant(1.0) + t.clone() * t.clone();
        let d2 = (t.clone() * d1.clone()).scale(2.0);
        self.chain(t, d1, d2)
    }
    fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e.clone(), e.clone(), e)
    }
    fn ln(&self) -> Self {
        let inv = T::constant(1.0) / self.value.clone();
        let d2 = -(inv.clone() * inv.clone());
        self.chain(self.value.ln(), inv, d2)
    }
    fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        let d1 = T::constant(0.5) / s.clone();
        let d2 = -(d1.clone() / self.value.clone()).scale(0.5);
        self.chain(s, d1, d2)
    }
    fn sinh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s.clone(), c, s)
    }
    fn cosh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c.clone(), s, c)
    }
    fn tanh(&self) -> Self {
        let t = self.value.tanh();
        let d1 = T::constant(1.0) - t.clone() * t.clone();
        let d2 = -(t.clone() * d1.clone()).scale(2.0);
        self.chain(t, d1, d2)
    }
    fn atan(&self) -> Self {
        let x = self.value.clone();
        let d1 = T::constant(1.0) / (T::constant(1.0) + x.clone() * x.clone());
        let d2 = -(x * d1.clone() * d1.clone()).scale(2.0);
        self.chain(self.value.atan(), d1, d2)
    }
    fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.gradient.iter().all(Scalar::is_finite)
            && self.hessian.iter().all(Scalar::is_finite)
    }
}

/// Evaluates `e` at `point` to value, gradient and Hessian with respect to
/// the variables in `var_order`.
pub fn eval_jet(e: &Expr, point: &[f64], var_order: &[String]) -> Result<Jet2<f64>> {
    eval_jet_generic(e, point, var_order)
}

/// Same as [`eval_jet`] for any seedable scalar, e.g. `Jet2<f64>` to obtain
/// derivatives up to fourth order.
pub fn eval_jet_generic<T: Seedable>(e: &Expr, point: &[f64], var_order: &[String]) -> Result<Jet2<T>> {
    if point.len() != var_order.len() {
        return Err(GeoError::Dimension {
            expected: var_order.len(),
            got: point.len(),
        });
    }
    let seeds: Vec<Jet2<T>> = (0..point.len())
        .map(|i| seed_generic(point, i))
        .collect::<Result<_>>()?;
    let lookup = |name: &str| var_order.iter().position(|v| v == name).map(|i| seeds[i].clone());
    let mut out = eval_generic(e, &lookup)?;
    // Constants come back unseeded; widen them so callers can index freely.
    if out.gradient.is_empty() && !point.is_empty() {
        let n = point.len();
        out.gradient = vec![T::constant(0.0); n];
        out.hessian = vec![T::constant(0.0); n * n];
    } else if out.hessian.is_empty() && !point.is_empty() {
        out.hessian = vec![T::constant(0.0); point.len() * point.len()];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{indexed_names, parse};

    fn jet(src: &str, point: &[f64]) -> Jet2<f64> {
        let vars = indexed_names("x", point.len());
        eval_jet(&parse(src, &vars).unwrap(), point, &vars).unwrap()
    }

    #[test]
    fn seed_sets_unit_gradient() {
        let j = seed(&[3.0, 4.0], 0).unwrap();
        assert_eq!(j.value, 3.0);
        assert_eq!(j.gradient, vec![1.0, 0.0]);
        assert_eq!(j.hessian, vec![0.0; 4]);
        let j = seed(&[3.0, 4.0], 1).unwrap();
        assert_eq!((j.value, j.gradient.clone()), (4.0, vec![0.0, 1.0]));
        assert!(matches!(seed(&[], 0), Err(GeoError::SeedIndex { .. })));
    }

    #[test]
    fn product_rule() {
        let j = jet("x1*x2", &[3.0, 4.0]);
        assert_eq!(j.value, 12.0);
        assert_eq!(j.gradient, vec![4.0, 3.0]);
        assert_eq!(j.hessian, vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn sine_at_zero() {
        let j = jet("sin(x1)", &[0.0]);
        assert_eq!((j.value, j.gradient[0], j.hessian[0]), (0.0, 1.0, 0.0));
    }

    #[test]
    fn quadratic_and_constant() {
        let j = jet("x1^2+x2^2", &[1.0, 2.0]);
        assert_eq!(j.value, 5.0);
        assert_eq!(j.gradient, vec![2.0, 4.0]);
        assert_eq!(j.hessian, vec![2.0, 0.0, 0.0, 2.0]);
        let c = jet("pi", &[0.3, 0.7]);
        assert_eq!(c.gradient, vec![0.0; 2]);
        assert_eq!(c.hessian, vec![0.0; 4]);
    }

    #[test]
    fn nested_jets_give_fourth_derivatives() {
        // f = x1^4 x2: d^4 f / dx1^4 = 0 except via x1^4 -> 24 x2
        let vars = indexed_names("x", 2);
        let e = parse("x1^4*x2", &vars).unwrap();
        let j: Jet2<Jet2<f64>> = eval_jet_generic(&e, &[0.5, 2.0], &vars).unwrap();
        let fxx = j.hess(0, 0); // 12 x1^2 x2
        assert!((fxx.value - 12.0 * 0.25 * 2.0).abs() < 1e-14);
        assert!((fxx.hess(0, 0) - 24.0 * 2.0).abs() < 1e-12);
        assert!((fxx.hess(0, 1) - 24.0 * 0.5).abs() < 1e-12);
        assert_eq!(fxx.hess(1, 1), 0.0);
    }

    #[test]
    fn division_matches_value_path() {
        let j = jet("4/(1 - x1^2 - x2^2)^2", &[0.0, 0.0]);
        assert_eq!(j.value, 4.0);
        assert_eq!(j.gradient, vec![0.0, 0.0]);
        assert!((j.hessian[0] - 16.0).abs() < 1e-12);
        assert!((j.hessian[3] - 16.0).abs() < 1e-12);
        assert_eq!(j.hessian[1], 0.0);
    }
}
