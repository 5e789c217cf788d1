//! Scalar types: complex numbers, dual numbers for forward-mode
//! differentiation, and the small ring abstraction that lets the Laurent
//! algebra and the coordinate maps run on either.

use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub type C64 = Complex64;

/// Shorthand constructor.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The scalar operations every generic routine needs. Implemented by `C64`
/// and by [`Dual`]; all values are `Copy` and arithmetic is by value.
pub trait Ring:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_c(c: C64) -> Self;
    fn inv(self) -> Self;
    /// Magnitude of the underlying value, used for pruning and degeneracy
    /// thresholds (for duals: the max of value and derivative magnitudes,
    /// so pruning never silently destroys a gradient).
    fn mag(self) -> f64;
    /// The plain complex value (derivative part dropped for duals).
    fn value(self) -> C64;
}

impl Ring for C64 {
    #[inline]
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    #[inline]
    fn from_c(c: C64) -> Self {
        c
    }
    #[inline]
    fn inv(self) -> Self {
        1.0 / self
    }
    #[inline]
    fn mag(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn value(self) -> C64 {
        self
    }
}

/// Complex dual number `v + ε d` with `ε² = 0`: carries the value together
/// with its derivative along one seeded direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: C64,
    pub d: C64,
}

impl Dual {
    #[inline]
    pub fn new(v: C64, d: C64) -> Self {
        Dual { v, d }
    }
    /// A constant (zero derivative).
    #[inline]
    pub fn constant(v: C64) -> Self {
        Dual { v, d: C64::new(0.0, 0.0) }
    }
    /// The seeded variable for logarithmic differentiation: ∂/∂ln v.
    #[inline]
    pub fn log_seed(v: C64) -> Self {
        Dual { v, d: v }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.v + rhs.v, self.d + rhs.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.v - rhs.v, self.d - rhs.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, rhs: Dual) -> Dual {
        Dual::new(self.v * rhs.v, self.v * rhs.d + self.d * rhs.v)
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

impl Ring for Dual {
    #[inline]
    fn zero() -> Self {
        Dual::constant(C64::new(0.0, 0.0))
    }
    #[inline]
    fn one() -> Self {
        Dual::constant(C64::new(1.0, 0.0))
    }
    #[inline]
    fn from_c(c: C64) -> Self {
        Dual::constant(c)
    }
    #[inline]
    fn inv(self) -> Self {
        let iv = 1.0 / self.v;
        Dual::new(iv, -self.d * iv * iv)
    }
    #[inline]
    fn mag(self) -> f64 {
        self.v.norm().max(self.d.norm())
    }
    #[inline]
    fn value(self) -> C64 {
        self.v
    }
}

/// Principal cube root: argument in (-π/3, π/3].
pub fn cbrt_principal(w: C64) -> C64 {
    if w.norm() == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let r = w.norm().cbrt();
    let theta = w.arg() / 3.0;
    C64::from_polar(r, theta)
}

/// The cube root of `w` closest to `near` among the three branches.
pub fn cbrt_near(w: C64, near: C64) -> C64 {
    let p = cbrt_principal(w);
    let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    [p, p * omega, p * omega * omega]
        .into_iter()
        .min_by(|a, b| {
            (a - near)
                .norm()
                .partial_cmp(&(b - near).norm())
                .unwrap()
        })
        .unwrap()
}

/// Cube root of unity `e^{2πi k/3}`.
pub fn unity_cbrt(k: u8) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(k % 3) / 3.0)
}

/// Cyclic index into a length-`n` sequence; `i` may be any integer offset.
#[inline]
pub fn wrap(i: i64, n: usize) -> usize {
    let n = n as i64;
    (((i % n) + n) % n) as usize
}

/// Max-norm distance between two complex slices.
pub fn max_dist(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_product_rule() {
        let x = Dual::log_seed(c(2.0, 1.0));
        let y = x * x * x;
        // d(x³)/dln x = 3x³
        let expected = 3.0 * y.v;
        assert!((y.d - expected).norm() < 1e-12);
    }

    #[test]
    fn dual_inverse_rule() {
        let x = Dual::log_seed(c(0.5, -1.5));
        let y = x.inv();
        // d(1/x)/dln x = -1/x
        assert!((y.d + y.v).norm() < 1e-14);
    }

    #[test]
    fn cbrt_branches() {
        let w = c(-8.0, 0.0);
        let p = cbrt_principal(w);
        assert!((p.powi(3) - w).norm() < 1e-12);
        // principal branch has argument in (-π/3, π/3]
        assert!(p.arg() > -std::f64::consts::FRAC_PI_3 - 1e-15);
        assert!(p.arg() <= std::f64::consts::FRAC_PI_3 + 1e-15);
        let n = cbrt_near(w, c(-2.0, 0.0));
        assert!((n - c(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn wrap_negative_offsets() {
        assert_eq!(wrap(-1, 5), 4);
        assert_eq!(wrap(7, 5), 2);
        assert_eq!(wrap(-6, 5), 4);
    }
}
