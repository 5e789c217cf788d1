//! Laurent polynomials in the spectral parameter `z` and 3×3 matrices over
//! them.
//!
//! Exponent bookkeeping is exact integer arithmetic; only the complex
//! coefficients are floating point. After every arithmetic operation,
//! coefficients below `tol::PRUNE_REL` relative to the largest one are
//! dropped, which keeps the exponent support from creeping outward through
//! roundoff while staying far below every assertion tolerance in the crate.

use crate::num::{C64, Ring};
use crate::tol;

/// A Laurent polynomial `Σ c_k z^k` with finitely many nonzero `c_k`.
///
/// Stored densely on the exponent window `[lo, lo + coeffs.len())`. The zero
/// polynomial is the empty window.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<T: Ring = C64> {
    lo: i64,
    coeffs: Vec<T>,
}

impl<T: Ring> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly { lo: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// `c z^k`.
    pub fn monomial(c: T, k: i64) -> Self {
        let mut p = LaurentPoly { lo: k, coeffs: vec![c] };
        p.prune();
        p
    }

    /// Build from a window: `coeffs[i]` is the coefficient of `z^(lo + i)`.
    pub fn from_window(lo: i64, coeffs: Vec<T>) -> Self {
        let mut p = LaurentPoly { lo, coeffs };
        p.prune();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a stored coefficient, if any.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.lo)
    }

    /// Highest exponent with a stored coefficient, if any.
    pub fn max_exp(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> T {
        if self.coeffs.is_empty() || k < self.lo || k >= self.lo + self.coeffs.len() as i64 {
            T::zero()
        } else {
            self.coeffs[(k - self.lo) as usize]
        }
    }

    /// Iterate over `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }

    pub fn max_coeff_mag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.mag()).fold(0.0, f64::max)
    }

    fn prune(&mut self) {
        let cutoff = tol::PRUNE_REL * self.max_coeff_mag();
        for c in &mut self.coeffs {
            if c.mag() < cutoff {
                *c = T::zero();
            }
        }
        while self.coeffs.last().is_some_and(|c| c.mag() == 0.0) {
            self.coeffs.pop();
        }
        let leading_zeros = self.coeffs.iter().take_while(|c| c.mag() == 0.0).count();
        if leading_zeros > 0 {
            self.coeffs.drain(..leading_zeros);
            self.lo += leading_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.max_exp().unwrap().max(rhs.max_exp().unwrap());
        let mut coeffs = vec![T::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.terms() {
            coeffs[(k - lo) as usize] = coeffs[(k - lo) as usize] + c;
        }
        for (k, c) in rhs.terms() {
            coeffs[(k - lo) as usize] = coeffs[(k - lo) as usize] + c;
        }
        Self::from_window(lo, coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let lo = self.lo + rhs.lo;
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.mag() == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + a * b;
            }
        }
        Self::from_window(lo, coeffs)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut p = LaurentPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        };
        p.prune();
        p
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    /// Evaluate at a nonzero complex `z` (negative exponents via 1/z).
    pub fn eval(&self, z: C64) -> T {
        let zi = T::from_c(z);
        let ziv = zi.inv();
        // Horner on the window, then shift by z^lo.
        let mut acc = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * zi + c;
        }
        let mut shift = T::one();
        let (mut base, mut e) = if self.lo >= 0 { (zi, self.lo) } else { (ziv, -self.lo) };
        while e > 0 {
            if e & 1 == 1 {
                shift = shift * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc * shift
    }
}

/// 3×3 matrix with Laurent-polynomial entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrix3<T: Ring = C64> {
    pub e: [[LaurentPoly<T>; 3]; 3],
}

impl<T: Ring> LaurentMatrix3<T> {
    pub fn zero() -> Self {
        LaurentMatrix3 {
            e: std::array::from_fn(|_| std::array::from_fn(|_| LaurentPoly::zero())),
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.e[i][i] = LaurentPoly::one();
        }
        m
    }

    /// Build from closures giving each entry.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> LaurentPoly<T>) -> Self {
        LaurentMatrix3 {
            e: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| {
            let mut acc = LaurentPoly::zero();
            for k in 0..3 {
                acc = acc.add(&self.e[i][k].mul(&rhs.e[k][j]));
            }
            acc
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| self.e[i][j].add(&rhs.e[i][j]))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| self.e[i][j].sub(&rhs.e[i][j]))
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.e[i][j].scale(s))
    }

    pub fn trace(&self) -> LaurentPoly<T> {
        self.e[0][0].add(&self.e[1][1]).add(&self.e[2][2])
    }

    pub fn det(&self) -> LaurentPoly<T> {
        let e = &self.e;
        let m = |a: &LaurentPoly<T>, b: &LaurentPoly<T>| a.mul(b);
        let t1 = m(&e[0][0], &m(&e[1][1], &e[2][2]).sub(&m(&e[1][2], &e[2][1])));
        let t2 = m(&e[0][1], &m(&e[1][0], &e[2][2]).sub(&m(&e[1][2], &e[2][0])));
        let t3 = m(&e[0][2], &m(&e[1][0], &e[2][1]).sub(&m(&e[1][1], &e[2][0])));
        t1.sub(&t2).add(&t3)
    }

    /// Numeric evaluation at `z`.
    pub fn eval(&self, z: C64) -> [[T; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.e[i][j].eval(z)))
    }

    pub fn max_coeff_mag(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|p| p.max_coeff_mag())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude of `self - rhs`.
    pub fn max_diff(&self, rhs: &Self) -> f64 {
        self.sub(rhs).max_coeff_mag()
    }
}
