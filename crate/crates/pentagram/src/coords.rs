//! The two coordinate systems on the space of twisted n-gons and the
//! pentagram map as explicit rational maps in each.
//!
//! For `n` not divisible by 3, a twisted n-gon has a unique lift with unit
//! consecutive determinants, and the recurrence
//! `V_{j+3} = a_j V_{j+2} + b_j V_{j+1} + V_j` defines the n-periodic
//! coordinates `(a_j, b_j)`. The second system
//!
//! ```text
//! x_i = a_{i-2} / (b_{i-2} b_{i-1}),   y_i = -b_{i-1} / (a_{i-2} a_{i-1})
//! ```
//!
//! is defined for every `n` and makes the pentagram map local:
//!
//! ```text
//! T*(x_i) = x_i (1 - x_{i-1} y_{i-1}) / (1 - x_{i+1} y_{i+1})
//! T*(y_i) = y_{i+1} (1 - x_{i+2} y_{i+2}) / (1 - x_i y_i)
//! ```

use crate::error::Error;
use crate::num::{wrap, C64, Ring};
use crate::tol;
use crate::Result;
use nalgebra::DMatrix;

/// The `(a_j, b_j)` coordinates; requires `n mod 3 ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ABCoords {
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

/// The `(x_i, y_i)` coordinates; defined for every `n ≥ 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct XYCoords {
    pub x: Vec<C64>,
    pub y: Vec<C64>,
}

impl ABCoords {
    /// Validates the type invariants: `n ≥ 4` with `n mod 3 ≠ 0`, all
    /// coordinates nonzero, and `1 + a_{i+1} b_i ≠ 0` for all `i`.
    pub fn new(a: Vec<C64>, b: Vec<C64>) -> Result<Self> {
        let n = a.len();
        if n != b.len() || n < 4 {
            return Err(Error::UnsupportedN(n.min(b.len()), "need n >= 4 with matching lengths"));
        }
        if n % 3 == 0 {
            return Err(Error::IndivisibilityViolated(n));
        }
        let coords = ABCoords { a, b };
        coords.validate()?;
        Ok(coords)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for j in 0..n {
            if self.a[j].norm() < tol::DENOM_VANISH || self.b[j].norm() < tol::DENOM_VANISH {
                return Err(Error::NonGeneric(format!("a_{j} or b_{j} vanishes")));
            }
        }
        for i in 0..n {
            let prod = self.a[wrap(i as i64 + 1, n)] * self.b[i];
            let denom = C64::new(1.0, 0.0) + prod;
            if denom.norm() < tol::DENOM_VANISH * (1.0 + prod.norm()) {
                return Err(Error::NonGeneric(format!("1 + a_{{{i}+1}} b_{i} vanishes")));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn a_at(&self, i: i64) -> C64 {
        self.a[wrap(i, self.n())]
    }

    #[inline]
    pub fn b_at(&self, i: i64) -> C64 {
        self.b[wrap(i, self.n())]
    }

    /// `x_i = a_{i-2}/(b_{i-2} b_{i-1})`, `y_i = -b_{i-1}/(a_{i-2} a_{i-1})`.
    pub fn to_xy(&self) -> XYCoords {
        let n = self.n();
        let x = (0..n as i64)
            .map(|i| self.a_at(i - 2) / (self.b_at(i - 2) * self.b_at(i - 1)))
            .collect();
        let y = (0..n as i64)
            .map(|i| -self.b_at(i - 1) / (self.a_at(i - 2) * self.a_at(i - 1)))
            .collect();
        XYCoords { x, y }
    }

    /// One pentagram step in the `(a, b)` coordinates.
    ///
    /// `n` must be `3m+1` or `3m+2`; the product over `l = 1..=m` runs over
    /// the factors `1 + a b` from the closed-form pullback. A vanishing
    /// denominator factor (relative to its paired numerator) makes the map
    /// undefined.
    pub fn pentagram(&self) -> Result<ABCoords> {
        let n = self.n();
        let m = match n % 3 {
            1 => (n - 1) / 3,
            2 => (n - 2) / 3,
            _ => return Err(Error::IndivisibilityViolated(n)),
        };
        let i64n = |i: i64| -> C64 { C64::new(1.0, 0.0) + self.a_at(i) * self.b_at(i - 1) };
        let mut a_new = Vec::with_capacity(n);
        let mut b_new = Vec::with_capacity(n);
        for i in 0..n as i64 {
            let mut num_a = C64::new(1.0, 0.0);
            let mut den_a = C64::new(1.0, 0.0);
            let mut num_b = C64::new(1.0, 0.0);
            let mut den_b = C64::new(1.0, 0.0);
            for l in 1..=m as i64 {
                // T*(a_i) factors: (1 + a_{i+3l+2} b_{i+3l+1}) / (1 + a_{i-3l+2} b_{i-3l+1})
                let na = i64n(i + 3 * l + 2);
                let da = i64n(i - 3 * l + 2);
                if da.norm() < tol::DENOM_VANISH * (1.0 + na.norm()) {
                    return Err(Error::MapUndefined(format!(
                        "factor 1 + a b vanishes in T*(a_{i}) at l = {l}"
                    )));
                }
                num_a *= na;
                den_a *= da;
                // T*(b_i) factors: (1 + a_{i-3l} b_{i-3l-1}) / (1 + a_{i+3l} b_{i+3l-1})
                let nb = i64n(i - 3 * l);
                let db = i64n(i + 3 * l);
                if db.norm() < tol::DENOM_VANISH * (1.0 + nb.norm()) {
                    return Err(Error::MapUndefined(format!(
                        "factor 1 + a b vanishes in T*(b_{i}) at l = {l}"
                    )));
                }
                num_b *= nb;
                den_b *= db;
            }
            a_new.push(self.a_at(i + 2) * num_a / den_a);
            b_new.push(self.b_at(i - 1) * num_b / den_b);
        }
        ABCoords::new(a_new, b_new)
    }

    /// Orbit of `steps` pentagram steps, starting point included.
    pub fn orbit(&self, steps: usize) -> Result<Vec<ABCoords>> {
        let mut out = vec![self.clone()];
        for k in 0..steps {
            let next = out
                .last()
                .unwrap()
                .pentagram()
                .map_err(|_| Error::MapUndefinedAtStep(k + 1))?;
            out.push(next);
        }
        Ok(out)
    }
}

impl XYCoords {
    /// Validates: `n ≥ 4`, all coordinates nonzero. (`1 - x_i y_i = 0` makes
    /// the map undefined but is detected per step, not at construction.)
    pub fn new(x: Vec<C64>, y: Vec<C64>) -> Result<Self> {
        let n = x.len();
        if n != y.len() || n < 4 {
            return Err(Error::UnsupportedN(n.min(y.len()), "need n >= 4 with matching lengths"));
        }
        let coords = XYCoords { x, y };
        coords.validate()?;
        Ok(coords)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn validate(&self) -> Result<()> {
        for j in 0..self.n() {
            if self.x[j].norm() < tol::DENOM_VANISH || self.y[j].norm() < tol::DENOM_VANISH {
                return Err(Error::NonGeneric(format!("x_{j} or y_{j} vanishes")));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn x_at(&self, i: i64) -> C64 {
        self.x[wrap(i, self.n())]
    }

    #[inline]
    pub fn y_at(&self, i: i64) -> C64 {
        self.y[wrap(i, self.n())]
    }

    /// One pentagram step in the `(x, y)` coordinates.
    pub fn pentagram(&self) -> Result<XYCoords> {
        let (x, y) = pentagram_xy_generic(&self.x, &self.y)?;
        XYCoords::new(x, y)
    }

    /// Orbit of `steps` pentagram steps, starting point included.
    pub fn orbit(&self, steps: usize) -> Result<Vec<XYCoords>> {
        let mut out = vec![self.clone()];
        for k in 0..steps {
            let next = out
                .last()
                .unwrap()
                .pentagram()
                .map_err(|_| Error::MapUndefinedAtStep(k + 1))?;
            out.push(next);
        }
        Ok(out)
    }

    /// Inverts the defining relations of the `(x, y)` coordinates.
    ///
    /// Taking logarithms turns the relations into a cyclic linear system for
    /// `(ln a_j, ln b_j)` whose matrix is invertible exactly when
    /// `n mod 3 ≠ 0`; a final multiplicative correction pass removes the
    /// solve roundoff. Among the three preimages (differing by a cube root
    /// of unity) this picks the one produced by principal logarithms.
    pub fn to_ab(&self) -> Result<ABCoords> {
        let n = self.n();
        if n % 3 == 0 {
            return Err(Error::IndivisibilityViolated(n));
        }
        for j in 0..n {
            if self.x[j].norm() == 0.0 || self.y[j].norm() == 0.0 {
                return Err(Error::NoPreimage);
            }
        }
        let solve = |rhs_x: &[C64], rhs_y: &[C64]| -> Result<(Vec<C64>, Vec<C64>)> {
            // Unknowns: alpha_j = ln a_j (0..n), beta_j = ln b_j (n..2n).
            let mut m = DMatrix::<C64>::zeros(2 * n, 2 * n);
            let mut rhs = DMatrix::<C64>::zeros(2 * n, 1);
            for i in 0..n {
                let im2 = wrap(i as i64 - 2, n);
                let im1 = wrap(i as i64 - 1, n);
                // ln x_i = alpha_{i-2} - beta_{i-2} - beta_{i-1}
                m[(i, im2)] += C64::new(1.0, 0.0);
                m[(i, n + im2)] -= C64::new(1.0, 0.0);
                m[(i, n + im1)] -= C64::new(1.0, 0.0);
                rhs[(i, 0)] = rhs_x[i];
                // ln(-y_i) = beta_{i-1} - alpha_{i-2} - alpha_{i-1}
                m[(n + i, n + im1)] += C64::new(1.0, 0.0);
                m[(n + i, im2)] -= C64::new(1.0, 0.0);
                m[(n + i, im1)] -= C64::new(1.0, 0.0);
                rhs[(n + i, 0)] = rhs_y[i];
            }
            let lu = m.lu();
            let sol = lu.solve(&rhs).ok_or(Error::NoPreimage)?;
            let alpha: Vec<C64> = (0..n).map(|j| sol[(j, 0)]).collect();
            let beta: Vec<C64> = (0..n).map(|j| sol[(n + j, 0)]).collect();
            Ok((alpha, beta))
        };

        let rhs_x: Vec<C64> = self.x.iter().map(|v| v.ln()).collect();
        let rhs_y: Vec<C64> = self.y.iter().map(|v| (-v).ln()).collect();
        let (alpha, beta) = solve(&rhs_x, &rhs_y)?;
        let mut a: Vec<C64> = alpha.iter().map(|t| t.exp()).collect();
        let mut b: Vec<C64> = beta.iter().map(|t| t.exp()).collect();

        // Multiplicative correction pass on the residual ratios.
        let trial = ABCoords { a: a.clone(), b: b.clone() };
        let image = trial.to_xy();
        let res_x: Vec<C64> = (0..n).map(|i| (self.x[i] / image.x[i]).ln()).collect();
        let res_y: Vec<C64> = (0..n).map(|i| (self.y[i] / image.y[i]).ln()).collect();
        let (da, db) = solve(&res_x, &res_y)?;
        for j in 0..n {
            a[j] *= da[j].exp();
            b[j] *= db[j].exp();
        }
        ABCoords::new(a, b)
    }

    /// Max deviation from `other` over all coordinates.
    pub fn distance(&self, other: &XYCoords) -> f64 {
        let dx = crate::num::max_dist(&self.x, &other.x);
        let dy = crate::num::max_dist(&self.y, &other.y);
        dx.max(dy)
    }

    /// Min over cyclic shifts `s` of the max deviation between `self`
    /// shifted by `s` and `other`; returns `(shift, deviation)`.
    pub fn best_shift_distance(&self, other: &XYCoords) -> (usize, f64) {
        let n = self.n();
        let mut best = (0, f64::INFINITY);
        for s in 0..n {
            let mut d: f64 = 0.0;
            for i in 0..n {
                let j = wrap(i as i64 + s as i64, n);
                d = d.max((self.x[j] - other.x[i]).norm());
                d = d.max((self.y[j] - other.y[i]).norm());
            }
            if d < best.1 {
                best = (s, d);
            }
        }
        best
    }
}

/// The pentagram map in `(x, y)` coordinates over any scalar ring, so the
/// same code path produces values and forward-mode Jacobians.
pub fn pentagram_xy_generic<T: Ring>(x: &[T], y: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    let n = x.len();
    let q: Vec<T> = (0..n).map(|i| T::one() - x[i] * y[i]).collect();
    let at = |v: &[T], i: i64| v[wrap(i, n)];
    for i in 0..n as i64 {
        // T*(x_i) pairs numerator q_{i-1} with denominator q_{i+1};
        // T*(y_i) pairs q_{i+2} with q_i.
        let den = at(&q, i + 1);
        let num = at(&q, i - 1);
        if den.mag() < tol::DENOM_VANISH * (1.0 + num.mag()) {
            return Err(Error::MapUndefined(format!("1 - x y vanishes at index {}", wrap(i + 1, n))));
        }
        let den2 = at(&q, i);
        let num2 = at(&q, i + 2);
        if den2.mag() < tol::DENOM_VANISH * (1.0 + num2.mag()) {
            return Err(Error::MapUndefined(format!("1 - x y vanishes at index {}", wrap(i, n))));
        }
    }
    let tx = (0..n as i64)
        .map(|i| at(x, i) * at(&q, i - 1) * at(&q, i + 1).inv())
        .collect();
    let ty = (0..n as i64)
        .map(|i| at(y, i + 1) * at(&q, i + 2) * at(&q, i).inv())
        .collect();
    Ok((tx, ty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::c;
    use crate::rng;

    #[test]
    fn constant_ab_gives_constant_xy() {
        let ab = ABCoords::new(vec![c(1.0, 0.0); 4], vec![c(1.0, 0.0); 4]).unwrap();
        let xy = ab.to_xy();
        for i in 0..4 {
            assert!((xy.x[i] - c(1.0, 0.0)).norm() < 1e-15);
            assert!((xy.y[i] + c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn xy_product_identity() {
        // x_i y_i = -1/(a_{i-1} b_{i-2}) is an algebraic consequence of the
        // defining relations.
        let ab = rng::random_ab(7, 3);
        let xy = ab.to_xy();
        for i in 0..7 {
            let lhs = xy.x[i] * xy.y[i];
            let rhs = -(ab.a_at(i as i64 - 1) * ab.b_at(i as i64 - 2)).inv();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn telescoping_product_identity() {
        // Telescoping the defining relations:
        // Π x_i = Π a / (Π b)², Π (-1/y_i) = (Π a)² / Π b,
        // hence Π x_i · Π (-1/y_i) = (Π a / Π b)³.
        let ab = rng::random_ab(5, 5);
        let xy = ab.to_xy();
        let px: C64 = xy.x.iter().product();
        let pyinv: C64 = xy.y.iter().map(|y| -(1.0 / y)).product();
        let pa: C64 = ab.a.iter().product();
        let pb: C64 = ab.b.iter().product();
        let rhs = (pa / pb).powu(3);
        assert!((px * pyinv - rhs).norm() / rhs.norm() < 1e-12);
    }

    #[test]
    fn ab_xy_roundtrip() {
        for n in [4usize, 5, 7, 8] {
            for seed in 0..20u64 {
                let ab = rng::random_ab(n, 1000 + seed);
                let xy = ab.to_xy();
                let ab2 = xy.to_ab().unwrap();
                let xy2 = ab2.to_xy();
                assert!(xy.distance(&xy2) < tol::ROUNDTRIP, "n = {n}, seed = {seed}");
            }
        }
    }

    #[test]
    fn xy_to_ab_rejects_multiples_of_three() {
        let xy = rng::random_xy(6, 1);
        assert!(matches!(xy.to_ab(), Err(Error::IndivisibilityViolated(6))));
    }

    #[test]
    fn symmetric_point_inverts_to_equal_ab() {
        let xy = XYCoords::new(vec![c(1.0, 0.0); 4], vec![c(-1.0, 0.0); 4]).unwrap();
        let ab = xy.to_ab().unwrap();
        for j in 0..4 {
            assert!((ab.a[j] - ab.a[0]).norm() < 1e-12);
            assert!((ab.b[j] - ab.b[0]).norm() < 1e-12);
            assert!((ab.a[j] - ab.b[j]).norm() < 1e-12);
        }
        let image = ab.to_xy();
        assert!(image.distance(&xy) < 1e-12);
    }

    #[test]
    fn constant_xy_is_fixed_point() {
        let xy = XYCoords::new(vec![c(0.7, 0.2); 6], vec![c(-0.4, 0.1); 6]).unwrap();
        let orbit = xy.orbit(50).unwrap();
        for step in &orbit {
            assert!(step.distance(&xy) < 1e-12);
        }
    }

    #[test]
    fn orbit_zero_steps_is_singleton() {
        let xy = rng::random_xy(5, 2);
        let orbit = xy.orbit(0).unwrap();
        assert_eq!(orbit.len(), 1);
        assert!(orbit[0].distance(&xy) == 0.0);
    }

    #[test]
    fn pentagram_ab_detects_vanishing_factor() {
        // Force 1 + a_{i+1} b_i = 0 at one index: the type constructor
        // rejects it, and the raw map reports MapUndefined.
        let mut ab = rng::random_ab(7, 9);
        ab.b[1] = -1.0 / ab.a[2];
        assert!(ab.validate().is_err());
        assert!(matches!(ab.pentagram(), Err(Error::MapUndefined(_)) | Err(Error::NonGeneric(_))));
    }

    #[test]
    fn routes_commute() {
        // pentagram_xy ∘ ab_to_xy = ab_to_xy ∘ pentagram_ab
        for n in [4usize, 5, 7, 8] {
            for seed in 0..5u64 {
                let ab = rng::random_ab(n, 40 + seed);
                let via_ab = ab.pentagram().unwrap().to_xy();
                let via_xy = ab.to_xy().pentagram().unwrap();
                assert!(via_ab.distance(&via_xy) < 1e-9, "n = {n} seed = {seed}");
            }
        }
    }
}
