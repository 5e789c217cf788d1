//! The Lax representation of the pentagram map.
//!
//! The map admits a discrete zero-curvature form
//! `L_{i,t+1}(z) = P_{i+1,t}(z) L_{i,t}(z) P_{i,t}^{-1}(z)` with a spectral
//! parameter `z`. In the `(a, b)` coordinates (`n = 3m+1` or `3m+2`)
//!
//! ```text
//! L_i(z) = [ -b_i   1  0 ]      L_i(z)^{-1} = [ 0  0  1   ]
//!          [ -a_i/z 0  1/z]                   [ 1  0  b_i ]
//!          [  1     0  0  ]                   [ 0  z  a_i ]
//! ```
//!
//! and in the `(x, y)` coordinates (any `n`)
//!
//! ```text
//! L̃_i(z) = [ 1/x_{i+2} -1/x_{i+2} 0   ]   L̃_i(z)^{-1} = [ 0        0  -1/y_{i+2} ]
//!          [ 1/z        0         1/z ]                  [ -x_{i+2} 0  -1/y_{i+2} ]
//!          [ -y_{i+2}   0         0   ]                  [ 0        z   1/y_{i+2} ]
//! ```
//!
//! Matrices are never inverted numerically: the closed-form entry inverses
//! above are multiplied in reverse order wherever an inverse monodromy is
//! needed.

use crate::coords::{ABCoords, XYCoords};
use crate::error::Error;
use crate::laurent::{LaurentMatrix3, LaurentPoly};
use crate::num::{wrap, C64, Ring};
use crate::tol;
use crate::Result;

fn poly<T: Ring>(c: T, k: i64) -> LaurentPoly<T> {
    LaurentPoly::monomial(c, k)
}

fn konst<T: Ring>(c: T) -> LaurentPoly<T> {
    LaurentPoly::constant(c)
}

/// `L_i` for the `(a, b)` Lax pair.
pub fn lax_l(ab: &ABCoords, i: i64) -> LaurentMatrix3 {
    let (a, b) = (ab.a_at(i), ab.b_at(i));
    let zero = LaurentPoly::zero;
    LaurentMatrix3 {
        e: [
            [konst(-b), konst(C64::new(1.0, 0.0)), zero()],
            [poly(-a, -1), zero(), poly(C64::new(1.0, 0.0), -1)],
            [konst(C64::new(1.0, 0.0)), zero(), zero()],
        ],
    }
}

/// Closed-form `L_i^{-1}` for the `(a, b)` Lax pair.
pub fn lax_l_inv(ab: &ABCoords, i: i64) -> LaurentMatrix3 {
    let (a, b) = (ab.a_at(i), ab.b_at(i));
    let zero = LaurentPoly::zero;
    let one = || konst(C64::new(1.0, 0.0));
    LaurentMatrix3 {
        e: [
            [zero(), zero(), one()],
            [one(), zero(), konst(b)],
            [zero(), poly(C64::new(1.0, 0.0), 1), konst(a)],
        ],
    }
}

/// `L̃_i` for the `(x, y)` Lax pair, over any scalar ring.
pub fn lax_ltilde_generic<T: Ring>(x: &[T], y: &[T], i: i64) -> LaurentMatrix3<T> {
    let n = x.len();
    let xi = x[wrap(i + 2, n)];
    let yi = y[wrap(i + 2, n)];
    let zero = LaurentPoly::zero;
    LaurentMatrix3 {
        e: [
            [konst(xi.inv()), konst(-(xi.inv())), zero()],
            [poly(T::one(), -1), zero(), poly(T::one(), -1)],
            [konst(-yi), zero(), zero()],
        ],
    }
}

/// Closed-form `L̃_i^{-1}`.
pub fn lax_ltilde_inv_generic<T: Ring>(x: &[T], y: &[T], i: i64) -> LaurentMatrix3<T> {
    let n = x.len();
    let xi = x[wrap(i + 2, n)];
    let yi = y[wrap(i + 2, n)];
    let zero = LaurentPoly::zero;
    let iy = yi.inv();
    LaurentMatrix3 {
        e: [
            [zero(), zero(), konst(-iy)],
            [konst(-xi), zero(), konst(-iy)],
            [zero(), poly(T::one(), 1), konst(iy)],
        ],
    }
}

pub fn lax_ltilde(xy: &XYCoords, i: i64) -> LaurentMatrix3 {
    lax_ltilde_generic(&xy.x, &xy.y, i)
}

pub fn lax_ltilde_inv(xy: &XYCoords, i: i64) -> LaurentMatrix3 {
    lax_ltilde_inv_generic(&xy.x, &xy.y, i)
}

/// `λ_i = Π_{l=1}^m (1 + a_{i+3l+1} b_{i+3l})` with `m` from `n = 3m+1` or
/// `n = 3m+2`.
pub fn lambda(ab: &ABCoords, i: i64) -> Result<C64> {
    let n = ab.n();
    let m = match n % 3 {
        1 => (n - 1) / 3,
        2 => (n - 2) / 3,
        _ => return Err(Error::UnsupportedN(n, "lambda needs n = 3m+1 or 3m+2")),
    };
    let mut prod = C64::new(1.0, 0.0);
    for l in 1..=m as i64 {
        prod *= C64::new(1.0, 0.0) + ab.a_at(i + 3 * l + 1) * ab.b_at(i + 3 * l);
    }
    Ok(prod)
}

/// The time-step matrix `P_i` of the `(a, b)` Lax pair (two closed forms,
/// one per residue of `n` mod 3).
pub fn pmatrix_p(ab: &ABCoords, i: i64) -> Result<LaurentMatrix3> {
    let n = ab.n();
    let lam = |k: i64| lambda(ab, k);
    let a = |k: i64| ab.a_at(k);
    let b = |k: i64| ab.b_at(k);
    let zero = LaurentPoly::zero;
    let m = match n % 3 {
        1 => {
            let (l_m1, l_0, l_m2, l_m3) = (lam(i - 1)?, lam(i)?, lam(i - 2)?, lam(i - 3)?);
            for (k, v) in [(i - 1, l_m1), (i, l_0), (i - 2, l_m2), (i - 3, l_m3)] {
                if v.norm() < tol::DENOM_VANISH {
                    return Err(Error::DegenerateLambda(wrap(k, n)));
                }
            }
            LaurentMatrix3 {
                e: [
                    [konst(-a(i) * l_m1), zero(), konst(l_m1)],
                    [konst(l_m3), konst(-a(i + 1) * l_0), konst(b(i - 1) * l_m3)],
                    [zero(), poly(l_m2, 1), zero()],
                ],
            }
        }
        2 => {
            let (l_0, l_m1, l_m2, l_p1) = (lam(i)?, lam(i - 1)?, lam(i - 2)?, lam(i + 1)?);
            for (k, v) in [(i, l_0), (i - 1, l_m1), (i - 2, l_m2), (i + 1, l_p1)] {
                if v.norm() < tol::DENOM_VANISH {
                    return Err(Error::DegenerateLambda(wrap(k, n)));
                }
            }
            let f1 = C64::new(1.0, 0.0) + a(i + 1) * b(i);
            let f2 = C64::new(1.0, 0.0) + a(i + 2) * b(i + 1);
            LaurentMatrix3 {
                e: [
                    [konst(-a(i) * l_0 * l_m1 * f1), zero(), konst(l_0 * l_m1 * f1)],
                    [
                        konst(l_0 * l_m2 * f1),
                        konst(-a(i + 1) * l_0 * l_p1 * f2),
                        konst(b(i - 1) * l_0 * l_m2 * f1),
                    ],
                    [zero(), poly(l_p1 * l_m1 * f2, 1), zero()],
                ],
            }
        }
        _ => return Err(Error::UnsupportedN(n, "P exists only for n = 3m+1 or 3m+2")),
    };
    Ok(m)
}

/// The time-step matrix `P̃_i` of the `(x, y)` Lax pair (any `n`).
pub fn pmatrix_ptilde(xy: &XYCoords, i: i64) -> LaurentMatrix3 {
    let q = |k: i64| C64::new(1.0, 0.0) - xy.x_at(k) * xy.y_at(k);
    let zero = LaurentPoly::zero;
    LaurentMatrix3 {
        e: [
            [konst(q(i + 2)), zero(), konst(q(i + 2))],
            [
                konst(xy.x_at(i + 1) * xy.y_at(i + 1) * q(i + 2)),
                konst(q(i + 1)),
                konst(q(i + 2)),
            ],
            [zero(), poly(-xy.y_at(i + 2) * q(i + 3), 1), zero()],
        ],
    }
}

/// Monodromy operator `T_i = L_{i+n-1} ... L_{i+1} L_i` (`(a, b)` kind).
pub fn monodromy_ab(ab: &ABCoords, base: i64) -> LaurentMatrix3 {
    let n = ab.n() as i64;
    let mut t = LaurentMatrix3::identity();
    for k in 0..n {
        t = t.matmul(&lax_l(ab, base + n - 1 - k));
    }
    t
}

/// `T_i^{-1} = L_i^{-1} L_{i+1}^{-1} ... L_{i+n-1}^{-1}` from the
/// closed-form entry inverses multiplied in reverse order.
pub fn monodromy_ab_inv(ab: &ABCoords, base: i64) -> LaurentMatrix3 {
    let n = ab.n() as i64;
    let mut t = LaurentMatrix3::identity();
    for k in 0..n {
        t = t.matmul(&lax_l_inv(ab, base + k));
    }
    t
}

/// Monodromy of the `(x, y)` Lax pair over any scalar ring.
pub fn monodromy_xy_generic<T: Ring>(x: &[T], y: &[T], base: i64) -> LaurentMatrix3<T> {
    let n = x.len() as i64;
    let mut t = LaurentMatrix3::identity();
    for k in 0..n {
        t = t.matmul(&lax_ltilde_generic(x, y, base + n - 1 - k));
    }
    t
}

pub fn monodromy_xy_inv_generic<T: Ring>(x: &[T], y: &[T], base: i64) -> LaurentMatrix3<T> {
    let n = x.len() as i64;
    let mut t = LaurentMatrix3::identity();
    for k in 0..n {
        t = t.matmul(&lax_ltilde_inv_generic(x, y, base + k));
    }
    t
}

pub fn monodromy_xy(xy: &XYCoords, base: i64) -> LaurentMatrix3 {
    monodromy_xy_generic(&xy.x, &xy.y, base)
}

pub fn monodromy_xy_inv(xy: &XYCoords, base: i64) -> LaurentMatrix3 {
    monodromy_xy_inv_generic(&xy.x, &xy.y, base)
}

/// Relative max-norm of `A(z) - B(z)` over the given `z` samples.
fn eval_residual(a: &LaurentMatrix3, b: &LaurentMatrix3, z_samples: &[C64]) -> f64 {
    let mut worst = 0.0f64;
    for &z in z_samples {
        let av = a.eval(z);
        let bv = b.eval(z);
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                diff = diff.max((av[i][j] - bv[i][j]).norm());
                scale = scale.max(av[i][j].norm()).max(bv[i][j].norm());
            }
        }
        worst = worst.max(diff / scale.max(f64::MIN_POSITIVE));
    }
    worst
}

/// Zero-curvature residual for the `(a, b)` route: applies one pentagram
/// step and returns the max over `i` and the samples of the normalized
/// max-norm of `L_{i,t+1} P_{i,t} - P_{i+1,t} L_{i,t}`.
pub fn zero_curvature_residual_ab(ab: &ABCoords, z_samples: &[C64]) -> Result<f64> {
    let next = ab.pentagram()?;
    let n = ab.n() as i64;
    let mut worst = 0.0f64;
    for i in 0..n {
        let lhs = lax_l(&next, i).matmul(&pmatrix_p(ab, i)?);
        let rhs = pmatrix_p(ab, i + 1)?.matmul(&lax_l(ab, i));
        worst = worst.max(eval_residual(&lhs, &rhs, z_samples));
    }
    Ok(worst)
}

/// Zero-curvature residual for the `(x, y)` route (works for every `n`,
/// including multiples of 3).
pub fn zero_curvature_residual_xy(xy: &XYCoords, z_samples: &[C64]) -> Result<f64> {
    let next = xy.pentagram()?;
    let n = xy.n() as i64;
    let mut worst = 0.0f64;
    for i in 0..n {
        let lhs = lax_ltilde(&next, i).matmul(&pmatrix_ptilde(xy, i));
        let rhs = pmatrix_ptilde(xy, i + 1).matmul(&lax_ltilde(xy, i));
        worst = worst.max(eval_residual(&lhs, &rhs, z_samples));
    }
    Ok(worst)
}

/// Checks `L̃_i = -(b_{i+1}/a_i) g_{i+1}^{-1} L_i g_i` with
/// `g_i = diag(1, b_i, -a_i)` entrywise as Laurent matrices; returns the max
/// relative coefficient deviation.
pub fn gauge_relation_check(ab: &ABCoords) -> f64 {
    let xy = ab.to_xy();
    let n = ab.n() as i64;
    let mut worst = 0.0f64;
    for i in 0..n {
        let g_i = [C64::new(1.0, 0.0), ab.b_at(i), -ab.a_at(i)];
        let g_next = [C64::new(1.0, 0.0), ab.b_at(i + 1), -ab.a_at(i + 1)];
        let l = lax_l(ab, i);
        let factor = -ab.b_at(i + 1) / ab.a_at(i);
        let conj = LaurentMatrix3::from_fn(|p, q| l.e[p][q].scale(factor * g_i[q] / g_next[p]));
        let lt = lax_ltilde(&xy, i);
        let scale = conj.max_coeff_mag().max(lt.max_coeff_mag());
        worst = worst.max(conj.max_diff(&lt) / scale.max(f64::MIN_POSITIVE));
    }
    worst
}

/// Report of the monodromy asymptotics check against the closed-form
/// leading blocks of `T_0(z)` at `z = 0` and `T_0^{-1}(z)` at `z = ∞`.
#[derive(Debug, Clone)]
pub struct AsymptoticsReport {
    /// Max over checked entries of `|coeff - expected| / (1 + |expected|)`.
    pub max_residual: f64,
    /// True when some expected leading coefficient nearly vanishes, which
    /// makes the comparison vacuous at that entry.
    pub degenerate: bool,
}

/// Compares the leading Laurent coefficients of the `(a, b)`-kind monodromy
/// with their closed forms. Entries whose leading coefficient has no closed
/// form are skipped.
pub fn monodromy_asymptotics_check(ab: &ABCoords) -> AsymptoticsReport {
    let n = ab.n();
    let q = n / 2;
    let t = monodromy_ab(ab, 0);
    let tinv = monodromy_ab_inv(ab, 0);
    let one = C64::new(1.0, 0.0);
    let prod = |lo: i64, hi: i64, f: &dyn Fn(i64) -> C64| -> C64 {
        (lo..=hi).fold(one, |acc, i| acc * f(i))
    };
    let a = |i: i64| ab.a_at(i);
    let b = |i: i64| ab.b_at(i);
    let sign = |k: i64| if k % 2 == 0 { one } else { -one };

    // (exponent, row, col, expected, structural_zero) tuples; entries the
    // closed forms leave unspecified are skipped entirely
    let mut checks: Vec<(i64, usize, usize, C64, bool)> = Vec::new();
    let zero = C64::new(0.0, 0.0);
    if n % 2 == 0 {
        let qe = q as i64;
        // T(z) leading block at z^{-q}
        checks.push((-qe, 0, 0, sign(qe) * prod(0, qe - 1, &|i| a(2 * i)), false));
        checks.push((-qe, 0, 1, zero, true));
        checks.push((-qe, 0, 2, -sign(qe) * prod(1, qe - 1, &|i| a(2 * i)), false));
        checks.push((-qe, 1, 1, sign(qe) * prod(0, qe - 1, &|i| a(2 * i + 1)), false));
        for col in 0..3 {
            checks.push((-qe, 2, col, zero, true));
        }
        // T^{-1}(z) leading block at z^{q}
        checks.push((qe, 0, 0, zero, true));
        checks.push((qe, 0, 1, prod(1, qe - 1, &|i| b(2 * i)), false));
        checks.push((qe, 0, 2, zero, true));
        checks.push((qe, 1, 0, zero, true));
        checks.push((qe, 1, 1, prod(0, qe - 1, &|i| b(2 * i)), false));
        checks.push((qe, 1, 2, zero, true));
        checks.push((qe, 2, 0, prod(1, qe - 1, &|i| b(2 * i - 1)), false));
        checks.push((qe, 2, 2, prod(1, qe, &|i| b(2 * i - 1)), false));
    } else {
        let qe = q as i64;
        // T(z): only (2,1) and (2,3) survive at z^{-(q+1)}
        for (r, c) in [(0usize, 0usize), (0, 1), (0, 2), (1, 1), (2, 0), (2, 1), (2, 2)] {
            checks.push((-(qe + 1), r, c, zero, true));
        }
        checks.push((-(qe + 1), 1, 0, prod(0, qe, &|i| -a(2 * i)), false));
        checks.push((-(qe + 1), 1, 2, prod(1, qe, &|i| -a(2 * i)), false));
        // at z^{-q}: the (1,2) product entry, plus the (3,2) zero
        checks.push((-qe, 0, 1, prod(1, qe, &|i| -a(2 * i - 1)), false));
        checks.push((-qe, 2, 1, zero, true));
        // T^{-1}(z): only (3,2) survives at z^{q+1}
        for (r, c) in [(0usize, 0usize), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 2)] {
            checks.push((qe + 1, r, c, zero, true));
        }
        checks.push((qe + 1, 2, 1, prod(1, qe, &|i| b(2 * i - 1)), false));
        // at z^{q}
        checks.push((qe, 0, 2, prod(1, qe, &|i| b(2 * i)), false));
        checks.push((qe, 1, 0, prod(0, qe - 1, &|i| b(2 * i)), false));
        checks.push((qe, 1, 2, prod(0, qe, &|i| b(2 * i)), false));
    }

    let mut max_residual = 0.0f64;
    let mut degenerate = false;
    for (exp, r, c, expected, structural_zero) in checks {
        let matrix = if exp < 0 { &t } else { &tinv };
        let got = matrix.e[r][c].coeff(exp);
        // a product entry that nearly vanishes makes its comparison vacuous
        if expected.norm() < 1e-12 && !structural_zero {
            degenerate = true;
        }
        max_residual = max_residual.max((got - expected).norm() / (1.0 + expected.norm()));
    }
    // support bounds: nothing of T below the leading exponent, nothing of
    // T^{-1} above it
    let t_floor = if n % 2 == 0 { -(q as i64) } else { -(q as i64) - 1 };
    for p in t.e.iter().flatten() {
        if let Some(lo) = p.min_exp() {
            if lo < t_floor {
                max_residual = f64::INFINITY;
            }
        }
    }
    for p in tinv.e.iter().flatten() {
        if let Some(hi) = p.max_exp() {
            if hi > -t_floor {
                max_residual = f64::INFINITY;
            }
        }
    }
    AsymptoticsReport { max_residual, degenerate }
}

/// One reconstructed matrix `L'_j = [[0,0,c'],[d',0,b'],[0,e'z,a']]^{-1}`.
#[derive(Debug, Clone, Copy)]
pub struct PrimedMatrix {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
}

impl PrimedMatrix {
    /// The matrix `(L'_j)^{-1}` as a Laurent matrix.
    pub fn inv_matrix(&self) -> LaurentMatrix3 {
        let zero = LaurentPoly::zero;
        LaurentMatrix3 {
            e: [
                [zero(), zero(), konst(self.c)],
                [konst(self.d), zero(), konst(self.b)],
                [zero(), poly(self.e, 1), konst(self.a)],
            ],
        }
    }
}

/// Diagonal gauge sequence `g_j = diag(α_j, β_j, γ_j)`, `g_n = g_0`.
#[derive(Debug, Clone)]
pub struct GaugeSequence {
    pub diag: Vec<[C64; 3]>,
}

/// Target of the gauge reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReduceTarget {
    Ab,
    Xy,
}

/// Output of [`gauge_reduce`].
#[derive(Debug, Clone)]
pub enum Reduced {
    Ab(ABCoords, GaugeSequence),
    Xy(XYCoords, GaugeSequence),
}

/// Reduces a primed sequence to the canonical `(a, b)` or `(x, y)` Lax form
/// by diagonal gauges `L'_j -> g_{j+1} L'_j g_j^{-1}`.
///
/// The cyclic multiplicative system is solved exactly by propagating the
/// slot permutation `(α, β, γ) -> (d'β, e'γ, c'α)` once around the polygon;
/// the one-parameter family is parameterized by `mu` (the pinned `γ_0`), on
/// which the recovered coordinates do not depend.
pub fn gauge_reduce(primed: &[PrimedMatrix], target: ReduceTarget, mu: C64) -> Result<Reduced> {
    let n = primed.len();
    if n < 4 {
        return Err(Error::UnsupportedN(n, "need n >= 4"));
    }
    match target {
        ReduceTarget::Ab => {
            if n % 3 == 0 {
                return Err(Error::UnsupportedN(n, "(a, b) reduction needs n not divisible by 3"));
            }
            // residue of n mod 3 decides which variable each slot returns to
            let mut mult = [C64::new(1.0, 0.0); 3]; // multipliers of slots (α, β, γ)
            let mut var = [0usize, 1, 2]; // which initial variable each slot carries
            for p in primed {
                let new_mult = [p.d * mult[1], p.e * mult[2], p.c * mult[0]];
                let new_var = [var[1], var[2], var[0]];
                mult = new_mult;
                var = new_var;
            }
            // periodicity: mult[s] * init[var[s]] = init[s]
            let consistency: C64 = primed.iter().map(|p| p.c * p.d * p.e).product();
            if (consistency - 1.0).norm() > 1e-10 * (1.0 + consistency.norm()) {
                return Err(Error::ConstraintViolated((consistency - 1.0).norm()));
            }
            // pin γ_0 = mu, solve the 3-cycle for α_0, β_0
            let mut init = [C64::new(0.0, 0.0); 3];
            init[2] = mu;
            // find the cycle order: slot s receives var[s]
            // α_0 = mult[0] * init[var[0]], etc.; with γ_0 known the other
            // two follow by walking the 3-cycle backwards
            for _ in 0..2 {
                for s in 0..3 {
                    if init[s] == C64::new(0.0, 0.0) && init[var[s]] != C64::new(0.0, 0.0) {
                        init[s] = mult[s] * init[var[s]];
                    }
                }
            }
            // propagate the actual gauges
            let mut g = vec![[C64::new(0.0, 0.0); 3]; n + 1];
            g[0] = init;
            for (j, p) in primed.iter().enumerate() {
                g[j + 1] = [p.d * g[j][1], p.e * g[j][2], p.c * g[j][0]];
            }
            let mut a = Vec::with_capacity(n);
            let mut b = Vec::with_capacity(n);
            for (j, p) in primed.iter().enumerate() {
                a.push(p.a * g[j][2] / g[j + 1][2]);
                b.push(p.b * g[j][1] / g[j + 1][2]);
            }
            let gauges = GaugeSequence { diag: g[..n].to_vec() };
            Ok(Reduced::Ab(ABCoords::new(a, b)?, gauges))
        }
        ReduceTarget::Xy => {
            let consistency: C64 = (0..n)
                .map(|j| -primed[j].e * primed[(j + 1) % n].b / primed[(j + 1) % n].a)
                .product();
            if (consistency - 1.0).norm() > 1e-10 * (1.0 + consistency.norm()) {
                return Err(Error::ConstraintViolated((consistency - 1.0).norm()));
            }
            let mut gamma = vec![C64::new(0.0, 0.0); n + 1];
            gamma[0] = mu;
            for j in 0..n {
                let next = (j + 1) % n;
                gamma[j + 1] = -primed[j].e * gamma[j] * primed[next].b / primed[next].a;
            }
            let alpha: Vec<C64> = (0..n)
                .map(|j| -gamma[j] * primed[j].a / primed[j].c)
                .collect();
            let beta: Vec<C64> = (0..n)
                .map(|j| -gamma[j] * primed[j].a / primed[j].b)
                .collect();
            let at = |v: &Vec<C64>, i: i64| v[wrap(i, n)];
            let pr = |i: i64| primed[wrap(i, n)];
            let mut x = Vec::with_capacity(n);
            let mut y = Vec::with_capacity(n);
            for j in 0..n as i64 {
                x.push(-pr(j - 2).d * at(&beta, j - 2) / at(&alpha, j - 1));
                // sign fixed by the (1,3) gauge equation αc'/γ_{j+1} = -1/y
                y.push(-at(&gamma, j - 1) / (pr(j - 2).c * at(&alpha, j - 2)));
            }
            let gauges = GaugeSequence {
                diag: (0..n).map(|j| [alpha[j], beta[j], gamma[j]]).collect(),
            };
            Ok(Reduced::Xy(XYCoords::new(x, y)?, gauges))
        }
    }
}

/// Builds the primed sequence `L'_j = g_{j+1}^{-1} L_j g_j` from `(a, b)`
/// data and a diagonal gauge sequence; used to exercise [`gauge_reduce`].
pub fn prime_from_ab(ab: &ABCoords, gauges: &[[C64; 3]]) -> Vec<PrimedMatrix> {
    let n = ab.n();
    (0..n)
        .map(|j| {
            let g = gauges[j];
            let gn = gauges[(j + 1) % n];
            PrimedMatrix {
                c: gn[2] / g[0],
                d: gn[0] / g[1],
                b: ab.b[j] * gn[2] / g[1],
                e: gn[1] / g[2],
                a: ab.a[j] * gn[2] / g[2],
            }
        })
        .collect()
}
