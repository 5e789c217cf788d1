//! Polynomial root finding: a cubic solver for spectral-curve fibers and an
//! Aberth-Ehrlich simultaneous iteration for the branch-point discriminant.

use crate::error::Error;
use crate::num::C64;
use crate::tol;
use crate::Result;

fn newton_cubic(r: C64, c2: C64, c1: C64, c0: C64) -> C64 {
    let mut r = r;
    for _ in 0..8 {
        let f = ((r + c2) * r + c1) * r + c0;
        let df = (r * 3.0 + c2 * 2.0) * r + c1;
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        r -= step;
        if step.norm() <= 1e-16 * (1.0 + r.norm()) {
            break;
        }
    }
    r
}

/// Roots of the monic cubic `k³ + c2 k² + c1 k + c0`.
///
/// The spectral-curve fibers have wildly graded roots near `z = 0, ∞`
/// (sizes like `(R, R, 1)` or `(1, ε, ε)`), where the plain Cardano form
/// loses the extreme root to cancellation. So: Cardano plus Newton for the
/// largest root (always well conditioned), then exact deflation through the
/// relations `γ = -c0/r₁`, `β = (γ - c1)/r₁` and a cancellation-aware
/// quadratic for the other two.
pub fn cubic_roots_monic(c2: C64, c1: C64, c0: C64) -> [C64; 3] {
    let third: C64 = C64::new(1.0 / 3.0, 0.0);
    let p = c1 - c2 * c2 * third;
    let q = c2 * c2 * c2 * C64::new(2.0 / 27.0, 0.0) - c2 * c1 * third + c0;
    let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);

    let cardano = if p.norm() == 0.0 && q.norm() == 0.0 {
        [-c2 * third; 3]
    } else {
        let disc = (q * q * 0.25 + p * p * p / 27.0).sqrt();
        // pick the branch that avoids cancellation in -q/2 ± disc
        let t1 = -q * 0.5 + disc;
        let t2 = -q * 0.5 - disc;
        let big = if t1.norm() >= t2.norm() { t1 } else { t2 };
        let u = crate::num::cbrt_principal(big);
        let v = if u.norm() > 0.0 { -p / (u * 3.0) } else { C64::new(0.0, 0.0) };
        let mut out = [C64::new(0.0, 0.0); 3];
        let mut w = C64::new(1.0, 0.0);
        for r in &mut out {
            // roots of the depressed cubic: ω^j u + ω^{-j} v, with uv = -p/3
            *r = u * w + v * w.conj() - c2 * third;
            w *= omega;
        }
        out
    };
    let r1 = cardano
        .into_iter()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .map(|r| newton_cubic(r, c2, c1, c0))
        .unwrap();
    if r1.norm() == 0.0 {
        // all three roots vanish only when the cubic is k³
        return [C64::new(0.0, 0.0); 3];
    }
    // k³ + c2 k² + c1 k + c0 = (k - r1)(k² + β k + γ)
    let gamma = -c0 / r1;
    let beta = (gamma - c1) / r1;
    let d = (beta * beta - gamma * 4.0).sqrt();
    let s1 = -(beta + d) * 0.5;
    let s2 = -(beta - d) * 0.5;
    let t = if s1.norm() >= s2.norm() { s1 } else { s2 };
    let (r2, r3) = if t.norm() == 0.0 {
        (t, t)
    } else {
        (t, gamma / t)
    };
    [
        r1,
        newton_cubic(r2, c2, c1, c0),
        newton_cubic(r3, c2, c1, c0),
    ]
}

fn horner_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `Σ coeffs[k] z^k` (ascending order, nonzero leading
/// coefficient) by Aberth-Ehrlich simultaneous iteration.
pub fn polynomial_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if lead.norm() == 0.0 {
        return Err(Error::NonGeneric("vanishing leading coefficient".into()));
    }
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();

    // Cauchy bound for the root moduli, initial guesses on a slightly
    // eccentric circle inside it.
    let bound = 1.0
        + monic[..degree]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let radius = bound.min(
        2.0 * monic[0].norm().powf(1.0 / degree as f64).max(0.25),
    );
    let mut z: Vec<C64> = (0..degree)
        .map(|k| {
            C64::from_polar(
                radius * (1.0 + 0.1 * (k as f64) / degree as f64),
                2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4,
            )
        })
        .collect();

    for _ in 0..tol::ROOT_MAX_ITER {
        let mut max_step = 0.0f64;
        for j in 0..degree {
            let (p, dp) = horner_with_derivative(&monic, z[j]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() > 0.0 { p / dp } else { p };
            let mut s = C64::new(0.0, 0.0);
            for (k, &zk) in z.iter().enumerate() {
                if k != j {
                    let d = z[j] - zk;
                    if d.norm() == 0.0 {
                        continue;
                    }
                    s += 1.0 / d;
                }
            }
            let denom = C64::new(1.0, 0.0) - w * s;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
        }
        if max_step < tol::ROOT_CONVERGENCE {
            return Ok(z);
        }
    }
    // steps can stagnate above the threshold at the roundoff floor; accept
    // if every iterate is a backward-stable root
    let backward_ok = z.iter().all(|&zj| {
        let (p, _) = horner_with_derivative(&monic, zj);
        let scale: f64 = monic
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * zj.norm().powi(k as i32))
            .sum();
        p.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE)
    });
    if backward_ok {
        return Ok(z);
    }
    Err(Error::NonGeneric(format!(
        "Aberth iteration did not converge within {} steps",
        tol::ROOT_MAX_ITER
    )))
}

/// Synthetic division by `(z - root)`: returns the quotient and the scalar
/// remainder.
pub fn deflate(coeffs: &[C64], root: C64) -> (Vec<C64>, C64) {
    let degree = coeffs.len() - 1;
    let mut quotient = vec![C64::new(0.0, 0.0); degree];
    let mut carry = C64::new(0.0, 0.0);
    for k in (0..=degree).rev() {
        let value = coeffs[k] + carry * root;
        if k == 0 {
            return (quotient, value);
        }
        quotient[k - 1] = value;
        carry = value;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::c;

    #[test]
    fn cubic_known_roots() {
        // (k - 1)(k - 2i)(k + 3) = k³ + (2 - 2i)k² + (-3 - 4i)k + 6i
        let roots = cubic_roots_monic(c(2.0, -2.0), c(-3.0, -4.0), c(0.0, 6.0));
        for target in [c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)] {
            let hit = roots.iter().any(|r| (r - target).norm() < 1e-12);
            assert!(hit, "missing root {target}, got {roots:?}");
        }
    }

    #[test]
    fn cubic_extreme_scale() {
        // roots 1e20, -1e20, 1e-8: coefficients span ~56 orders of magnitude
        let r1 = c(1e20, 0.0);
        let r2 = c(-1e20, 0.0);
        let r3 = c(1e-8, 0.0);
        let c2 = -(r1 + r2 + r3);
        let c1 = r1 * r2 + r1 * r3 + r2 * r3;
        let c0 = -r1 * r2 * r3;
        let roots = cubic_roots_monic(c2, c1, c0);
        for target in [r1, r2, r3] {
            let best = roots
                .iter()
                .map(|r| (r - target).norm() / target.norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "target {target}: rel err {best:.3e}");
        }
    }

    #[test]
    fn aberth_recovers_constructed_roots() {
        let targets: Vec<C64> = (0..12)
            .map(|k| C64::from_polar(0.3 + 0.2 * k as f64, 0.7 * k as f64))
            .collect();
        let mut coeffs = vec![c(1.0, 0.0)];
        for t in &targets {
            // multiply by (z - t)
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * t;
            }
            coeffs = next;
        }
        let roots = polynomial_roots(&coeffs).unwrap();
        for t in &targets {
            let best = roots
                .iter()
                .map(|r| (r - t).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "target {t}: err {best:.3e}");
        }
    }

    #[test]
    fn deflation_removes_a_root() {
        // (z - 1)² (z + 2)
        let coeffs = vec![c(2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let (q, rem) = deflate(&coeffs, c(1.0, 0.0));
        assert!(rem.norm() < 1e-14);
        let (q2, rem2) = deflate(&q, c(1.0, 0.0));
        assert!(rem2.norm() < 1e-14);
        assert!((q2[0] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((q2[1] - c(1.0, 0.0)).norm() < 1e-14);
    }
}
