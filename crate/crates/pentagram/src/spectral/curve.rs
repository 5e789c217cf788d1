//! Branch-point census and genus of the spectral curve.
//!
//! Over each `z ≠ 0` the curve is a 3-sheeted cover; sheets collide where
//! the discriminant of the cubic fiber vanishes. Working with the
//! polynomial form `p(k, z) = z^n R(k, z)` with coefficients
//!
//! ```text
//! c3 = z^n,  c2 = -Σ J_j z^{n-q+j},  c1 = Σ I_j z^{q-j},  c0 = -1,
//! ```
//!
//! the discriminant `Δ(z)` is a polynomial of degree `3n` with a zero of
//! order `n` at `z = 0`; stripping it leaves `2n` finite branch points for
//! generic twisted data. Riemann-Hurwitz for a 3-sheeted cover of the
//! sphere gives `2 - 2g = 6 - ν`, where the total branching `ν` adds 2 to
//! the finite count for odd `n` (the points over `z = 0, ∞` where two
//! sheets meet).
//!
//! Closed polygons are the special stratum where `(k, z) = (1, 1)` is a
//! triple point: the discriminant acquires a sextuple root at `z = 1` that
//! does not correspond to branching of the normalization, so it is deflated
//! before the census and the genus drops by 3.

use super::roots;
use super::SpectralInvariants;
use crate::error::Error;
use crate::laurent::LaurentPoly;
use crate::num::C64;
use crate::tol;
use crate::Result;

/// Puiseux leading data at one of the six marked points over `z = 0, ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedPoint {
    pub name: &'static str,
    /// Leading exponent of `k` in the local parameter `z` (at `O_i`) or
    /// `1/z` (at `W_i`); half-integers are stored doubled in
    /// `exponent_times_two`.
    pub exponent_times_two: i64,
    pub leading: C64,
}

/// Output of the branch-point census.
#[derive(Debug, Clone)]
pub struct CurveAnalysis {
    /// Simple branch points in the finite `z ≠ 0` plane.
    pub branch_z: Vec<C64>,
    /// Count of finite branch points (with multiplicity; all simple for
    /// generic data).
    pub nu_finite: usize,
    /// Total branching including the marked points for odd `n`.
    pub nu_total: usize,
    pub genus: usize,
    /// True when the closed-polygon relations hold and the `z = 1`
    /// sextuple discriminant root was deflated.
    pub closed: bool,
    /// Puiseux leading terms at `O_1, O_2, O_3, W_1, W_2, W_3`.
    pub marked_points: Vec<MarkedPoint>,
}

/// Coefficients (ascending in `z`) of the discriminant of the cubic fiber,
/// computed exactly from the invariants via
/// `Δ = 18 c3 c2 c1 c0 - 4 c2³ c0 + c2² c1² - 4 c3 c1³ - 27 c3² c0²`.
fn discriminant_poly(inv: &SpectralInvariants) -> LaurentPoly {
    let n = inv.n as i64;
    let q = inv.q as i64;
    let one = C64::new(1.0, 0.0);
    let c3 = LaurentPoly::monomial(one, n);
    let c2 = LaurentPoly::from_window(n - q, inv.j.iter().map(|v| -v).collect());
    let c1 = LaurentPoly::from_window(0, inv.i.iter().rev().copied().collect());
    let c0 = LaurentPoly::constant(-one);
    let t1 = c3.mul(&c2).mul(&c1).mul(&c0).scale(C64::new(18.0, 0.0));
    let t2 = c2.mul(&c2).mul(&c2).mul(&c0).scale(C64::new(-4.0, 0.0));
    let t3 = c2.mul(&c2).mul(&c1).mul(&c1);
    let t4 = c3.mul(&c1).mul(&c1).mul(&c1).scale(C64::new(-4.0, 0.0));
    let t5 = c3.mul(&c3).mul(&c0).mul(&c0).scale(C64::new(-27.0, 0.0));
    t1.add(&t2).add(&t3).add(&t4).add(&t5)
}

/// Locates the branch points of the spectral curve and counts the genus.
///
/// Errors with `NonGeneric` when root clustering detects a multiple branch
/// point that is not the closed-polygon triple point at `z = 1`.
pub fn branch_points(inv: &SpectralInvariants) -> Result<CurveAnalysis> {
    let n = inv.n;
    let disc = discriminant_poly(inv);
    if disc.is_zero() {
        return Err(Error::NonGeneric("identically vanishing discriminant".into()));
    }
    // strip the known z = 0 factor (empirically of order exactly n for
    // generic data; pruning already removed the vanishing tail)
    let valuation = disc.min_exp().unwrap();
    if valuation < 0 {
        return Err(Error::NonGeneric(format!("negative discriminant valuation {valuation}")));
    }
    let coeffs: Vec<C64> = (valuation..=disc.max_exp().unwrap())
        .map(|e| disc.coeff(e))
        .collect();

    // closed stratum: deflate the sextuple root at z = 1 analytically
    let closed = inv
        .closed_relations()
        .iter()
        .all(|r| *r < tol::CLOSED_RELATIONS);
    let mut reduced = coeffs;
    if closed {
        let scale = reduced.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for _ in 0..6 {
            let (quotient, remainder) = roots::deflate(&reduced, C64::new(1.0, 0.0));
            if remainder.norm() > 1e-5 * scale {
                return Err(Error::NonGeneric(format!(
                    "closed relations hold but z = 1 is not a sextuple discriminant root (remainder {:.3e})",
                    remainder.norm() / scale
                )));
            }
            reduced = quotient;
        }
    }

    let branch_z = roots::polynomial_roots(&reduced)?;
    // multiplicity check by relative clustering
    for (i, zi) in branch_z.iter().enumerate() {
        for zj in &branch_z[i + 1..] {
            if (zi - zj).norm() < tol::ROOT_CLUSTER * (1.0 + zi.norm().max(zj.norm())) {
                return Err(Error::NonGeneric(format!(
                    "multiple branch point near z = {zi}"
                )));
            }
        }
    }
    let nu_finite = branch_z.len();
    let nu_total = nu_finite + if n % 2 == 1 { 2 } else { 0 };
    if nu_total % 2 != 0 || nu_total < 4 {
        return Err(Error::NonGeneric(format!("odd total branching {nu_total}")));
    }
    let genus = nu_total / 2 - 2;
    Ok(CurveAnalysis {
        branch_z,
        nu_finite,
        nu_total,
        genus,
        closed,
        marked_points: marked_points(inv)?,
    })
}

/// Closed-form Puiseux leading data at the six marked points.
pub fn marked_points(inv: &SpectralInvariants) -> Result<Vec<MarkedPoint>> {
    let iq = inv.i_q();
    let jq = inv.j_q();
    if iq.norm() == 0.0 || jq.norm() == 0.0 {
        return Err(Error::Degenerate("I_q or J_q vanishes".into()));
    }
    let n = inv.n as i64;
    let q = inv.q as i64;
    let mut out = vec![
        MarkedPoint { name: "O1", exponent_times_two: 0, leading: 1.0 / iq },
        MarkedPoint { name: "W1", exponent_times_two: 0, leading: jq },
    ];
    if inv.n % 2 == 0 {
        let j0 = inv.j[0];
        let i0 = inv.i[0];
        let so = (j0 * j0 * 0.25 - iq).sqrt();
        let sw = (i0 * i0 - jq * 4.0).sqrt();
        out.push(MarkedPoint { name: "O2", exponent_times_two: -2 * q, leading: j0 * 0.5 + so });
        out.push(MarkedPoint { name: "O3", exponent_times_two: -2 * q, leading: j0 * 0.5 - so });
        out.push(MarkedPoint { name: "W2", exponent_times_two: -2 * q, leading: (i0 + sw) / (jq * 2.0) });
        out.push(MarkedPoint { name: "W3", exponent_times_two: -2 * q, leading: (i0 - sw) / (jq * 2.0) });
    } else {
        let so = (-iq).sqrt();
        let sw = 1.0 / (-jq).sqrt();
        out.push(MarkedPoint { name: "O2", exponent_times_two: -n, leading: so });
        out.push(MarkedPoint { name: "O3", exponent_times_two: -n, leading: -so });
        out.push(MarkedPoint { name: "W2", exponent_times_two: -n, leading: sw });
        out.push(MarkedPoint { name: "W3", exponent_times_two: -n, leading: -sw });
    }
    Ok(out)
}
