//! The spectral side of the Lax representation: integrals of motion, the
//! spectral curve and its marked points, conservation checks, closed-polygon
//! relations, and Casimirs.
//!
//! The spectral function of a monodromy operator `T(z)` is
//!
//! ```text
//! R(k, z) = k³ - k² Σ J_j z^{j-q} + k (Σ I_j z^{q-j}) z^{-n} - z^{-n},
//! ```
//!
//! read off from `tr T = Σ J_j z^{j-q}` and `tr T^{-1} = Σ I_j z^{q-j}`
//! (with `q = ⌊n/2⌋`). For the `(a, b)` Lax matrix this normalization is
//! exact as stated; for the `(x, y)` matrix the traces are first rescaled by
//! the constant `C` with `C³ = z^n det T̃`, whose cube root is fixed by the
//! chosen [`CubeRootPolicy`].

pub mod curve;
pub mod limits;
pub mod roots;

pub use curve::{branch_points, CurveAnalysis, MarkedPoint};
pub use limits::{
    floquet_bloch, f_function, marked_point_limits, singularity_expansions_check, FloquetBloch,
    MarkedLimitsReport, SingularityReport,
};

use crate::coords::{ABCoords, XYCoords};
use crate::error::Error;
use crate::lax;
use crate::laurent::{LaurentMatrix3, LaurentPoly};
use crate::num::{cbrt_near, cbrt_principal, C64};
use crate::polygon::VertexChain;
use crate::Result;

/// Which Lax kind a monodromy came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Ab,
    Xy,
}

/// How to pick the cube root of `C³ = z^n det T` for the `(x, y)` kind.
///
/// The three branches correspond to the three `(a, b)`-preimages of an
/// `(x, y)` point (equivalently, the three unimodular representatives of
/// the projective monodromy), so the choice is a genuine convention:
/// `Principal` takes the root with argument in `(-π/3, π/3]`, `Near`
/// continues a branch from a reference value (used along orbits and for
/// closed polygons, where `T̃(1) = C·Id` pins the constant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubeRootPolicy {
    Principal,
    Near(C64),
}

/// The integrals of motion `I_0..I_q`, `J_0..J_q` and the rescaling
/// constant `C` (`C = 1` for the `(a, b)` kind).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInvariants {
    pub n: usize,
    pub q: usize,
    pub i: Vec<C64>,
    pub j: Vec<C64>,
    pub c: C64,
}

/// Relative tolerance for trace coefficients that must vanish outside the
/// expected exponent window.
const SUPPORT_TOL: f64 = 1e-10;

fn window_coeffs(
    trace: &LaurentPoly,
    lo: i64,
    hi: i64,
) -> Result<Vec<C64>> {
    let scale = trace.max_coeff_mag().max(f64::MIN_POSITIVE);
    for (exp, coeff) in trace.terms() {
        if (exp < lo || exp > hi) && coeff.norm() > SUPPORT_TOL * scale {
            return Err(Error::SupportMismatch { exponent: exp, lo, hi });
        }
    }
    Ok((lo..=hi).map(|e| trace.coeff(e)).collect())
}

/// Extracts the invariants from a monodromy operator of the given kind.
///
/// `policy` is consulted only for the `(x, y)` kind, where the rescaling
/// constant is the chosen cube root of `C³ = z^n det T` (read off the
/// determinant of the assembled product, with a support check).
pub fn invariants_from_monodromy(
    t: &LaurentMatrix3,
    t_inv: &LaurentMatrix3,
    n: usize,
    kind: Kind,
    policy: CubeRootPolicy,
) -> Result<SpectralInvariants> {
    let c3 = match kind {
        Kind::Ab => C64::new(1.0, 0.0),
        Kind::Xy => {
            let det = t.det();
            let scale = det.max_coeff_mag().max(f64::MIN_POSITIVE);
            for (exp, coeff) in det.terms() {
                if exp != -(n as i64) && coeff.norm() > SUPPORT_TOL * scale {
                    return Err(Error::SupportMismatch { exponent: exp, lo: -(n as i64), hi: -(n as i64) });
                }
            }
            det.coeff(-(n as i64))
        }
    };
    invariants_with_c3(t, t_inv, n, c3, policy)
}

fn invariants_with_c3(
    t: &LaurentMatrix3,
    t_inv: &LaurentMatrix3,
    n: usize,
    c3: C64,
    policy: CubeRootPolicy,
) -> Result<SpectralInvariants> {
    let q = n / 2;
    let c = match policy {
        CubeRootPolicy::Principal => cbrt_principal(c3),
        CubeRootPolicy::Near(reference) => cbrt_near(c3, reference),
    };
    // tr T = C Σ J_j z^{j-q};  tr T^{-1} = C^{-1} Σ I_j z^{q-j}
    let tr = t.trace();
    let tr_inv = t_inv.trace();
    let j: Vec<C64> = window_coeffs(&tr, -(q as i64), 0)?
        .into_iter()
        .map(|v| v / c)
        .collect();
    let i_rev = window_coeffs(&tr_inv, 0, q as i64)?;
    let i: Vec<C64> = (0..=q).map(|jj| i_rev[q - jj] * c).collect();
    Ok(SpectralInvariants { n, q, i, j, c })
}

/// Invariants through the `(a, b)` route (`C = 1`).
pub fn invariants_ab(ab: &ABCoords) -> Result<SpectralInvariants> {
    invariants_with_c3(
        &lax::monodromy_ab(ab, 0),
        &lax::monodromy_ab_inv(ab, 0),
        ab.n(),
        C64::new(1.0, 0.0),
        CubeRootPolicy::Principal,
    )
}

/// Invariants through the `(x, y)` route.
///
/// `C³ = z^n det T̃` is taken in the exact factorized form `Π y_i/x_i`
/// (the determinant of the assembled product loses accuracy to
/// cancellation for poorly scaled coordinates).
pub fn invariants_xy(xy: &XYCoords, policy: CubeRootPolicy) -> Result<SpectralInvariants> {
    let c3: C64 = (0..xy.n()).map(|i| xy.y[i] / xy.x[i]).product();
    invariants_with_c3(
        &lax::monodromy_xy(xy, 0),
        &lax::monodromy_xy_inv(xy, 0),
        xy.n(),
        c3,
        policy,
    )
}

/// Invariants of a vertex chain.
///
/// Uses the `(a, b)` route when `n mod 3 ≠ 0` (canonical `C = 1`,
/// determined by the chain's unimodular monodromy representative).
/// Otherwise falls back to the `(x, y)` route; for closed chains the cube
/// root is pinned by `T̃(1) = C·Id`, for twisted ones the principal branch
/// is used.
pub fn invariants_from_chain(chain: &VertexChain) -> Result<SpectralInvariants> {
    if chain.n() % 3 != 0 {
        return invariants_ab(&chain.to_ab()?);
    }
    let xy = chain.to_xy()?;
    let policy = if chain.is_closed() {
        let t1 = lax::monodromy_xy(&xy, 0).eval(C64::new(1.0, 0.0));
        let c_pin = (t1[0][0] + t1[1][1] + t1[2][2]) / 3.0;
        CubeRootPolicy::Near(c_pin)
    } else {
        CubeRootPolicy::Principal
    };
    invariants_xy(&xy, policy)
}

impl SpectralInvariants {
    pub fn i_q(&self) -> C64 {
        self.i[self.q]
    }

    pub fn j_q(&self) -> C64 {
        self.j[self.q]
    }

    /// Multiply by the cube-root-of-unity twist `I -> ωI, J -> ω²J`,
    /// the effect of rebasing the extraction constant `C -> ωC` (both
    /// rescalings of the same `C³ = z^n det T`).
    pub fn twist(&self, omega: C64) -> SpectralInvariants {
        SpectralInvariants {
            n: self.n,
            q: self.q,
            i: self.i.iter().map(|v| v * omega).collect(),
            j: self.j.iter().map(|v| v * omega * omega).collect(),
            c: self.c * omega,
        }
    }

    /// Among the three cube-root twists of `self`, the one closest to
    /// `reference`, together with the max relative deviation from it.
    pub fn align_to(&self, reference: &SpectralInvariants) -> (SpectralInvariants, f64) {
        let mut best: Option<(SpectralInvariants, f64)> = None;
        for k in 0..3u8 {
            let cand = self.twist(crate::num::unity_cbrt(k));
            let dev = cand.relative_distance(reference);
            if best.as_ref().is_none_or(|(_, d)| dev < *d) {
                best = Some((cand, dev));
            }
        }
        best.unwrap()
    }

    /// Max over all invariants of `|self - other| / (1 + |other|)`.
    pub fn relative_distance(&self, other: &SpectralInvariants) -> f64 {
        let mut worst = 0.0f64;
        for (a, b) in self.i.iter().zip(&other.i).chain(self.j.iter().zip(&other.j)) {
            worst = worst.max((a - b).norm() / (1.0 + b.norm()));
        }
        worst
    }

    /// The spectral function `R(k, z)`.
    pub fn curve_eval(&self, k: C64, z: C64) -> Result<C64> {
        if z.norm() == 0.0 {
            return Err(Error::ZeroZ);
        }
        let zn = z.powi(-(self.n as i32));
        Ok(k * k * k - k * k * self.j_poly(z) + k * self.i_poly(z) * zn - zn)
    }

    /// `Σ J_j z^{j-q}`.
    pub fn j_poly(&self, z: C64) -> C64 {
        (0..=self.q)
            .map(|j| self.j[j] * z.powi(j as i32 - self.q as i32))
            .sum()
    }

    /// `Σ I_j z^{q-j}`.
    pub fn i_poly(&self, z: C64) -> C64 {
        (0..=self.q)
            .map(|j| self.i[j] * z.powi(self.q as i32 - j as i32))
            .sum()
    }

    /// `∂R/∂k`.
    pub fn curve_dk(&self, k: C64, z: C64) -> Result<C64> {
        if z.norm() == 0.0 {
            return Err(Error::ZeroZ);
        }
        let zn = z.powi(-(self.n as i32));
        Ok(k * k * 3.0 - k * 2.0 * self.j_poly(z) + self.i_poly(z) * zn)
    }

    /// `∂R/∂z`.
    pub fn curve_dz(&self, k: C64, z: C64) -> Result<C64> {
        if z.norm() == 0.0 {
            return Err(Error::ZeroZ);
        }
        let n = self.n as i32;
        let q = self.q as i32;
        let dj: C64 = (0..=self.q)
            .map(|j| self.j[j] * C64::new(f64::from(j as i32 - q), 0.0) * z.powi(j as i32 - q - 1))
            .sum();
        let di: C64 = (0..=self.q)
            .map(|j| self.i[j] * C64::new(f64::from(q - j as i32), 0.0) * z.powi(q - j as i32 - 1))
            .sum();
        let zn = z.powi(-n);
        let zn1 = z.powi(-n - 1);
        Ok(-k * k * dj + k * (di * zn - self.i_poly(z) * zn1 * f64::from(n))
            + zn1 * f64::from(n))
    }

    /// The three `k` roots of the fiber over `z`.
    pub fn fiber_roots(&self, z: C64) -> Result<[C64; 3]> {
        if z.norm() == 0.0 {
            return Err(Error::ZeroZ);
        }
        let zn = z.powi(-(self.n as i32));
        let c2 = -self.j_poly(z);
        let c1 = self.i_poly(z) * zn;
        let c0 = -zn;
        Ok(roots::cubic_roots_monic(c2, c1, c0))
    }

    /// Residuals of the five closed-polygon relations:
    /// `ΣI - 3`, `ΣJ - 3`, `ΣjI - (3q-n)`, `ΣjJ - (3q-n)`, `Σj²I - Σj²J`.
    pub fn closed_relations(&self) -> [f64; 5] {
        let target = 3.0 * self.q as f64 - self.n as f64;
        let sum_i: C64 = self.i.iter().sum();
        let sum_j: C64 = self.j.iter().sum();
        let w_i: C64 = self.i.iter().enumerate().map(|(j, v)| v * j as f64).sum();
        let w_j: C64 = self.j.iter().enumerate().map(|(j, v)| v * j as f64).sum();
        let w2_i: C64 = self
            .i
            .iter()
            .enumerate()
            .map(|(j, v)| v * (j * j) as f64)
            .sum();
        let w2_j: C64 = self
            .j
            .iter()
            .enumerate()
            .map(|(j, v)| v * (j * j) as f64)
            .sum();
        [
            (sum_i - 3.0).norm(),
            (sum_j - 3.0).norm(),
            (w_i - target).norm(),
            (w_j - target).norm(),
            (w2_i - w2_j).norm(),
        ]
    }

    /// The Casimirs of the invariant Poisson structure.
    pub fn casimirs(&self) -> Result<Casimirs> {
        let iq = self.i_q();
        let jq = self.j_q();
        if iq.norm() == 0.0 || jq.norm() == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let sign_n = if self.n % 2 == 0 { 1.0 } else { -1.0 };
        let sign_q = if self.q % 2 == 0 { 1.0 } else { -1.0 };
        let (e_half, o_half) = if self.n % 2 == 0 {
            (
                Some(self.i[0] * sign_q / iq),
                Some(self.j[0] * sign_q / jq),
            )
        } else {
            (None, None)
        };
        Ok(Casimirs {
            e_n: jq * sign_n / (iq * iq),
            o_n: iq / (jq * jq),
            e_half,
            o_half,
        })
    }
}

/// The Casimir values `E_n`, `O_n` (plus `E_{n/2}`, `O_{n/2}` for even `n`).
#[derive(Debug, Clone, PartialEq)]
pub struct Casimirs {
    pub e_n: C64,
    pub o_n: C64,
    pub e_half: Option<C64>,
    pub o_half: Option<C64>,
}

/// Max relative drift of every invariant along a sequence of invariant
/// vectors: `max |v_t - v_0| / (1 + |v_0|)`.
pub fn conservation_drift(sequence: &[SpectralInvariants]) -> f64 {
    let Some(first) = sequence.first() else {
        return 0.0;
    };
    sequence[1..]
        .iter()
        .map(|s| s.relative_distance(first))
        .fold(0.0, f64::max)
}

/// Invariants along a pentagram orbit in the `(a, b)` coordinates.
pub fn orbit_invariants_ab(ab: &ABCoords, steps: usize) -> Result<Vec<SpectralInvariants>> {
    ab.orbit(steps)?.iter().map(invariants_ab).collect()
}

/// Invariants along a pentagram orbit in the `(x, y)` coordinates, with the
/// cube-root branch continued from step to step.
pub fn orbit_invariants_xy(xy: &XYCoords, steps: usize) -> Result<Vec<SpectralInvariants>> {
    orbit_invariants_xy_from(xy, steps, CubeRootPolicy::Principal)
}

/// Same with an explicit branch policy for the first step (continued
/// thereafter); lets chain-derived orbits keep their pinned constant.
pub fn orbit_invariants_xy_from(
    xy: &XYCoords,
    steps: usize,
    initial: CubeRootPolicy,
) -> Result<Vec<SpectralInvariants>> {
    let orbit = xy.orbit(steps)?;
    let mut out: Vec<SpectralInvariants> = Vec::with_capacity(orbit.len());
    for state in &orbit {
        let policy = match out.last() {
            None => initial,
            Some(prev) => CubeRootPolicy::Near(prev.c),
        };
        out.push(invariants_xy(state, policy)?);
    }
    Ok(out)
}
