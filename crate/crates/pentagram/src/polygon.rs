//! Projective-plane geometry of twisted polygons.
//!
//! A twisted n-gon is a bi-infinite vertex sequence `φ: ℤ → ℂP²` with
//! `φ(k+n) = M ∘ φ(k)` for a monodromy `M ∈ PSL(3, ℂ)` and no three
//! consecutive vertices collinear. We store the `n` base vertices and an
//! `SL(3, ℂ)` representative of `M`.
//!
//! The pentagram map sends vertex `i` to the intersection of the diagonals
//! `(i-1, i+1)` and `(i, i+2)` and commutes with the `PSL(3, ℂ)` action.
//!
//! When `n` is not divisible by 3 the chain has a unique lift to vectors
//! with `det(V_j, V_{j+1}, V_{j+2}) = 1` (given the monodromy representative;
//! the residual global cube-root freedom is pinned by a phase convention),
//! and the recurrence coefficients of that lift are the `(a, b)` coordinates.
//! The `(x, y)` coordinates are recovered from *any* lift through the
//! scale-invariant combinations
//!
//! ```text
//! x_i = C_{i-1} A_{i-2} / (B_{i-2} B_{i-1}),   y_i = -B_{i-1} / (A_{i-2} A_{i-1})
//! ```
//!
//! of the general recurrence `W_{j+3} = A_j W_{j+2} + B_j W_{j+1} + C_j W_j`,
//! which agrees with the normalized-lift definition whenever the latter
//! exists and extends it to every `n`.

use crate::coords::{ABCoords, XYCoords};
use crate::error::Error;
use crate::num::{wrap, C64};
use crate::tol;
use crate::Result;
use nalgebra::{DMatrix, Matrix3, Vector3};

/// A point of ℂP² as a nonzero homogeneous 3-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    pub h: Vector3<C64>,
}

/// A line of ℂP² as a nonzero homogeneous covector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveLine {
    pub l: Vector3<C64>,
}

impl ProjectivePoint {
    pub fn new(h0: C64, h1: C64, h2: C64) -> Self {
        ProjectivePoint { h: Vector3::new(h0, h1, h2) }
    }

    pub fn from_vector(h: Vector3<C64>) -> Self {
        ProjectivePoint { h }
    }

    /// Projective equality: all 2×2 minors of the 2×3 stack vanish
    /// (relative to the vector scales).
    pub fn eq_projective(&self, other: &ProjectivePoint) -> bool {
        let scale = self.h.norm() * other.h.norm();
        max_minor(&self.h, &other.h) <= 1e-12 * scale.max(f64::MIN_POSITIVE)
    }
}

fn max_minor(u: &Vector3<C64>, v: &Vector3<C64>) -> f64 {
    let m01 = u[0] * v[1] - u[1] * v[0];
    let m02 = u[0] * v[2] - u[2] * v[0];
    let m12 = u[1] * v[2] - u[2] * v[1];
    m01.norm().max(m02.norm()).max(m12.norm())
}

/// Complex cross product (no conjugation): the homogeneous-coordinate
/// join/meet workhorse.
fn cross(u: &Vector3<C64>, v: &Vector3<C64>) -> Vector3<C64> {
    Vector3::new(
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
}

/// The line through two distinct points.
pub fn line_through(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<ProjectiveLine> {
    let l = cross(&p.h, &q.h);
    let scale = p.h.norm() * q.h.norm();
    if l.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateLine);
    }
    Ok(ProjectiveLine { l })
}

/// The intersection point of two distinct lines.
pub fn intersect(l1: &ProjectiveLine, l2: &ProjectiveLine) -> Result<ProjectivePoint> {
    let p = cross(&l1.l, &l2.l);
    let scale = l1.l.norm() * l2.l.norm();
    if p.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateIntersection);
    }
    Ok(ProjectivePoint { h: p })
}

fn det3(u: &Vector3<C64>, v: &Vector3<C64>, w: &Vector3<C64>) -> C64 {
    Matrix3::from_columns(&[*u, *v, *w]).determinant()
}

/// Renormalize a monodromy representative to `det M = 1`, choosing the cube
/// root whose scaling has argument in `[0, 2π/3)` (so an already-unimodular
/// matrix is returned unchanged).
pub fn normalize_monodromy(m: &Matrix3<C64>) -> Result<Matrix3<C64>> {
    let d = m.determinant();
    if d.norm() < 1e-300 {
        return Err(Error::NonGeneric("monodromy is singular".into()));
    }
    let s = fix_cube_phase(crate::num::cbrt_principal(1.0 / d));
    Ok(m * s)
}

/// Multiply by the cube root of unity that puts the argument in `[0, 2π/3)`.
pub fn fix_cube_phase(s: C64) -> C64 {
    let third = 2.0 * std::f64::consts::PI / 3.0;
    let mut out = s;
    for _ in 0..3 {
        let a = out.arg();
        // arg ∈ (-π, π]; shift negatives up by 2π for the [0, 2π) window
        let a = if a < 0.0 { a + 2.0 * std::f64::consts::PI } else { a };
        if a < third - 1e-15 || (a - 2.0 * std::f64::consts::PI).abs() < 1e-15 {
            return out;
        }
        out *= C64::from_polar(1.0, third);
    }
    out
}

/// A twisted n-gon: `n` base vertices plus an `SL(3, ℂ)` monodromy
/// representative. Construction validates genericity.
#[derive(Debug, Clone)]
pub struct VertexChain {
    vertices: Vec<ProjectivePoint>,
    monodromy: Matrix3<C64>,
}

/// The lift with unit consecutive determinants (`n mod 3 ≠ 0` only).
#[derive(Debug, Clone)]
pub struct NormalizedLift {
    pub v: Vec<Vector3<C64>>,
    pub monodromy: Matrix3<C64>,
}

/// Result of the projective-equivalence test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    /// Cyclic relabeling shift under which the coordinate strings agree.
    pub shift: usize,
    pub deviation: f64,
}

impl VertexChain {
    /// Validates `n ≥ 4`, a nonsingular monodromy (renormalized to
    /// determinant 1), and genericity of every consecutive vertex triple
    /// including the monodromy wrap-around.
    pub fn new(vertices: Vec<ProjectivePoint>, monodromy: Matrix3<C64>) -> Result<Self> {
        let n = vertices.len();
        if n < 4 {
            return Err(Error::UnsupportedN(n, "twisted chains need n >= 4"));
        }
        let monodromy = normalize_monodromy(&monodromy)?;
        let chain = VertexChain { vertices, monodromy };
        chain.check_genericity()?;
        Ok(chain)
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[ProjectivePoint] {
        &self.vertices
    }

    pub fn monodromy(&self) -> &Matrix3<C64> {
        &self.monodromy
    }

    /// Lifted representative of `φ(j)` for any integer `j`, propagated
    /// through the monodromy (or its inverse) as needed.
    pub fn rep(&self, j: i64) -> Vector3<C64> {
        let n = self.n() as i64;
        let base = wrap(j, self.n());
        let mut v = self.vertices[base].h;
        let mut k = j - base as i64;
        debug_assert_eq!(k % n, 0);
        while k > 0 {
            v = self.monodromy * v;
            k -= n;
        }
        if k < 0 {
            let minv = self
                .monodromy
                .try_inverse()
                .expect("monodromy validated nonsingular");
            while k < 0 {
                v = minv * v;
                k += n;
            }
        }
        v
    }

    fn check_genericity(&self) -> Result<()> {
        let n = self.n();
        for j in 0..n {
            let u = self.rep(j as i64).normalize();
            let v = self.rep(j as i64 + 1).normalize();
            let w = self.rep(j as i64 + 2).normalize();
            if det3(&u, &v, &w).norm() < tol::GENERICITY_DET {
                return Err(Error::DegenerateChain(j));
            }
        }
        Ok(())
    }

    /// The geometric pentagram map: output vertex `i` is the intersection of
    /// the diagonals `(i-1, i+1)` and `(i, i+2)`; the monodromy is carried
    /// over unchanged.
    pub fn pentagram_step(&self) -> Result<VertexChain> {
        let n = self.n();
        let mut image = Vec::with_capacity(n);
        for i in 0..n as i64 {
            let d1 = line_through(
                &ProjectivePoint::from_vector(self.rep(i - 1)),
                &ProjectivePoint::from_vector(self.rep(i + 1)),
            )
            .map_err(|_| Error::DegenerateDiagonal(i as usize))?;
            let d2 = line_through(
                &ProjectivePoint::from_vector(self.rep(i)),
                &ProjectivePoint::from_vector(self.rep(i + 2)),
            )
            .map_err(|_| Error::DegenerateDiagonal(i as usize))?;
            let p = intersect(&d1, &d2).map_err(|_| Error::DegenerateDiagonal(i as usize))?;
            // unit-normalize: iterated cross products otherwise collapse
            // double-exponentially in scale along orbits
            image.push(ProjectivePoint::from_vector(p.h.normalize()));
        }
        VertexChain::new(image, self.monodromy).map_err(|e| match e {
            Error::DegenerateChain(j) => {
                Error::MapUndefined(format!("image chain degenerate near vertex {j}"))
            }
            other => other,
        })
    }

    /// Apply a projective transformation to every vertex; the monodromy
    /// transforms by conjugation.
    pub fn transform(&self, g: &Matrix3<C64>) -> Result<VertexChain> {
        let ginv = g
            .try_inverse()
            .ok_or_else(|| Error::NonGeneric("singular transformation".into()))?;
        let vertices = self
            .vertices
            .iter()
            .map(|p| ProjectivePoint::from_vector(g * p.h))
            .collect();
        VertexChain::new(vertices, g * self.monodromy * ginv)
    }

    /// The unique lift with `det(V_j, V_{j+1}, V_{j+2}) = 1` for all `j`.
    ///
    /// The scalings solve the cyclic system
    /// `s_j s_{j+1} s_{j+2} det(W_j, W_{j+1}, W_{j+2}) = 1`, which is linear
    /// in logarithms and invertible exactly when `n mod 3 ≠ 0`; the global
    /// cube-root freedom is pinned by requiring `arg(s_0) ∈ [0, 2π/3)`.
    pub fn lift_normalized(&self) -> Result<NormalizedLift> {
        let n = self.n();
        if n % 3 == 0 {
            return Err(Error::IndivisibilityViolated(n));
        }
        self.check_genericity()?;
        let d: Vec<C64> = (0..n as i64)
            .map(|j| det3(&self.rep(j), &self.rep(j + 1), &self.rep(j + 2)))
            .collect();
        // t_j + t_{j+1} + t_{j+2} = -ln d_j
        let mut mat = DMatrix::<C64>::zeros(n, n);
        let mut rhs = DMatrix::<C64>::zeros(n, 1);
        for j in 0..n {
            for k in 0..3 {
                mat[(j, wrap(j as i64 + k, n))] += C64::new(1.0, 0.0);
            }
            rhs[(j, 0)] = -d[j].ln();
        }
        let sol = mat
            .lu()
            .solve(&rhs)
            .ok_or(Error::IndivisibilityViolated(n))?;
        let mut s: Vec<C64> = (0..n).map(|j| sol[(j, 0)].exp()).collect();
        let adjust = fix_cube_phase(s[0]) / s[0];
        for sj in &mut s {
            *sj *= adjust;
        }
        let v: Vec<Vector3<C64>> = (0..n).map(|j| self.rep(j as i64) * s[j]).collect();
        let lift = NormalizedLift { v, monodromy: self.monodromy };
        let worst = lift.max_det_deviation();
        if worst > 1e-8 {
            return Err(Error::InconsistentLift(worst));
        }
        Ok(lift)
    }

    /// The `(a, b)` coordinates of the chain (`n mod 3 ≠ 0`).
    pub fn to_ab(&self) -> Result<ABCoords> {
        let lift = self.lift_normalized()?;
        lift.to_ab()
    }

    /// The `(x, y)` coordinates of the chain, for every `n ≥ 4`, through the
    /// scale-invariant combinations of the general recurrence coefficients.
    pub fn to_xy(&self) -> Result<XYCoords> {
        let n = self.n();
        let rep = |j: i64| self.rep(j);
        let mut coef = Vec::with_capacity(n);
        for j in 0..n as i64 {
            let m = Matrix3::from_columns(&[rep(j + 2), rep(j + 1), rep(j)]);
            let target = rep(j + 3);
            let sol = m
                .lu()
                .solve(&target)
                .ok_or(Error::DegenerateChain(j as usize))?;
            coef.push((sol[0], sol[1], sol[2])); // (A_j, B_j, C_j)
        }
        let at = |i: i64| coef[wrap(i, n)];
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for i in 0..n as i64 {
            let (a2, b2, _) = at(i - 2);
            let (a1, b1, c1) = at(i - 1);
            x.push(c1 * a2 / (b2 * b1));
            y.push(-b1 / (a2 * a1));
        }
        XYCoords::new(x, y)
    }

    /// Tests projective equivalence up to cyclic relabeling by comparing the
    /// `(x, y)` coordinate strings (projective invariants).
    pub fn projectively_equivalent(&self, other: &VertexChain) -> Result<Equivalence> {
        if self.n() != other.n() {
            return Ok(Equivalence { equivalent: false, shift: 0, deviation: f64::INFINITY });
        }
        let xy1 = self.to_xy()?;
        let xy2 = other.to_xy()?;
        let (shift, deviation) = xy1.best_shift_distance(&xy2);
        Ok(Equivalence { equivalent: deviation < tol::EQUIVALENCE, shift, deviation })
    }

    /// A chain is closed when its monodromy is a scalar matrix.
    pub fn is_closed(&self) -> bool {
        let m = &self.monodromy;
        let diag_scale = (m[(0, 0)].norm() + m[(1, 1)].norm() + m[(2, 2)].norm()) / 3.0;
        if diag_scale == 0.0 {
            return false;
        }
        let mut off = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    off = off.max(m[(i, j)].norm());
                }
            }
        }
        let spread = (m[(0, 0)] - m[(1, 1)])
            .norm()
            .max((m[(0, 0)] - m[(2, 2)]).norm());
        off / diag_scale < tol::EQUIVALENCE && spread / diag_scale < tol::EQUIVALENCE
    }
}

impl NormalizedLift {
    /// Lifted vector for any `j`, wrapped through the monodromy.
    pub fn at(&self, j: i64) -> Vector3<C64> {
        let n = self.v.len() as i64;
        let base = wrap(j, self.v.len());
        let mut v = self.v[base];
        let mut k = j - base as i64;
        while k > 0 {
            v = self.monodromy * v;
            k -= n;
        }
        if k < 0 {
            let minv = self.monodromy.try_inverse().expect("nonsingular");
            while k < 0 {
                v = minv * v;
                k += n;
            }
        }
        v
    }

    /// Max over `j` of `|det(V_j, V_{j+1}, V_{j+2}) - 1|`, wrap-around
    /// included.
    pub fn max_det_deviation(&self) -> f64 {
        let n = self.v.len();
        (0..n as i64)
            .map(|j| (det3(&self.at(j), &self.at(j + 1), &self.at(j + 2)) - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// Reads off the recurrence coefficients
    /// `V_{j+3} = a_j V_{j+2} + b_j V_{j+1} + c_j V_j` and checks `c_j = 1`.
    pub fn to_ab(&self) -> Result<ABCoords> {
        let n = self.v.len();
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        let mut worst_c = 0.0f64;
        for j in 0..n as i64 {
            let m = Matrix3::from_columns(&[self.at(j + 2), self.at(j + 1), self.at(j)]);
            let sol = m
                .lu()
                .solve(&self.at(j + 3))
                .ok_or(Error::DegenerateChain(j as usize))?;
            a.push(sol[0]);
            b.push(sol[1]);
            worst_c = worst_c.max((sol[2] - 1.0).norm());
        }
        if worst_c > 1e-8 {
            return Err(Error::InconsistentLift(worst_c));
        }
        ABCoords::new(a, b)
    }
}

impl ABCoords {
    /// Builds the chain with `V_0, V_1, V_2` the standard basis and the
    /// recurrence generating the rest; the monodromy is the matrix with
    /// columns `(V_n, V_{n+1}, V_{n+2})`, which has determinant 1 exactly.
    pub fn to_chain(&self) -> Result<VertexChain> {
        let n = self.n();
        let mut v: Vec<Vector3<C64>> = vec![
            Vector3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
            Vector3::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            Vector3::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
        ];
        for j in 0..n {
            let next = v[j + 2] * self.a[j] + v[j + 1] * self.b[j] + v[j];
            v.push(next);
        }
        let m = Matrix3::from_columns(&[v[n], v[n + 1], v[n + 2]]);
        let vertices = v[..n]
            .iter()
            .map(|h| ProjectivePoint::from_vector(*h))
            .collect();
        VertexChain::new(vertices, m)
    }
}
