//! The invariant Poisson structure, its Casimirs and symplectic leaves, and
//! the explicit invariant 2-form.
//!
//! Everything is phrased in logarithmic coordinates `u_i = ln x_i`,
//! `v_i = ln y_i`, where the pentagram brackets
//!
//! ```text
//! {x_i, x_j} = (δ_{i,j-1} - δ_{i,j+1}) x_i x_j,
//! {y_i, y_j} = (δ_{i,j+1} - δ_{i,j-1}) y_i y_j,   all other brackets zero,
//! ```
//!
//! become a constant antisymmetric matrix `P`, and the leaf 2-form
//!
//! ```text
//! ω₀ = Σ_{j<q} δln x_{2j+1} ∧ δln(Π_{k≤j} x_{2k}) - (same in y)
//! ```
//!
//! becomes a constant antisymmetric matrix `A`. Invariance of the bracket
//! under the map is then the exact matrix identity `J P Jᵀ = P` for the
//! log-Jacobian `J` of the map, and the on-leaf inverse relation reads
//! `P A ξ = ξ` on leaf-tangent vectors ξ.
//!
//! Gradients of the integrals of motion are exact forward-mode derivatives
//! (dual numbers seeded per log direction) of the monodromy-trace
//! extraction pipeline.

use crate::coords::{pentagram_xy_generic, XYCoords};
use crate::error::Error;
use crate::lax;
use crate::num::{cbrt_principal, Dual, Ring, C64};
use crate::spectral::{invariants_xy, CubeRootPolicy, SpectralInvariants};
use crate::tol;
use crate::Result;
use nalgebra::{DMatrix, DVector};

/// The constant Poisson tensor in log coordinates (`2n × 2n`).
#[derive(Debug, Clone)]
pub struct PoissonTensor {
    pub n: usize,
    pub m: DMatrix<f64>,
}

impl PoissonTensor {
    pub fn new(n: usize) -> Self {
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            let next = (i + 1) % n;
            let prev = (i + n - 1) % n;
            // {u_i, u_j} = δ_{i,j-1} - δ_{i,j+1}
            m[(i, next)] += 1.0;
            m[(i, prev)] -= 1.0;
            // {v_i, v_j} = δ_{i,j+1} - δ_{i,j-1}
            m[(n + i, n + prev)] += 1.0;
            m[(n + i, n + next)] -= 1.0;
        }
        PoissonTensor { n, m }
    }

    /// `{f, g} = (grad f) P (grad g)ᵀ` for gradients in log coordinates.
    pub fn bracket(&self, f_grad: &DVector<C64>, g_grad: &DVector<C64>) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..2 * self.n {
            for c in 0..2 * self.n {
                let w = self.m[(r, c)];
                if w != 0.0 {
                    acc += f_grad[r] * g_grad[c] * w;
                }
            }
        }
        acc
    }

    /// Apply to a complex vector.
    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        DVector::from_fn(2 * self.n, |r, _| {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..2 * self.n {
                let w = self.m[(r, c)];
                if w != 0.0 {
                    acc += v[c] * w;
                }
            }
            acc
        })
    }

    pub fn rank(&self) -> usize {
        rank_real(&self.m)
    }

    /// `2` for odd `n`, `4` for even `n`: the parity-constant directions in
    /// each block.
    pub fn kernel_dimension(&self) -> usize {
        2 * self.n - self.rank()
    }
}

/// The constant matrix of the 2-form ω₀ in log coordinates.
#[derive(Debug, Clone)]
pub struct TwoForm {
    pub n: usize,
    pub q: usize,
    pub m: DMatrix<f64>,
}

impl TwoForm {
    pub fn new(n: usize) -> Self {
        let q = n / 2;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..q {
            for k in 0..=j {
                // δu_{2j+1} ∧ δu_{2k} contributes +1 at (2j+1, 2k)
                m[(2 * j + 1, 2 * k)] += 1.0;
                m[(2 * k, 2 * j + 1)] -= 1.0;
                // v block with the opposite sign
                m[(n + 2 * j + 1, n + 2 * k)] -= 1.0;
                m[(n + 2 * k, n + 2 * j + 1)] += 1.0;
            }
        }
        TwoForm { n, q, m }
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        DVector::from_fn(2 * self.n, |r, _| {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..2 * self.n {
                let w = self.m[(r, c)];
                if w != 0.0 {
                    acc += v[c] * w;
                }
            }
            acc
        })
    }
}

/// Gradients of all `2q + 2` integrals of motion at a point, in log
/// coordinates: rows `I_0..I_q` then `J_0..J_q`.
#[derive(Debug, Clone)]
pub struct InvariantGradients {
    pub base: SpectralInvariants,
    pub rows: Vec<DVector<C64>>,
}

impl InvariantGradients {
    pub fn count(&self) -> usize {
        self.rows.len()
    }

    pub fn i_grad(&self, j: usize) -> &DVector<C64> {
        &self.rows[j]
    }

    pub fn j_grad(&self, j: usize) -> &DVector<C64> {
        &self.rows[self.base.q + 1 + j]
    }
}

fn cbrt_dual(w: Dual) -> Dual {
    let v = cbrt_principal(w.v);
    // d(w^{1/3}) = d · w^{1/3} / (3w)
    Dual::new(v, w.d * v / (w.v * 3.0))
}

/// One forward-mode pass: all invariants of the `(x, y)` monodromy with the
/// derivative seeded along log-direction `dir` (`0..n` are `u`, `n..2n` are
/// `v` directions).
fn invariants_dual_pass(xy: &XYCoords, dir: usize) -> Result<(Vec<Dual>, Vec<Dual>)> {
    let n = xy.n();
    let q = n / 2;
    let xs: Vec<Dual> = (0..n)
        .map(|i| if dir == i { Dual::log_seed(xy.x[i]) } else { Dual::constant(xy.x[i]) })
        .collect();
    let ys: Vec<Dual> = (0..n)
        .map(|i| {
            if dir == n + i {
                Dual::log_seed(xy.y[i])
            } else {
                Dual::constant(xy.y[i])
            }
        })
        .collect();
    let t = lax::monodromy_xy_generic(&xs, &ys, 0);
    let t_inv = lax::monodromy_xy_inv_generic(&xs, &ys, 0);
    let c3 = t.det().coeff(-(n as i64));
    let c = cbrt_dual(c3);
    let c_inv = c.inv();
    let tr = t.trace();
    let tr_inv = t_inv.trace();
    let i: Vec<Dual> = (0..=q).map(|j| tr_inv.coeff((q - j) as i64) * c).collect();
    let j: Vec<Dual> = (0..=q).map(|jj| tr.coeff(jj as i64 - q as i64) * c_inv).collect();
    Ok((i, j))
}

/// Exact forward-mode gradients of every invariant with respect to
/// `(ln x_i, ln y_i)`.
pub fn invariant_gradients(xy: &XYCoords) -> Result<InvariantGradients> {
    let n = xy.n();
    let q = n / 2;
    let base = invariants_xy(xy, CubeRootPolicy::Principal)?;
    let mut rows = vec![DVector::from_element(2 * n, C64::new(0.0, 0.0)); 2 * (q + 1)];
    for dir in 0..2 * n {
        let (i, j) = invariants_dual_pass(xy, dir)?;
        for (jj, v) in i.iter().enumerate() {
            rows[jj][dir] = v.d;
        }
        for (jj, v) in j.iter().enumerate() {
            rows[q + 1 + jj][dir] = v.d;
        }
    }
    Ok(InvariantGradients { base, rows })
}

/// Central-finite-difference cross-check of the forward-mode gradients
/// (step `1e-6` in each log direction); returns the max relative deviation.
pub fn fd_gradient_check(xy: &XYCoords) -> Result<f64> {
    let n = xy.n();
    let grads = invariant_gradients(xy)?;
    let h = 1e-6;
    let mut worst = 0.0f64;
    for dir in 0..2 * n {
        let perturb = |sign: f64| -> Result<SpectralInvariants> {
            let mut x = xy.x.clone();
            let mut y = xy.y.clone();
            if dir < n {
                x[dir] *= C64::new((sign * h).exp(), 0.0);
            } else {
                y[dir - n] *= C64::new((sign * h).exp(), 0.0);
            }
            invariants_xy(
                &XYCoords { x, y },
                CubeRootPolicy::Near(grads.base.c),
            )
        };
        let plus = perturb(1.0)?;
        let minus = perturb(-1.0)?;
        for (row, (p, m)) in plus
            .i
            .iter()
            .zip(&minus.i)
            .chain(plus.j.iter().zip(&minus.j))
            .enumerate()
        {
            let fd = (p - m) / (2.0 * h);
            let ad = grads.rows[row][dir];
            worst = worst.max((fd - ad).norm() / (1.0 + ad.norm()));
        }
    }
    Ok(worst)
}

/// Max modulus of the Poisson bracket over all pairs of invariants.
pub fn involution_check(xy: &XYCoords) -> Result<f64> {
    let grads = invariant_gradients(xy)?;
    let p = PoissonTensor::new(xy.n());
    let mut worst = 0.0f64;
    for a in 0..grads.count() {
        for b in (a + 1)..grads.count() {
            worst = worst.max(p.bracket(&grads.rows[a], &grads.rows[b]).norm());
        }
    }
    Ok(worst)
}

/// Report of the Casimir kernel check.
#[derive(Debug, Clone)]
pub struct CasimirReport {
    /// Max modulus of `P · grad(Casimir)` over the Casimirs of the parity.
    pub max_kernel_residual: f64,
    /// Dimension of `ker P` (2 odd, 4 even).
    pub kernel_dimension: usize,
    /// Number of independent Casimir gradients.
    pub casimir_count: usize,
}

/// Verifies the Casimir gradients lie in the kernel of the Poisson tensor.
pub fn casimir_check(xy: &XYCoords) -> Result<CasimirReport> {
    let n = xy.n();
    let grads = invariant_gradients(xy)?;
    let p = PoissonTensor::new(n);
    let q = grads.base.q;
    let iq = grads.base.i_q();
    let jq = grads.base.j_q();
    if iq.norm() == 0.0 || jq.norm() == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let gi_q = grads.i_grad(q);
    let gj_q = grads.j_grad(q);
    let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
    // E_n = (-1)^n J_q / I_q²; O_n = I_q / J_q²
    let mut casimir_grads: Vec<DVector<C64>> = Vec::new();
    casimir_grads.push(DVector::from_fn(2 * n, |r, _| {
        sign_n * (gj_q[r] / (iq * iq) - gi_q[r] * 2.0 * jq / (iq * iq * iq))
    }));
    casimir_grads.push(DVector::from_fn(2 * n, |r, _| {
        gi_q[r] / (jq * jq) - gj_q[r] * 2.0 * iq / (jq * jq * jq)
    }));
    if n % 2 == 0 {
        let sign_q = if q % 2 == 0 { 1.0 } else { -1.0 };
        let i0 = grads.base.i[0];
        let j0 = grads.base.j[0];
        let gi_0 = grads.i_grad(0);
        let gj_0 = grads.j_grad(0);
        // E_{n/2} = (-1)^q I_0/I_q; O_{n/2} = (-1)^q J_0/J_q
        casimir_grads.push(DVector::from_fn(2 * n, |r, _| {
            sign_q * (gi_0[r] / iq - gi_q[r] * i0 / (iq * iq))
        }));
        casimir_grads.push(DVector::from_fn(2 * n, |r, _| {
            sign_q * (gj_0[r] / jq - gj_q[r] * j0 / (jq * jq))
        }));
    }
    let mut worst = 0.0f64;
    for g in &casimir_grads {
        let image = p.apply(g);
        worst = worst.max(image.iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    Ok(CasimirReport {
        max_kernel_residual: worst,
        kernel_dimension: p.kernel_dimension(),
        casimir_count: casimir_grads.len(),
    })
}

/// The log-Jacobian of one pentagram step: `J[r][c] = ∂ ln out_r / ∂ ln in_c`
/// with rows and columns ordered `(u_0..u_{n-1}, v_0..v_{n-1})`.
pub fn pentagram_log_jacobian(xy: &XYCoords) -> Result<DMatrix<C64>> {
    let n = xy.n();
    let mut jac = DMatrix::from_element(2 * n, 2 * n, C64::new(0.0, 0.0));
    for dir in 0..2 * n {
        let xs: Vec<Dual> = (0..n)
            .map(|i| if dir == i { Dual::log_seed(xy.x[i]) } else { Dual::constant(xy.x[i]) })
            .collect();
        let ys: Vec<Dual> = (0..n)
            .map(|i| {
                if dir == n + i {
                    Dual::log_seed(xy.y[i])
                } else {
                    Dual::constant(xy.y[i])
                }
            })
            .collect();
        let (tx, ty) = pentagram_xy_generic(&xs, &ys)?;
        for (r, v) in tx.iter().chain(ty.iter()).enumerate() {
            jac[(r, dir)] = v.d / v.v;
        }
    }
    Ok(jac)
}

/// Residual of the bracket invariance `J P Jᵀ = P` (exact identity in log
/// coordinates since `P` is constant).
pub fn bracket_invariance_check(xy: &XYCoords) -> Result<f64> {
    let n = xy.n();
    let jac = pentagram_log_jacobian(xy)?;
    let p = PoissonTensor::new(n);
    let pc = p.m.map(|v| C64::new(v, 0.0));
    let lhs = &jac * &pc * jac.transpose();
    let mut worst = 0.0f64;
    for r in 0..2 * n {
        for c in 0..2 * n {
            worst = worst.max((lhs[(r, c)] - pc[(r, c)]).norm());
        }
    }
    Ok(worst)
}

/// Basis of the leaf tangent space: the common kernel of the differentials
/// of the leaf constraints (`I_q, J_q`, plus `I_0, J_0` for even `n`).
#[derive(Debug, Clone)]
pub struct LeafFrame {
    pub basis: Vec<DVector<C64>>,
}

pub fn leaf_frame(xy: &XYCoords) -> Result<LeafFrame> {
    let grads = invariant_gradients(xy)?;
    leaf_frame_from_gradients(xy.n(), &grads)
}

pub fn leaf_frame_from_gradients(n: usize, grads: &InvariantGradients) -> Result<LeafFrame> {
    let q = grads.base.q;
    let mut constraints: Vec<&DVector<C64>> = vec![grads.i_grad(q), grads.j_grad(q)];
    if n % 2 == 0 {
        constraints.push(grads.i_grad(0));
        constraints.push(grads.j_grad(0));
    }
    let rows = constraints.len();
    // v annihilates the constraint differentials (plain bilinear pairing)
    // iff v is Hermitian-orthogonal to their conjugates: orthonormalize
    // those and complete to a basis of the complement.
    let mut span: Vec<DVector<C64>> = Vec::new();
    for cns in &constraints {
        let mut v = DVector::from_fn(2 * n, |k, _| cns[k].conj());
        for u in &span {
            let coeff: C64 = (0..2 * n).map(|k| v[k] * u[k].conj()).sum();
            for k in 0..2 * n {
                let uk = u[k];
                v[k] -= coeff * uk;
            }
        }
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::NonGeneric(
                "leaf constraints are linearly dependent at this point".into(),
            ));
        }
        span.push(v.map(|c| c / norm));
    }
    let mut basis: Vec<DVector<C64>> = Vec::new();
    for seed in 0..2 * n {
        if basis.len() == 2 * n - rows {
            break;
        }
        let mut v = DVector::from_element(2 * n, C64::new(0.0, 0.0));
        v[seed] = C64::new(1.0, 0.0);
        for u in span.iter().chain(basis.iter()) {
            let coeff: C64 = (0..2 * n).map(|k| v[k] * u[k].conj()).sum();
            for k in 0..2 * n {
                let uk = u[k];
                v[k] -= coeff * uk;
            }
        }
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.map(|c| c / norm));
        }
    }
    let expected = 2 * n - rows;
    if basis.len() != expected {
        return Err(Error::NonGeneric(format!(
            "leaf frame rank-deficient: {} tangent directions, expected {expected}",
            basis.len()
        )));
    }
    // verify every basis vector annihilates every constraint differential
    for b in &basis {
        for cns in &constraints {
            let pairing: C64 = (0..2 * n).map(|k| cns[k] * b[k]).sum();
            let scale = cns.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if pairing.norm() > 1e-9 * scale.max(1.0) {
                return Err(Error::NonGeneric(
                    "leaf frame vector fails the constraint differentials".into(),
                ));
            }
        }
    }
    Ok(LeafFrame { basis })
}

/// Report of the on-leaf inverse relation between `P` and `A = ω₀`.
#[derive(Debug, Clone)]
pub struct OnLeafReport {
    /// Max norm of `P A ξ - ξ` over unit leaf-frame vectors ξ, after
    /// projecting out the `ker P` components.
    pub max_vector_residual: f64,
    pub rank_p: usize,
    /// Rank of ω₀ restricted to the leaf tangent space.
    pub rank_a_on_leaf: usize,
    pub genus_expected: usize,
}

/// Known kernel of `P`: parity-constant vectors per block (all-ones always,
/// alternating for even `n`).
fn poisson_kernel_basis(n: usize) -> Vec<DVector<C64>> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut out = Vec::new();
    let mut push_block = |block: usize, alternating: bool| {
        out.push(DVector::from_fn(2 * n, |r, _| {
            if r / n != block {
                zero
            } else if alternating {
                if (r % n) % 2 == 0 {
                    one
                } else {
                    -one
                }
            } else {
                one
            }
        }));
    };
    push_block(0, false);
    push_block(1, false);
    if n % 2 == 0 {
        push_block(0, true);
        push_block(1, true);
    }
    out
}

fn project_out(v: &DVector<C64>, dirs: &[DVector<C64>]) -> DVector<C64> {
    let mut out = v.clone();
    for d in dirs {
        let d2: f64 = d.iter().map(|c| c.norm_sqr()).sum();
        let coeff: C64 = (0..d.len()).map(|k| out[k] * d[k].conj()).sum::<C64>() / d2;
        for k in 0..d.len() {
            let dk = d[k];
            out[k] -= coeff * dk;
        }
    }
    out
}

/// Verifies that ω₀ inverts the Poisson tensor on the symplectic leaves:
/// for every leaf-tangent ξ, `P A ξ = ξ` up to `ker P` components.
pub fn onleaf_inverse_check(xy: &XYCoords) -> Result<OnLeafReport> {
    let n = xy.n();
    let grads = invariant_gradients(xy)?;
    let frame = leaf_frame_from_gradients(n, &grads)?;
    let p = PoissonTensor::new(n);
    let a = TwoForm::new(n);
    let kernel = poisson_kernel_basis(n);
    let mut worst = 0.0f64;
    for xi in &frame.basis {
        let pa_xi = p.apply(&a.apply(xi));
        let residual = project_out(&(pa_xi - xi), &kernel);
        worst = worst.max(residual.iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    // rank of the leaf-restricted 2-form
    let dim = frame.basis.len();
    let restricted = DMatrix::from_fn(dim, dim, |r, c| {
        let a_xi = a.apply(&frame.basis[c]);
        (0..2 * n).map(|k| frame.basis[r][k] * a_xi[k]).sum::<C64>()
    });
    let rank_a_on_leaf = rank_complex(&restricted);
    let genus_expected = if n % 2 == 0 { n - 2 } else { n - 1 };
    Ok(OnLeafReport {
        max_vector_residual: worst,
        rank_p: p.rank(),
        rank_a_on_leaf,
        genus_expected,
    })
}

/// Leaf-restricted invariance of ω₀ under the pentagram map: the residual
/// `max |ξᵀ (Jᵀ A J - A) η|` over leaf-frame pairs, plus the unprojected
/// full-space residual for reference (invariance is a leaf statement).
#[derive(Debug, Clone)]
pub struct OmegaInvarianceReport {
    pub leaf_residual: f64,
    pub unprojected_residual: f64,
}

pub fn omega_invariance_check(xy: &XYCoords) -> Result<OmegaInvarianceReport> {
    let n = xy.n();
    let grads = invariant_gradients(xy)?;
    let frame = leaf_frame_from_gradients(n, &grads)?;
    let jac = pentagram_log_jacobian(xy)?;
    let a = TwoForm::new(n);
    let ac = a.m.map(|v| C64::new(v, 0.0));
    let pulled = jac.transpose() * &ac * &jac;
    let diff = &pulled - &ac;
    let mut leaf_residual = 0.0f64;
    for xi in &frame.basis {
        for eta in &frame.basis {
            let value: C64 = (0..2 * n)
                .map(|r| xi[r] * (0..2 * n).map(|c| diff[(r, c)] * eta[c]).sum::<C64>())
                .sum();
            leaf_residual = leaf_residual.max(value.norm());
        }
    }
    let unprojected_residual = diff.iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(OmegaInvarianceReport { leaf_residual, unprojected_residual })
}

fn rank_real(m: &DMatrix<f64>) -> usize {
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol::RANK_CUTOFF * smax)
        .count()
}

fn rank_complex(m: &DMatrix<C64>) -> usize {
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol::RANK_CUTOFF * smax)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::c;
    use crate::rng;

    #[test]
    fn poisson_matrix_structure() {
        let p = PoissonTensor::new(5);
        // antisymmetry and zero row sums
        for r in 0..10 {
            let mut sum = 0.0;
            for cc in 0..10 {
                assert_eq!(p.m[(r, cc)], -p.m[(cc, r)]);
                sum += p.m[(r, cc)];
            }
            assert_eq!(sum, 0.0);
        }
        // {u_0, u_1} = 1, {u_1, u_0} = -1, {u_i, v_j} = 0
        assert_eq!(p.m[(0, 1)], 1.0);
        assert_eq!(p.m[(1, 0)], -1.0);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(p.m[(i, 5 + j)], 0.0);
            }
        }
        // {u_0, u_2} = 0 for n >= 5 and also for n = 4 (the two δ terms
        // land on distinct indices 1 and 3)
        assert_eq!(p.m[(0, 2)], 0.0);
        assert_eq!(PoissonTensor::new(4).m[(0, 2)], 0.0);
    }

    #[test]
    fn poisson_kernel_dimensions() {
        assert_eq!(PoissonTensor::new(5).kernel_dimension(), 2);
        assert_eq!(PoissonTensor::new(7).kernel_dimension(), 2);
        assert_eq!(PoissonTensor::new(6).kernel_dimension(), 4);
        assert_eq!(PoissonTensor::new(8).kernel_dimension(), 4);
        // the analytic kernel basis really is in the kernel
        for n in [5usize, 6] {
            let p = PoissonTensor::new(n);
            for k in poisson_kernel_basis(n) {
                let image = p.apply(&k);
                assert!(image.iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-15);
            }
        }
    }

    #[test]
    fn omega0_antisymmetric_with_unit_entries() {
        let a = TwoForm::new(4);
        for r in 0..8 {
            for cc in 0..8 {
                assert_eq!(a.m[(r, cc)], -a.m[(cc, r)]);
            }
        }
        // A[u_{2j+1}, u_{2k}] = +1 for k <= j <= q-1
        assert_eq!(a.m[(1, 0)], 1.0);
        assert_eq!(a.m[(3, 0)], 1.0);
        assert_eq!(a.m[(3, 2)], 1.0);
        assert_eq!(a.m[(1, 2)], 0.0);
        // v block opposite sign
        assert_eq!(a.m[(5, 4)], -1.0);
    }

    #[test]
    fn gradients_match_finite_differences() {
        for (n, seed) in [(5usize, 1u64), (6, 2)] {
            let xy = rng::random_xy(n, seed);
            let dev = fd_gradient_check(&xy).unwrap();
            assert!(dev < tol::FD_CROSS_CHECK, "n = {n}: {dev:.3e}");
        }
    }

    #[test]
    fn product_invariant_has_constant_gradient() {
        // (Πx)² Πy = (-1)^n (Πb)^{-3} forces J_q³ ∝ ((Πx)² Πy)^{-1}, so the
        // log-gradient of J_q is the constant pattern (-2/3, ..., -1/3, ...)
        let xy = rng::random_xy(7, 3);
        let grads = invariant_gradients(&xy).unwrap();
        let g = grads.j_grad(grads.base.q);
        let jq = grads.base.j_q();
        for i in 0..7 {
            assert!((g[i] / jq + 2.0 / 3.0).norm() < 1e-9, "u-slot {i}");
            assert!((g[7 + i] / jq + 1.0 / 3.0).norm() < 1e-9, "v-slot {i}");
        }
        // and I_q³ = ((Πx)(Πy)²)^{-1}, gradient pattern (-1/3, ..., -2/3, ...)
        let gi = grads.i_grad(grads.base.q);
        let iq = grads.base.i_q();
        for i in 0..7 {
            assert!((gi[i] / iq + 1.0 / 3.0).norm() < 1e-9, "u-slot {i}");
            assert!((gi[7 + i] / iq + 2.0 / 3.0).norm() < 1e-9, "v-slot {i}");
        }
    }

    #[test]
    fn involution_of_invariants() {
        for (n, seed) in [(7usize, 3u64), (6, 3)] {
            let xy = rng::random_xy(n, seed);
            let max_bracket = involution_check(&xy).unwrap();
            assert!(max_bracket < tol::INVOLUTION, "n = {n}: {max_bracket:.3e}");
        }
    }

    #[test]
    fn coordinate_functions_are_not_in_involution() {
        // control: {u_0, ·} against an invariant is generically order one
        let xy = rng::random_xy(7, 4);
        let grads = invariant_gradients(&xy).unwrap();
        let p = PoissonTensor::new(7);
        let mut u0 = DVector::from_element(14, c(0.0, 0.0));
        u0[0] = c(1.0, 0.0);
        let bracket = p.bracket(&u0, grads.i_grad(1)).norm();
        assert!(bracket > 1e-2, "control bracket unexpectedly small: {bracket:.3e}");
    }

    #[test]
    fn casimirs_in_kernel() {
        let odd = casimir_check(&rng::random_xy(7, 5)).unwrap();
        assert!(odd.max_kernel_residual < tol::CASIMIR_KERNEL, "{:.3e}", odd.max_kernel_residual);
        assert_eq!(odd.kernel_dimension, 2);
        assert_eq!(odd.casimir_count, 2);
        let even = casimir_check(&rng::random_xy(6, 5)).unwrap();
        assert!(even.max_kernel_residual < tol::CASIMIR_KERNEL, "{:.3e}", even.max_kernel_residual);
        assert_eq!(even.kernel_dimension, 4);
        assert_eq!(even.casimir_count, 4);
    }

    #[test]
    fn bracket_invariance_under_map() {
        for (n, seed) in [(7usize, 5u64), (8, 5)] {
            let xy = rng::random_xy(n, seed);
            let res = bracket_invariance_check(&xy).unwrap();
            assert!(res < tol::BRACKET_INVARIANCE, "n = {n}: {res:.3e}");
        }
    }

    #[test]
    fn broken_map_breaks_invariance() {
        // corrupt the Jacobian: flip one exponent in a factor by hand
        let xy = rng::random_xy(7, 6);
        let jac = pentagram_log_jacobian(&xy).unwrap();
        let mut bad = jac.clone();
        bad[(0, 1)] = -bad[(0, 1)];
        let p = PoissonTensor::new(7).m.map(|v| c(v, 0.0));
        let lhs = &bad * &p * bad.transpose();
        let res = (&lhs - &p).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(res > 1e-2);
    }

    #[test]
    fn onleaf_inverse_relation() {
        for (n, seed) in [(7usize, 1u64), (6, 1), (5, 2), (8, 2)] {
            let xy = rng::random_xy(n, seed);
            let rep = onleaf_inverse_check(&xy).unwrap();
            let g = if n % 2 == 0 { n - 2 } else { n - 1 };
            assert!(
                rep.max_vector_residual < tol::ONLEAF_INVERSE,
                "n = {n}: residual {:.3e}",
                rep.max_vector_residual
            );
            assert_eq!(rep.rank_p, 2 * g, "rank P, n = {n}");
            assert_eq!(rep.rank_a_on_leaf, 2 * g, "rank A on leaf, n = {n}");
        }
    }

    #[test]
    fn omega_invariance_on_leaves() {
        for (n, seed) in [(7usize, 2u64), (8, 2)] {
            let xy = rng::random_xy(n, seed);
            let rep = omega_invariance_check(&xy).unwrap();
            assert!(
                rep.leaf_residual < tol::OMEGA_INVARIANCE,
                "n = {n}: {:.3e}",
                rep.leaf_residual
            );
        }
    }
}
