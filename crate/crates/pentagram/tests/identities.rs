//! Cross-module identities: facts that tie the geometric, algebraic,
//! spectral, and symplectic layers to each other.

use nalgebra::{DMatrix, Matrix3};
use pentagram::coords::ABCoords;
use pentagram::error::Error;
use pentagram::lax;
use pentagram::num::{c, C64};
use pentagram::polygon::{ProjectivePoint, VertexChain};
use pentagram::rng;
use pentagram::spectral::{self, CubeRootPolicy, Kind};
use pentagram::symplectic;

/// The chain monodromy matrix coincides with the inverse monodromy operator
/// at `z = 1`: `M = T_0(1)^{-1}` exactly in the standard-frame lift.
#[test]
fn chain_monodromy_is_inverse_operator_at_one() {
    for (n, seed) in [(4usize, 1u64), (5, 2), (7, 3), (8, 4)] {
        let ab = rng::random_ab(n, seed);
        let chain = ab.to_chain().unwrap();
        let t_inv_at_one = lax::monodromy_ab_inv(&ab, 0).eval(c(1.0, 0.0));
        let m = chain.monodromy();
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((m[(i, j)] - t_inv_at_one[i][j]).norm());
            }
        }
        assert!(worst < 1e-10, "n = {n}: {worst:.3e}");
    }
}

/// A chain is closed exactly when the monodromy operator at `z = 1` is a
/// scalar matrix.
#[test]
fn closed_iff_operator_scalar_at_one() {
    let chain = rng::random_closed_chain(6, 5).unwrap();
    let xy = chain.to_xy().unwrap();
    let t1 = lax::monodromy_xy(&xy, 0).eval(c(1.0, 0.0));
    let c_scalar = (t1[0][0] + t1[1][1] + t1[2][2]) / 3.0;
    let mut off = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let expected = if i == j { c_scalar } else { C64::new(0.0, 0.0) };
            off = off.max((t1[i][j] - expected).norm());
        }
    }
    assert!(off / c_scalar.norm() < 1e-9, "off-scalar part {off:.3e}");

    let twisted = rng::random_chain(6, 6).unwrap();
    let xy = twisted.to_xy().unwrap();
    let t1 = lax::monodromy_xy(&xy, 0).eval(c(1.0, 0.0));
    let c_scalar = (t1[0][0] + t1[1][1] + t1[2][2]) / 3.0;
    let mut off = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let expected = if i == j { c_scalar } else { C64::new(0.0, 0.0) };
            off = off.max((t1[i][j] - expected).norm());
        }
    }
    assert!(off / c_scalar.norm() > 1e-2, "twisted chain looks closed");
}

/// A regular convex pentagon maps to a projectively equivalent pentagon
/// (the pentagram map is the identity on pentagons up to relabeling).
#[test]
fn regular_pentagon_maps_to_equivalent_pentagon() {
    let vertices: Vec<ProjectivePoint> = (0..5)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / 5.0;
            ProjectivePoint::new(c(theta.cos(), 0.0), c(theta.sin(), 0.0), c(1.0, 0.0))
        })
        .collect();
    let pentagon = VertexChain::new(vertices, Matrix3::identity()).unwrap();
    let image = pentagon.pentagram_step().unwrap();
    let eq = pentagon.projectively_equivalent(&image).unwrap();
    assert!(eq.equivalent, "deviation {:.3e}", eq.deviation);
    assert_ne!(eq.shift, 0, "the relabeling shift is nonzero");
}

/// For a closed quadrilateral every diagonal intersection is the same
/// point, so the image degenerates and the map is undefined.
#[test]
fn closed_quadrilateral_image_degenerates() {
    let vertices = vec![
        ProjectivePoint::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)),
        ProjectivePoint::new(c(-1.0, 0.0), c(1.2, 0.0), c(1.0, 0.0)),
        ProjectivePoint::new(c(-1.1, 0.0), c(-0.9, 0.0), c(1.0, 0.0)),
        ProjectivePoint::new(c(0.8, 0.0), c(-1.3, 0.0), c(1.0, 0.0)),
    ];
    let square = VertexChain::new(vertices, Matrix3::identity()).unwrap();
    assert!(matches!(
        square.pentagram_step(),
        Err(Error::MapUndefined(_)) | Err(Error::DegenerateDiagonal(_))
    ));
}

/// Declaring the wrong period when extracting invariants trips the
/// trace-support window check.
#[test]
fn support_mismatch_detected() {
    let ab = rng::random_ab(7, 7);
    let t = lax::monodromy_ab(&ab, 0);
    let t_inv = lax::monodromy_ab_inv(&ab, 0);
    let err = spectral::invariants_from_monodromy(&t, &t_inv, 5, Kind::Ab, CubeRootPolicy::Principal);
    assert!(matches!(err, Err(Error::SupportMismatch { .. })));
}

/// Conservation holds out to n = 12 (both residues mod 3), 100 steps.
#[test]
fn conservation_up_to_twelve() {
    for n in [10usize, 11] {
        let ab = rng::random_ab(n, 8);
        let invs = spectral::orbit_invariants_ab(&ab, 100).unwrap();
        let drift = spectral::conservation_drift(&invs);
        assert!(drift < 1e-9, "n = {n}: drift {drift:.3e}");
    }
    let xy = rng::random_xy(12, 8);
    let invs = spectral::orbit_invariants_xy(&xy, 100).unwrap();
    let drift = spectral::conservation_drift(&invs);
    assert!(drift < 1e-9, "n = 12: drift {drift:.3e}");
}

/// Branch census for the smallest twisted polygon: n = 4 has 8 finite
/// branch points and genus 2.
#[test]
fn quadrilateral_branch_census() {
    let inv = spectral::invariants_ab(&rng::random_ab(4, 9)).unwrap();
    let curve = spectral::branch_points(&inv).unwrap();
    assert_eq!(curve.nu_finite, 8);
    assert_eq!(curve.genus, 2);
}

/// The 2q + 2 invariant gradients have full rank at generic points
/// (regression value: measured full row rank for n = 4..9).
#[test]
fn invariant_gradients_full_rank() {
    for n in 4usize..=9 {
        let xy = rng::random_xy(n, 10);
        let grads = symplectic::invariant_gradients(&xy).unwrap();
        let rows = grads.rows.len();
        assert_eq!(rows, 2 * (n / 2 + 1));
        let m = DMatrix::from_fn(rows, 2 * n, |r, cc| grads.rows[r][cc]);
        let svd = m.svd(false, false);
        let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
        let rank = svd.singular_values.iter().filter(|&&s| s > 1e-9 * smax).count();
        assert_eq!(rank, rows, "gradient rank deficient at n = {n}");
    }
}

/// With a vanishing coordinate the asymptotics comparison degenerates
/// gracefully: reported through the flag, no panic.
#[test]
fn asymptotics_degenerate_flag() {
    let mut ab = rng::random_ab(8, 11);
    ab.a[0] = C64::new(0.0, 0.0); // bypasses construction-time validation
    let rep = lax::monodromy_asymptotics_check(&ab);
    assert!(rep.degenerate);
}

/// The two spectral functions are related by `C = J_q / I_q`: aligned
/// xy-kind invariants reproduce the ab-kind ones together with that
/// constant, for both parities.
#[test]
fn rescaling_constant_relation() {
    for (n, seed) in [(5usize, 12u64), (8, 13)] {
        let ab = rng::random_ab(n, seed);
        let reference = spectral::invariants_ab(&ab).unwrap();
        let raw = spectral::invariants_xy(&ab.to_xy(), CubeRootPolicy::Principal).unwrap();
        let (aligned, dev) = raw.align_to(&reference);
        assert!(dev < 1e-10, "n = {n}: {dev:.3e}");
        let expected = reference.j_q() / reference.i_q();
        assert!((aligned.c - expected).norm() < 1e-10 * (1.0 + expected.norm()), "n = {n}");
    }
}

/// The pentagram map in coordinates preserves the closed stratum: the five
/// linear relations keep holding along the orbit of a closed polygon.
#[test]
fn closed_relations_preserved_along_orbit() {
    let chain = rng::random_closed_chain(7, 14).unwrap();
    let ab = chain.to_ab().unwrap();
    let invs = spectral::orbit_invariants_ab(&ab, 10).unwrap();
    for (t, inv) in invs.iter().enumerate() {
        let worst = inv.closed_relations().iter().copied().fold(0.0, f64::max);
        assert!(worst < 1e-8, "step {t}: {worst:.3e}");
    }
}

/// Roundtrip through the primed form: building `L'` from a chain-derived
/// polygon via random gauges and reducing back recovers the coordinates.
#[test]
fn gauge_reduce_closes_the_loop_with_chain_data() {
    use rand::prelude::*;
    let chain = rng::random_chain(5, 15).unwrap();
    let ab = chain.to_ab().unwrap();
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(15);
    let gauges: Vec<[C64; 3]> = (0..5)
        .map(|_| {
            std::array::from_fn(|_| {
                C64::from_polar(0.5 + r.gen::<f64>(), r.gen::<f64>() * std::f64::consts::TAU)
            })
        })
        .collect();
    let primed = lax::prime_from_ab(&ab, &gauges);
    match lax::gauge_reduce(&primed, lax::ReduceTarget::Ab, c(1.0, 0.0)).unwrap() {
        lax::Reduced::Ab(recovered, _) => {
            let rec_chain = recovered.to_chain().unwrap();
            let eq = chain.projectively_equivalent(&rec_chain).unwrap();
            assert!(eq.equivalent && eq.shift == 0, "dev {:.3e}", eq.deviation);
        }
        _ => unreachable!(),
    }
}

/// Invariants extracted from an `(a, b)` polygon and from the same polygon
/// rebuilt as a vertex chain agree exactly (the chain pins the same
/// unimodular monodromy representative).
#[test]
fn invariants_survive_chain_roundtrip() {
    let ab = rng::random_ab(7, 16);
    let via_ab = spectral::invariants_ab(&ab).unwrap();
    let via_chain = spectral::invariants_from_chain(&ab.to_chain().unwrap()).unwrap();
    assert!(via_chain.relative_distance(&via_ab) < 1e-9);
}

/// The `(a, b)` recurrence consistency guard: a lift whose third
/// coefficient is not 1 is rejected.
#[test]
fn inconsistent_lift_detected() {
    // scaling one vertex breaks the unit-determinant normalization of the
    // stored lift, so the recurrence read off the raw vectors has c_j ≠ 1
    let ab = rng::random_ab(4, 17);
    let chain = ab.to_chain().unwrap();
    let mut vertices: Vec<ProjectivePoint> = chain.vertices().to_vec();
    vertices[1] = ProjectivePoint::from_vector(vertices[1].h * c(2.0, 0.0));
    let scaled = VertexChain::new(vertices, *chain.monodromy()).unwrap();
    // the normalized lift restores consistency no matter the input scaling
    let lifted = scaled.to_ab().unwrap();
    let original = chain.to_ab().unwrap();
    for j in 0..4 {
        assert!((lifted.a[j] - original.a[j]).norm() < 1e-9);
        assert!((lifted.b[j] - original.b[j]).norm() < 1e-9);
    }
}

/// The ABCoords denominator guard: `1 + a_{i+1} b_i = 0`
/// violates the type invariant.
#[test]
fn ab_denominator_invariant() {
    let mut a = vec![c(1.0, 0.0); 4];
    let b = vec![c(1.0, 0.0); 4];
    a[1] = c(-1.0, 0.0); // 1 + a_1 b_0 = 0
    assert!(ABCoords::new(a, b).is_err());
}
