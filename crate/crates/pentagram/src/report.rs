//! Check reports and the full verification suite.
//!
//! A report is a deterministic JSON document: named checks with
//! `{residual, tolerance, pass}`, an overall flag, and free-form detail
//! payloads (invariants, genus, periodicity info). Timing is recorded but
//! excluded from the determinism contract.

use crate::coords::{ABCoords, XYCoords};
use crate::error::Error;
use crate::files::LoadedState;
use crate::lax;
use crate::num::{c, unity_cbrt, C64};
use crate::polygon::VertexChain;
use crate::spectral::{self, CubeRootPolicy};
use crate::symplectic;
use crate::tol::Tolerances;
use crate::Result;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub checks: BTreeMap<String, CheckResult>,
    pub details: BTreeMap<String, serde_json::Value>,
    pub pass: bool,
    /// Wall-clock milliseconds; not part of the determinism contract.
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            checks: BTreeMap::new(),
            details: BTreeMap::new(),
            pass: true,
            timing_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        self.inputs
            .insert(key.to_string(), serde_json::to_value(value).unwrap());
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details
            .insert(key.to_string(), serde_json::to_value(value).unwrap());
    }

    pub fn check(&mut self, name: &str, residual: f64, tolerance: f64) {
        let pass = residual.is_finite() && residual < tolerance;
        self.pass &= pass;
        self.checks
            .insert(name.to_string(), CheckResult { residual, tolerance, pass, note: None });
    }

    /// A check whose pass condition is a lower bound (control checks).
    pub fn check_above(&mut self, name: &str, residual: f64, floor: f64) {
        let pass = residual > floor;
        self.pass &= pass;
        self.checks.insert(
            name.to_string(),
            CheckResult {
                residual,
                tolerance: floor,
                pass,
                note: Some("control: value must exceed the threshold".into()),
            },
        );
    }

    /// Records a check that could not run (degenerate input, missing data).
    pub fn check_failed(&mut self, name: &str, tolerance: f64, err: &Error) {
        self.pass = false;
        self.checks.insert(
            name.to_string(),
            CheckResult {
                residual: f64::INFINITY,
                tolerance,
                pass: false,
                note: Some(err.to_string()),
            },
        );
    }

    pub fn check_exact(&mut self, name: &str, got: i64, expected: i64) {
        let pass = got == expected;
        self.pass &= pass;
        self.checks.insert(
            name.to_string(),
            CheckResult {
                residual: (got - expected).abs() as f64,
                tolerance: 0.5,
                pass,
                note: Some(format!("got {got}, expected {expected}")),
            },
        );
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn complex_json(v: C64) -> serde_json::Value {
    serde_json::json!([v.re, v.im])
}

/// Serialized invariants for report payloads.
pub fn invariants_json(inv: &spectral::SpectralInvariants) -> serde_json::Value {
    serde_json::json!({
        "n": inv.n,
        "q": inv.q,
        "I": inv.i.iter().map(|v| complex_json(*v)).collect::<Vec<_>>(),
        "J": inv.j.iter().map(|v| complex_json(*v)).collect::<Vec<_>>(),
        "C": complex_json(inv.c),
    })
}

/// Fixed spectral-parameter samples for residual checks.
pub fn z_samples() -> Vec<C64> {
    vec![c(0.5, 0.0), c(1.0, 1.0), c(-2.0, 0.0), c(0.3, -0.8), c(1.7, 0.4)]
}

/// Invariants of a loaded state (canonical route per kind).
pub fn state_invariants(state: &LoadedState) -> Result<spectral::SpectralInvariants> {
    match state {
        LoadedState::Ab(ab) => spectral::invariants_ab(ab),
        LoadedState::Xy(xy) => spectral::invariants_xy(xy, CubeRootPolicy::Principal),
        LoadedState::Chain(chain) => spectral::invariants_from_chain(chain),
    }
}

/// Runs the full property suite on one polygon and appends the outcomes to
/// `report` under names prefixed with `prefix`.
pub fn verify_state(
    report: &mut Report,
    prefix: &str,
    state: &LoadedState,
    steps: usize,
    tols: &Tolerances,
) {
    let n = state.n();
    let name = |s: &str| format!("{prefix}{s}");
    let closed = state.is_closed();

    let ab: Option<ABCoords> = if n % 3 != 0 { state.ab().ok() } else { None };
    let xy: Option<XYCoords> = state.xy().ok();

    // -- Lax representation --
    if let Some(ab) = &ab {
        match lax::zero_curvature_residual_ab(ab, &z_samples()) {
            Ok(r) => report.check(&name("zero_curvature_ab"), r, tols.get("zero_curvature")),
            Err(e) => report.check_failed(&name("zero_curvature_ab"), tols.get("zero_curvature"), &e),
        }
        report.check(
            &name("gauge_relation"),
            lax::gauge_relation_check(ab),
            tols.get("gauge_relation"),
        );
        let asym = lax::monodromy_asymptotics_check(ab);
        report.check(
            &name("monodromy_asymptotics"),
            asym.max_residual,
            tols.get("monodromy_asymptotics"),
        );
    }
    if let Some(xy) = &xy {
        match lax::zero_curvature_residual_xy(xy, &z_samples()) {
            Ok(r) => report.check(&name("zero_curvature_xy"), r, tols.get("zero_curvature")),
            Err(e) => report.check_failed(&name("zero_curvature_xy"), tols.get("zero_curvature"), &e),
        }
    }

    // -- conservation along the orbit --
    let conservation = match (&ab, &xy) {
        (Some(ab), _) => spectral::orbit_invariants_ab(ab, steps).map(|s| spectral::conservation_drift(&s)),
        (None, Some(xy)) => spectral::orbit_invariants_xy(xy, steps).map(|s| spectral::conservation_drift(&s)),
        (None, None) => Err(Error::NonGeneric("no coordinates available".into())),
    };
    match conservation {
        Ok(drift) => report.check(&name("conservation"), drift, tols.get("conservation_drift")),
        Err(e) => report.check_failed(&name("conservation"), tols.get("conservation_drift"), &e),
    }

    // -- route equivalence and the rescaling constant --
    if let (Some(ab), Some(xy)) = (&ab, &xy) {
        match (spectral::invariants_ab(ab), spectral::invariants_xy(xy, CubeRootPolicy::Principal)) {
            (Ok(reference), Ok(raw)) => {
                let (aligned, dev) = raw.align_to(&reference);
                report.check(&name("route_equivalence"), dev, tols.get("roundtrip"));
                let expected_c = reference.j_q() / reference.i_q();
                report.check(
                    &name("rescaling_constant"),
                    (aligned.c - expected_c).norm() / (1.0 + expected_c.norm()),
                    tols.get("roundtrip"),
                );
            }
            (Err(e), _) | (_, Err(e)) => {
                report.check_failed(&name("route_equivalence"), tols.get("roundtrip"), &e)
            }
        }
    }

    // -- spectral curve --
    match state_invariants(state) {
        Ok(inv) => {
            report.detail(&name("invariants"), invariants_json(&inv));
            match spectral::branch_points(&inv) {
                Ok(curve) => {
                    let expected = expected_genus(n, curve.closed) as i64;
                    report.check_exact(&name("genus"), curve.genus as i64, expected);
                    report.check_exact(&name("nu_finite"), curve.nu_finite as i64, if curve.closed { 2 * n as i64 - 6 } else { 2 * n as i64 });
                    report.detail(&name("genus"), curve.genus);
                    report.detail(&name("curve_closed"), curve.closed);
                }
                Err(e) => report.check_failed(&name("genus"), 0.5, &e),
            }
            match spectral::singularity_expansions_check(&inv) {
                Ok(rep) => report.check(&name("puiseux"), rep.max_residual, tols.get("puiseux")),
                Err(e) => report.check_failed(&name("puiseux"), tols.get("puiseux"), &e),
            }
            let relations = inv.closed_relations();
            let max_rel = relations.iter().copied().fold(0.0, f64::max);
            if closed {
                report.check(&name("closed_relations"), max_rel, tols.get("closed_relations"));
            } else {
                report.check_above(&name("closed_relations_violated"), max_rel, tols.get("twisted_control"));
            }
            if let Ok(cas) = inv.casimirs() {
                report.detail(
                    &name("casimirs"),
                    serde_json::json!({
                        "E_n": complex_json(cas.e_n),
                        "O_n": complex_json(cas.o_n),
                        "E_half": cas.e_half.map(complex_json),
                        "O_half": cas.o_half.map(complex_json),
                    }),
                );
            }
        }
        Err(e) => report.check_failed(&name("invariants"), 0.5, &e),
    }

    // -- marked-point limits (needs the (a, b) route) --
    if let Some(ab) = &ab {
        match spectral::marked_point_limits(ab) {
            Ok(rep) => report.check(&name("marked_point_limits"), rep.max_residual, tols.get("marked_limits")),
            Err(e) => report.check_failed(&name("marked_point_limits"), tols.get("marked_limits"), &e),
        }
    }

    // -- symplectic suite --
    if let Some(xy) = &xy {
        run_symplectic_checks(report, &name(""), xy, tols);
    }

    // -- geometric map vs the rational maps --
    if let Some(chain) = state.chain() {
        geometric_algebraic_check(report, &name(""), chain, tols);
    } else if let Some(ab) = &ab {
        match ab.to_chain() {
            Ok(chain) => geometric_algebraic_check(report, &name(""), &chain, tols),
            Err(e) => report.check_failed(&name("geometric_algebraic_xy"), tols.get("geometric_algebraic"), &e),
        }
    }

    // -- pentagon periodicity --
    if n == 5 && closed {
        if let Some(xy) = &xy {
            pentagon_periodicity_check(report, &name(""), xy, tols);
        }
    }
}

pub fn expected_genus(n: usize, closed: bool) -> usize {
    match (n % 2 == 0, closed) {
        (true, false) => n - 2,
        (false, false) => n - 1,
        (true, true) => n - 5,
        (false, true) => n - 4,
    }
}

pub fn run_symplectic_checks(report: &mut Report, prefix: &str, xy: &XYCoords, tols: &Tolerances) {
    let name = |s: &str| format!("{prefix}{s}");
    match symplectic::involution_check(xy) {
        Ok(r) => report.check(&name("involution"), r, tols.get("involution")),
        Err(e) => report.check_failed(&name("involution"), tols.get("involution"), &e),
    }
    match symplectic::bracket_invariance_check(xy) {
        Ok(r) => report.check(&name("bracket_invariance"), r, tols.get("bracket_invariance")),
        Err(e) => report.check_failed(&name("bracket_invariance"), tols.get("bracket_invariance"), &e),
    }
    match symplectic::casimir_check(xy) {
        Ok(rep) => {
            report.check(&name("casimir_kernel"), rep.max_kernel_residual, tols.get("casimir_kernel"));
            report.check_exact(&name("kernel_dimension"), rep.kernel_dimension as i64, rep.casimir_count as i64);
        }
        Err(e) => report.check_failed(&name("casimir_kernel"), tols.get("casimir_kernel"), &e),
    }
    match symplectic::fd_gradient_check(xy) {
        Ok(r) => report.check(&name("fd_gradients"), r, tols.get("fd_cross_check")),
        Err(e) => report.check_failed(&name("fd_gradients"), tols.get("fd_cross_check"), &e),
    }
    match symplectic::onleaf_inverse_check(xy) {
        Ok(rep) => {
            report.check(&name("onleaf_inverse"), rep.max_vector_residual, tols.get("onleaf_inverse"));
            report.check_exact(&name("rank_p"), rep.rank_p as i64, 2 * rep.genus_expected as i64);
            report.check_exact(&name("rank_omega_on_leaf"), rep.rank_a_on_leaf as i64, 2 * rep.genus_expected as i64);
        }
        Err(e) => report.check_failed(&name("onleaf_inverse"), tols.get("onleaf_inverse"), &e),
    }
    match symplectic::omega_invariance_check(xy) {
        Ok(rep) => {
            report.check(&name("omega_invariance"), rep.leaf_residual, tols.get("omega_invariance"));
            report.detail(&name("omega_unprojected_residual"), rep.unprojected_residual);
        }
        Err(e) => report.check_failed(&name("omega_invariance"), tols.get("omega_invariance"), &e),
    }
}

/// Compares one geometric pentagram step against the rational maps: exact
/// in `(x, y)`, and up to the single global cube-root twist in `(a, b)`
/// (the lift convention may pick a different unimodular monodromy
/// representative for the image chain).
pub fn geometric_algebraic_check(
    report: &mut Report,
    prefix: &str,
    chain: &VertexChain,
    tols: &Tolerances,
) {
    let name = |s: &str| format!("{prefix}{s}");
    let image = match chain.pentagram_step() {
        Ok(im) => im,
        Err(e) => {
            report.check_failed(&name("geometric_algebraic_xy"), tols.get("geometric_algebraic"), &e);
            return;
        }
    };
    match (image.to_xy(), chain.to_xy().and_then(|xy| xy.pentagram())) {
        (Ok(geo), Ok(alg)) => {
            report.check(&name("geometric_algebraic_xy"), geo.distance(&alg), tols.get("geometric_algebraic"));
        }
        (Err(e), _) | (_, Err(e)) => {
            report.check_failed(&name("geometric_algebraic_xy"), tols.get("geometric_algebraic"), &e)
        }
    }
    if chain.n() % 3 != 0 {
        match (image.to_ab(), chain.to_ab().and_then(|ab| ab.pentagram())) {
            (Ok(geo), Ok(alg)) => {
                let mut best = f64::INFINITY;
                for k in 0..3u8 {
                    let w = unity_cbrt(k);
                    let mut dev = 0.0f64;
                    for i in 0..geo.n() {
                        dev = dev.max((geo.a[i] - alg.a[i] * w).norm());
                        dev = dev.max((geo.b[i] - alg.b[i] * w * w).norm());
                    }
                    best = best.min(dev);
                }
                report.check(&name("geometric_algebraic_ab"), best, tols.get("geometric_algebraic"));
            }
            (Err(e), _) | (_, Err(e)) => {
                report.check_failed(&name("geometric_algebraic_ab"), tols.get("geometric_algebraic"), &e)
            }
        }
    }
}

/// Closed pentagons: one step is a cyclic relabeling of the same projective
/// polygon, five steps return the exact coordinate string.
pub fn pentagon_periodicity_check(
    report: &mut Report,
    prefix: &str,
    xy: &XYCoords,
    tols: &Tolerances,
) {
    let name = |s: &str| format!("{prefix}{s}");
    match xy.orbit(5) {
        Ok(orbit) => {
            let (shift, dev1) = orbit[1].best_shift_distance(&orbit[0]);
            report.check(&name("pentagon_step_shift"), dev1, tols.get("pentagon_period"));
            report.detail(&name("pentagon_shift"), shift);
            let dev5 = orbit[5].distance(&orbit[0]);
            report.check(&name("pentagon_period_five"), dev5, tols.get("pentagon_period"));
        }
        Err(e) => report.check_failed(&name("pentagon_period_five"), tols.get("pentagon_period"), &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn verify_random_twisted_polygon_passes() {
        let tols = Tolerances::default();
        let mut report = Report::new("verify");
        let state = LoadedState::Ab(rng::random_ab(7, 1));
        verify_state(&mut report, "", &state, 20, &tols);
        assert!(report.pass, "failing checks: {:?}",
            report.checks.iter().filter(|(_, c)| !c.pass).map(|(k, c)| (k.clone(), c.residual)).collect::<Vec<_>>());
    }

    #[test]
    fn verify_closed_pentagon_passes() {
        let tols = Tolerances::default();
        let mut report = Report::new("verify");
        let state = LoadedState::Chain(rng::random_closed_chain(5, 2).unwrap());
        verify_state(&mut report, "", &state, 10, &tols);
        assert!(report.pass, "failing checks: {:?}",
            report.checks.iter().filter(|(_, c)| !c.pass).map(|(k, c)| (k.clone(), c.residual)).collect::<Vec<_>>());
        assert!(report.checks.contains_key("pentagon_period_five"));
    }

    #[test]
    fn failed_check_clears_overall_flag() {
        let mut report = Report::new("verify");
        report.check("fine", 1e-12, 1e-10);
        assert!(report.pass);
        report.check("broken", 1e-3, 1e-10);
        assert!(!report.pass);
        report.check_failed("degenerate", 1e-10, &Error::MapUndefined("test".into()));
        assert!(report.checks["degenerate"].note.is_some());
        // control checks pass only above their floor
        let mut r2 = Report::new("verify");
        r2.check_above("control", 0.5, 1e-2);
        assert!(r2.pass);
        r2.check_above("control_low", 1e-5, 1e-2);
        assert!(!r2.pass);
    }

    #[test]
    fn report_json_deterministic_without_timing() {
        let tols = Tolerances::default();
        let make = || {
            let mut r = Report::new("verify");
            let state = LoadedState::Xy(rng::random_xy(5, 4));
            verify_state(&mut r, "", &state, 5, &tols);
            r.timing_ms = 0;
            r.to_json()
        };
        assert_eq!(make(), make());
    }
}
