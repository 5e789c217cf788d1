//! Centralized tolerances.
//!
//! Every threshold used by the verification suites lives here, so that a
//! check never carries an ad-hoc magic number. The values fall into three
//! groups: machine-precision margins for identities that are exact in f64
//! (Laurent algebra, trace extraction), looser margins for quantities that
//! pass through iterative root finding or extrapolation, and structural
//! cutoffs (pruning, genericity, clustering) that define when data counts as
//! degenerate.

use std::collections::BTreeMap;

/// Relative pruning threshold for Laurent coefficients after arithmetic.
pub const PRUNE_REL: f64 = 1e-13;

/// |det| of three consecutive unit-normalized lifted vertices must exceed
/// this for a chain to count as generic.
pub const GENERICITY_DET: f64 = 1e-9;

/// A denominator factor counts as vanishing when its modulus drops below
/// `DENOM_VANISH * (1 + modulus of the paired numerator)`.
pub const DENOM_VANISH: f64 = 1e-12;

/// Zero-curvature residual `L_{t+1} P - P' L` (relative, per Lax kind).
pub const ZERO_CURVATURE: f64 = 1e-10;

/// Relative drift of every integral of motion over a 100-step orbit.
pub const CONSERVATION_DRIFT: f64 = 1e-9;

/// Closed-form invariants (`I_q = Π a_j` etc.) from trace extraction.
pub const INVARIANT_EXACT: f64 = 1e-12;

/// Geometric pentagram map against the rational-map formulas.
pub const GEOMETRIC_ALGEBRAIC: f64 = 1e-9;

/// Roundtrips between coordinate systems (`ab -> xy -> ab`, lifts, gauges).
pub const ROUNDTRIP: f64 = 1e-10;

/// Residual of the gauge relation between the two Lax matrices.
pub const GAUGE_RELATION: f64 = 1e-12;

/// Leading-coefficient residuals of the monodromy asymptotics at z = 0, ∞.
pub const MONODROMY_ASYMPTOTICS: f64 = 1e-10;

/// The five linear closed-polygon relations on the invariants.
pub const CLOSED_RELATIONS: f64 = 1e-8;

/// Lower bound for the same relations on generic twisted controls.
pub const TWISTED_CONTROL: f64 = 1e-2;

/// Puiseux leading terms at the marked points after Richardson extrapolation.
pub const PUISEUX: f64 = 1e-6;

/// Floquet-Bloch sheet limits (`a_0`, `b_0`, `b_{n-1}`, eigencovector values).
pub const MARKED_LIMITS: f64 = 1e-6;

/// Pentagon orbit periodicity (1 step up to shift, 5 steps exactly).
pub const PENTAGON_PERIOD: f64 = 1e-8;

/// Pairwise Poisson brackets of the integrals of motion.
pub const INVOLUTION: f64 = 1e-8;

/// Invariance of the Poisson tensor: `J P Jᵀ = P` in log coordinates.
pub const BRACKET_INVARIANCE: f64 = 1e-8;

/// Casimir gradients must be annihilated by the Poisson tensor.
pub const CASIMIR_KERNEL: f64 = 1e-8;

/// On-leaf inverse relation `P A ξ = ξ` for leaf-tangent ξ.
pub const ONLEAF_INVERSE: f64 = 1e-7;

/// Leaf-restricted invariance of the 2-form under the map.
pub const OMEGA_INVARIANCE: f64 = 1e-7;

/// Forward-mode gradients against central finite differences.
pub const FD_CROSS_CHECK: f64 = 1e-5;

/// Singular values below `RANK_CUTOFF * s_max` do not count towards a rank.
pub const RANK_CUTOFF: f64 = 1e-7;

/// Aberth-Ehrlich root finder: relative convergence and iteration cap.
pub const ROOT_CONVERGENCE: f64 = 1e-13;
pub const ROOT_MAX_ITER: usize = 500;

/// Roots closer than this (relative) are clustered into one branch point.
pub const ROOT_CLUSTER: f64 = 1e-7;

/// Relative eigenvalue gap below which a point counts as a branch point.
pub const EIGENVALUE_GAP: f64 = 1e-8;

/// Monodromy of the image chain against the input monodromy, and the
/// projective-equivalence test on coordinate strings.
pub const EQUIVALENCE: f64 = 1e-8;

/// Named tolerance set used by the CLI; `--tol-override key=value` rebinds
/// individual entries.
#[derive(Debug, Clone)]
pub struct Tolerances {
    map: BTreeMap<&'static str, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        map.insert("zero_curvature", ZERO_CURVATURE);
        map.insert("conservation_drift", CONSERVATION_DRIFT);
        map.insert("invariant_exact", INVARIANT_EXACT);
        map.insert("geometric_algebraic", GEOMETRIC_ALGEBRAIC);
        map.insert("roundtrip", ROUNDTRIP);
        map.insert("gauge_relation", GAUGE_RELATION);
        map.insert("monodromy_asymptotics", MONODROMY_ASYMPTOTICS);
        map.insert("closed_relations", CLOSED_RELATIONS);
        map.insert("twisted_control", TWISTED_CONTROL);
        map.insert("puiseux", PUISEUX);
        map.insert("marked_limits", MARKED_LIMITS);
        map.insert("pentagon_period", PENTAGON_PERIOD);
        map.insert("involution", INVOLUTION);
        map.insert("bracket_invariance", BRACKET_INVARIANCE);
        map.insert("casimir_kernel", CASIMIR_KERNEL);
        map.insert("onleaf_inverse", ONLEAF_INVERSE);
        map.insert("omega_invariance", OMEGA_INVARIANCE);
        map.insert("fd_cross_check", FD_CROSS_CHECK);
        map.insert("equivalence", EQUIVALENCE);
        Tolerances { map }
    }
}

impl Tolerances {
    pub fn get(&self, key: &str) -> f64 {
        *self
            .map
            .get(key)
            .unwrap_or_else(|| panic!("unknown tolerance key `{key}`"))
    }

    /// Apply a `key=value` override; unknown keys are rejected.
    pub fn override_entry(&mut self, key: &str, value: f64) -> std::result::Result<(), String> {
        match self.map.iter_mut().find(|(k, _)| **k == key) {
            Some((_, v)) => {
                *v = value;
                Ok(())
            }
            None => Err(format!(
                "unknown tolerance key `{key}` (known: {})",
                self.map.keys().copied().collect::<Vec<_>>().join(", ")
            )),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.map.keys().copied()
    }
}
