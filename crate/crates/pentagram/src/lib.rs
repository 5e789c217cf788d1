//! Numerical laboratory for the pentagram map on twisted and closed polygons.
//!
//! The pentagram map sends vertex `i` of a polygon to the intersection of the
//! two diagonals `(i-1, i+1)` and `(i, i+2)`. On the space of twisted n-gons
//! (vertex chains with a projective monodromy) the map is a discrete
//! integrable system: it admits a Lax representation with a spectral
//! parameter, a spectral curve whose coefficients are integrals of motion,
//! and an invariant Poisson structure whose symplectic leaves carry an
//! explicit 2-form.
//!
//! This crate implements all of that machinery numerically, over ℂ, in double
//! precision, together with the verification suites that check every identity
//! in closed form:
//!
//! - [`polygon`] — projective geometry of vertex chains, normalized lifts,
//!   and the geometric pentagram map;
//! - [`coords`] — the `(a, b)` and `(x, y)` coordinate systems on polygon
//!   space and the pentagram map as explicit rational maps;
//! - [`lax`] — Laurent-polynomial 3×3 matrices, the Lax pair, zero-curvature
//!   residuals, monodromy operators, and gauge reduction;
//! - [`spectral`] — integrals of motion, the spectral curve, branch points
//!   and genus, Puiseux expansions at the marked points, Floquet-Bloch
//!   eigenvectors and their limits;
//! - [`symplectic`] — the invariant Poisson brackets, Casimirs, the explicit
//!   2-form, and the on-leaf inverse relation;
//! - [`files`], [`report`], [`svg`] — the CLI-facing JSON/SVG formats.

pub mod coords;
pub mod error;
pub mod files;
pub mod lax;
pub mod laurent;
pub mod num;
pub mod polygon;
pub mod report;
pub mod rng;
pub mod spectral;
pub mod svg;
pub mod symplectic;
pub mod tol;

pub use error::Error;
pub use num::C64;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
