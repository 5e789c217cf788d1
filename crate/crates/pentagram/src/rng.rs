//! Seeded, portable random generation of polygons.
//!
//! All randomness flows through ChaCha8 with an explicit 64-bit seed; the
//! stream index separates independent draws (stream `k` feeds polygon
//! attempt `k`), so reports are bit-reproducible across platforms.

use crate::coords::{ABCoords, XYCoords};
use crate::error::Error;
use crate::num::{c, C64};
use crate::polygon::{ProjectivePoint, VertexChain};
use crate::Result;
use nalgebra::Matrix3;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Complex scalar with modulus in `[0.5, 1.5)` and uniform phase: nonzero,
/// tame, and far from the degeneracy strata with overwhelming probability.
fn annulus(rng: &mut ChaCha8Rng) -> C64 {
    let r = 0.5 + rng.gen::<f64>();
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    C64::from_polar(r, theta)
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random `(a, b)` coordinates; panics if `n` is a multiple of 3.
pub fn random_ab(n: usize, seed: u64) -> ABCoords {
    for attempt in 0..100 {
        let mut rng = stream(seed, attempt);
        let a = (0..n).map(|_| annulus(&mut rng)).collect();
        let b = (0..n).map(|_| annulus(&mut rng)).collect();
        if let Ok(ab) = ABCoords::new(a, b) {
            return ab;
        }
    }
    unreachable!("annulus sampling failed 100 times");
}

/// Random `(x, y)` coordinates for any `n ≥ 4`.
pub fn random_xy(n: usize, seed: u64) -> XYCoords {
    for attempt in 0..100 {
        let mut rng = stream(seed, attempt);
        let x = (0..n).map(|_| annulus(&mut rng)).collect();
        let y = (0..n).map(|_| annulus(&mut rng)).collect();
        if let Ok(xy) = XYCoords::new(x, y) {
            return xy;
        }
    }
    unreachable!("annulus sampling failed 100 times");
}

/// Random generic twisted chain, built from random `(a, b)` data when
/// `n mod 3 ≠ 0` and from random vertices plus a random monodromy otherwise.
pub fn random_chain(n: usize, seed: u64) -> Result<VertexChain> {
    if n % 3 != 0 {
        return random_ab(n, seed).to_chain();
    }
    for attempt in 0..100 {
        let mut rng = stream(seed, attempt);
        let vertices: Vec<ProjectivePoint> = (0..n)
            .map(|_| ProjectivePoint::new(annulus(&mut rng), annulus(&mut rng), annulus(&mut rng)))
            .collect();
        let m = Matrix3::from_fn(|_, _| annulus(&mut rng));
        if let Ok(chain) = VertexChain::new(vertices, m) {
            return Ok(chain);
        }
    }
    Err(Error::GenerationFailed(100))
}

/// Conditioning margin imposed by the closed-polygon sampler: uniform disk
/// points routinely produce nearly collinear triples, and the desk-scale
/// suites need samples a healthy distance from every degeneracy stratum.
const CLOSED_QUALITY_MARGIN: f64 = 2e-2;

fn chain_quality(chain: &VertexChain) -> f64 {
    let n = chain.n();
    let mut quality = f64::INFINITY;
    for j in 0..n as i64 {
        let u = chain.rep(j).normalize();
        let v = chain.rep(j + 1).normalize();
        let w = chain.rep(j + 2).normalize();
        let det = nalgebra::Matrix3::from_columns(&[u, v, w]).determinant();
        quality = quality.min(det.norm());
    }
    match chain.to_xy() {
        Ok(xy) => {
            for i in 0..n {
                let p = xy.x[i] * xy.y[i];
                quality = quality.min((C64::new(1.0, 0.0) - p).norm());
                // keep the coordinate scales sane as well
                if p.norm() > 1e3 {
                    quality = 0.0;
                }
            }
            // bound the product invariants: I_q³ = 1/(Πx (Πy)²),
            // J_q³ = 1/((Πx)² Πy); tiny or huge values push the branch
            // points outside the resolvable range
            let px: C64 = xy.x.iter().product();
            let py: C64 = xy.y.iter().product();
            for prod in [px * py * py, px * px * py] {
                if prod.norm() < 1e-4 || prod.norm() > 1e4 {
                    quality = 0.0;
                }
            }
        }
        Err(_) => return 0.0,
    }
    quality
}

/// Closed polygon: `n` points sampled uniformly in the unit disk (real
/// coordinates) with identity monodromy, resampled until the conditioning
/// margin holds. The pentagram map on closed polygons is defined only for
/// `n ≥ 5`.
pub fn random_closed_chain(n: usize, seed: u64) -> Result<VertexChain> {
    if n < 5 {
        // the pentagram map on closed polygons exists only from pentagons up
        return Err(Error::MapUndefined(format!(
            "the pentagram map on closed {n}-gons is undefined (needs n >= 5)"
        )));
    }
    for attempt in 0..100 {
        let mut rng = stream(seed, attempt);
        let vertices: Vec<ProjectivePoint> = (0..n)
            .map(|_| {
                // rejection-sample the unit disk
                loop {
                    let px = 2.0 * rng.gen::<f64>() - 1.0;
                    let py = 2.0 * rng.gen::<f64>() - 1.0;
                    if px * px + py * py <= 1.0 {
                        return ProjectivePoint::new(c(px, 0.0), c(py, 0.0), c(1.0, 0.0));
                    }
                }
            })
            .collect();
        if let Ok(chain) = VertexChain::new(vertices, Matrix3::identity()) {
            if chain_quality(&chain) >= CLOSED_QUALITY_MARGIN && chain.pentagram_step().is_ok() {
                return Ok(chain);
            }
        }
    }
    Err(Error::GenerationFailed(100))
}
