//! The on-disk polygon format.
//!
//! Complex numbers are `[re, im]` pairs throughout; `kind` selects which
//! arrays `data` must carry: `"ab"` and `"xy"` carry two length-`n` arrays,
//! `"vertices"` carries `n` homogeneous 3-vectors plus an optional 3×3
//! monodromy (omitted monodromy means a closed polygon, `M = Id`).

use crate::coords::{ABCoords, XYCoords};
use crate::error::Error;
use crate::num::C64;
use crate::polygon::{ProjectivePoint, VertexChain};
use crate::Result;
use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

type Pair = [f64; 2];

fn to_pair(c: C64) -> Pair {
    [c.re, c.im]
}

fn from_pair(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct PolygonData {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[Pair; 3]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonFile {
    pub schema_version: String,
    pub n: usize,
    pub kind: String,
    pub data: PolygonData,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<[[Pair; 3]; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A polygon state loaded from a file, in whichever coordinates the file
/// carried.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Ab(ABCoords),
    Xy(XYCoords),
    Chain(VertexChain),
}

impl PolygonFile {
    pub fn from_ab(ab: &ABCoords, seed: Option<u64>) -> Self {
        PolygonFile {
            schema_version: SCHEMA_VERSION.to_string(),
            n: ab.n(),
            kind: "ab".to_string(),
            data: PolygonData {
                a: Some(ab.a.iter().copied().map(to_pair).collect()),
                b: Some(ab.b.iter().copied().map(to_pair).collect()),
                ..Default::default()
            },
            monodromy: None,
            seed,
        }
    }

    pub fn from_xy(xy: &XYCoords, seed: Option<u64>) -> Self {
        PolygonFile {
            schema_version: SCHEMA_VERSION.to_string(),
            n: xy.n(),
            kind: "xy".to_string(),
            data: PolygonData {
                x: Some(xy.x.iter().copied().map(to_pair).collect()),
                y: Some(xy.y.iter().copied().map(to_pair).collect()),
                ..Default::default()
            },
            monodromy: None,
            seed,
        }
    }

    pub fn from_chain(chain: &VertexChain, seed: Option<u64>) -> Self {
        let m = chain.monodromy();
        PolygonFile {
            schema_version: SCHEMA_VERSION.to_string(),
            n: chain.n(),
            kind: "vertices".to_string(),
            data: PolygonData {
                vertices: Some(
                    chain
                        .vertices()
                        .iter()
                        .map(|p| [to_pair(p.h[0]), to_pair(p.h[1]), to_pair(p.h[2])])
                        .collect(),
                ),
                ..Default::default()
            },
            monodromy: Some(std::array::from_fn(|i| {
                std::array::from_fn(|j| to_pair(m[(i, j)]))
            })),
            seed,
        }
    }

    /// Validates sizes and kind consistency and rebuilds the state;
    /// coordinate-level invariant violations surface as errors here.
    pub fn load(&self) -> Result<LoadedState> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidFile(format!(
                "schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let n = self.n;
        let need = |v: &Option<Vec<Pair>>, name: &str| -> Result<Vec<C64>> {
            let v = v
                .as_ref()
                .ok_or_else(|| Error::InvalidFile(format!("kind {} requires array `{name}`", self.kind)))?;
            if v.len() != n {
                return Err(Error::InvalidFile(format!(
                    "array `{name}` has {} entries, expected n = {n}",
                    v.len()
                )));
            }
            Ok(v.iter().copied().map(from_pair).collect())
        };
        match self.kind.as_str() {
            "ab" => {
                if n % 3 == 0 {
                    return Err(Error::InvalidFile(format!(
                        "kind ab requires n not divisible by 3, got n = {n}"
                    )));
                }
                let a = need(&self.data.a, "a")?;
                let b = need(&self.data.b, "b")?;
                Ok(LoadedState::Ab(ABCoords::new(a, b)?))
            }
            "xy" => {
                let x = need(&self.data.x, "x")?;
                let y = need(&self.data.y, "y")?;
                Ok(LoadedState::Xy(XYCoords::new(x, y)?))
            }
            "vertices" => {
                let vs = self
                    .data
                    .vertices
                    .as_ref()
                    .ok_or_else(|| Error::InvalidFile("kind vertices requires array `vertices`".into()))?;
                if vs.len() != n {
                    return Err(Error::InvalidFile(format!(
                        "{} vertices, expected n = {n}",
                        vs.len()
                    )));
                }
                let points = vs
                    .iter()
                    .map(|v| ProjectivePoint::new(from_pair(v[0]), from_pair(v[1]), from_pair(v[2])))
                    .collect();
                let m = match &self.monodromy {
                    Some(rows) => {
                        Matrix3::from_fn(|i, j| from_pair(rows[i][j]))
                    }
                    None => Matrix3::identity(),
                };
                Ok(LoadedState::Chain(VertexChain::new(points, m)?))
            }
            other => Err(Error::InvalidFile(format!("unknown kind `{other}`"))),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polygon file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidFile(e.to_string()))
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

impl LoadedState {
    pub fn n(&self) -> usize {
        match self {
            LoadedState::Ab(ab) => ab.n(),
            LoadedState::Xy(xy) => xy.n(),
            LoadedState::Chain(c) => c.n(),
        }
    }

    /// The `(x, y)` coordinates of the state (always available).
    pub fn xy(&self) -> Result<XYCoords> {
        match self {
            LoadedState::Ab(ab) => Ok(ab.to_xy()),
            LoadedState::Xy(xy) => Ok(xy.clone()),
            LoadedState::Chain(c) => c.to_xy(),
        }
    }

    /// The `(a, b)` coordinates when `n mod 3 ≠ 0`.
    pub fn ab(&self) -> Result<ABCoords> {
        match self {
            LoadedState::Ab(ab) => Ok(ab.clone()),
            LoadedState::Xy(xy) => xy.to_ab(),
            LoadedState::Chain(c) => c.to_ab(),
        }
    }

    pub fn chain(&self) -> Option<&VertexChain> {
        match self {
            LoadedState::Chain(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, LoadedState::Chain(c) if c.is_closed())
    }
}
