//! JSON views of the library results. Numbers pass through serde_json's
//! shortest round-trip float encoding, so parsing the emitted text restores
//! every value bit-exactly.

use conequant::depth::TukeyRegion;
use conequant::{DepthResult, QuantileResult, SweepTrace};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub w: [f64; 2],
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VRepJson {
    pub vertices: Vec<[f64; 2]>,
    pub directions: Vec<[f64; 2]>,
}

/// Quantile polyhedron with both representations and the sweep step count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileJson {
    pub p: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub hrep: Vec<HalfspaceJson>,
    pub vrep: VRepJson,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfJson {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "F")]
    pub f: f64,
    pub argmin_w: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthJson {
    #[serde(rename = "K")]
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TukeyDepthJson {
    pub depth: usize,
}

/// Halfspace depth region in the quantile shape plus an explicit empty flag;
/// an empty region has no halfspaces and no vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionJson {
    pub p: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub empty: bool,
    pub hrep: Vec<HalfspaceJson>,
    pub vrep: VRepJson,
    pub steps: usize,
}

pub fn quantile_json(q: &QuantileResult, trace: &SweepTrace) -> QuantileJson {
    QuantileJson {
        p: q.p,
        k: q.k,
        hrep: q
            .poly
            .hrep
            .iter()
            .map(|h| HalfspaceJson { w: [h.w.x, h.w.y], q: h.q })
            .collect(),
        vrep: VRepJson {
            vertices: q.poly.vertices.iter().map(|v| [v.x, v.y]).collect(),
            directions: q.poly.rec_dirs.iter().map(|d| [d.x, d.y]).collect(),
        },
        steps: trace.rotation_count(),
    }
}

pub fn cdf_json(r: &DepthResult) -> CdfJson {
    CdfJson {
        k: r.k,
        f: r.f,
        argmin_w: [r.argmin_w.x, r.argmin_w.y],
    }
}

pub fn region_json(p: f64, region: &TukeyRegion) -> RegionJson {
    let (hrep, vertices) = match &region.poly {
        Some(poly) => (
            poly.hrep
                .iter()
                .map(|h| HalfspaceJson { w: [h.w.x, h.w.y], q: h.q })
                .collect(),
            poly.vertices.iter().map(|v| [v.x, v.y]).collect(),
        ),
        None => (Vec::new(), Vec::new()),
    };
    RegionJson {
        p,
        k: region.k,
        empty: region.poly.is_none(),
        hrep,
        vrep: VRepJson { vertices, directions: Vec::new() },
        steps: region.steps,
    }
}
