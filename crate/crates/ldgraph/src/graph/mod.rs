//! Edge measure, motif measures, and Turán-type bounds for the
//! large-distance graph of a region: vertices are the points of the
//! region, edges join pairs at Euclidean distance strictly greater
//! than a threshold (2 unless stated otherwise). The edge measure is
//! half the 2d-dimensional Lebesgue measure of the ordered edge set.

mod clique;
mod graphon;

pub use clique::{
    clique_ball_bound, clique_witness_raster, clique_witness_region, CliqueCertificate,
    CliqueOutcome,
};
pub use graphon::{graphon_density, graphon_of_region, StepGraphon};

use crate::error::{Error, Result};
use crate::geom::{sample_hits, SetRegion};
use crate::raster::CartesianRaster;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Occupied-cell budget for the quadratic grid edge-measure loop.
pub const GRID_PAIR_BUDGET: usize = 50_000;

/// A Monte Carlo estimate; `value` is a deterministic function of
/// (seed, samples, stream count).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    #[serde(rename = "stderr")]
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Estimate {
    pub fn zero(samples: u64, seed: u64) -> Self {
        Estimate {
            value: 0.0,
            std_error: 0.0,
            samples,
            seed,
        }
    }

    /// Binomial estimate scaled by `scale`: value = scale * hits/n,
    /// std_error = scale * sqrt(p (1-p) / n).
    pub fn from_hits(hits: u64, samples: u64, scale: f64, seed: u64) -> Self {
        let n = samples as f64;
        let p = hits as f64 / n;
        Estimate {
            value: scale * p,
            std_error: scale * (p * (1.0 - p) / n).sqrt(),
            samples,
            seed,
        }
    }

    /// |value - target| <= sigmas * std_error.
    pub fn within_sigmas(&self, target: f64, sigmas: f64) -> bool {
        (self.value - target).abs() <= sigmas * self.std_error
    }
}

/// A motif: a labeled graph on vertices {1..k}, k <= 6.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifGraph {
    pub k: u8,
    pub edges: Vec<(u8, u8)>,
}

impl MotifGraph {
    pub fn new(k: u8, edges: Vec<(u8, u8)>) -> Result<Self> {
        let m = MotifGraph { k, edges };
        m.validate()?;
        Ok(m.normalized())
    }

    pub fn complete(k: u8) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 1..=k {
            for b in a + 1..=k {
                edges.push((a, b));
            }
        }
        Self::new(k, edges)
    }

    pub fn empty(k: u8) -> Result<Self> {
        Self::new(k, Vec::new())
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Domain(format!("motif order {} must be >= 2", self.k)));
        }
        if self.k > 6 {
            return Err(Error::Domain(format!(
                "motif order {} exceeds the enumeration cap 6",
                self.k
            )));
        }
        for &(a, b) in &self.edges {
            if a == b {
                return Err(Error::Domain(format!("motif loop at vertex {a}")));
            }
            if a < 1 || a > self.k || b < 1 || b > self.k {
                return Err(Error::Domain(format!(
                    "motif edge ({a},{b}) outside 1..={}",
                    self.k
                )));
            }
        }
        Ok(())
    }

    /// Edges as (min,max), sorted, deduplicated.
    pub fn normalized(&self) -> Self {
        let mut edges: Vec<(u8, u8)> = self
            .edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        MotifGraph { k: self.k, edges }
    }
}

/// Monte Carlo edge measure: half the 2d-volume of ordered point
/// pairs of the region at distance > `threshold`, estimated by
/// uniform pair sampling in the bounding box squared.
///
/// An empty region yields value 0 with std_error 0.
pub fn edge_measure_mc(
    s: &SetRegion,
    threshold: f64,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::Domain("samples must be >= 1".into()));
    }
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(Error::Domain(format!("threshold {threshold} must be >= 0")));
    }
    if s.dim > 8 {
        return Err(Error::Domain(format!(
            "dimension {} exceeds the sampling cap 8",
            s.dim
        )));
    }
    let Some((lo, hi)) = s.bbox() else {
        return Ok(Estimate::zero(samples, seed));
    };
    let d = s.dim;
    let t2 = threshold * threshold;
    let vol_box: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let hits = sample_hits(samples, seed, |rng| {
        let mut p = [0.0f64; 8];
        let mut q = [0.0f64; 8];
        for i in 0..d {
            p[i] = rng.random_range(lo[i]..hi[i]);
        }
        for i in 0..d {
            q[i] = rng.random_range(lo[i]..hi[i]);
        }
        let sq: f64 = (0..d).map(|i| (p[i] - q[i]) * (p[i] - q[i])).sum();
        sq > t2 && s.contains_coords(&p[..d]) && s.contains_coords(&q[..d])
    });
    Ok(Estimate::from_hits(hits, samples, vol_box * vol_box / 2.0, seed))
}

/// Deterministic grid edge measure: half the sum of h^4 over ordered
/// occupied-cell pairs with center distance > threshold. Quadratic in
/// the occupied count; guarded by [`GRID_PAIR_BUDGET`].
pub fn edge_measure_grid(r: &CartesianRaster, threshold: f64) -> Result<f64> {
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(Error::Domain(format!("threshold {threshold} must be >= 0")));
    }
    let centers = r.occupied_centers();
    let n = centers.len();
    if n > GRID_PAIR_BUDGET {
        return Err(Error::Resource(format!(
            "{n} occupied cells exceed the pairwise budget {GRID_PAIR_BUDGET}; use a coarser grid"
        )));
    }
    let t2 = threshold * threshold;
    let pairs: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = centers[i];
            centers[i + 1..]
                .iter()
                .filter(|b| {
                    let dx = a[0] - b[0];
                    let dy = a[1] - b[1];
                    dx * dx + dy * dy > t2
                })
                .count() as u64
        })
        .sum();
    let h2 = r.cell * r.cell;
    Ok(pairs as f64 * h2 * h2)
}

/// Monte Carlo measure of the ordered k-tuple set of a motif: tuples
/// (p_1..p_k) of region points with `‖p_a - p_b‖ > 2` for every motif
/// edge (a,b). Labeled (ordered) semantics: automorphic tuples are
/// counted once per labeling.
pub fn motif_measure_mc(
    s: &SetRegion,
    motif: &MotifGraph,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    motif.validate()?;
    if samples == 0 {
        return Err(Error::Domain("samples must be >= 1".into()));
    }
    if s.dim > 8 {
        return Err(Error::Domain(format!(
            "dimension {} exceeds the sampling cap 8",
            s.dim
        )));
    }
    let Some((lo, hi)) = s.bbox() else {
        return Ok(Estimate::zero(samples, seed));
    };
    let d = s.dim;
    let k = motif.k as usize;
    let motif = motif.normalized();
    let vol_box: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let scale = vol_box.powi(k as i32);
    let hits = sample_hits(samples, seed, |rng| {
        let mut pts = [[0.0f64; 8]; 6];
        for p in pts.iter_mut().take(k) {
            for i in 0..d {
                p[i] = rng.random_range(lo[i]..hi[i]);
            }
        }
        for &(a, b) in &motif.edges {
            let (pa, pb) = (&pts[(a - 1) as usize], &pts[(b - 1) as usize]);
            let sq: f64 = (0..d).map(|i| (pa[i] - pb[i]) * (pa[i] - pb[i])).sum();
            if sq <= 4.0 {
                return false;
            }
        }
        pts.iter().take(k).all(|p| s.contains_coords(&p[..d]))
    });
    Ok(Estimate::from_hits(hits, samples, scale, seed))
}

/// Mantel/Turán bound for K_k-free edge measure:
/// `(1 - 1/(k-1)) lambda^2 / 2`.
pub fn turan_bound(k: u32, lambda: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("clique order {k} must be >= 2")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("measure {lambda} must be >= 0")));
    }
    Ok(0.5 * (1.0 - 1.0 / (k - 1) as f64) * lambda * lambda)
}
