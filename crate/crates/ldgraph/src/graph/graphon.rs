//! Step graphons and exact motif densities, plus extraction of a
//! step-graphon summary from a region's large-distance graph.

use crate::error::{Error, Result};
use crate::geom::SetRegion;
use crate::graph::MotifGraph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Maximum number of blocks accepted by [`StepGraphon::validate`].
pub const MAX_BLOCKS: usize = 64;

/// Sampling attempt cap for [`graphon_of_region`].
const REJECTION_ATTEMPT_CAP: u64 = 10_000_000;

/// A step graphon: block weights (positive, summing to 1) and a
/// symmetric matrix of edge densities in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepGraphon {
    pub weights: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl StepGraphon {
    pub fn new(weights: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let g = StepGraphon { weights, values };
        g.validate()?;
        Ok(g)
    }

    pub fn blocks(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        let b = self.weights.len();
        if b == 0 || b > MAX_BLOCKS {
            return Err(Error::Domain(format!(
                "block count {b} outside 1..={MAX_BLOCKS}"
            )));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Domain("block weights must be positive".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("block weights sum to {sum}, not 1")));
        }
        if self.values.len() != b || self.values.iter().any(|row| row.len() != b) {
            return Err(Error::Domain(format!("value matrix is not {b}x{b}")));
        }
        for i in 0..b {
            for j in 0..b {
                let v = self.values[i][j];
                if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                    return Err(Error::Domain(format!(
                        "value {v} at ({i},{j}) outside [0,1]"
                    )));
                }
                if (v - self.values[j][i]).abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "value matrix asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Exact labeled motif density of a step graphon:
/// `t(H, W) = sum over maps phi of prod w(phi_i) prod_{(a,b) in E} W(phi_a, phi_b)`.
///
/// Enumerates all `b^k` block assignments with zero pruning; keep the
/// block count modest for motifs on many vertices.
pub fn graphon_density(w: &StepGraphon, motif: &MotifGraph) -> Result<f64> {
    w.validate()?;
    motif.validate()?;
    let motif = motif.normalized();
    let k = motif.k as usize;
    let b = w.blocks();
    // For each vertex, the edges into already-assigned vertices.
    let mut prior: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, c) in &motif.edges {
        prior[(c - 1) as usize].push((a - 1) as usize);
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        v: usize,
        k: usize,
        b: usize,
        w: &StepGraphon,
        prior: &[Vec<usize>],
        phi: &mut [usize],
        partial: f64,
        acc: &mut f64,
    ) {
        if v == k {
            *acc += partial;
            return;
        }
        for c in 0..b {
            let mut p = partial * w.weights[c];
            for &u in &prior[v] {
                p *= w.values[phi[u]][c];
                if p == 0.0 {
                    break;
                }
            }
            if p == 0.0 {
                continue;
            }
            phi[v] = c;
            rec(v + 1, k, b, w, prior, phi, p, acc);
        }
    }

    let mut phi = vec![0usize; k];
    let mut acc = 0.0;
    rec(0, k, b, w, &prior, &mut phi, 1.0, &mut acc);
    Ok(acc)
}

/// Summarize a region's large-distance graph as a step graphon.
///
/// Samples points uniformly from the region (rejection in the
/// bounding box), splits them into equal-count blocks by the first
/// coordinate, and records for each block pair the fraction of point
/// pairs at distance > 2. Deterministic in `seed`.
pub fn graphon_of_region(s: &SetRegion, blocks: usize, seed: u64) -> Result<StepGraphon> {
    s.validate()?;
    if blocks == 0 || blocks > MAX_BLOCKS {
        return Err(Error::Domain(format!(
            "block count {blocks} outside 1..={MAX_BLOCKS}"
        )));
    }
    if s.dim > 8 {
        return Err(Error::Domain(format!(
            "dimension {} exceeds the sampling cap 8",
            s.dim
        )));
    }
    let Some((lo, hi)) = s.bbox() else {
        return Err(Error::Domain("cannot summarize an empty region".into()));
    };
    let d = s.dim;
    let m = (256 * blocks).clamp(2048, 8192);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<f64> = Vec::with_capacity(m * d);
    let mut attempts = 0u64;
    let mut buf = [0.0f64; 8];
    while pts.len() < m * d {
        attempts += 1;
        if attempts > REJECTION_ATTEMPT_CAP {
            return Err(Error::Domain(
                "rejection sampling failed; the region may have measure zero".into(),
            ));
        }
        for i in 0..d {
            buf[i] = rng.random_range(lo[i]..hi[i]);
        }
        if s.contains_coords(&buf[..d]) {
            pts.extend_from_slice(&buf[..d]);
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pts[a * d].total_cmp(&pts[b * d]));

    // Equal-count quantile blocks; the first (m % blocks) blocks take
    // one extra point.
    let q = m / blocks;
    let r = m % blocks;
    let mut starts = Vec::with_capacity(blocks + 1);
    let mut pos = 0usize;
    starts.push(0);
    for i in 0..blocks {
        pos += q + usize::from(i < r);
        starts.push(pos);
    }

    let weights: Vec<f64> = (0..blocks)
        .map(|i| (starts[i + 1] - starts[i]) as f64 / m as f64)
        .collect();

    let block_pts = |i: usize| &order[starts[i]..starts[i + 1]];
    let far = |a: usize, b: usize| -> bool {
        let sq: f64 = (0..d)
            .map(|i| (pts[a * d + i] - pts[b * d + i]) * (pts[a * d + i] - pts[b * d + i]))
            .sum();
        sq > 4.0
    };

    let mut values = vec![vec![0.0f64; blocks]; blocks];
    #[allow(clippy::needless_range_loop)]
    for i in 0..blocks {
        let bi = block_pts(i);
        for j in i..blocks {
            let frac = if i == j {
                let n = bi.len();
                if n < 2 {
                    0.0
                } else {
                    let mut hits = 0u64;
                    for x in 0..n {
                        for y in x + 1..n {
                            hits += u64::from(far(bi[x], bi[y]));
                        }
                    }
                    hits as f64 / (n * (n - 1) / 2) as f64
                }
            } else {
                let bj = block_pts(j);
                let mut hits = 0u64;
                for &a in bi {
                    for &b in bj {
                        hits += u64::from(far(a, b));
                    }
                }
                hits as f64 / (bi.len() * bj.len()) as f64
            };
            values[i][j] = frac;
            values[j][i] = frac;
        }
    }

    StepGraphon::new(weights, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Disk, Point};
    use crate::graph::edge_measure_mc;
    use std::f64::consts::PI;

    fn bipartite() -> StepGraphon {
        StepGraphon::new(
            vec![0.5, 0.5],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        )
        .unwrap()
    }

    fn tripartite() -> StepGraphon {
        let third = 1.0 / 3.0;
        StepGraphon::new(
            vec![third, third, third],
            vec![
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn bipartite_densities() {
        let k2 = MotifGraph::complete(2).unwrap();
        let k3 = MotifGraph::complete(3).unwrap();
        assert!((graphon_density(&bipartite(), &k2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(graphon_density(&bipartite(), &k3).unwrap(), 0.0);
    }

    #[test]
    fn tripartite_densities() {
        let k2 = MotifGraph::complete(2).unwrap();
        let k3 = MotifGraph::complete(3).unwrap();
        assert!((graphon_density(&tripartite(), &k2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((graphon_density(&tripartite(), &k3).unwrap() - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn empty_motif_density_is_one() {
        let e3 = MotifGraph::empty(3).unwrap();
        assert!((graphon_density(&bipartite(), &e3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn path_density_on_bipartite() {
        // Path 1-2-3: t = 2 * (1/2)^3 * 1 * 1 = 1/4.
        let p3 = MotifGraph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        assert!((graphon_density(&bipartite(), &p3).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn graphon_validation() {
        assert!(StepGraphon::new(vec![], vec![]).is_err());
        assert!(StepGraphon::new(vec![0.5, 0.4], vec![vec![0.0; 2]; 2]).is_err());
        assert!(StepGraphon::new(vec![0.5, 0.5], vec![vec![0.0; 2]; 3]).is_err());
        assert!(
            StepGraphon::new(vec![0.5, 0.5], vec![vec![0.0, 0.3], vec![0.4, 0.0]]).is_err()
        );
        assert!(
            StepGraphon::new(vec![0.5, 0.5], vec![vec![0.0, 1.5], vec![1.5, 0.0]]).is_err()
        );
        assert!(StepGraphon::new(vec![1.0; 65].iter().map(|w| w / 65.0).collect(),
            vec![vec![0.0; 65]; 65]).is_err());
    }

    fn far_disks() -> SetRegion {
        SetRegion::disk_union(
            2,
            vec![
                Disk::new(Point::xy(0.0, 0.0), 1.0),
                Disk::new(Point::xy(4.5, 0.0), 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn far_disks_recover_the_bipartite_graphon() {
        // Quantile blocks split by point count, so a handful of samples
        // can land on the wrong side of the midpoint; recovery of the
        // bipartite structure is approximate, not exact.
        let g = graphon_of_region(&far_disks(), 2, 42).unwrap();
        assert_eq!(g.weights, vec![0.5, 0.5]);
        assert_eq!(g.values[0][1], g.values[1][0]);
        assert!(g.values[0][1] > 0.97, "cross block {}", g.values[0][1]);
        assert!(g.values[0][0] < 0.03, "block 0 self {}", g.values[0][0]);
        assert!(g.values[1][1] < 0.03, "block 1 self {}", g.values[1][1]);
    }

    #[test]
    fn graphon_edge_density_matches_edge_measure() {
        // t(K2, W_s) * lambda(s)^2 == 2 e(G_s) up to sampling noise.
        let s = far_disks();
        let g = graphon_of_region(&s, 4, 7).unwrap();
        let k2 = MotifGraph::complete(2).unwrap();
        let t = graphon_density(&g, &k2).unwrap();
        let lambda = 2.0 * PI;
        let e = edge_measure_mc(&s, 2.0, 1_000_000, 7).unwrap();
        let lhs = t * lambda * lambda;
        let rhs = 2.0 * e.value;
        assert!(
            (lhs - rhs).abs() < 0.05 * rhs.max(1.0),
            "t*lambda^2 {lhs} vs 2e {rhs}"
        );
    }

    #[test]
    fn single_disk_graphon_is_zero() {
        let s = SetRegion::disk_union(2, vec![Disk::new(Point::xy(0.0, 0.0), 1.0)]).unwrap();
        let g = graphon_of_region(&s, 3, 9).unwrap();
        for row in &g.values {
            for &v in row {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn graphon_of_region_is_deterministic() {
        let a = graphon_of_region(&far_disks(), 3, 5).unwrap();
        let b = graphon_of_region(&far_disks(), 3, 5).unwrap();
        assert_eq!(a, b);
        let c = graphon_of_region(&far_disks(), 3, 6).unwrap();
        assert!(a != c || a.values == c.values);
    }

    #[test]
    fn empty_region_is_rejected() {
        let s = SetRegion::disk_union(2, vec![]).unwrap();
        assert!(matches!(
            graphon_of_region(&s, 2, 1),
            Err(Error::Domain(_))
        ));
    }
}
