//! Clique detection in large-distance graphs: find k points of a
//! region (or raster) pairwise more than 2 apart, or certify that
//! none exist.
//!
//! Absence certificates, strongest first:
//! - enclosing ball: k points pairwise > 2 force any enclosing ball
//!   radius above sqrt(2(k-1)/k), so a set inside such a ball is
//!   K_k-free (sum-of-squared-distances argument via the centroid);
//! - cluster cover: k-1 parts of diameter <= 2 cover the set, so
//!   some pair of any k points shares a part (pigeonhole);
//! - grid exhaustion: a complete scan of the search lattice found no
//!   k-tuple even at a slackened threshold.
//!
//! The search itself is grid-based: a coarse pass (pitch 4x the
//! lattice pitch) with farthest-point greedy seeding and
//! best-response relocation, followed by exhaustive refinement at
//! full pitch around near-miss tuples. A tuple of region points with
//! pairwise margin `2 + 2 sqrt(d) * pitch` survives rounding onto the
//! coarse sublattice, which is what the refinement threshold below is
//! calibrated to. Budgets keep adversarial inputs from hanging; when
//! one trips, the outcome is flagged non-exhaustive instead.

use crate::error::{Error, Result};
use crate::geom::convex_hull;
use crate::geom::{Point, SetRegion};
use crate::raster::CartesianRaster;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::time::{Duration, Instant};

/// Cap on lattice points kept per search, scaled down with dimension.
fn point_budget(d: usize) -> usize {
    (2_400_000 / d.max(1)).max(300_000)
}

/// Cap on lattice cells along any single axis.
const AXIS_CAP: usize = 60_000;
/// Pair-test budget per root branch of the complete coarse scan.
const ROOT_BRANCH_BUDGET: i64 = 2_000_000;
/// Complete-scan roots beyond this count are not attempted.
const SCAN_ROOT_CAP: usize = 150_000;
/// Node budget for one window-refinement search.
const REFINE_BUDGET: i64 = 50_000_000;
/// Exact all-pairs cap for k = 2 in dimension >= 3.
const PAIR_EXACT_CAP: usize = 20_000;
/// Wall-clock guard for the complete scan.
const SCAN_WALL_LIMIT: Duration = Duration::from_secs(20);
/// Window enumeration cap per refinement window.
const WINDOW_CELL_CAP: usize = 100_000;

/// Why the search concluded what it concluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CliqueCertificate {
    /// A witness tuple was found and re-verified exactly.
    WitnessVerified,
    /// The whole set fits in a ball of `radius` <= `bound`, the
    /// largest enclosing radius compatible with K_k-freeness.
    EnclosingBall { radius: f64, bound: f64 },
    /// k-1 clusters of diameter <= 2 cover the set.
    ClusterCover { clusters: usize },
    /// Complete lattice scan at the slackened threshold found nothing.
    GridExhausted,
    /// Heuristic search found nothing; a budget or coarsening kept
    /// the scan from being complete.
    GridSearched,
}

/// Result of a clique search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueOutcome {
    /// k points pairwise more than 2 apart, if found.
    pub witness: Option<Vec<Point>>,
    pub certificate: CliqueCertificate,
    /// Lattice pitch actually used (may exceed the request when the
    /// point budget forces coarsening).
    pub effective_resolution: f64,
    /// True when absence is backed by an exact certificate or a
    /// completed scan, or when a witness was verified.
    pub exhaustive: bool,
}

impl CliqueOutcome {
    fn absent(certificate: CliqueCertificate, resolution: f64, exhaustive: bool) -> Self {
        CliqueOutcome {
            witness: None,
            certificate,
            effective_resolution: resolution,
            exhaustive,
        }
    }

    fn found(points: Vec<Point>, resolution: f64) -> Self {
        CliqueOutcome {
            witness: Some(points),
            certificate: CliqueCertificate::WitnessVerified,
            effective_resolution: resolution,
            exhaustive: true,
        }
    }
}

/// Largest enclosing-ball radius compatible with K_k-freeness:
/// k points pairwise > 2 have enclosing radius > sqrt(2(k-1)/k).
pub fn clique_ball_bound(k: usize) -> f64 {
    (2.0 * (k as f64 - 1.0) / k as f64).sqrt()
}

/// Searches a region for k points pairwise more than 2 apart.
pub fn clique_witness_region(s: &SetRegion, k: usize, resolution: f64) -> Result<CliqueOutcome> {
    s.validate()?;
    check_params(k, resolution)?;
    if s.dim > 8 {
        return Err(Error::Domain(format!(
            "dimension {} exceeds the search cap 8",
            s.dim
        )));
    }
    let Some((lo, hi)) = s.bbox() else {
        return Ok(CliqueOutcome::absent(
            CliqueCertificate::GridExhausted,
            resolution,
            true,
        ));
    };
    let bound = clique_ball_bound(k);
    if let Some((_, radius)) = region_enclosing_ball(s) {
        if radius <= bound + 1e-12 {
            return Ok(CliqueOutcome::absent(
                CliqueCertificate::EnclosingBall { radius, bound },
                resolution,
                true,
            ));
        }
    }
    if let Some(clusters) = cluster_cover(s, k) {
        return Ok(CliqueOutcome::absent(
            CliqueCertificate::ClusterCover { clusters },
            resolution,
            true,
        ));
    }
    let lat = Lattice::build(&lo, &hi, s.dim, resolution, |c| s.contains_coords(c));
    run_search(&lat, k)
}

/// Searches the cell union of a raster for k points pairwise more
/// than 2 apart.
pub fn clique_witness_raster(r: &CartesianRaster, k: usize, resolution: f64) -> Result<CliqueOutcome> {
    check_params(k, resolution)?;
    if r.occupied_count() == 0 {
        return Ok(CliqueOutcome::absent(
            CliqueCertificate::GridExhausted,
            resolution,
            true,
        ));
    }
    let bound = clique_ball_bound(k);
    let corners = r.boundary_corners();
    let (_, radius) = enclosing_circle(&corners);
    if radius <= bound + 1e-12 {
        return Ok(CliqueOutcome::absent(
            CliqueCertificate::EnclosingBall { radius, bound },
            resolution,
            true,
        ));
    }
    let lo = [r.origin[0], r.origin[1]];
    let hi = [
        r.origin[0] + r.width as f64 * r.cell,
        r.origin[1] + r.height as f64 * r.cell,
    ];
    let lat = Lattice::build(&lo, &hi, 2, resolution, |c| r.contains_xy(c[0], c[1]));
    run_search(&lat, k)
}

fn check_params(k: usize, resolution: f64) -> Result<()> {
    if !(2..=64).contains(&k) {
        return Err(Error::Domain(format!("clique order {k} outside 2..=64")));
    }
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::Domain(format!("resolution {resolution} must be > 0")));
    }
    Ok(())
}

// ---------------------------------------------------------------
// Search lattice
// ---------------------------------------------------------------

/// Region points on a cubic lattice anchored at the bounding-box
/// center, so axis-extreme geometry is represented as well as the
/// pitch allows.
struct Lattice {
    d: usize,
    pitch: f64,
    /// Flat coordinates, `d` per point.
    coords: Vec<f64>,
    /// Lattice index tuple per point.
    index: Vec<[u16; 8]>,
    /// Cells per axis.
    dims: [usize; 8],
    /// Packed index -> point id.
    map: HashMap<u128, u32>,
}

fn pack(idx: &[u16; 8]) -> u128 {
    let mut key = 0u128;
    for (i, &v) in idx.iter().enumerate() {
        key |= (v as u128) << (16 * i);
    }
    key
}

impl Lattice {
    fn build<F: Fn(&[f64]) -> bool>(lo: &[f64], hi: &[f64], d: usize, pitch: f64, member: F) -> Self {
        let budget = point_budget(d);
        let mut pitch = pitch;
        let mut dims = [1usize; 8];
        loop {
            let mut total = 1usize;
            for i in 0..d {
                dims[i] = (((hi[i] - lo[i]) / pitch).ceil() as usize).max(1);
                total = total.saturating_mul(dims[i]);
            }
            if total <= budget && dims[..d].iter().all(|&n| n <= AXIS_CAP) {
                break;
            }
            let grow = ((total as f64 / budget as f64).powf(1.0 / d as f64)).max(1.05);
            pitch *= grow;
        }
        // Anchor at the box center: point j has coordinate
        // center + (j - (n-1)/2) * pitch along each axis.
        let mut start = [0.0f64; 8];
        for i in 0..d {
            let center = 0.5 * (lo[i] + hi[i]);
            start[i] = center - 0.5 * (dims[i] as f64 - 1.0) * pitch;
        }
        let mut coords = Vec::new();
        let mut index = Vec::new();
        let mut idx = [0u16; 8];
        let mut buf = [0.0f64; 8];
        'outer: loop {
            for i in 0..d {
                buf[i] = start[i] + idx[i] as f64 * pitch;
            }
            if member(&buf[..d]) {
                coords.extend_from_slice(&buf[..d]);
                index.push(idx);
            }
            // Odometer increment.
            for i in 0..d {
                idx[i] += 1;
                if (idx[i] as usize) < dims[i] {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
        let map = index
            .iter()
            .enumerate()
            .map(|(id, ix)| (pack(ix), id as u32))
            .collect();
        Lattice {
            d,
            pitch,
            coords,
            index,
            dims,
            map,
        }
    }

    fn len(&self) -> usize {
        self.index.len()
    }

    fn point(&self, id: u32) -> &[f64] {
        let i = id as usize * self.d;
        &self.coords[i..i + self.d]
    }

    fn sqdist(&self, a: u32, b: u32) -> f64 {
        let pa = self.point(a);
        let pb = self.point(b);
        pa.iter().zip(pb).map(|(x, y)| (x - y) * (x - y)).sum()
    }

    fn to_point(&self, id: u32) -> Point {
        Point::new(self.point(id).to_vec())
    }
}

fn min_pairwise_sq(lat: &Lattice, tuple: &[u32]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            best = best.min(lat.sqdist(tuple[i], tuple[j]));
        }
    }
    best
}

fn run_search(lat: &Lattice, k: usize) -> Result<CliqueOutcome> {
    let res = lat.pitch;
    let n = lat.len();
    if n < k {
        return Ok(CliqueOutcome::absent(
            CliqueCertificate::GridExhausted,
            res,
            true,
        ));
    }
    if k == 2 {
        return Ok(search_pairs(lat));
    }

    let all_ids: Vec<u32> = (0..n as u32).collect();
    let coarse_ids: Vec<u32> = (0..n as u32)
        .filter(|&id| lat.index[id as usize][..lat.d].iter().all(|&i| i % 4 == 0))
        .collect();

    // Greedy multistart with relocation, on the coarse sublattice and
    // on the full lattice.
    let mut candidates = greedy_tuples(lat, &coarse_ids, k);
    candidates.extend(greedy_tuples(lat, &all_ids, k));
    candidates.sort_by(|a, b| min_pairwise_sq(lat, b).total_cmp(&min_pairwise_sq(lat, a)));
    candidates.dedup();
    candidates.truncate(24);

    for tuple in &candidates {
        if min_pairwise_sq(lat, tuple) > 4.0 {
            return Ok(CliqueOutcome::found(
                tuple.iter().map(|&id| lat.to_point(id)).collect(),
                res,
            ));
        }
    }

    // Near-miss refinement threshold: a tuple with pairwise margin
    // 2 sqrt(d) * pitch keeps pairwise distance above tau after
    // rounding onto the coarse sublattice.
    let tau = 2.0 - 2.0 * (lat.d as f64).sqrt() * lat.pitch;
    let mut exhaustive = true;
    if tau > 1.2 {
        let tau2 = tau * tau;
        let mut budget_ok = true;
        for tuple in &candidates {
            if min_pairwise_sq(lat, tuple) <= tau2 {
                continue;
            }
            if let Some(fine) = refine_tuple(lat, tuple, k, &mut budget_ok) {
                return Ok(CliqueOutcome::found(
                    fine.iter().map(|&id| lat.to_point(id)).collect(),
                    res,
                ));
            }
        }
        exhaustive &= budget_ok;
        let (witness, complete) = complete_scan(lat, &coarse_ids, k, tau2);
        if let Some(fine) = witness {
            return Ok(CliqueOutcome::found(
                fine.iter().map(|&id| lat.to_point(id)).collect(),
                res,
            ));
        }
        exhaustive &= complete;
    } else {
        // Pitch too coarse relative to the threshold for the rounding
        // argument; only the heuristic pass ran.
        exhaustive = false;
    }

    Ok(CliqueOutcome::absent(
        if exhaustive {
            CliqueCertificate::GridExhausted
        } else {
            CliqueCertificate::GridSearched
        },
        res,
        exhaustive,
    ))
}

// ---------------------------------------------------------------
// k = 2: farthest pair
// ---------------------------------------------------------------

fn search_pairs(lat: &Lattice) -> CliqueOutcome {
    let res = lat.pitch;
    let n = lat.len();
    if lat.d == 2 {
        // Exact: the farthest lattice pair is a pair of hull vertices.
        let pts: Vec<[f64; 2]> = (0..n).map(|i| [lat.coords[2 * i], lat.coords[2 * i + 1]]).collect();
        let hull = convex_hull(&pts);
        let mut best = (0usize, 0usize, 0.0f64);
        for i in 0..hull.len() {
            for j in i + 1..hull.len() {
                let dx = hull[i][0] - hull[j][0];
                let dy = hull[i][1] - hull[j][1];
                let sq = dx * dx + dy * dy;
                if sq > best.2 {
                    best = (i, j, sq);
                }
            }
        }
        if best.2 > 4.0 {
            let w = vec![
                Point::xy(hull[best.0][0], hull[best.0][1]),
                Point::xy(hull[best.1][0], hull[best.1][1]),
            ];
            return CliqueOutcome::found(w, res);
        }
        return CliqueOutcome::absent(CliqueCertificate::GridExhausted, res, true);
    }
    if n <= PAIR_EXACT_CAP {
        let best = (0..n as u32)
            .into_par_iter()
            .map(|i| {
                let mut row = (0.0f64, i, i);
                for j in i + 1..n as u32 {
                    let sq = lat.sqdist(i, j);
                    if sq > row.0 {
                        row = (sq, i, j);
                    }
                }
                row
            })
            .reduce(
                || (0.0f64, 0u32, 0u32),
                |a, b| {
                    if (b.0, a.1, a.2) > (a.0, b.1, b.2) {
                        b
                    } else {
                        a
                    }
                },
            );
        if best.0 > 4.0 {
            return CliqueOutcome::found(vec![lat.to_point(best.1), lat.to_point(best.2)], res);
        }
        return CliqueOutcome::absent(CliqueCertificate::GridExhausted, res, true);
    }
    // Alternating farthest-point heuristic from axis-extreme starts.
    let ids: Vec<u32> = (0..n as u32).collect();
    let mut best = (0.0f64, 0u32, 0u32);
    for start in axis_extreme_ids(lat, &ids) {
        let mut a = start;
        let mut b = farthest_from(lat, &ids, a);
        for _ in 0..32 {
            let a2 = farthest_from(lat, &ids, b);
            let b2 = farthest_from(lat, &ids, a2);
            if lat.sqdist(a2, b2) <= lat.sqdist(a, b) {
                break;
            }
            a = a2;
            b = b2;
        }
        let sq = lat.sqdist(a, b);
        if sq > best.0 {
            best = (sq, a.min(b), a.max(b));
        }
    }
    if best.0 > 4.0 {
        return CliqueOutcome::found(vec![lat.to_point(best.1), lat.to_point(best.2)], res);
    }
    CliqueOutcome::absent(CliqueCertificate::GridSearched, res, false)
}

fn farthest_from(lat: &Lattice, ids: &[u32], from: u32) -> u32 {
    let mut best = (f64::NEG_INFINITY, from);
    for &id in ids {
        let sq = lat.sqdist(from, id);
        if sq > best.0 {
            best = (sq, id);
        }
    }
    best.1
}

// ---------------------------------------------------------------
// Greedy seeding with best-response relocation
// ---------------------------------------------------------------

fn axis_extreme_ids(lat: &Lattice, ids: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    for axis in 0..lat.d {
        let mut lo = (f64::INFINITY, u32::MAX);
        let mut hi = (f64::NEG_INFINITY, u32::MAX);
        for &id in ids {
            let c = lat.point(id)[axis];
            if c < lo.0 {
                lo = (c, id);
            }
            if c > hi.0 {
                hi = (c, id);
            }
        }
        out.push(lo.1);
        out.push(hi.1);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Farthest-point greedy k-tuples from axis-extreme starts, improved
/// by best-response relocation (each position re-placed at the point
/// maximizing its minimum distance to the others, until a fixpoint).
fn greedy_tuples(lat: &Lattice, ids: &[u32], k: usize) -> Vec<Vec<u32>> {
    if ids.len() < k {
        return Vec::new();
    }
    let starts = axis_extreme_ids(lat, ids);
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    for &start in &starts {
        let mut tuple = vec![start];
        while tuple.len() < k {
            let mut best = (f64::NEG_INFINITY, u32::MAX);
            for &id in ids {
                if tuple.contains(&id) {
                    continue;
                }
                let m = tuple
                    .iter()
                    .map(|&t| lat.sqdist(id, t))
                    .fold(f64::INFINITY, f64::min);
                if m > best.0 {
                    best = (m, id);
                }
            }
            tuple.push(best.1);
        }
        tuple.sort_unstable();
        tuples.push(tuple);
    }
    tuples.sort();
    tuples.dedup();
    // Relocate only the most promising seeds; rounds converge fast.
    tuples.sort_by(|a, b| min_pairwise_sq(lat, b).total_cmp(&min_pairwise_sq(lat, a)));
    tuples.truncate(4);
    for tuple in &mut tuples {
        relocate(lat, ids, tuple);
    }
    tuples
}

fn relocate(lat: &Lattice, ids: &[u32], tuple: &mut [u32]) {
    let k = tuple.len();
    for _ in 0..12 {
        let mut improved = false;
        for pos in 0..k {
            let current = tuple[pos];
            let current_min = tuple
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pos)
                .map(|(_, &t)| lat.sqdist(current, t))
                .fold(f64::INFINITY, f64::min);
            let mut best = (current_min, current);
            for &id in ids {
                if tuple.contains(&id) {
                    continue;
                }
                let m = tuple
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != pos)
                    .map(|(_, &t)| lat.sqdist(id, t))
                    .fold(f64::INFINITY, f64::min);
                if m > best.0 + 1e-15 {
                    best = (m, id);
                }
            }
            if best.1 != current {
                tuple[pos] = best.1;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    tuple.sort_unstable();
}

// ---------------------------------------------------------------
// Window refinement around a near-miss tuple
// ---------------------------------------------------------------

/// Fine-lattice ids within a Chebyshev index window around `center`.
fn window_ids(lat: &Lattice, center: u32, wrad: usize) -> Vec<u32> {
    let d = lat.d;
    let mut wrad = wrad;
    while (2 * wrad + 1).pow(d as u32) > WINDOW_CELL_CAP && wrad > 1 {
        wrad -= 1;
    }
    let base = lat.index[center as usize];
    let mut lo = [0usize; 8];
    let mut hi = [0usize; 8];
    for i in 0..d {
        lo[i] = (base[i] as usize).saturating_sub(wrad);
        hi[i] = ((base[i] as usize) + wrad).min(lat.dims[i] - 1);
    }
    let mut out = Vec::new();
    let mut idx = [0u16; 8];
    for i in 0..d {
        idx[i] = lo[i] as u16;
    }
    'outer: loop {
        if let Some(&id) = lat.map.get(&pack(&idx)) {
            out.push(id);
        }
        for i in 0..d {
            idx[i] += 1;
            if (idx[i] as usize) <= hi[i] {
                continue 'outer;
            }
            idx[i] = lo[i] as u16;
        }
        break;
    }
    out
}

/// Exhaustive product search over per-point windows, pruned on the
/// exact pairwise condition. Returns a verified witness or nothing.
fn refine_tuple(lat: &Lattice, tuple: &[u32], k: usize, budget_ok: &mut bool) -> Option<Vec<u32>> {
    let wrad = (2.0 * (lat.d as f64).sqrt()).ceil() as usize;
    let full_rad_fits = (2 * wrad + 1).pow(lat.d as u32) <= WINDOW_CELL_CAP;
    if !full_rad_fits {
        *budget_ok = false;
    }
    let windows: Vec<Vec<u32>> = tuple.iter().map(|&c| window_ids(lat, c, wrad)).collect();
    if windows.iter().any(Vec::is_empty) {
        return None;
    }
    let mut chosen = Vec::with_capacity(k);
    let mut budget = REFINE_BUDGET;
    let found = refine_rec(lat, &windows, 0, &mut chosen, &mut budget);
    if budget < 0 {
        *budget_ok = false;
    }
    found
}

fn refine_rec(
    lat: &Lattice,
    windows: &[Vec<u32>],
    depth: usize,
    chosen: &mut Vec<u32>,
    budget: &mut i64,
) -> Option<Vec<u32>> {
    if depth == windows.len() {
        return Some(chosen.clone());
    }
    for &id in &windows[depth] {
        *budget -= chosen.len() as i64 + 1;
        if *budget < 0 {
            return None;
        }
        if chosen.iter().any(|&c| c == id || lat.sqdist(c, id) <= 4.0) {
            continue;
        }
        chosen.push(id);
        if let Some(w) = refine_rec(lat, windows, depth + 1, chosen, budget) {
            return Some(w);
        }
        chosen.pop();
    }
    None
}

// ---------------------------------------------------------------
// Complete coarse scan
// ---------------------------------------------------------------

/// Enumerates k-tuples of coarse points pairwise above the slackened
/// threshold, refining each on the full lattice; deterministic
/// leftmost witness. Returns (witness, scan-was-complete).
fn complete_scan(
    lat: &Lattice,
    coarse: &[u32],
    k: usize,
    tau2: f64,
) -> (Option<Vec<u32>>, bool) {
    // Eccentricity filter: a point whose farthest companion is within
    // tau cannot start a tuple. Exact via hull in the plane, bounded
    // via box corners otherwise.
    let roots: Vec<u32> = if lat.d == 2 {
        let pts: Vec<[f64; 2]> = coarse
            .iter()
            .map(|&id| [lat.point(id)[0], lat.point(id)[1]])
            .collect();
        let hull = convex_hull(&pts);
        coarse
            .iter()
            .copied()
            .filter(|&id| {
                let p = lat.point(id);
                hull.iter().any(|v| {
                    let dx = p[0] - v[0];
                    let dy = p[1] - v[1];
                    dx * dx + dy * dy > tau2
                })
            })
            .collect()
    } else {
        let d = lat.d;
        let mut lo = [f64::INFINITY; 8];
        let mut hi = [f64::NEG_INFINITY; 8];
        for &id in coarse {
            let p = lat.point(id);
            for i in 0..d {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        coarse
            .iter()
            .copied()
            .filter(|&id| {
                let p = lat.point(id);
                let far: f64 = (0..d)
                    .map(|i| {
                        let a = (p[i] - lo[i]).abs();
                        let b = (p[i] - hi[i]).abs();
                        let m = a.max(b);
                        m * m
                    })
                    .sum();
                far > tau2
            })
            .collect()
    };
    if roots.len() > SCAN_ROOT_CAP {
        return (None, false);
    }
    let started = Instant::now();
    let mut complete = true;
    let chunk_size = 4096;
    let mut chunk_start = 0usize;
    while chunk_start < roots.len() {
        if started.elapsed() > SCAN_WALL_LIMIT {
            return (None, false);
        }
        let chunk = &roots[chunk_start..(chunk_start + chunk_size).min(roots.len())];
        let results: Vec<(Option<Vec<u32>>, bool)> = chunk
            .par_iter()
            .map(|&a| scan_branch(lat, &roots, a, k, tau2))
            .collect();
        for (witness, branch_complete) in results {
            if let Some(w) = witness {
                return (Some(w), true);
            }
            complete &= branch_complete;
        }
        chunk_start += chunk_size;
    }
    (None, complete)
}

fn scan_branch(lat: &Lattice, roots: &[u32], a: u32, k: usize, tau2: f64) -> (Option<Vec<u32>>, bool) {
    let mut budget = ROOT_BRANCH_BUDGET;
    let pos = roots.partition_point(|&r| r < a);
    let mut cands: Vec<u32> = Vec::new();
    for &b in &roots[pos + 1..] {
        budget -= 1;
        if lat.sqdist(a, b) > tau2 {
            cands.push(b);
        }
    }
    let mut chosen = vec![a];
    let mut aborted = false;
    let witness = scan_extend(lat, &cands, k, tau2, &mut chosen, &mut budget, &mut aborted);
    (witness, !aborted)
}

fn scan_extend(
    lat: &Lattice,
    cands: &[u32],
    k: usize,
    tau2: f64,
    chosen: &mut Vec<u32>,
    budget: &mut i64,
    aborted: &mut bool,
) -> Option<Vec<u32>> {
    if chosen.len() == k {
        // A near-miss coarse tuple: refine at full pitch.
        let mut budget_ok = true;
        return refine_tuple(lat, chosen, k, &mut budget_ok);
    }
    if cands.len() + chosen.len() < k {
        return None;
    }
    for (pos, &c) in cands.iter().enumerate() {
        *budget -= (cands.len() - pos) as i64;
        if *budget < 0 {
            *aborted = true;
            return None;
        }
        let next: Vec<u32> = cands[pos + 1..]
            .iter()
            .copied()
            .filter(|&o| lat.sqdist(c, o) > tau2)
            .collect();
        chosen.push(c);
        let w = scan_extend(lat, &next, k, tau2, chosen, budget, aborted);
        if w.is_some() {
            return w;
        }
        chosen.pop();
        if *aborted {
            return None;
        }
    }
    None
}

// ---------------------------------------------------------------
// Enclosing-ball certificates
// ---------------------------------------------------------------

/// Upper bound on the radius of a ball enclosing the region (disks
/// only; clips merely shrink the set). Exact for one disk.
fn region_enclosing_ball(s: &SetRegion) -> Option<(Vec<f64>, f64)> {
    if s.disks.is_empty() {
        return None;
    }
    let d = s.dim;
    if s.disks.len() == 1 {
        return Some((s.disks[0].center.0.clone(), s.disks[0].radius));
    }
    let phi = |x: &[f64]| -> (f64, usize) {
        let mut worst = (f64::NEG_INFINITY, 0usize);
        for (i, disk) in s.disks.iter().enumerate() {
            let dist: f64 = disk
                .center
                .0
                .iter()
                .zip(x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                + disk.radius;
            if dist > worst.0 {
                worst = (dist, i);
            }
        }
        worst
    };
    let mut x: Vec<f64> = (0..d)
        .map(|i| s.disks.iter().map(|disk| disk.center.0[i]).sum::<f64>() / s.disks.len() as f64)
        .collect();
    let (mut best_val, _) = phi(&x);
    let mut best_x = x.clone();
    for t in 0..400 {
        let (_, far) = phi(&x);
        let step = 2.0 / (t as f64 + 3.0);
        for (xi, ci) in x.iter_mut().zip(&s.disks[far].center.0) {
            *xi += step * (ci - *xi);
        }
        let (val, _) = phi(&x);
        if val < best_val {
            best_val = val;
            best_x = x.clone();
        }
    }
    Some((best_x, best_val))
}

/// Minimum enclosing circle of planar points (iterative incremental
/// construction, expected linear time after a seeded shuffle).
/// Returns a radius padded by a relative epsilon so the result is a
/// sound upper bound.
pub(crate) fn enclosing_circle(points: &[[f64; 2]]) -> ([f64; 2], f64) {
    if points.is_empty() {
        return ([0.0, 0.0], 0.0);
    }
    let mut pts = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_CA11);
    pts.shuffle(&mut rng);
    let inside = |c: [f64; 2], r: f64, p: [f64; 2]| -> bool {
        let dx = p[0] - c[0];
        let dy = p[1] - c[1];
        (dx * dx + dy * dy).sqrt() <= r * (1.0 + 1e-12) + 1e-12
    };
    let circle2 = |a: [f64; 2], b: [f64; 2]| -> ([f64; 2], f64) {
        let c = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let dx = a[0] - c[0];
        let dy = a[1] - c[1];
        (c, (dx * dx + dy * dy).sqrt())
    };
    let mut c = pts[0];
    let mut r = 0.0f64;
    for i in 1..pts.len() {
        if inside(c, r, pts[i]) {
            continue;
        }
        c = pts[i];
        r = 0.0;
        for j in 0..i {
            if inside(c, r, pts[j]) {
                continue;
            }
            (c, r) = circle2(pts[i], pts[j]);
            for l in 0..j {
                if inside(c, r, pts[l]) {
                    continue;
                }
                (c, r) = circumcircle(pts[i], pts[j], pts[l]);
            }
        }
    }
    (c, r * (1.0 + 1e-9) + 1e-12)
}

/// Circle through three points; falls back to the widest diametral
/// pair when the points are (nearly) collinear.
fn circumcircle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> ([f64; 2], f64) {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d.abs() < 1e-12 {
        let pairs = [(a, b), (a, c), (b, c)];
        let mut best = ([0.0, 0.0], 0.0f64);
        for (p, q) in pairs {
            let ctr = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
            let r = ((p[0] - ctr[0]).powi(2) + (p[1] - ctr[1]).powi(2)).sqrt();
            if r > best.1 {
                best = (ctr, r);
            }
        }
        return best;
    }
    let a2 = a[0] * a[0] + a[1] * a[1];
    let b2 = b[0] * b[0] + b[1] * b[1];
    let c2 = c[0] * c[0] + c[1] * c[1];
    let ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
    let uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    ([ux, uy], r)
}

// ---------------------------------------------------------------
// Cluster cover certificate
// ---------------------------------------------------------------

/// Tries to cover the disks with at most k-1 clusters of diameter
/// <= 2 (then any k points include two at distance <= 2). Greedy
/// farthest-first seeding; returns the cluster count on success.
fn cluster_cover(s: &SetRegion, k: usize) -> Option<usize> {
    let m = k - 1;
    let disks = &s.disks;
    if disks.is_empty() {
        return None;
    }
    if disks.iter().any(|d| 2.0 * d.radius > 2.0 + 1e-12) {
        return None;
    }
    let pair_diam = |i: usize, j: usize| -> f64 {
        disks[i].center.dist(&disks[j].center) + disks[i].radius + disks[j].radius
    };
    if disks.len() <= m {
        return Some(disks.len());
    }
    let mut seeds: Vec<usize> = Vec::with_capacity(m);
    let first = disks
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.radius.total_cmp(&b.1.radius))
        .map(|(i, _)| i)
        .unwrap_or(0);
    seeds.push(first);
    while seeds.len() < m {
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for i in 0..disks.len() {
            if seeds.contains(&i) {
                continue;
            }
            let near = seeds
                .iter()
                .map(|&sd| pair_diam(i, sd))
                .fold(f64::INFINITY, f64::min);
            if near > best.0 {
                best = (near, i);
            }
        }
        seeds.push(best.1);
    }
    let mut clusters: Vec<Vec<usize>> = seeds.iter().map(|&sid| vec![sid]).collect();
    let mut diams: Vec<f64> = seeds.iter().map(|&sid| 2.0 * disks[sid].radius).collect();
    for (i, disk) in disks.iter().enumerate() {
        if seeds.contains(&i) {
            continue;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        for (ci, members) in clusters.iter().enumerate() {
            let new_diam = members
                .iter()
                .map(|&mi| pair_diam(i, mi))
                .fold(diams[ci].max(2.0 * disk.radius), f64::max);
            if new_diam < best.0 {
                best = (new_diam, ci);
            }
        }
        if best.0 > 2.0 + 1e-12 {
            return None;
        }
        clusters[best.1].push(i);
        diams[best.1] = best.0;
    }
    Some(clusters.iter().filter(|c| !c.is_empty()).count())
}
