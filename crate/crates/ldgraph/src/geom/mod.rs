//! Exact set representations: points, disks, annuli, clipped regions,
//! and their measure / diameter / distance primitives.
//!
//! A [`SetRegion`] is a union of disks (balls in dimension d)
//! intersected with optional clips, each clip an origin-centered
//! annulus or a half-plane. Clips are planar; dimensions d >= 3
//! support only ball unions with exact or sampled measure.

mod hull;
mod interval;
mod quad;

pub use hull::{convex_hull, farthest_pair_distance};

use crate::error::{Error, Result};
use crate::graph::Estimate;
use interval::IntervalSet;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default number of independent sampling streams; estimator values
/// are deterministic functions of (seed, samples, stream count).
pub const DEFAULT_STREAM_COUNT: usize = 16;

/// Default absolute tolerance of the planar measure quadrature.
pub const MEASURE_TOLERANCE: f64 = 1e-6;

/// Cell budget for rasterization requests.
pub const RASTER_CELL_BUDGET: usize = 50_000_000;

const BOUNDARY_SAMPLES_PER_CIRCLE: usize = 8192;
const DISTANCE_SAMPLES_PER_CIRCLE: usize = 2048;
const CLOSURE_TOL: f64 = 1e-9;

/// A point of R^d, serialized as a plain coordinate array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sqdist(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.sqdist(other).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// A closed ball; "disk" in the planar case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    #[serde(rename = "c")]
    pub center: Point,
    #[serde(rename = "r")]
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.center.sqdist(p) <= self.radius * self.radius
    }
}

/// Closed annulus centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner) {
            return Err(Error::Domain(format!(
                "annulus needs 0 < inner < outer, got ({inner}, {outer})"
            )));
        }
        Ok(Annulus { inner, outer })
    }

    pub fn contains_xy(&self, x: f64, y: f64) -> bool {
        let rr = x * x + y * y;
        rr >= self.inner * self.inner && rr <= self.outer * self.outer
    }
}

/// A clip constraint applied to the disk union.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clip {
    /// `{"annulus":[inner,outer]}`: keep points with inner <= |p| <= outer.
    Annulus(f64, f64),
    /// `{"halfplane":{"n":[nx,ny],"b":b}}`: keep points with n . p <= b.
    Halfplane { n: Vec<f64>, b: f64 },
}

/// A measurable region: union of disks intersected with all clips.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetRegion {
    pub dim: usize,
    pub disks: Vec<Disk>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clips: Vec<Clip>,
}

impl SetRegion {
    /// Union of disks with no clips.
    pub fn disk_union(dim: usize, disks: Vec<Disk>) -> Result<Self> {
        Self::new(dim, disks, Vec::new())
    }

    pub fn new(dim: usize, disks: Vec<Disk>, clips: Vec<Clip>) -> Result<Self> {
        let region = SetRegion { dim, disks, clips };
        region.validate()?;
        Ok(region)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::Domain("dimension must be >= 1".into()));
        }
        for d in &self.disks {
            if d.center.dim() != self.dim {
                return Err(Error::Domain(format!(
                    "disk center has dimension {}, region has {}",
                    d.center.dim(),
                    self.dim
                )));
            }
            if !d.center.0.iter().all(|c| c.is_finite()) {
                return Err(Error::Domain("disk center must be finite".into()));
            }
            if !(d.radius > 0.0 && d.radius.is_finite()) {
                return Err(Error::Domain(format!("disk radius {} must be > 0", d.radius)));
            }
        }
        if !self.clips.is_empty() && self.dim != 2 {
            return Err(Error::Domain("clips are supported only in dimension 2".into()));
        }
        for c in &self.clips {
            match c {
                Clip::Annulus(inner, outer) => {
                    Annulus::new(*inner, *outer)?;
                }
                Clip::Halfplane { n, b } => {
                    if n.len() != 2 || !n.iter().all(|v| v.is_finite()) || !b.is_finite() {
                        return Err(Error::Domain("halfplane needs finite 2-d normal and offset".into()));
                    }
                    if n.iter().all(|v| *v == 0.0) {
                        return Err(Error::Domain("halfplane normal must be nonzero".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_empty_representation(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.contains_coords(&p.0)
    }

    /// Allocation-free membership test on a raw coordinate slice.
    pub fn contains_coords(&self, c: &[f64]) -> bool {
        self.disks.iter().any(|d| {
            let sq: f64 = d
                .center
                .0
                .iter()
                .zip(c)
                .map(|(a, x)| (a - x) * (a - x))
                .sum();
            sq <= d.radius * d.radius
        }) && self.clips.iter().all(|cl| clip_contains(cl, c, 0.0))
    }

    fn contains_closed(&self, p: &Point, tol: f64) -> bool {
        self.disks
            .iter()
            .any(|d| d.center.sqdist(p) <= (d.radius + tol) * (d.radius + tol))
            && self.clips.iter().all(|c| clip_contains(c, &p.0, tol))
    }

    /// Axis-aligned bounding box, tightened by annulus clips.
    /// `None` when the representation is certainly empty.
    pub fn bbox(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.disks.is_empty() {
            return None;
        }
        let d = self.dim;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for disk in &self.disks {
            for i in 0..d {
                lo[i] = lo[i].min(disk.center.0[i] - disk.radius);
                hi[i] = hi[i].max(disk.center.0[i] + disk.radius);
            }
        }
        for c in &self.clips {
            if let Clip::Annulus(_, outer) = c {
                for i in 0..d {
                    lo[i] = lo[i].max(-outer);
                    hi[i] = hi[i].min(*outer);
                }
            }
        }
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return None;
        }
        Some((lo, hi))
    }

    /// Vertical section of the region at abscissa `x` (dimension 2).
    fn section(&self, x: f64) -> IntervalSet {
        let raw: Vec<(f64, f64)> = self
            .disks
            .iter()
            .filter_map(|d| {
                let dx = x - d.center.0[0];
                let rem = d.radius * d.radius - dx * dx;
                (rem > 0.0).then(|| {
                    let half = rem.sqrt();
                    (d.center.0[1] - half, d.center.0[1] + half)
                })
            })
            .collect();
        let mut set = interval::normalize(raw);
        for c in &self.clips {
            if set.is_empty() {
                break;
            }
            set = interval::intersect(&set, &clip_section(c, x));
        }
        set
    }

    /// Lebesgue measure. Planar regions use adaptive section
    /// quadrature with absolute tolerance [`MEASURE_TOLERANCE`];
    /// dimension 1 is an exact interval union; dimensions >= 3 are
    /// exact for pairwise disjoint balls and refer overlapping unions
    /// to [`SetRegion::measure_mc`].
    pub fn measure(&self) -> Result<f64> {
        self.measure_with_tolerance(MEASURE_TOLERANCE)
    }

    pub fn measure_with_tolerance(&self, tol: f64) -> Result<f64> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Domain("tolerance must be > 0".into()));
        }
        if self.disks.is_empty() {
            return Ok(0.0);
        }
        match self.dim {
            1 => {
                let raw = self
                    .disks
                    .iter()
                    .map(|d| (d.center.0[0] - d.radius, d.center.0[0] + d.radius))
                    .collect();
                Ok(interval::total_length(&interval::normalize(raw)))
            }
            2 => {
                let Some((lo, hi)) = self.bbox() else {
                    return Ok(0.0);
                };
                let mut seeds = Vec::new();
                for d in &self.disks {
                    seeds.push(d.center.0[0] - d.radius);
                    seeds.push(d.center.0[0] + d.radius);
                }
                for c in &self.clips {
                    match c {
                        Clip::Annulus(inner, outer) => {
                            seeds.extend([-outer, -inner, *inner, *outer]);
                        }
                        Clip::Halfplane { n, b } => {
                            if n[1] == 0.0 {
                                seeds.push(b / n[0]);
                            }
                        }
                    }
                }
                let f = |x: f64| interval::total_length(&self.section(x));
                Ok(quad::integrate(&f, lo[0], hi[0], tol, &seeds).max(0.0))
            }
            _ => {
                let overlapping = self.disks.iter().enumerate().any(|(i, a)| {
                    self.disks[i + 1..].iter().any(|b| {
                        a.center.dist(&b.center) < a.radius + b.radius - 1e-12
                    })
                });
                if overlapping {
                    return Err(Error::Domain(
                        "overlapping balls in dimension >= 3: use measure_mc".into(),
                    ));
                }
                let wd = ball_volume(self.dim as u32)?;
                Ok(self
                    .disks
                    .iter()
                    .map(|d| wd * d.radius.powi(self.dim as i32))
                    .sum())
            }
        }
    }

    /// Monte Carlo measure for any dimension: uniform sampling in the
    /// bounding box across [`DEFAULT_STREAM_COUNT`] deterministic
    /// streams seeded by `seed + stream index`.
    pub fn measure_mc(&self, samples: u64, seed: u64) -> Result<Estimate> {
        if samples == 0 {
            return Err(Error::Domain("samples must be >= 1".into()));
        }
        let Some((lo, hi)) = self.bbox() else {
            return Ok(Estimate::zero(samples, seed));
        };
        let vol_box: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
        let hits = sample_hits(samples, seed, |rng| {
            let p = Point(
                lo.iter()
                    .zip(&hi)
                    .map(|(a, b)| rng.random_range(*a..*b))
                    .collect(),
            );
            self.contains(&p)
        });
        Ok(Estimate::from_hits(hits, samples, vol_box, seed))
    }

    /// Diameter of the region. Ball unions are exact via the center
    /// formula; clipped planar regions sample circle and line
    /// boundaries (dense enough that the error is below 1e-6 for unit
    /// scale), then run rotating calipers on the hull.
    pub fn diameter(&self) -> Result<f64> {
        if self.disks.is_empty() {
            return Err(Error::Domain("diameter of an empty region".into()));
        }
        if self.clips.is_empty() {
            let mut best = 0.0f64;
            for (i, a) in self.disks.iter().enumerate() {
                best = best.max(2.0 * a.radius);
                for b in &self.disks[i + 1..] {
                    best = best.max(a.center.dist(&b.center) + a.radius + b.radius);
                }
            }
            return Ok(best);
        }
        let pts = self.boundary_points(BOUNDARY_SAMPLES_PER_CIRCLE);
        Ok(farthest_pair_distance(&pts))
    }

    /// Boundary sample points of a clipped planar region: points of
    /// the region closure on disk circles, annulus circles, and
    /// half-plane lines.
    fn boundary_points(&self, per_circle: usize) -> Vec<[f64; 2]> {
        let mut pts = Vec::new();
        let mut push_circle = |cx: f64, cy: f64, r: f64| {
            for i in 0..per_circle {
                let t = i as f64 / per_circle as f64 * std::f64::consts::TAU;
                let p = Point::xy(cx + r * t.cos(), cy + r * t.sin());
                if self.contains_closed(&p, CLOSURE_TOL) {
                    pts.push([p.0[0], p.0[1]]);
                }
            }
        };
        for d in &self.disks {
            push_circle(d.center.0[0], d.center.0[1], d.radius);
        }
        for c in &self.clips {
            if let Clip::Annulus(inner, outer) = c {
                push_circle(0.0, 0.0, *inner);
                push_circle(0.0, 0.0, *outer);
            }
        }
        if let Some((lo, hi)) = self.bbox() {
            let span = (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
            for c in &self.clips {
                if let Clip::Halfplane { n, b } = c {
                    let nn = (n[0] * n[0] + n[1] * n[1]).sqrt();
                    let base = [n[0] * b / (nn * nn), n[1] * b / (nn * nn)];
                    let dir = [-n[1] / nn, n[0] / nn];
                    for i in 0..per_circle {
                        let t = (i as f64 / (per_circle - 1) as f64 - 0.5) * 2.0 * span;
                        let p = Point::xy(base[0] + t * dir[0], base[1] + t * dir[1]);
                        if self.contains_closed(&p, CLOSURE_TOL) {
                            pts.push([p.0[0], p.0[1]]);
                        }
                    }
                }
            }
        }
        pts
    }

    /// Infimum distance between two regions; 0 when they intersect.
    /// Exact for ball unions; clipped planar regions use boundary
    /// sampling with documented O(step) accuracy.
    pub fn set_distance(&self, other: &SetRegion) -> Result<f64> {
        if self.disks.is_empty() || other.disks.is_empty() {
            return Err(Error::Domain("set_distance of an empty region".into()));
        }
        if self.dim != other.dim {
            return Err(Error::Domain("set_distance across dimensions".into()));
        }
        if self.clips.is_empty() && other.clips.is_empty() {
            let mut best = f64::INFINITY;
            for a in &self.disks {
                for b in &other.disks {
                    best = best.min((a.center.dist(&b.center) - a.radius - b.radius).max(0.0));
                }
            }
            return Ok(best);
        }
        let pa = self.boundary_points(DISTANCE_SAMPLES_PER_CIRCLE);
        let pb = other.boundary_points(DISTANCE_SAMPLES_PER_CIRCLE);
        if pa.iter().any(|p| other.contains_closed(&Point::xy(p[0], p[1]), CLOSURE_TOL))
            || pb.iter().any(|p| self.contains_closed(&Point::xy(p[0], p[1]), CLOSURE_TOL))
        {
            return Ok(0.0);
        }
        let mut best = f64::INFINITY;
        for a in &pa {
            for b in &pb {
                let d2 = (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
                best = best.min(d2);
            }
        }
        Ok(best.sqrt())
    }
}

fn clip_contains(clip: &Clip, c: &[f64], tol: f64) -> bool {
    match clip {
        Clip::Annulus(inner, outer) => {
            let r = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            r >= inner - tol && r <= outer + tol
        }
        Clip::Halfplane { n, b } => n.iter().zip(c).map(|(a, x)| a * x).sum::<f64>() <= b + tol,
    }
}

/// Vertical section of a clip at abscissa `x`.
fn clip_section(clip: &Clip, x: f64) -> IntervalSet {
    match clip {
        Clip::Annulus(inner, outer) => {
            let oo = outer * outer - x * x;
            if oo <= 0.0 {
                return Vec::new();
            }
            let yo = oo.sqrt();
            let ii = inner * inner - x * x;
            if ii > 0.0 {
                let yi = ii.sqrt();
                vec![(-yo, -yi), (yi, yo)]
            } else {
                vec![(-yo, yo)]
            }
        }
        Clip::Halfplane { n, b } => {
            let rest = b - n[0] * x;
            if n[1] > 0.0 {
                vec![(f64::NEG_INFINITY, rest / n[1])]
            } else if n[1] < 0.0 {
                vec![(rest / n[1], f64::INFINITY)]
            } else if rest >= 0.0 {
                vec![(f64::NEG_INFINITY, f64::INFINITY)]
            } else {
                Vec::new()
            }
        }
    }
}

/// Volume of the unit ball in R^d, `pi^(d/2) / Gamma(d/2 + 1)`,
/// evaluated through the equivalent exact recursion
/// `w_d = (2 pi / d) w_{d-2}` with `w_1 = 2`, `w_2 = pi`.
pub fn ball_volume(d: u32) -> Result<f64> {
    if d < 1 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let mut pair = (1.0, 2.0);
    for k in 2..=d {
        pair = (pair.1, pair.0 * std::f64::consts::TAU / k as f64);
    }
    Ok(pair.1)
}

/// Runs `samples` membership trials split over deterministic parallel
/// streams and returns the total hit count. Stream `s` uses
/// `ChaCha8Rng` seeded with `seed + s`; partial sums combine by stream
/// index, so the result is independent of scheduling.
pub(crate) fn sample_hits<F: Fn(&mut ChaCha8Rng) -> bool + Sync>(
    samples: u64,
    seed: u64,
    trial: F,
) -> u64 {
    let streams = DEFAULT_STREAM_COUNT as u64;
    (0..streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s));
            let n = samples / streams + u64::from(s < samples % streams);
            let mut hits = 0u64;
            for _ in 0..n {
                hits += u64::from(trial(&mut rng));
            }
            hits
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_disk() -> SetRegion {
        SetRegion::disk_union(2, vec![Disk::new(Point::xy(0.0, 0.0), 1.0)]).unwrap()
    }

    fn two_disks(gap: f64) -> SetRegion {
        SetRegion::disk_union(
            2,
            vec![
                Disk::new(Point::xy(0.0, 0.0), 1.0),
                Disk::new(Point::xy(gap, 0.0), 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ball_volumes_match_closed_forms() {
        assert_eq!(ball_volume(1).unwrap(), 2.0);
        assert_eq!(ball_volume(2).unwrap(), PI);
        assert!((ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((ball_volume(4).unwrap() - PI * PI / 2.0).abs() < 1e-14);
        assert!((ball_volume(5).unwrap() - 8.0 * PI * PI / 15.0).abs() < 1e-14);
        assert!(matches!(ball_volume(0), Err(Error::Domain(_))));
    }

    #[test]
    fn measure_of_disk_unions() {
        assert!((unit_disk().measure().unwrap() - PI).abs() < 1e-6);
        assert!((two_disks(4.5).measure().unwrap() - 2.0 * PI).abs() < 1e-6);
        let empty = SetRegion::disk_union(2, vec![]).unwrap();
        assert_eq!(empty.measure().unwrap(), 0.0);
    }

    #[test]
    fn measure_of_overlapping_disks_matches_lens_formula() {
        // Two unit disks at center distance 1: union area
        // = 2 pi - lens, lens = 2 acos(1/2) - (1/2) sqrt(3).
        let lens = 2.0 * (0.5f64).acos() - 0.5 * 3f64.sqrt();
        let got = two_disks(1.0).measure().unwrap();
        assert!((got - (2.0 * PI - lens)).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn measure_of_clipped_cap_region() {
        // Unit disk centered on the x-axis clipped to an annulus:
        // the extremal cap scene; compared against the closed form in
        // the bounds module by the integration tests. Here: sanity
        // monotonicity only.
        let cap = SetRegion::new(
            2,
            vec![Disk::new(Point::xy(2.345208, 0.0), 1.0)],
            vec![Clip::Annulus(2.0, 3.0)],
        )
        .unwrap();
        let m = cap.measure().unwrap();
        assert!(m > 1.5 && m < PI, "cap measure {m}");
    }

    #[test]
    fn halfplane_clip_halves_the_disk() {
        let half = SetRegion::new(
            2,
            vec![Disk::new(Point::xy(0.0, 0.0), 1.0)],
            vec![Clip::Halfplane { n: vec![0.0, 1.0], b: 0.0 }],
        )
        .unwrap();
        assert!((half.measure().unwrap() - PI / 2.0).abs() < 1e-6);
    }

    #[test]
    fn dimension_one_and_three_measures() {
        let segs = SetRegion::disk_union(
            1,
            vec![
                Disk::new(Point(vec![0.0]), 1.0),
                Disk::new(Point(vec![1.5]), 1.0),
            ],
        )
        .unwrap();
        assert!((segs.measure().unwrap() - 3.5).abs() < 1e-12);

        let balls = SetRegion::disk_union(
            3,
            vec![
                Disk::new(Point(vec![0.0, 0.0, 0.0]), 1.0),
                Disk::new(Point(vec![3.0, 0.0, 0.0]), 0.5),
            ],
        )
        .unwrap();
        let expected = 4.0 * PI / 3.0 * (1.0 + 0.125);
        assert!((balls.measure().unwrap() - expected).abs() < 1e-12);

        let overlapping = SetRegion::disk_union(
            3,
            vec![
                Disk::new(Point(vec![0.0, 0.0, 0.0]), 1.0),
                Disk::new(Point(vec![1.0, 0.0, 0.0]), 1.0),
            ],
        )
        .unwrap();
        assert!(matches!(overlapping.measure(), Err(Error::Domain(_))));
        let est = overlapping.measure_mc(200_000, 5).unwrap();
        // Two unit balls minus their lens: 8 pi / 3 - 5 pi / 12 = 9 pi / 4,
        // where the lens is twice a spherical cap of height 1/2.
        let truth = 9.0 * PI / 4.0;
        assert!((est.value - truth).abs() < 4.0 * est.std_error + 0.02);
    }

    #[test]
    fn measure_mc_is_reproducible_and_consistent() {
        let d = unit_disk();
        let a = d.measure_mc(100_000, 42).unwrap();
        let b = d.measure_mc(100_000, 42).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.std_error, b.std_error);
        assert!((a.value - PI).abs() < 4.0 * a.std_error);
        let c = d.measure_mc(100_000, 43).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn diameter_of_ball_unions_is_exact() {
        assert!((unit_disk().diameter().unwrap() - 2.0).abs() < 1e-15);
        assert!((two_disks(4.5).diameter().unwrap() - 6.5).abs() < 1e-15);
        let nested = SetRegion::disk_union(
            2,
            vec![
                Disk::new(Point::xy(0.0, 0.0), 2.0),
                Disk::new(Point::xy(0.5, 0.0), 0.1),
            ],
        )
        .unwrap();
        assert!((nested.diameter().unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn diameter_of_clipped_regions() {
        // Full annulus as a region: diameter = 2 * outer.
        let annulus = SetRegion::new(
            2,
            vec![Disk::new(Point::xy(0.0, 0.0), 3.0)],
            vec![Clip::Annulus(2.0, 3.0)],
        )
        .unwrap();
        assert!((annulus.diameter().unwrap() - 6.0).abs() < 1e-5);

        // Half disk: diameter stays 2 (the straight edge).
        let half = SetRegion::new(
            2,
            vec![Disk::new(Point::xy(0.0, 0.0), 1.0)],
            vec![Clip::Halfplane { n: vec![0.0, 1.0], b: 0.0 }],
        )
        .unwrap();
        assert!((half.diameter().unwrap() - 2.0).abs() < 1e-6);

        let empty = SetRegion::disk_union(2, vec![]).unwrap();
        assert!(matches!(empty.diameter(), Err(Error::Domain(_))));
    }

    #[test]
    fn set_distance_examples() {
        let d = two_disks(4.5);
        let (a, b) = (
            SetRegion::disk_union(2, vec![d.disks[0].clone()]).unwrap(),
            SetRegion::disk_union(2, vec![d.disks[1].clone()]).unwrap(),
        );
        assert!((a.set_distance(&b).unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(a.set_distance(&a).unwrap(), 0.0);

        // Radial gap between the unit disk and the annulus body.
        let annulus = SetRegion::new(
            2,
            vec![Disk::new(Point::xy(0.0, 0.0), 3.0)],
            vec![Clip::Annulus(2.0, 3.0)],
        )
        .unwrap();
        let disk = unit_disk();
        let gap = disk.set_distance(&annulus).unwrap();
        assert!((gap - 1.0).abs() < 1e-4, "gap = {gap}");
    }

    #[test]
    fn scene_json_round_trip() {
        let scene = r#"{"dim":2,"disks":[{"c":[2.345208,0.0],"r":1.0}],"clips":[{"annulus":[2.0,3.0]},{"halfplane":{"n":[0.0,-1.0],"b":0.0}}]}"#;
        let region: SetRegion = serde_json::from_str(scene).unwrap();
        region.validate().unwrap();
        assert_eq!(region.disks.len(), 1);
        assert_eq!(region.clips.len(), 2);
        let back = serde_json::to_string(&region).unwrap();
        let again: SetRegion = serde_json::from_str(&back).unwrap();
        assert_eq!(region, again);

        let no_clips: SetRegion = serde_json::from_str(r#"{"dim":2,"disks":[]}"#).unwrap();
        assert!(no_clips.clips.is_empty());
    }

    #[test]
    fn invalid_regions_are_rejected() {
        assert!(SetRegion::new(0, vec![], vec![]).is_err());
        assert!(SetRegion::disk_union(2, vec![Disk::new(Point::xy(0.0, 0.0), 0.0)]).is_err());
        assert!(SetRegion::disk_union(2, vec![Disk::new(Point(vec![0.0]), 1.0)]).is_err());
        assert!(SetRegion::new(3, vec![], vec![Clip::Annulus(2.0, 3.0)]).is_err());
        assert!(SetRegion::new(2, vec![], vec![Clip::Annulus(3.0, 2.0)]).is_err());
        assert!(SetRegion::new(
            2,
            vec![],
            vec![Clip::Halfplane { n: vec![0.0, 0.0], b: 1.0 }]
        )
        .is_err());
    }
}
