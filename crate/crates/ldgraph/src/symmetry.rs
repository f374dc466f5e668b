//! Circular symmetrization of polar rasters and Steiner
//! symmetrization of Cartesian rasters.
//!
//! Both transforms re-pack each independent slice (ring of sectors,
//! row of columns) into a contiguous run of the same cell count
//! centered on the reference axis, so per-slice counts — and hence
//! measure — are preserved exactly; for an odd count the extra cell
//! goes to the positive side. Because the output depends only on the
//! per-slice counts, both transforms are idempotent.
//!
//! Rasters stand in for the compact sets they sample, so diameter
//! statements carry an explicit grid slack rather than exactness.

use crate::error::{Error, Result};
use crate::raster::{CartesianRaster, PolarRaster};
use serde::{Deserialize, Serialize};

/// Before/after bookkeeping for a symmetrization pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizationReport {
    pub input_measure: f64,
    pub output_measure: f64,
    pub input_diameter: f64,
    pub output_diameter: f64,
    /// Slices whose occupancy pattern changed.
    pub rings_touched: usize,
    /// True when the output diameter exceeds the input diameter by
    /// more than the grid slack.
    pub violation: bool,
}

/// Conservative bound on how much the corner-based diameter of a
/// polar raster can move under re-gridding: twice the largest cell
/// extent times sqrt(2).
pub fn grid_slack(p: &PolarRaster) -> f64 {
    2.0 * p.dr.max(p.r_max * p.dth) * std::f64::consts::SQRT_2
}

/// The contiguous run of `n` sectors (out of `s`) nearest to angle 0,
/// ties toward the positive side, as a half-open index range.
pub(crate) fn centered_run(s: usize, n: usize) -> (usize, usize) {
    if n == 0 {
        return (0, 0);
    }
    let lo = if s % 2 == 0 {
        s / 2 - n / 2
    } else {
        (s - 1) / 2 - (n - 1) / 2
    };
    (lo, lo + n)
}

/// Replaces each ring's occupied sectors by a contiguous arc of the
/// same length centered on angle 0 (ties toward positive angles).
/// Per-ring counts, and therefore measure, are preserved exactly.
pub fn circular_symmetrize(p: &PolarRaster) -> PolarRaster {
    let rows: Vec<Vec<bool>> = (0..p.rings)
        .map(|i| {
            let n = p.ring_count(i);
            let (lo, hi) = centered_run(p.sectors, n);
            (0..p.sectors).map(|j| j >= lo && j < hi).collect()
        })
        .collect();
    PolarRaster::from_ring_rows(p.r_min, p.r_max, &rows)
        .expect("re-gridding an existing raster cannot fail")
}

/// Steiner symmetrization with respect to the vertical line
/// `x = axis_x` (snapped to the nearest column boundary): each row's
/// occupied cells are replaced by a contiguous run of equal count
/// centered on the axis (odd counts lean one half-cell positive).
/// The output grid is rebuilt to fit the recentered runs; row counts
/// and measure are preserved exactly.
pub fn steiner_symmetrize(r: &CartesianRaster, axis_x: f64) -> CartesianRaster {
    let counts: Vec<usize> = (0..r.height)
        .map(|iy| (0..r.width).filter(|&ix| r.get(ix, iy)).count())
        .collect();
    if counts.iter().all(|&n| n == 0) {
        return r.clone();
    }
    let b = ((axis_x - r.origin[0]) / r.cell).round() as i64;
    let runs: Vec<Option<(i64, i64)>> = counts
        .iter()
        .map(|&n| {
            if n == 0 {
                None
            } else {
                let lo = b - (n / 2) as i64;
                Some((lo, lo + n as i64))
            }
        })
        .collect();
    let min_lo = runs.iter().flatten().map(|&(lo, _)| lo).min().unwrap();
    let max_hi = runs.iter().flatten().map(|&(_, hi)| hi).max().unwrap();
    let width = (max_hi - min_lo) as usize;
    let rows: Vec<Vec<bool>> = runs
        .iter()
        .map(|run| match run {
            None => vec![false; width],
            Some((lo, hi)) => (0..width as i64)
                .map(|ix| ix + min_lo >= *lo && ix + min_lo < *hi)
                .collect(),
        })
        .collect();
    let origin = [r.origin[0] + min_lo as f64 * r.cell, r.origin[1]];
    CartesianRaster::from_rows(origin, r.cell, &rows)
        .expect("re-gridding an existing raster cannot fail")
}

/// Number of rings whose occupancy pattern differs between two polar
/// rasters of identical geometry.
pub fn rings_changed(a: &PolarRaster, b: &PolarRaster) -> usize {
    (0..a.rings.max(b.rings))
        .filter(|&i| (0..a.sectors.max(b.sectors)).any(|j| a.get(i, j) != b.get(i, j)))
        .count()
}

/// Checks the diameter contract of circular symmetrization on a
/// raster that lies inside `Annulus(2, r_outer)` within the angular
/// window (-pi/2, pi/2): symmetrizing must not grow the diameter
/// beyond the grid slack. Violations are flagged, not raised.
pub fn d_maximal_check(p: &PolarRaster, r_outer: f64) -> Result<SymmetrizationReport> {
    if !(r_outer > 2.0 && r_outer.is_finite()) {
        return Err(Error::Domain(format!(
            "outer radius {r_outer} must exceed the inner radius 2"
        )));
    }
    if p.r_min < 2.0 - 1e-9 || p.r_max > r_outer + 1e-9 {
        return Err(Error::Domain(format!(
            "raster spans [{}, {}], outside Annulus(2, {r_outer})",
            p.r_min, p.r_max
        )));
    }
    if !p.within_half_window() {
        return Err(Error::Domain(
            "raster has occupied cells outside the angular window (-pi/2, pi/2)".into(),
        ));
    }
    let output = circular_symmetrize(p);
    let input_diameter = p.diameter();
    let output_diameter = output.diameter();
    let slack = grid_slack(p);
    Ok(SymmetrizationReport {
        input_measure: p.measure(),
        output_measure: output.measure(),
        input_diameter,
        output_diameter,
        rings_touched: rings_changed(p, &output),
        violation: output_diameter > input_diameter + slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Disk, Point, SetRegion};
    use crate::raster::rasterize;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring_raster(sectors: usize, occupied: &[usize]) -> PolarRaster {
        let row: Vec<bool> = (0..sectors).map(|j| occupied.contains(&j)).collect();
        PolarRaster::from_ring_rows(2.0, 2.1, &[row]).unwrap()
    }

    fn occupied_sectors(p: &PolarRaster, ring: usize) -> Vec<usize> {
        (0..p.sectors).filter(|&j| p.get(ring, j)).collect()
    }

    #[test]
    fn full_ring_is_fixed() {
        let all: Vec<usize> = (0..32).collect();
        let p = ring_raster(32, &all);
        assert_eq!(circular_symmetrize(&p), p);
    }

    #[test]
    fn two_arcs_merge_into_one_centered_arc() {
        let mut occ: Vec<usize> = (3..13).collect();
        occ.extend(20..34);
        let p = ring_raster(48, &occ);
        let out = circular_symmetrize(&p);
        let expected: Vec<usize> = (12..36).collect();
        assert_eq!(occupied_sectors(&out, 0), expected);
    }

    #[test]
    fn odd_count_leans_positive() {
        let p = ring_raster(8, &[0, 1, 2]);
        let out = circular_symmetrize(&p);
        // Sectors 3 and 4 straddle angle 0; the third cell goes to 5.
        assert_eq!(occupied_sectors(&out, 0), vec![3, 4, 5]);
        let q = ring_raster(7, &[0, 1, 2]);
        let outq = circular_symmetrize(&q);
        assert_eq!(occupied_sectors(&outq, 0), vec![2, 3, 4]);
    }

    fn random_window_raster(seed: u64) -> PolarRaster {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sectors = 64;
        let rings = 10;
        let rows: Vec<Vec<bool>> = (0..rings)
            .map(|_| {
                (0..sectors)
                    .map(|j| (17..47).contains(&j) && rng.random_range(0.0..1.0) < 0.4)
                    .collect()
            })
            .collect();
        PolarRaster::from_ring_rows(2.0, 2.5, &rows).unwrap()
    }

    #[test]
    fn symmetrization_is_idempotent_and_count_preserving() {
        for seed in 0..10u64 {
            let p = random_window_raster(seed);
            let once = circular_symmetrize(&p);
            let twice = circular_symmetrize(&once);
            assert_eq!(once, twice);
            for ring in 0..p.rings {
                assert_eq!(p.ring_count(ring), once.ring_count(ring));
            }
            assert_eq!(p.measure(), once.measure());
        }
    }

    #[test]
    fn output_is_reflection_symmetric_up_to_tie_cell() {
        for seed in 0..5u64 {
            let p = random_window_raster(seed);
            let out = circular_symmetrize(&p);
            for ring in 0..out.rings {
                let mismatches = (0..out.sectors)
                    .filter(|&j| out.get(ring, j) != out.get(ring, out.sectors - 1 - j))
                    .count();
                assert!(mismatches <= 2, "ring {ring}: {mismatches} asymmetric cells");
            }
        }
    }

    #[test]
    fn diameter_does_not_grow_beyond_slack() {
        for seed in 0..10u64 {
            let p = random_window_raster(seed);
            let out = circular_symmetrize(&p);
            assert!(out.diameter() <= p.diameter() + grid_slack(&p));
        }
    }

    #[test]
    fn d_maximal_check_on_cap_raster() {
        // The extremal cap: a unit disk centered on the positive axis
        // clipped to the annulus, which symmetrization fixes up to
        // the grid.
        let cap = PolarRaster::from_fn(2.0, 3.0, 0.01, 0.005, |x, y| {
            (x - 2.345).powi(2) + y * y <= 1.0
        })
        .unwrap();
        let report = d_maximal_check(&cap, 3.0).unwrap();
        assert!(!report.violation);
        assert_eq!(report.input_measure, report.output_measure);
        assert!((report.input_diameter - 2.0).abs() < 0.1);
        assert!(report.output_diameter <= report.input_diameter + grid_slack(&cap));
    }

    #[test]
    fn d_maximal_check_preconditions() {
        let full = PolarRaster::from_fn(2.0, 3.0, 0.1, 0.1, |_, _| true).unwrap();
        assert!(matches!(d_maximal_check(&full, 3.0), Err(Error::Domain(_))));
        let low = PolarRaster::from_fn(1.0, 3.0, 0.1, 0.1, |_, _| false).unwrap();
        assert!(matches!(d_maximal_check(&low, 3.0), Err(Error::Domain(_))));
        let outside = PolarRaster::from_fn(2.0, 3.5, 0.1, 0.1, |_, _| false).unwrap();
        assert!(matches!(d_maximal_check(&outside, 3.0), Err(Error::Domain(_))));
    }

    #[test]
    fn d_maximal_check_empty_is_trivial() {
        let empty = PolarRaster::from_fn(2.0, 3.0, 0.1, 0.1, |_, _| false).unwrap();
        let report = d_maximal_check(&empty, 3.0).unwrap();
        assert_eq!(report.input_measure, 0.0);
        assert_eq!(report.output_measure, 0.0);
        assert_eq!(report.rings_touched, 0);
        assert!(!report.violation);
    }

    fn raster_rows(r: &CartesianRaster) -> Vec<Vec<bool>> {
        (0..r.height)
            .map(|iy| (0..r.width).map(|ix| r.get(ix, iy)).collect())
            .collect()
    }

    #[test]
    fn steiner_centers_an_offset_rectangle() {
        let rows = vec![
            vec![false, false, true, true, false],
            vec![false, false, true, true, false],
        ];
        let r = CartesianRaster::from_rows([0.0, 0.0], 1.0, &rows).unwrap();
        let out = steiner_symmetrize(&r, 0.0);
        assert_eq!(out.origin[0], -1.0);
        assert_eq!(
            raster_rows(&out),
            vec![vec![true, true], vec![true, true]]
        );
        assert_eq!(out.measure(), r.measure());
    }

    #[test]
    fn steiner_fixes_a_symmetric_input() {
        let disk = SetRegion::disk_union(2, vec![Disk::new(Point::xy(0.0, 0.0), 1.0)]).unwrap();
        let r = rasterize(&disk, 0.05).unwrap();
        let out = steiner_symmetrize(&r, 0.0);
        let again = steiner_symmetrize(&out, 0.0);
        assert_eq!(out, again);
        assert_eq!(out.measure(), r.measure());
        assert!(out.diameter().unwrap() <= r.diameter().unwrap() + 2.0 * r.cell);
    }

    #[test]
    fn steiner_preserves_row_counts() {
        let disk = SetRegion::disk_union(2, vec![Disk::new(Point::xy(3.0, 0.5), 1.3)]).unwrap();
        let r = rasterize(&disk, 0.04).unwrap();
        let out = steiner_symmetrize(&r, 0.0);
        let in_rows = raster_rows(&r);
        let out_rows = raster_rows(&out);
        for (a, b) in in_rows.iter().zip(&out_rows) {
            assert_eq!(
                a.iter().filter(|&&v| v).count(),
                b.iter().filter(|&&v| v).count()
            );
        }
        assert_eq!(out.measure(), r.measure());
    }

    #[test]
    fn steiner_on_empty_raster_is_identity() {
        let r = CartesianRaster::from_fn([0.0, 0.0], 0.5, 4, 4, |_, _| false).unwrap();
        assert_eq!(steiner_symmetrize(&r, 1.0), r);
    }
}
