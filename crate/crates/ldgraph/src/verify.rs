//! Named end-to-end verification criteria: timed, seeded, reproducible
//! pass/fail checks across the whole library. The CLI `verify`
//! subcommand aggregates them; the process exits nonzero when any
//! criterion fails.

use crate::bounds::{self, h_of, Z_MIN};
use crate::error::{Error, Result};
use crate::geom::{ball_volume, Disk, Point, SetRegion};
use crate::graph::{
    clique_ball_bound, clique_witness_region, edge_measure_mc, graphon_density, turan_bound,
    MotifGraph, StepGraphon,
};
use crate::raster::PolarRaster;
use crate::search::{
    anneal_annulus, big_ball_construction, multi_ball_construction, optimal_annulus_set,
    AnnealParams, BestRegion,
};
use crate::symmetry::{circular_symmetrize, d_maximal_check, grid_slack};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

/// Outcome of one named criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub name: String,
    pub passed: bool,
    pub seconds: f64,
    pub details: String,
}

fn run_one(
    name: &str,
    limit: f64,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionResult {
    let t0 = Instant::now();
    let outcome = body();
    let seconds = t0.elapsed().as_secs_f64();
    match outcome {
        Ok((passed, details)) => {
            let timed_out = seconds >= limit;
            CriterionResult {
                name: name.into(),
                passed: passed && !timed_out,
                seconds,
                details: if timed_out {
                    format!("{details}; exceeded the {limit} s budget")
                } else {
                    details
                },
            }
        }
        Err(e) => CriterionResult {
            name: name.into(),
            passed: false,
            seconds,
            details: format!("error: {e}"),
        },
    }
}

fn closed_form_anchors() -> Result<(bool, String)> {
    let f4 = bounds::f_of(4.0)?;
    let h4 = h_of(4.0)?;
    let a4 = bounds::a_of(4.0)?;
    let df = (f4 - 2.0 * PI).abs();
    let dh = (h4 - PI).abs();
    let ok = df < 1e-12 && dh < 1e-12 && a4 == 0.0;
    Ok((
        ok,
        format!("|f(4)-2pi| = {df:.2e}, |h(4)-pi| = {dh:.2e}, a(4) = {a4}"),
    ))
}

fn identity_suite() -> Result<(bool, String)> {
    let max_h = bounds::verify_h_identity(1000)?;
    let rep = bounds::verify_f_monotone(100)?;
    let ok = max_h < 1e-9 && rep.max_fd_mismatch < 1e-6 && rep.min_f_prime > 0.0;
    Ok((
        ok,
        format!(
            "max |H| = {max_h:.2e} over 1000 points, max f' finite-difference mismatch = {:.2e}, min f' = {:.6}",
            rep.max_fd_mismatch, rep.min_f_prime
        ),
    ))
}

fn mantel_extremal(seed: u64) -> Result<(bool, String)> {
    let region = SetRegion::disk_union(
        2,
        vec![
            Disk::new(Point::xy(0.0, 0.0), 1.0),
            Disk::new(Point::xy(4.5, 0.0), 1.0),
        ],
    )?;
    let measure = region.measure()?;
    let est = edge_measure_mc(&region, 2.0, 10_000_000, seed)?;
    let target = PI * PI;
    let measure_ok = (measure - 2.0 * PI).abs() < 1e-4;
    let within = est.within_sigmas(target, 3.0);
    let tight = est.std_error < 0.01 * est.value;
    Ok((
        measure_ok && within && tight,
        format!(
            "measure = {measure:.6} (target 2pi), edge estimate = {:.5} +- {:.5} (target pi^2 = {target:.5}), deviation = {:.2} se",
            est.value,
            est.std_error,
            (est.value - target).abs() / est.std_error
        ),
    ))
}

/// A seeded K3-free scene: one or two tight disk clusters, each of
/// diameter at most 2, so any three points have two in one cluster at
/// distance at most 2.
fn random_triangle_free_scene(rng: &mut ChaCha8Rng) -> Result<SetRegion> {
    let clusters = 1 + rng.random_range(0..2usize);
    let gap = 2.5 + 3.5 * rng.random::<f64>();
    let mut disks = Vec::new();
    for c in 0..clusters {
        let cx = c as f64 * gap;
        for _ in 0..(1 + rng.random_range(0..3usize)) {
            let dx = 0.4 * rng.random::<f64>() - 0.2;
            let dy = 0.4 * rng.random::<f64>() - 0.2;
            let r = 0.3 + 0.3 * rng.random::<f64>();
            disks.push(Disk::new(Point::xy(cx + dx, dy), r));
        }
    }
    SetRegion::disk_union(2, disks)
}

fn turan_consistency(seed: u64) -> Result<(bool, String)> {
    let mut worst_margin = f64::NEG_INFINITY;
    let mut failures = 0usize;
    for i in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1_000 + i));
        let scene = random_triangle_free_scene(&mut rng)?;
        let outcome = clique_witness_region(&scene, 3, 0.01)?;
        if outcome.witness.is_some() {
            return Ok((
                false,
                format!("scene {i} unexpectedly contains a triangle witness"),
            ));
        }
        let measure = scene.measure()?;
        let bound = turan_bound(3, measure)?;
        let est = edge_measure_mc(&scene, 2.0, 400_000, seed.wrapping_add(77 + i))?;
        let margin = (est.value - bound) / est.std_error.max(1e-300);
        worst_margin = worst_margin.max(margin);
        if est.value > bound + 3.0 * est.std_error {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!(
            "20 seeded triangle-free scenes, {failures} violations; worst (edge - bound)/se = {worst_margin:.2}"
        ),
    ))
}

fn graphon_oracle() -> Result<(bool, String)> {
    let k2 = MotifGraph::complete(2)?;
    let k3 = MotifGraph::complete(3)?;
    let bip = StepGraphon::new(
        vec![0.5, 0.5],
        vec![vec![0.0, 1.0], vec![1.0, 0.0]],
    )?;
    let t3_bip = graphon_density(&bip, &k3)?;
    let t2_bip = graphon_density(&bip, &k2)?;
    let w = 1.0 / 3.0;
    let tri_values: Vec<Vec<f64>> = (0..3)
        .map(|i| (0..3).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
        .collect();
    let tri = StepGraphon::new(vec![w, w, w], tri_values.clone())?;
    let t3_tri = graphon_density(&tri, &k3)?;
    // Independent brute-force block enumeration of t(K3).
    let mut brute = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                brute += w * w * w * tri_values[i][j] * tri_values[i][k] * tri_values[j][k];
            }
        }
    }
    let ok = t3_bip == 0.0
        && t2_bip == 0.5
        && (t3_tri - 2.0 / 9.0).abs() < 1e-15
        && (t3_tri - brute).abs() < 1e-15;
    Ok((
        ok,
        format!(
            "bipartite t(K3) = {t3_bip}, t(K2) = {t2_bip}; tripartite t(K3) = {t3_tri:.17} vs 2/9 = {:.17}",
            2.0 / 9.0
        ),
    ))
}

/// A random raster over Annulus(2,3) occupying only sectors whose
/// centers lie strictly inside the angular half-window.
fn random_window_raster(rng: &mut ChaCha8Rng) -> Result<PolarRaster> {
    let rings = 10;
    let sectors = 64;
    let window: Vec<usize> = (0..sectors)
        .filter(|&j| {
            let th: f64 = -PI + (j as f64 + 0.5) * (2.0 * PI / sectors as f64);
            th.abs() < PI / 2.0 - 1e-9
        })
        .collect();
    let mut rows = vec![vec![false; sectors]; rings];
    let mut any = false;
    for row in rows.iter_mut() {
        for &j in &window {
            if rng.random::<f64>() < 0.5 {
                row[j] = true;
                any = true;
            }
        }
    }
    if !any {
        rows[0][window[0]] = true;
    }
    PolarRaster::from_ring_rows(2.0, 3.0, &rows)
}

fn symmetrization_contracts(seed: u64) -> Result<(bool, String)> {
    let mut worst_excess = f64::NEG_INFINITY;
    for i in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(5_000 + i));
        let p = random_window_raster(&mut rng)?;
        let s = circular_symmetrize(&p);
        for ring in 0..p.rings {
            if p.ring_count(ring) != s.ring_count(ring) {
                return Ok((false, format!("raster {i}: ring {ring} count changed")));
            }
        }
        let excess = s.diameter() - p.diameter() - grid_slack(&p);
        worst_excess = worst_excess.max(excess);
        if excess > 0.0 {
            return Ok((
                false,
                format!(
                    "raster {i}: symmetrized diameter exceeds input + slack by {excess:.3e}"
                ),
            ));
        }
        if circular_symmetrize(&s) != s {
            return Ok((false, format!("raster {i}: symmetrization is not idempotent")));
        }
    }
    Ok((
        true,
        format!(
            "100 rasters: counts preserved, idempotent, worst diameter excess over slack = {worst_excess:.3e}"
        ),
    ))
}

fn annulus_extremal() -> Result<(bool, String)> {
    let mut lines = Vec::new();
    let mut ok = true;
    for r in [Z_MIN, 3.0, 3.5, 4.0] {
        let e = optimal_annulus_set(r)?;
        let measured = e.region.measure()?;
        let target = h_of(r)?;
        let cross1 = (e.x1.dist(&e.y2) - 2.0).abs();
        let cross2 = (e.x2.dist(&e.y1) - 2.0).abs();
        let chords = (e.x1.dist(&e.x2) - e.y1.dist(&e.y2)).abs();
        let good = (measured - target).abs() < 1e-4
            && cross1 < 1e-9
            && cross2 < 1e-9
            && chords < 1e-9;
        ok &= good;
        lines.push(format!(
            "R={r:.4}: |measure-h| = {:.2e}, corner gaps = ({cross1:.1e}, {cross2:.1e}, {chords:.1e})",
            (measured - target).abs()
        ));
    }
    Ok((ok, lines.join("; ")))
}

fn annealing_recovery(seed: u64) -> Result<(bool, String)> {
    let params = AnnealParams::default();
    let res = anneal_annulus(3.0, 0.005, 0.002, &params, seed)?;
    let target = h_of(3.0)?;
    let BestRegion::Polar(p) = &res.best_region else {
        return Ok((false, "annealing did not return a polar raster".into()));
    };
    let diam = p.diameter();
    let report = d_maximal_check(p, 3.0)?;
    let reached = res.best_value / target;
    let ok = res.best_value >= 0.98 * target && diam <= 2.0 + 1e-9 && !report.violation;
    Ok((
        ok,
        format!(
            "best of {} restarts reached {:.5} = {:.2}% of h(3) = {:.5}; every accepted state was gated by the conservative diameter check; final diameter = {diam:.9}",
            params.restarts,
            res.best_value,
            100.0 * reached,
            target
        ),
    ))
}

fn dimension_crossover() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for d in 2..=8u32 {
        let big = big_ball_construction(d)?.best_value;
        let two = multi_ball_construction(d, 3, 1.0, 0.5)?.best_value;
        let expect_two = 2.0 * ball_volume(d)?;
        if (two - expect_two).abs() > 1e-12 {
            ok = false;
            notes.push(format!("d={d}: multi-ball value {two} != 2 w_d"));
        }
        let crossed = big > two;
        if (d <= 4 && crossed) || (d >= 5 && !crossed) {
            ok = false;
            notes.push(format!("d={d}: big/two = {:.4} on the wrong side", big / two));
        }
    }
    for d in [2usize, 3] {
        let ball = SetRegion::disk_union(
            d,
            vec![Disk::new(Point::new(vec![0.0; d]), clique_ball_bound(3))],
        )?;
        let outcome = clique_witness_region(&ball, 3, 0.01)?;
        if outcome.witness.is_some() {
            ok = false;
            notes.push(format!("d={d}: false triangle in the critical ball"));
        }
    }
    let fat = SetRegion::disk_union(2, vec![Disk::new(Point::xy(0.0, 0.0), 1.2)])?;
    let outcome = clique_witness_region(&fat, 3, 0.01)?;
    match &outcome.witness {
        Some(w) => {
            let all_far = w[0].dist(&w[1]) > 2.0 && w[0].dist(&w[2]) > 2.0 && w[1].dist(&w[2]) > 2.0;
            if !all_far {
                ok = false;
                notes.push("radius-1.2 witness is not pairwise far".into());
            }
        }
        None => {
            ok = false;
            notes.push("no triangle found in the radius-1.2 disk".into());
        }
    }
    let summary = if notes.is_empty() {
        "crossover at d = 5 confirmed for d in 2..=8; critical ball clean in d = 2, 3; radius-1.2 witness found".into()
    } else {
        notes.join("; ")
    };
    Ok((ok, summary))
}

/// Runs all nine named criteria with per-criterion time budgets.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        run_one("closed-form-anchors", 5.0, closed_form_anchors),
        run_one("identity-suite", 1.0, identity_suite),
        run_one("mantel-extremal", 10.0, || mantel_extremal(seed)),
        run_one("turan-consistency", 60.0, || turan_consistency(seed)),
        run_one("graphon-oracle", 5.0, graphon_oracle),
        run_one("symmetrization-contracts", 30.0, || {
            symmetrization_contracts(seed)
        }),
        run_one("annulus-extremal", 5.0, annulus_extremal),
        run_one("annealing-recovery", 120.0, || annealing_recovery(seed)),
        run_one("dimension-crossover", 60.0, dimension_crossover),
    ]
}

/// Runs a named suite. `core` is the full nine-criterion suite.
pub fn run_suite(suite: &str, seed: u64) -> Result<Vec<CriterionResult>> {
    match suite {
        "core" => Ok(run_all(seed)),
        other => Err(Error::Domain(format!(
            "unknown suite {other:?}; available: core"
        ))),
    }
}

/// True when every criterion passed.
pub fn all_passed(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors_and_identities_pass() {
        let (ok, details) = closed_form_anchors().unwrap();
        assert!(ok, "{details}");
        let (ok, details) = identity_suite().unwrap();
        assert!(ok, "{details}");
    }

    #[test]
    fn graphon_oracle_passes() {
        let (ok, details) = graphon_oracle().unwrap();
        assert!(ok, "{details}");
    }

    #[test]
    fn annulus_extremal_passes() {
        let (ok, details) = annulus_extremal().unwrap();
        assert!(ok, "{details}");
    }

    #[test]
    fn symmetrization_contracts_pass() {
        let (ok, details) = symmetrization_contracts(7).unwrap();
        assert!(ok, "{details}");
    }

    #[test]
    fn unknown_suite_is_a_domain_error() {
        assert!(matches!(run_suite("fast", 7), Err(Error::Domain(_))));
        assert!(matches!(run_suite("", 7), Err(Error::Domain(_))));
    }

    #[test]
    fn criterion_errors_become_failures() {
        let r = run_one("boom", 5.0, || {
            Err(Error::Domain("synthetic".into()))
        });
        assert!(!r.passed);
        assert!(r.details.contains("synthetic"));
    }
}
