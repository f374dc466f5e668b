//! Simulated annealing over polar occupancy rasters of the annulus
//! `2 <= |p| <= R`, searching for the largest-measure cell union of
//! diameter at most 2.
//!
//! The state is a set of occupied cells restricted to the angular
//! half-window `(-pi/2, pi/2)` where the extremal normal form lives.
//! Every proposed addition is gated by a conservative diameter check
//! that is exact for the cell union: the farthest pair of two polar
//! cells is attained at cell corners, the angular extremes of each
//! ring dominate all interior sectors, and distance grows with
//! angular separation up to pi. A state is therefore accepted only
//! if the union of its closed cells has diameter at most 2, so the
//! continuum bound `measure <= h(R)` applies rigorously to every
//! accepted state.
//!
//! Moves: frontier cell additions (always accepted when feasible),
//! uniform cell removals and angular-extreme trims (accepted with
//! probability `exp(-area/T)`), plus a periodic circular
//! symmetrization, which preserves per-ring counts and measure and
//! never increases the diameter. Cooling is geometric over 1000
//! epochs; independent seeded restarts run in parallel and the best
//! final state wins. Each restart finishes with a polish phase:
//! symmetrize, then greedily add every cell that keeps the diameter
//! bound, repeated to a fixed point.

use super::{annulus_target, BestRegion, SearchResult};
use crate::error::{Error, Result};
use crate::geom::RASTER_CELL_BUDGET;
use crate::raster::PolarRaster;
use crate::symmetry::centered_run;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::time::Instant;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Annealing schedule and restart structure.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AnnealParams {
    /// Proposals per restart.
    pub iterations: u64,
    /// Initial temperature, in measure units.
    pub t0: f64,
    /// Geometric cooling factor applied once per epoch; a run has
    /// 1000 epochs regardless of its iteration count.
    pub cooling: f64,
    /// Independent restarts; the largest final measure wins.
    pub restarts: u32,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            iterations: 3_000_000,
            t0: 1e-3,
            cooling: 0.991,
            restarts: 4,
        }
    }
}

impl AnnealParams {
    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::Domain("iterations must be >= 1".into()));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::Domain("initial temperature must be > 0".into()));
        }
        if !(self.cooling > 0.0 && self.cooling <= 1.0) {
            return Err(Error::Domain("cooling factor must lie in (0, 1]".into()));
        }
        if self.restarts < 1 || self.restarts > 256 {
            return Err(Error::Domain("restarts must lie in 1..=256".into()));
        }
        Ok(())
    }
}

/// One sampled point of an annealing run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TracePoint {
    pub iteration: u64,
    pub value: f64,
    pub best_value: f64,
    pub temperature: f64,
}

/// Shared immutable grid geometry.
struct Grid {
    rings: usize,
    sectors: usize,
    r_min: f64,
    r_max: f64,
    words: usize,
    win_lo: usize,
    win_hi: usize,
    rlo: Vec<f64>,
    rhi: Vec<f64>,
    area: Vec<f64>,
    /// cos(min(k dth, pi)) for k cells of angular separation.
    cosk: Vec<f64>,
}

impl Grid {
    fn build(r_outer: f64, dr: f64, dth: f64) -> Result<Grid> {
        let rings = (((r_outer - 2.0) / dr).round() as usize).max(1);
        let sectors = ((2.0 * PI / dth).round() as usize).max(1);
        if rings.saturating_mul(sectors) > RASTER_CELL_BUDGET {
            return Err(Error::Resource(format!(
                "annealing grid of {rings} x {sectors} cells exceeds the {RASTER_CELL_BUDGET}-cell budget"
            )));
        }
        let dr = (r_outer - 2.0) / rings as f64;
        let dth = 2.0 * PI / sectors as f64;
        let mut win_lo = usize::MAX;
        let mut win_hi = 0;
        for j in 0..sectors {
            let th = -PI + (j as f64 + 0.5) * dth;
            if th > -PI / 2.0 + dth && th < PI / 2.0 - dth {
                win_lo = win_lo.min(j);
                win_hi = win_hi.max(j);
            }
        }
        if win_lo == usize::MAX || win_hi < win_lo + 2 {
            return Err(Error::Domain(
                "angular pitch too coarse: the half-window holds fewer than 3 sectors".into(),
            ));
        }
        let rlo: Vec<f64> = (0..rings).map(|i| 2.0 + i as f64 * dr).collect();
        let rhi: Vec<f64> = (0..rings).map(|i| 2.0 + (i + 1) as f64 * dr).collect();
        let area: Vec<f64> = (0..rings)
            .map(|i| (2.0 + (i as f64 + 0.5) * dr) * dr * dth)
            .collect();
        let cosk: Vec<f64> = (0..=sectors)
            .map(|k| (k as f64 * dth).min(PI).cos())
            .collect();
        let g = Grid {
            rings,
            sectors,
            r_min: 2.0,
            r_max: r_outer,
            words: sectors.div_ceil(64),
            win_lo,
            win_hi,
            rlo,
            rhi,
            area,
            cosk,
        };
        // A single top-ring cell must already satisfy the diameter bound.
        let top = rings - 1;
        if g.pair_sq_max(top, 0, 0, top, 0, 0) > 4.0 {
            return Err(Error::Domain(
                "cell pitch too coarse: a single cell already violates diameter 2".into(),
            ));
        }
        Ok(g)
    }

    /// Exact squared diameter between the occupied spans of two rings,
    /// given their angular extreme sectors: corner radii combinations
    /// at the maximal corner-to-corner angular separation.
    fn pair_sq_max(&self, i: usize, lo_i: i32, hi_i: i32, i2: usize, lo2: i32, hi2: i32) -> f64 {
        let sep = (hi_i - lo2).max(hi2 - lo_i).max(0) as usize + 1;
        let c = self.cosk[sep.min(self.sectors)];
        let (a0, a1) = (self.rlo[i], self.rhi[i]);
        let (b0, b1) = (self.rlo[i2], self.rhi[i2]);
        let mut m = a0 * a0 + b0 * b0 - 2.0 * a0 * b0 * c;
        m = m.max(a0 * a0 + b1 * b1 - 2.0 * a0 * b1 * c);
        m = m.max(a1 * a1 + b0 * b0 - 2.0 * a1 * b0 * c);
        m.max(a1 * a1 + b1 * b1 - 2.0 * a1 * b1 * c)
    }
}

/// Mutable annealing state: per-ring occupancy bitsets, angular
/// extremes, the occupied-cell list, and the addition frontier.
struct State<'g> {
    g: &'g Grid,
    rows: Vec<u64>,
    lo: Vec<i32>,
    hi: Vec<i32>,
    cnt: Vec<u32>,
    occ: Vec<u32>,
    occ_pos: Vec<u32>,
    fr: Vec<u32>,
    fr_pos: Vec<u32>,
    measure: f64,
}

impl<'g> State<'g> {
    fn new(g: &'g Grid) -> State<'g> {
        State {
            g,
            rows: vec![0; g.rings * g.words],
            lo: vec![0; g.rings],
            hi: vec![-1; g.rings],
            cnt: vec![0; g.rings],
            occ: Vec::new(),
            occ_pos: vec![0; g.rings * g.sectors],
            fr: Vec::new(),
            fr_pos: vec![0; g.rings * g.sectors],
            measure: 0.0,
        }
    }

    #[inline]
    fn cell(&self, i: usize, j: usize) -> u32 {
        (i * self.g.sectors + j) as u32
    }

    #[inline]
    fn has(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.g.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    fn set_bit(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.rows[i * self.g.words + j / 64];
        if v {
            *w |= 1u64 << (j % 64);
        } else {
            *w &= !(1u64 << (j % 64));
        }
    }

    fn ring_min_sector(&self, i: usize) -> Option<usize> {
        let base = i * self.g.words;
        for w in 0..self.g.words {
            let bits = self.rows[base + w];
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
        }
        None
    }

    fn ring_max_sector(&self, i: usize) -> Option<usize> {
        let base = i * self.g.words;
        for w in (0..self.g.words).rev() {
            let bits = self.rows[base + w];
            if bits != 0 {
                return Some(w * 64 + 63 - bits.leading_zeros() as usize);
            }
        }
        None
    }

    /// Whether adding cell (i, j) keeps the union diameter at most 2.
    fn can_add(&self, i: usize, j: usize) -> bool {
        let j = j as i32;
        if self.cnt[i] > 0 && j >= self.lo[i] && j <= self.hi[i] {
            // Extremes unchanged: the current state is feasible.
            return true;
        }
        let (nlo, nhi) = if self.cnt[i] > 0 {
            (self.lo[i].min(j), self.hi[i].max(j))
        } else {
            (j, j)
        };
        if self.g.pair_sq_max(i, nlo, nhi, i, nlo, nhi) > 4.0 {
            return false;
        }
        for i2 in 0..self.g.rings {
            if i2 == i || self.cnt[i2] == 0 {
                continue;
            }
            if self.g.pair_sq_max(i, nlo, nhi, i2, self.lo[i2], self.hi[i2]) > 4.0 {
                return false;
            }
        }
        true
    }

    #[inline]
    fn has_occupied_neighbor(&self, i: usize, j: usize) -> bool {
        (i > 0 && self.has(i - 1, j))
            || (i + 1 < self.g.rings && self.has(i + 1, j))
            || (j > self.g.win_lo && self.has(i, j - 1))
            || (j < self.g.win_hi && self.has(i, j + 1))
    }

    fn frontier_push(&mut self, c: u32) {
        if self.fr_pos[c as usize] == 0 {
            self.fr.push(c);
            self.fr_pos[c as usize] = self.fr.len() as u32;
        }
    }

    fn frontier_remove(&mut self, c: u32) {
        let pos = self.fr_pos[c as usize];
        if pos == 0 {
            return;
        }
        let idx = (pos - 1) as usize;
        let last = *self.fr.last().expect("nonempty frontier");
        self.fr.swap_remove(idx);
        self.fr_pos[c as usize] = 0;
        if last != c {
            self.fr_pos[last as usize] = pos;
        }
    }

    fn neighbors(&self, i: usize, j: usize) -> [Option<(usize, usize)>; 4] {
        [
            (i > 0).then(|| (i - 1, j)),
            (i + 1 < self.g.rings).then(|| (i + 1, j)),
            (j > self.g.win_lo).then(|| (i, j - 1)),
            (j < self.g.win_hi).then(|| (i, j + 1)),
        ]
    }

    fn apply_add(&mut self, i: usize, j: usize) {
        debug_assert!(!self.has(i, j));
        self.set_bit(i, j, true);
        let c = self.cell(i, j);
        self.occ.push(c);
        self.occ_pos[c as usize] = self.occ.len() as u32;
        self.cnt[i] += 1;
        let ji = j as i32;
        if self.cnt[i] == 1 {
            self.lo[i] = ji;
            self.hi[i] = ji;
        } else {
            self.lo[i] = self.lo[i].min(ji);
            self.hi[i] = self.hi[i].max(ji);
        }
        self.measure += self.g.area[i];
        self.frontier_remove(c);
        for nb in self.neighbors(i, j).into_iter().flatten() {
            if !self.has(nb.0, nb.1) {
                self.frontier_push(self.cell(nb.0, nb.1));
            }
        }
    }

    fn apply_remove(&mut self, i: usize, j: usize) {
        debug_assert!(self.has(i, j));
        self.set_bit(i, j, false);
        let c = self.cell(i, j);
        let pos = (self.occ_pos[c as usize] - 1) as usize;
        let last = *self.occ.last().expect("nonempty occupancy");
        self.occ.swap_remove(pos);
        self.occ_pos[c as usize] = 0;
        if last != c {
            self.occ_pos[last as usize] = pos as u32 + 1;
        }
        self.cnt[i] -= 1;
        if self.cnt[i] == 0 {
            self.lo[i] = 0;
            self.hi[i] = -1;
        } else {
            let ji = j as i32;
            if ji == self.lo[i] {
                self.lo[i] = self.ring_min_sector(i).expect("count > 0") as i32;
            }
            if ji == self.hi[i] {
                self.hi[i] = self.ring_max_sector(i).expect("count > 0") as i32;
            }
        }
        self.measure -= self.g.area[i];
        if self.has_occupied_neighbor(i, j) {
            self.frontier_push(c);
        }
        for nb in self.neighbors(i, j).into_iter().flatten() {
            if !self.has(nb.0, nb.1) && !self.has_occupied_neighbor(nb.0, nb.1) {
                self.frontier_remove(self.cell(nb.0, nb.1));
            }
        }
    }

    /// Replaces each ring by its centered run of equal count. Counts
    /// and measure are preserved, and circular symmetrization never
    /// increases the union diameter, so feasibility is preserved.
    fn symmetrize(&mut self) {
        for &c in &self.occ {
            self.occ_pos[c as usize] = 0;
        }
        self.occ.clear();
        for &c in &self.fr {
            self.fr_pos[c as usize] = 0;
        }
        self.fr.clear();
        for i in 0..self.g.rings {
            let base = i * self.g.words;
            self.rows[base..base + self.g.words].fill(0);
            let n = self.cnt[i] as usize;
            if n == 0 {
                self.lo[i] = 0;
                self.hi[i] = -1;
                continue;
            }
            let (lo, hi) = centered_run(self.g.sectors, n);
            debug_assert!(lo >= self.g.win_lo && hi - 1 <= self.g.win_hi);
            for j in lo..hi {
                self.rows[base + j / 64] |= 1u64 << (j % 64);
            }
            self.lo[i] = lo as i32;
            self.hi[i] = (hi - 1) as i32;
        }
        for i in 0..self.g.rings {
            if self.cnt[i] == 0 {
                continue;
            }
            for j in self.lo[i] as usize..=self.hi[i] as usize {
                let c = self.cell(i, j);
                self.occ.push(c);
                self.occ_pos[c as usize] = self.occ.len() as u32;
            }
        }
        for idx in 0..self.occ.len() {
            let c = self.occ[idx];
            let (i, j) = ((c as usize) / self.g.sectors, (c as usize) % self.g.sectors);
            for nb in self.neighbors(i, j).into_iter().flatten() {
                if !self.has(nb.0, nb.1) {
                    self.frontier_push(self.cell(nb.0, nb.1));
                }
            }
        }
        debug_assert!(self.full_check() <= 4.0 + 1e-9);
    }

    /// Maximal squared distance over all occupied ring pairs; 0 when
    /// fewer than one cell is occupied.
    fn full_check(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.g.rings {
            if self.cnt[i] == 0 {
                continue;
            }
            for i2 in i..self.g.rings {
                if self.cnt[i2] == 0 {
                    continue;
                }
                worst = worst.max(self.g.pair_sq_max(
                    i,
                    self.lo[i],
                    self.hi[i],
                    i2,
                    self.lo[i2],
                    self.hi[i2],
                ));
            }
        }
        worst
    }

    /// One greedy pass adding every feasible window cell, sweeping
    /// rings inward-out and sectors from the window center outward.
    fn fill_sweep(&mut self) -> usize {
        let mid = ((self.g.win_lo + self.g.win_hi) / 2) as i64;
        let span = (self.g.win_hi - self.g.win_lo) as i64;
        let mut added = 0;
        for i in 0..self.g.rings {
            for off in 0..=span {
                let cands = if off == 0 { [mid, -1] } else { [mid + off, mid - off] };
                for j in cands {
                    if j < self.g.win_lo as i64 || j > self.g.win_hi as i64 {
                        continue;
                    }
                    let j = j as usize;
                    if !self.has(i, j) && self.can_add(i, j) {
                        self.apply_add(i, j);
                        added += 1;
                    }
                }
            }
        }
        added
    }

    fn polish(&mut self) {
        for round in 0..8 {
            self.symmetrize();
            let added = self.fill_sweep();
            if added == 0 && round >= 1 {
                break;
            }
        }
        self.symmetrize();
    }

    fn to_raster(&self) -> Result<PolarRaster> {
        let rows: Vec<Vec<bool>> = (0..self.g.rings)
            .map(|i| (0..self.g.sectors).map(|j| self.has(i, j)).collect())
            .collect();
        PolarRaster::from_ring_rows(self.g.r_min, self.g.r_max, &rows)
    }
}

struct RestartOut {
    raster: PolarRaster,
    measure: f64,
    max_pair_sq: f64,
    trace: Vec<TracePoint>,
}

fn run_restart(
    g: &Grid,
    params: &AnnealParams,
    seed: u64,
    restart: u32,
    trace_stride: u64,
) -> Result<RestartOut> {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed.wrapping_add(GOLDEN.wrapping_mul(restart as u64 + 1)));
    let mut st = State::new(g);

    // Seed one cell: a restart-specific radial band, near the window center.
    let restarts = params.restarts as usize;
    let band = (g.rings / restarts).max(1);
    let ring0 = ((restart as usize * g.rings) / restarts + rng.random_range(0..band)).min(g.rings - 1);
    let mid = ((g.win_lo + g.win_hi) / 2) as i64;
    let wiggle = ((g.win_hi - g.win_lo) as i64 / 8).max(1);
    let j0 = (mid + rng.random_range(-wiggle..=wiggle))
        .clamp(g.win_lo as i64, g.win_hi as i64) as usize;
    st.apply_add(ring0, j0);

    let sym_every = (params.iterations / 1000).clamp(200, 50_000);
    let mut best_measure = st.measure;
    let mut epoch = u64::MAX;
    let mut temp = params.t0;
    let mut trace = Vec::new();

    for t in 0..params.iterations {
        let e = (t as u128 * 1000 / params.iterations as u128) as u64;
        if e != epoch {
            epoch = e;
            temp = params.t0 * params.cooling.powi(e as i32);
        }
        if t % sym_every == sym_every - 1 {
            st.symmetrize();
        }
        let u: f64 = rng.random();
        if u < 0.05 {
            // Trim one angular extreme of a random occupied ring.
            if st.occ.len() > 1 {
                let pick = rng.random_range(0..st.occ.len());
                let i = st.occ[pick] as usize / g.sectors;
                let j = if rng.random::<bool>() { st.lo[i] } else { st.hi[i] } as usize;
                if rng.random::<f64>() < (-g.area[i] / temp).exp() {
                    st.apply_remove(i, j);
                }
            }
        } else if u < 0.525 {
            if !st.fr.is_empty() {
                let c = st.fr[rng.random_range(0..st.fr.len())] as usize;
                let (i, j) = (c / g.sectors, c % g.sectors);
                if st.can_add(i, j) {
                    st.apply_add(i, j);
                }
            }
        } else if st.occ.len() > 1 {
            let c = st.occ[rng.random_range(0..st.occ.len())] as usize;
            let (i, j) = (c / g.sectors, c % g.sectors);
            if rng.random::<f64>() < (-g.area[i] / temp).exp() {
                st.apply_remove(i, j);
            }
        }
        best_measure = best_measure.max(st.measure);
        if trace_stride > 0 && t % trace_stride == 0 {
            trace.push(TracePoint {
                iteration: t,
                value: st.measure,
                best_value: best_measure,
                temperature: temp,
            });
        }
    }

    st.polish();
    best_measure = best_measure.max(st.measure);
    if trace_stride > 0 {
        trace.push(TracePoint {
            iteration: params.iterations,
            value: st.measure,
            best_value: best_measure,
            temperature: temp,
        });
    }
    let max_pair_sq = st.full_check();
    if max_pair_sq > 4.0 + 1e-9 {
        return Err(Error::Verification(format!(
            "final state violates the diameter bound: max pair distance^2 = {max_pair_sq}"
        )));
    }
    Ok(RestartOut {
        raster: st.to_raster()?,
        measure: st.measure,
        max_pair_sq,
        trace,
    })
}

/// Anneals for a large-measure diameter-2 subset of the annulus
/// `2 <= |p| <= r_outer` on a polar grid with the requested pitches
/// (snapped so rings and sectors tile exactly), returning the best of
/// the seeded restarts together with its trace. Inside the closed-form
/// domain the target bound is `h(R)`; below it the target is unknown.
pub fn anneal_annulus_traced(
    r_outer: f64,
    dr: f64,
    dth: f64,
    params: &AnnealParams,
    seed: u64,
) -> Result<(SearchResult, Vec<TracePoint>)> {
    params.validate()?;
    if !(r_outer.is_finite() && r_outer > 2.0 && r_outer <= 4.0 + 1e-9) {
        return Err(Error::Domain(format!(
            "outer radius {r_outer} must lie in (2, 4]"
        )));
    }
    if !(dr > 0.0 && dr.is_finite() && dth > 0.0 && dth.is_finite()) {
        return Err(Error::Domain("grid pitches must be > 0".into()));
    }
    let t_start = Instant::now();
    let g = Grid::build(r_outer.min(4.0), dr, dth)?;
    let trace_stride = (params.iterations / 512).max(1);

    let outs: Vec<Result<RestartOut>> = (0..params.restarts)
        .into_par_iter()
        .map(|r| run_restart(&g, params, seed, r, trace_stride))
        .collect();
    let mut best: Option<RestartOut> = None;
    for out in outs {
        let out = out?;
        if best.as_ref().is_none_or(|b| out.measure > b.measure) {
            best = Some(out);
        }
    }
    let best = best.expect("restarts >= 1");

    let (target_bound, target_label) = annulus_target(r_outer);
    let gap = target_bound.map(|t| t - best.measure);
    debug_assert!(best.max_pair_sq <= 4.0 + 1e-9);
    let result = SearchResult {
        best_region: BestRegion::Polar(best.raster),
        best_value: best.measure,
        target_bound,
        target_label,
        gap,
        iterations: params.iterations * params.restarts as u64,
        seed,
        wall_time: t_start.elapsed().as_secs_f64(),
        edge_estimate: None,
        edge_target: None,
    };
    Ok((result, best.trace))
}

/// [`anneal_annulus_traced`] without the trace.
pub fn anneal_annulus(
    r_outer: f64,
    dr: f64,
    dth: f64,
    params: &AnnealParams,
    seed: u64,
) -> Result<SearchResult> {
    anneal_annulus_traced(r_outer, dr, dth, params, seed).map(|(r, _)| r)
}
