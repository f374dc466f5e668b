//! Extremal-configuration search: the exact annulus extremizer family,
//! constructive clique-free configurations, simulated annealing over
//! polar rasters, and derivative-free parametric family optimization.

mod anneal;
mod nm;

pub use anneal::{anneal_annulus, anneal_annulus_traced, AnnealParams, TracePoint};

use crate::bounds::{a_of, crude_bounds, h_of, Z_MAX, Z_MIN};
use crate::error::{Error, Result};
use crate::geom::{ball_volume, Clip, Disk, Point, SetRegion};
use crate::graph::{
    clique_ball_bound, clique_witness_region, edge_measure_mc, turan_bound, Estimate,
};
use crate::raster::PolarRaster;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use std::time::Instant;

/// Feasibility oracle resolution used by the parametric searches.
const PARAMETRIC_RESOLUTION: f64 = 0.05;

/// The exact extremal configuration for diameter-2 subsets of the
/// annulus `2 <= |p| <= R`: a unit disk centered at `(s, 0)` clipped
/// to the annulus, with its four boundary corners.
///
/// `X1 = (x1, a)` and `X2 = (x1, -a)` lie on the outer circle,
/// `Y1 = (y1, a)` and `Y2 = (y1, -a)` on the inner circle, where
/// `x1 = sqrt(R^2 - a^2)`, `y1 = sqrt(4 - a^2)`, and `s = (x1+y1)/2`.
/// The cross pairs satisfy `|X1 - Y2| = |X2 - Y1| = 2` exactly, so the
/// region has diameter exactly 2 and measure `h(R)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusExtremal {
    #[serde(rename = "R")]
    pub r_outer: f64,
    pub a: f64,
    pub s: f64,
    #[serde(rename = "X1")]
    pub x1: Point,
    #[serde(rename = "X2")]
    pub x2: Point,
    #[serde(rename = "Y1")]
    pub y1: Point,
    #[serde(rename = "Y2")]
    pub y2: Point,
    pub region: SetRegion,
}

/// Builds the closed-form extremal configuration for outer radius
/// `R` in `[2 sqrt 2, 4]`. At `R = 4` the half-height `a` vanishes
/// and the region degenerates to the full unit disk at `(3, 0)`.
pub fn optimal_annulus_set(r_outer: f64) -> Result<AnnulusExtremal> {
    if !(r_outer.is_finite() && (Z_MIN - 1e-9..=Z_MAX + 1e-9).contains(&r_outer)) {
        return Err(Error::Domain(format!(
            "outer radius {r_outer} outside the closed-form domain [{Z_MIN}, {Z_MAX}]"
        )));
    }
    let r = r_outer.clamp(Z_MIN, Z_MAX);
    let a = a_of(r)?;
    let x1 = (r * r - a * a).sqrt();
    let y1 = (4.0 - a * a).sqrt();
    let s = 0.5 * (x1 + y1);
    let region = SetRegion::new(
        2,
        vec![Disk::new(Point::xy(s, 0.0), 1.0)],
        vec![Clip::Annulus(2.0, r)],
    )?;
    Ok(AnnulusExtremal {
        r_outer: r,
        a,
        s,
        x1: Point::xy(x1, a),
        x2: Point::xy(x1, -a),
        y1: Point::xy(y1, a),
        y2: Point::xy(y1, -a),
        region,
    })
}

/// The configuration a search settled on: either an exact region or a
/// polar occupancy raster.
#[derive(Debug, Clone, PartialEq)]
pub enum BestRegion {
    Region(SetRegion),
    Polar(PolarRaster),
}

impl Serialize for BestRegion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BestRegion::Region(r) => r.serialize(serializer),
            BestRegion::Polar(p) => {
                let mut st = serializer.serialize_struct("PolarRaster", 8)?;
                st.serialize_field("r_min", &p.r_min)?;
                st.serialize_field("r_max", &p.r_max)?;
                st.serialize_field("rings", &p.rings)?;
                st.serialize_field("sectors", &p.sectors)?;
                st.serialize_field("occupied", &p.occupied_count())?;
                st.serialize_field("measure", &p.measure())?;
                st.serialize_field("diameter", &p.diameter())?;
                st.serialize_field("text", &p.to_text())?;
                st.end()
            }
        }
    }
}

/// Outcome of a search routine, with the value it reached and the
/// bound it was judged against.
#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub best_region: BestRegion,
    pub best_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_bound: Option<f64>,
    pub target_label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    pub iterations: u64,
    pub seed: u64,
    pub wall_time: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_estimate: Option<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_target: Option<f64>,
}

fn check_dk(d: u32, k: u32) -> Result<()> {
    if !(1..=8).contains(&d) {
        return Err(Error::Domain(format!(
            "dimension {d} outside the supported range 1..=8"
        )));
    }
    if !(2..=64).contains(&k) {
        return Err(Error::Domain(format!(
            "clique order {k} outside the supported range 2..=64"
        )));
    }
    Ok(())
}

/// `k-1` balls of the given radius strung along the first axis with
/// the given gap between consecutive boundaries. The union is
/// `K_k`-free by the cluster-cover certificate whenever `radius <= 1`;
/// its measure is `(k-1) w_d radius^d` exactly.
///
/// When `radius == 1` the result also carries the Monte Carlo edge
/// measure of the union and the matching clique-free edge bound
/// `(1/2)(1 - 1/(k-1)) measure^2` for comparison.
pub fn multi_ball_construction(d: u32, k: u32, radius: f64, separation: f64) -> Result<SearchResult> {
    check_dk(d, k)?;
    if !(radius > 0.0 && radius <= 1.0 + 1e-12 && radius.is_finite()) {
        return Err(Error::Domain(format!(
            "radius {radius} must lie in (0, 1]"
        )));
    }
    if !(separation > 0.0 && separation.is_finite()) {
        return Err(Error::Domain(format!(
            "separation {separation} must be > 0"
        )));
    }
    let t0 = Instant::now();
    let wd = ball_volume(d)?;
    let m = (k - 1) as usize;
    let step = 2.0 * radius + separation;
    let disks = (0..m)
        .map(|i| {
            let mut c = vec![0.0; d as usize];
            c[0] = i as f64 * step;
            Disk::new(Point::new(c), radius)
        })
        .collect();
    let region = SetRegion::disk_union(d as usize, disks)?;
    let value = m as f64 * wd * radius.powi(d as i32);

    let outcome = clique_witness_region(&region, k as usize, PARAMETRIC_RESOLUTION)?;
    if let Some(w) = outcome.witness {
        return Err(Error::Verification(format!(
            "construction unexpectedly contains a {k}-clique witness: {w:?}"
        )));
    }

    let (mut edge_estimate, mut edge_target) = (None, None);
    if (radius - 1.0).abs() <= 1e-12 {
        edge_target = Some(turan_bound(k, value)?);
        edge_estimate = Some(edge_measure_mc(&region, 2.0, 300_000, 0x0B0B_5EED)?);
    }

    let target = crude_bounds(d, k)?.0;
    Ok(SearchResult {
        best_region: BestRegion::Region(region),
        best_value: value,
        target_bound: Some(target),
        target_label: "crude clique-free volume bound (k-1) 2^d w_d".into(),
        gap: Some(target - value),
        iterations: 0,
        seed: 0,
        wall_time: t0.elapsed().as_secs_f64(),
        edge_estimate,
        edge_target,
    })
}

/// A single ball of radius `2/sqrt(3)`, the largest ball that is
/// triangle-free for the distance-2 graph: three points at pairwise
/// distance above 2 force any enclosing ball to have radius above
/// `2/sqrt(3)`. Its volume `(2/sqrt 3)^d w_d` overtakes the two-unit-
/// ball value `2 w_d` once `d >= 5`.
pub fn big_ball_construction(d: u32) -> Result<SearchResult> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} must be >= 2")));
    }
    let t0 = Instant::now();
    let wd = ball_volume(d)?;
    let radius = clique_ball_bound(3);
    let region = SetRegion::disk_union(
        d as usize,
        vec![Disk::new(Point::new(vec![0.0; d as usize]), radius)],
    )?;
    let value = wd * radius.powi(d as i32);
    if d <= 8 {
        let outcome = clique_witness_region(&region, 3, PARAMETRIC_RESOLUTION)?;
        if let Some(w) = outcome.witness {
            return Err(Error::Verification(format!(
                "triangle witness inside the critical ball: {w:?}"
            )));
        }
    }
    let target = crude_bounds(d, 3)?.0;
    Ok(SearchResult {
        best_region: BestRegion::Region(region),
        best_value: value,
        target_bound: Some(target),
        target_label: "crude clique-free volume bound (k-1) 2^d w_d".into(),
        gap: Some(target - value),
        iterations: 0,
        seed: 0,
        wall_time: t0.elapsed().as_secs_f64(),
        edge_estimate: None,
        edge_target: None,
    })
}

/// Parametric configuration families for [`parametric_clique_iso`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigFamily {
    /// One ball at the origin; the free parameter is its radius.
    SingleBall,
    /// `k-1` collinear balls; parameters are radius and boundary gap.
    MultiBall,
}

impl std::str::FromStr for ConfigFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single-ball" => Ok(ConfigFamily::SingleBall),
            "multi-ball" => Ok(ConfigFamily::MultiBall),
            other => Err(Error::Format(format!(
                "unknown family {other:?}; expected single-ball or multi-ball"
            ))),
        }
    }
}

impl std::fmt::Display for ConfigFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConfigFamily::SingleBall => "single-ball",
            ConfigFamily::MultiBall => "multi-ball",
        })
    }
}

fn family_params(x: &[f64]) -> (f64, f64) {
    let radius = x[0].abs().clamp(1e-9, 2.5);
    let sep = if x.len() > 1 {
        x[1].abs().clamp(1e-6, 5.0)
    } else {
        0.5
    };
    (radius, sep)
}

fn family_region(d: u32, k: u32, family: ConfigFamily, radius: f64, sep: f64) -> Result<SetRegion> {
    let balls = match family {
        ConfigFamily::SingleBall => 1,
        ConfigFamily::MultiBall => (k - 1) as usize,
    };
    let step = 2.0 * radius + sep;
    let disks = (0..balls)
        .map(|i| {
            let mut c = vec![0.0; d as usize];
            c[0] = i as f64 * step;
            Disk::new(Point::new(c), radius)
        })
        .collect();
    SetRegion::disk_union(d as usize, disks)
}

fn family_value(d: u32, k: u32, family: ConfigFamily, radius: f64, wd: f64) -> f64 {
    let balls = match family {
        ConfigFamily::SingleBall => 1.0,
        ConfigFamily::MultiBall => (k - 1) as f64,
    };
    balls * wd * radius.powi(d as i32)
}

/// Maximizes the measure of a clique-free configuration within one
/// parametric family by Nelder-Mead restarts; feasibility of each
/// probe is the absence of a `K_k` witness. The reported configuration
/// shrinks the optimized radius back to the largest value certified
/// free by an exact certificate (`2/sqrt(3)`-type enclosing-ball
/// radius for one ball, unit radius for the cluster cover), so the
/// returned `best_value` is never an artifact of finite witness
/// resolution. `budget` caps the total number of feasibility-oracle
/// evaluations across restarts.
pub fn parametric_clique_iso(
    d: u32,
    k: u32,
    family: ConfigFamily,
    budget: u64,
    seed: u64,
) -> Result<SearchResult> {
    check_dk(d, k)?;
    if budget < 1 {
        return Err(Error::Domain("budget must be >= 1".into()));
    }
    let t0 = Instant::now();
    let wd = ball_volume(d)?;
    let restarts = 3u64.min(budget).max(1);
    let per_restart = (budget / restarts).max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evals_total = 0u64;
    let mut best: Option<(f64, f64)> = None; // (objective value, radius)

    for _ in 0..restarts {
        let x0 = match family {
            ConfigFamily::SingleBall => vec![0.5 + rng.random::<f64>()],
            ConfigFamily::MultiBall => {
                vec![0.5 + rng.random::<f64>(), 0.1 + rng.random::<f64>()]
            }
        };
        let objective = |x: &[f64]| -> f64 {
            let (radius, sep) = family_params(x);
            let Ok(region) = family_region(d, k, family, radius, sep) else {
                return f64::NEG_INFINITY;
            };
            match clique_witness_region(&region, k as usize, PARAMETRIC_RESOLUTION) {
                Ok(out) if out.witness.is_none() => family_value(d, k, family, radius, wd),
                Ok(_) => -1.0 - radius,
                Err(_) => f64::NEG_INFINITY,
            }
        };
        let (x, v, used) = nm::maximize(objective, &x0, 0.25, per_restart);
        evals_total += used;
        let (radius, _) = family_params(&x);
        if best.is_none_or(|(bv, _)| v > bv) {
            best = Some((v, radius));
        }
    }

    let (_, r_raw) = best.expect("at least one restart ran");
    let certified = match family {
        ConfigFamily::SingleBall => clique_ball_bound(k as usize),
        ConfigFamily::MultiBall => 1.0,
    };
    let radius = r_raw.min(certified);
    let region = family_region(d, k, family, radius, 0.5)?;
    let outcome = clique_witness_region(&region, k as usize, PARAMETRIC_RESOLUTION)?;
    if let Some(w) = outcome.witness {
        return Err(Error::Verification(format!(
            "certified radius still admits a clique witness: {w:?}"
        )));
    }
    let value = family_value(d, k, family, radius, wd);
    let target = crude_bounds(d, k)?.0;
    Ok(SearchResult {
        best_region: BestRegion::Region(region),
        best_value: value,
        target_bound: Some(target),
        target_label: "crude clique-free volume bound (k-1) 2^d w_d".into(),
        gap: Some(target - value),
        iterations: evals_total,
        seed,
        wall_time: t0.elapsed().as_secs_f64(),
        edge_estimate: None,
        edge_target: None,
    })
}

/// The closed-form target for annulus searches: `h(R)` inside the
/// closed-form domain, `None` below it.
pub(crate) fn annulus_target(r_outer: f64) -> (Option<f64>, String) {
    if r_outer >= Z_MIN - 1e-9 {
        (
            Some(h_of(r_outer.clamp(Z_MIN, Z_MAX)).expect("inside domain")),
            "closed-form annulus extremal value h(R)".into(),
        )
    } else {
        (None, "unknown (outside closed-form domain)".into())
    }
}
