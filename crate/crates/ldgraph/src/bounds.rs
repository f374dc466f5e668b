//! Closed-form bound ledger on the annulus diameter range.
//!
//! For an annulus with inner radius 2 and outer radius `R`, write
//! `z = R` for the outer diameter parameter. On `z` in `[2*sqrt(2), 4]`
//! the ledger tracks:
//!
//! - `g(z)`: half the area of the lens cut from two radius-2 disks at
//!   center distance `z`;
//! - `a(z)`: the half-height of the corner rectangle of the extremal
//!   cap, the root of the corner identity `(x1 - y1)^2 + 4 a^2 = 4`
//!   with `x1 = sqrt(z^2 - a^2)`, `y1 = sqrt(4 - a^2)`;
//! - `h(z)`: the area of the extremal cap, a unit disk centered on the
//!   mid-chord intersected with the annulus;
//! - `H(z)`: the derivative residual of `h` after substituting `a(z)`;
//!   identically zero on the open interval, which certifies that `a`
//!   sits at the stationary height;
//! - `f(z) = 2 (g(z) + h(z))`: the edge-measure bound for the annulus;
//! - `f'(z) = 4 z asin(a/z) - sqrt(16 - z^2)`: positive on the open
//!   interval, so the bound is strictly increasing in `z`.
//!
//! Derivatives involving `a'` blow up at `z = 4`; they are evaluated
//! only for `z <= 4 - 1e-9` and at the endpoint take their continuous
//! extensions (`a' -> -inf`, `H -> 0`, `h' -> 0`, `f' -> 0`).

use crate::error::{Error, Result};
use crate::geom::ball_volume;

/// Lower endpoint of the ledger domain, `2*sqrt(2)`.
pub const Z_MIN: f64 = 2.0 * std::f64::consts::SQRT_2;
/// Upper endpoint of the ledger domain.
pub const Z_MAX: f64 = 4.0;

/// `a'` is evaluated only for `z` at or below this cutoff; past it the
/// endpoint's continuous extension is used.
const A_PRIME_CUTOFF: f64 = 4.0 - 1e-9;

/// Radicand values within this distance below zero are clamped to zero.
const RADICAND_CLAMP: f64 = 1e-12;

fn check_domain(z: f64) -> Result<()> {
    if !z.is_finite() || !(Z_MIN - 1e-9..=Z_MAX + 1e-9).contains(&z) {
        return Err(Error::Domain(format!(
            "z = {z} outside the bound domain [2*sqrt(2), 4]"
        )));
    }
    Ok(())
}

fn sqrt_clamped(radicand: f64) -> Result<f64> {
    if radicand < -RADICAND_CLAMP {
        return Err(Error::Domain(format!("negative radicand {radicand}")));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Half-lens area `g(z) = 4 acos(z/4) - (z/2) sqrt(4 - z^2/4)`.
pub fn g_of(z: f64) -> Result<f64> {
    check_domain(z)?;
    let r = sqrt_clamped(4.0 - z * z / 4.0)?;
    Ok(4.0 * (z / 4.0).min(1.0).acos() - (z / 2.0) * r)
}

/// Corner half-height `a(z) = sqrt((16 z^2 - z^4) / (8 (z^2 + 2)))`.
pub fn a_of(z: f64) -> Result<f64> {
    check_domain(z)?;
    let radicand = (-z.powi(4) + 16.0 * z * z) / (8.0 * (z * z + 2.0));
    sqrt_clamped(radicand)
}

/// Cap area `h(z) = z^2 asin(a/z) - 4 asin(a/2) + 2 acos(a)` with `a = a_of(z)`.
pub fn h_of(z: f64) -> Result<f64> {
    let a = a_of(z)?;
    Ok(z * z * (a / z).asin() - 4.0 * (a / 2.0).asin() + 2.0 * a.acos())
}

/// Edge-measure bound `f(z) = 2 (g(z) + h(z))`.
pub fn f_of(z: f64) -> Result<f64> {
    Ok(2.0 * (g_of(z)? + h_of(z)?))
}

/// `g'(z) = -sqrt(16 - z^2) / 2`.
pub fn g_prime(z: f64) -> Result<f64> {
    check_domain(z)?;
    Ok(-0.5 * sqrt_clamped(16.0 - z * z)?)
}

/// `a'(z) = -(z^2 - 4)(z^2 + 8) / ((2 (z^2 + 2))^{3/2} sqrt(16 - z^2))`.
///
/// Unbounded as `z -> 4`; returns `-inf` past the evaluation cutoff.
pub fn a_prime(z: f64) -> Result<f64> {
    check_domain(z)?;
    if z > A_PRIME_CUTOFF {
        return Ok(f64::NEG_INFINITY);
    }
    let z2 = z * z;
    let denom = (2.0 * (z2 + 2.0)).powf(1.5) * (16.0 - z2).sqrt();
    Ok(-(z2 - 4.0) * (z2 + 8.0) / denom)
}

/// Derivative residual
/// `H(z) = z (z a' - a) / sqrt(z^2 - a^2) - 4 a' / sqrt(4 - a^2) - 2 a' / sqrt(1 - a^2)`.
///
/// Identically zero on the open interval because `a(z)` solves the
/// stationarity condition of the cap height; near `z = 4` the
/// divergent `a'` terms cancel exactly.
pub fn h_residual(z: f64) -> Result<f64> {
    check_domain(z)?;
    if z > A_PRIME_CUTOFF {
        return Ok(0.0);
    }
    let a = a_of(z)?;
    let ap = a_prime(z)?;
    Ok(z * (z * ap - a) / (z * z - a * a).sqrt()
        - 4.0 * ap / (4.0 - a * a).sqrt()
        - 2.0 * ap / (1.0 - a * a).sqrt())
}

/// `h'(z) = 2 z asin(a/z) + H(z)`, so `h'(z) = 2 z asin(a/z)` on the
/// open interval.
pub fn h_prime(z: f64) -> Result<f64> {
    let a = a_of(z)?;
    Ok(2.0 * z * (a / z).asin() + h_residual(z)?)
}

/// `f'(z) = 4 z asin(a/z) - sqrt(16 - z^2)`, using the vanishing of `H`.
pub fn f_prime(z: f64) -> Result<f64> {
    let a = a_of(z)?;
    Ok(4.0 * z * (a / z).asin() - sqrt_clamped(16.0 - z * z)?)
}

/// Area of the intersection of two radius-2 disks at center distance
/// `z`, i.e. `2 g(z)` continued to all separations: the full disk area
/// at `z = 0`, zero once the disks separate at `z >= 4`.
pub fn lens_area(z: f64) -> Result<f64> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::Domain(format!("center distance {z} must be >= 0")));
    }
    if z >= 4.0 {
        return Ok(0.0);
    }
    let r = (4.0 - z * z / 4.0).max(0.0).sqrt();
    Ok(2.0 * (4.0 * (z / 4.0).acos() - (z / 2.0) * r))
}

/// One evaluated row of the bound ledger.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct BoundLedger {
    pub z: f64,
    pub a: f64,
    pub a_prime: f64,
    pub g: f64,
    pub g_prime: f64,
    pub h: f64,
    pub h_prime: f64,
    /// The derivative residual `H(z)`; zero up to rounding.
    pub h_residual: f64,
    pub f: f64,
    pub f_prime: f64,
}

impl BoundLedger {
    pub fn evaluate(z: f64) -> Result<Self> {
        Ok(BoundLedger {
            z,
            a: a_of(z)?,
            a_prime: a_prime(z)?,
            g: g_of(z)?,
            g_prime: g_prime(z)?,
            h: h_of(z)?,
            h_prime: h_prime(z)?,
            h_residual: h_residual(z)?,
            f: f_of(z)?,
            f_prime: f_prime(z)?,
        })
    }

    /// CSV header matching [`BoundLedger::csv_row`].
    pub fn csv_header() -> &'static str {
        "z,a,g,h,H,f,fprime"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{:.12},{:.12},{:.12},{:.12},{:.3e},{:.12},{:.12}",
            self.z, self.a, self.g, self.h, self.h_residual, self.f, self.f_prime
        )
    }
}

/// Evaluates the ledger on `n` evenly spaced points of `[z_min, z_max]`
/// (endpoints included for `n >= 2`).
pub fn ledger(z_min: f64, z_max: f64, n: usize) -> Result<Vec<BoundLedger>> {
    if n == 0 || z_max < z_min {
        return Err(Error::Domain(format!(
            "ledger needs n >= 1 and z_min <= z_max, got n = {n}, [{z_min}, {z_max}]"
        )));
    }
    (0..n)
        .map(|i| {
            let t = if n == 1 {
                0.5
            } else {
                i as f64 / (n - 1) as f64
            };
            BoundLedger::evaluate(z_min + t * (z_max - z_min))
        })
        .collect()
}

/// `grid` evaluation points strictly inside `(z_min, z_max)`.
fn interior_grid(grid: usize) -> impl Iterator<Item = f64> {
    (1..=grid).map(move |i| Z_MIN + i as f64 / (grid + 1) as f64 * (Z_MAX - Z_MIN))
}

/// Maximum of `|H(z)|` over `grid` uniform interior points.
pub fn verify_h_identity(grid: usize) -> Result<f64> {
    if grid == 0 {
        return Err(Error::Domain("grid must be >= 1".into()));
    }
    let mut max_abs: f64 = 0.0;
    for z in interior_grid(grid) {
        max_abs = max_abs.max(h_residual(z)?.abs());
    }
    Ok(max_abs)
}

/// Outcome of the monotonicity verifier for `f`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct MonotonicityReport {
    /// Minimum of the closed-form `f'` over the interior grid.
    pub min_f_prime: f64,
    /// Largest gap between closed-form `f'` and a central finite
    /// difference of `f` with step 1e-5.
    pub max_fd_mismatch: f64,
}

/// Checks `f' > 0` on `grid` uniform interior points and cross-checks
/// the closed form against central finite differences of `f`.
pub fn verify_f_monotone(grid: usize) -> Result<MonotonicityReport> {
    if grid == 0 {
        return Err(Error::Domain("grid must be >= 1".into()));
    }
    const FD_STEP: f64 = 1e-5;
    let mut min_fp = f64::INFINITY;
    let mut max_gap: f64 = 0.0;
    for z in interior_grid(grid) {
        let fp = f_prime(z)?;
        min_fp = min_fp.min(fp);
        let fd = (f_of(z + FD_STEP)? - f_of(z - FD_STEP)?) / (2.0 * FD_STEP);
        max_gap = max_gap.max((fp - fd).abs());
    }
    Ok(MonotonicityReport {
        min_f_prime: min_fp,
        max_fd_mismatch: max_gap,
    })
}

/// Crude upper bounds for clique-free configurations in dimension `d`:
/// vertex measure at most `(k-1) 2^d w_d` and edge measure at most
/// `(k-1)^2 2^{2d-1} w_d^2`, with `w_d` the unit-ball volume. Far from
/// sharp; they exist to sanity-bound search results.
pub fn crude_bounds(d: u32, k: u32) -> Result<(f64, f64)> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if k < 2 {
        return Err(Error::Domain(format!("clique order {k} must be >= 2")));
    }
    let wd = ball_volume(d)?;
    let km1 = (k - 1) as f64;
    let vertex = km1 * 2f64.powi(d as i32) * wd;
    let edge = km1 * km1 * 2f64.powi(2 * d as i32 - 1) * wd * wd;
    Ok((vertex, edge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn anchors_at_upper_endpoint() {
        assert_eq!(a_of(4.0).unwrap(), 0.0);
        assert!((h_of(4.0).unwrap() - PI).abs() < 1e-12);
        assert!(g_of(4.0).unwrap().abs() < 1e-12);
        assert!((f_of(4.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!(f_prime(4.0).unwrap().abs() < 1e-6);
        assert_eq!(h_residual(4.0).unwrap(), 0.0);
        assert_eq!(a_prime(4.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn anchors_at_lower_endpoint() {
        // At z = 2*sqrt(2): z^2 = 8, so the radicand of a is
        // (128 - 64)/80 = 0.8 and g = 4 acos(sqrt(2)/2) - sqrt(2)*sqrt(2) = pi - 2.
        let z = Z_MIN;
        assert!((a_of(z).unwrap() * a_of(z).unwrap() - 0.8).abs() < 1e-12);
        assert!((g_of(z).unwrap() - (PI - 2.0)).abs() < 1e-12);
        assert!((lens_area(z).unwrap() - (2.0 * PI - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn lens_area_matches_two_disk_chord_formula() {
        // Independent form: 2 r^2 acos(d/2r) - (d/2) sqrt(4 r^2 - d^2), r = 2.
        for i in 0..=40 {
            let d = i as f64 * 0.1;
            let expected = if d >= 4.0 {
                0.0
            } else {
                8.0 * (d / 4.0).acos() - (d / 2.0) * (16.0 - d * d).sqrt()
            };
            assert!(
                (lens_area(d).unwrap() - expected).abs() < 1e-12,
                "lens mismatch at d = {d}"
            );
        }
        assert!((lens_area(0.0).unwrap() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn derivative_formulas_match_finite_differences() {
        let step = 1e-6;
        for i in 1..=50 {
            let z = Z_MIN + i as f64 / 51.0 * (Z_MAX - Z_MIN);
            let fd_a = (a_of(z + step).unwrap() - a_of(z - step).unwrap()) / (2.0 * step);
            let fd_g = (g_of(z + step).unwrap() - g_of(z - step).unwrap()) / (2.0 * step);
            let fd_h = (h_of(z + step).unwrap() - h_of(z - step).unwrap()) / (2.0 * step);
            assert!((a_prime(z).unwrap() - fd_a).abs() < 1e-5, "a' at {z}");
            assert!((g_prime(z).unwrap() - fd_g).abs() < 1e-6, "g' at {z}");
            assert!((h_prime(z).unwrap() - fd_h).abs() < 1e-5, "h' at {z}");
        }
    }

    #[test]
    fn residual_vanishes_on_fine_grid() {
        assert!(verify_h_identity(1000).unwrap() < 1e-9);
    }

    #[test]
    fn bound_is_strictly_increasing() {
        let report = verify_f_monotone(100).unwrap();
        assert!(report.min_f_prime > 0.0);
        assert!(report.max_fd_mismatch < 1e-6);
    }

    #[test]
    fn a_is_strictly_decreasing() {
        let mut prev = a_of(Z_MIN).unwrap();
        for i in 1..=200 {
            let z = Z_MIN + i as f64 / 200.0 * (Z_MAX - Z_MIN);
            let a = a_of(z).unwrap();
            assert!(a < prev, "a not decreasing at z = {z}");
            prev = a;
        }
    }

    #[test]
    fn domain_is_enforced() {
        assert!(matches!(f_of(2.0), Err(Error::Domain(_))));
        assert!(matches!(f_of(4.5), Err(Error::Domain(_))));
        assert!(matches!(a_of(f64::NAN), Err(Error::Domain(_))));
        assert!(lens_area(5.0).unwrap() == 0.0);
        assert!(matches!(lens_area(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn ledger_rows_are_consistent() {
        let rows = ledger(Z_MIN, Z_MAX, 33).unwrap();
        assert_eq!(rows.len(), 33);
        assert!((rows[0].z - Z_MIN).abs() < 1e-15);
        assert!((rows[32].z - Z_MAX).abs() < 1e-15);
        for row in &rows {
            assert!((row.f - 2.0 * (row.g + row.h)).abs() < 1e-12);
            assert!(row.csv_row().split(',').count() == 7);
        }
    }

    #[test]
    fn crude_bounds_match_closed_form() {
        let (v, e) = crude_bounds(2, 3).unwrap();
        assert!((v - 2.0 * 4.0 * PI).abs() < 1e-12);
        assert!((e - 4.0 * 8.0 * PI * PI).abs() < 1e-12);
        assert!(matches!(crude_bounds(0, 3), Err(Error::Domain(_))));
        assert!(matches!(crude_bounds(2, 1), Err(Error::Domain(_))));
    }
}
