//! Occupancy rasters: Cartesian cells of side h and polar cells
//! (ring, sector) with exact area r_mid * dr * dth.
//!
//! Occupancy follows the cell-center rule: a cell is occupied iff its
//! center lies in the source set. Occupancy is immutable after
//! construction. Raster diameters are computed over occupied-cell
//! corners (exact for the cell union, conservative for the underlying
//! set): the farthest pair of two axis-aligned or annular-sector cells
//! is always attained at cell corners, and any extreme point of the
//! union lies on a cell with an incomplete 8-neighborhood, so it
//! suffices to run rotating calipers over boundary-cell corners.

use crate::error::{Error, Result};
use crate::geom::{farthest_pair_distance, Point, SetRegion, RASTER_CELL_BUDGET};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitGrid {
    words: Vec<u64>,
    len: usize,
}

impl BitGrid {
    fn new(len: usize) -> Self {
        BitGrid {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Axis-aligned occupancy grid. Cell (ix, iy) spans
/// `[ox + ix h, ox + (ix+1) h] x [oy + iy h, oy + (iy+1) h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianRaster {
    pub origin: [f64; 2],
    pub cell: f64,
    pub width: usize,
    pub height: usize,
    bits: BitGrid,
}

impl CartesianRaster {
    /// Builds a raster by evaluating `pred` at every cell center.
    pub fn from_fn<F: Fn(f64, f64) -> bool>(
        origin: [f64; 2],
        cell: f64,
        width: usize,
        height: usize,
        pred: F,
    ) -> Result<Self> {
        if !(cell > 0.0 && cell.is_finite()) {
            return Err(Error::Domain(format!("cell size {cell} must be > 0")));
        }
        if width.saturating_mul(height) > RASTER_CELL_BUDGET {
            return Err(Error::Resource(format!(
                "raster of {width} x {height} cells exceeds the {RASTER_CELL_BUDGET}-cell budget"
            )));
        }
        let mut bits = BitGrid::new(width * height);
        for iy in 0..height {
            let y = origin[1] + (iy as f64 + 0.5) * cell;
            for ix in 0..width {
                let x = origin[0] + (ix as f64 + 0.5) * cell;
                if pred(x, y) {
                    bits.set(iy * width + ix, true);
                }
            }
        }
        Ok(CartesianRaster {
            origin,
            cell,
            width,
            height,
            bits,
        })
    }

    /// Builds a raster from explicit row data (row 0 first, bottom row).
    pub fn from_rows(origin: [f64; 2], cell: f64, rows: &[Vec<bool>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Format("ragged raster rows".into()));
        }
        let mut bits = BitGrid::new(width * height);
        for (iy, row) in rows.iter().enumerate() {
            for (ix, &v) in row.iter().enumerate() {
                bits.set(iy * width + ix, v);
            }
        }
        Ok(CartesianRaster {
            origin,
            cell,
            width,
            height,
            bits,
        })
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> bool {
        ix < self.width && iy < self.height && self.bits.get(iy * self.width + ix)
    }

    pub fn occupied_count(&self) -> usize {
        self.bits.count()
    }

    /// Exact cell-sum measure: occupied count times h^2.
    pub fn measure(&self) -> f64 {
        self.occupied_count() as f64 * self.cell * self.cell
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> [f64; 2] {
        [
            self.origin[0] + (ix as f64 + 0.5) * self.cell,
            self.origin[1] + (iy as f64 + 0.5) * self.cell,
        ]
    }

    pub fn occupied_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height)
            .flat_map(move |iy| (0..self.width).map(move |ix| (ix, iy)))
            .filter(move |&(ix, iy)| self.get(ix, iy))
    }

    pub fn occupied_centers(&self) -> Vec<[f64; 2]> {
        self.occupied_cells()
            .map(|(ix, iy)| self.cell_center(ix, iy))
            .collect()
    }

    /// True if the point lies in an occupied cell.
    pub fn contains_xy(&self, x: f64, y: f64) -> bool {
        let fx = (x - self.origin[0]) / self.cell;
        let fy = (y - self.origin[1]) / self.cell;
        if fx < 0.0 || fy < 0.0 {
            return false;
        }
        let (ix, iy) = (fx as usize, fy as usize);
        self.get(ix, iy)
    }

    fn is_boundary(&self, ix: usize, iy: usize) -> bool {
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let nx = ix as i64 + dx;
                let ny = iy as i64 + dy;
                if nx < 0 || ny < 0 || nx >= self.width as i64 || ny >= self.height as i64 {
                    return true;
                }
                if !self.get(nx as usize, ny as usize) {
                    return true;
                }
            }
        }
        false
    }

    /// Diameter of the union of occupied cells, via rotating calipers
    /// over boundary-cell corners. Conservative (>= the diameter of
    /// the rasterized set, within 2 h sqrt(2) of it for convex sets).
    pub fn diameter(&self) -> Result<f64> {
        let corners = self.boundary_corners();
        if corners.is_empty() {
            return Err(Error::Domain("diameter of an empty raster".into()));
        }
        Ok(farthest_pair_distance(&corners))
    }

    /// Corners of boundary cells; every extreme point of the cell
    /// union lies among them.
    pub(crate) fn boundary_corners(&self) -> Vec<[f64; 2]> {
        let mut corners = Vec::new();
        for (ix, iy) in self.occupied_cells() {
            if !self.is_boundary(ix, iy) {
                continue;
            }
            let x0 = self.origin[0] + ix as f64 * self.cell;
            let y0 = self.origin[1] + iy as f64 * self.cell;
            corners.push([x0, y0]);
            corners.push([x0 + self.cell, y0]);
            corners.push([x0, y0 + self.cell]);
            corners.push([x0 + self.cell, y0 + self.cell]);
        }
        corners
    }

    /// Serializes to the plain text exchange format.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "RASTER h={} w={} ht={} ox={} oy={}\n",
            self.cell, self.width, self.height, self.origin[0], self.origin[1]
        );
        for iy in 0..self.height {
            for ix in 0..self.width {
                out.push(if self.get(ix, iy) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty raster text".into()))?;
        let mut h = None;
        let mut w = None;
        let mut ht = None;
        let mut ox = None;
        let mut oy = None;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("RASTER") {
            return Err(Error::Format("raster text must start with RASTER".into()));
        }
        for field in fields {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("bad raster header field {field}")))?;
            fn parse_num<T: std::str::FromStr>(value: &str) -> Result<T> {
                value
                    .parse::<T>()
                    .map_err(|_| Error::Format(format!("bad raster header value {value}")))
            }
            match key {
                "h" => h = Some(parse_num::<f64>(value)?),
                "w" => w = Some(parse_num::<usize>(value)?),
                "ht" => ht = Some(parse_num::<usize>(value)?),
                "ox" => ox = Some(parse_num::<f64>(value)?),
                "oy" => oy = Some(parse_num::<f64>(value)?),
                _ => return Err(Error::Format(format!("unknown raster header key {key}"))),
            }
        }
        let (Some(h), Some(w), Some(ht), Some(ox), Some(oy)) = (h, w, ht, ox, oy) else {
            return Err(Error::Format("raster header missing fields".into()));
        };
        let mut rows = Vec::with_capacity(ht);
        for _ in 0..ht {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format("raster text truncated".into()))?;
            if line.len() != w {
                return Err(Error::Format(format!(
                    "raster row has {} cells, expected {w}",
                    line.len()
                )));
            }
            let row: Vec<bool> = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Format(format!("bad raster cell character {c:?}"))),
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        let raster = Self::from_rows([ox, oy], h, &rows)?;
        if !raster.cell.is_finite() || raster.cell <= 0.0 {
            return Err(Error::Format("raster cell size must be > 0".into()));
        }
        Ok(raster)
    }

    /// Converts to a polar raster by evaluating the polar cell centers
    /// against this raster's occupancy.
    pub fn to_polar(&self, r_min: f64, r_max: f64, dr: f64, dth: f64) -> Result<PolarRaster> {
        PolarRaster::from_fn(r_min, r_max, dr, dth, |x, y| self.contains_xy(x, y))
    }
}

/// Rasterizes a planar region onto a grid of pitch `h` covering its
/// bounding box (one cell of padding on every side).
pub fn rasterize(s: &SetRegion, h: f64) -> Result<CartesianRaster> {
    if s.dim != 2 {
        return Err(Error::Domain("rasterize supports dimension 2 only".into()));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("cell size {h} must be > 0")));
    }
    let Some((lo, hi)) = s.bbox() else {
        return CartesianRaster::from_fn([0.0, 0.0], h, 0, 0, |_, _| false);
    };
    let origin = [lo[0] - h, lo[1] - h];
    let width = ((hi[0] - origin[0]) / h).ceil() as usize + 1;
    let height = ((hi[1] - origin[1]) / h).ceil() as usize + 1;
    CartesianRaster::from_fn(origin, h, width, height, |x, y| {
        s.contains(&Point::xy(x, y))
    })
}

/// Polar occupancy grid over `[r_min, r_max] x (-pi, pi]`. Requested
/// cell pitches are snapped so that rings and sectors tile exactly:
/// `dr` to `(r_max - r_min) / rings`, `dth` to `2 pi / sectors`.
/// Sector j spans angles `[-pi + j dth, -pi + (j+1) dth]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarRaster {
    pub r_min: f64,
    pub r_max: f64,
    pub dr: f64,
    pub dth: f64,
    pub rings: usize,
    pub sectors: usize,
    bits: BitGrid,
}

impl PolarRaster {
    pub fn from_fn<F: Fn(f64, f64) -> bool>(
        r_min: f64,
        r_max: f64,
        dr: f64,
        dth: f64,
        pred: F,
    ) -> Result<Self> {
        let (rings, sectors, dr, dth) = Self::snap(r_min, r_max, dr, dth)?;
        if rings.saturating_mul(sectors) > RASTER_CELL_BUDGET {
            return Err(Error::Resource(format!(
                "polar raster of {rings} x {sectors} cells exceeds the {RASTER_CELL_BUDGET}-cell budget"
            )));
        }
        let mut bits = BitGrid::new(rings * sectors);
        for i in 0..rings {
            let r = r_min + (i as f64 + 0.5) * dr;
            for j in 0..sectors {
                let th = -PI + (j as f64 + 0.5) * dth;
                if pred(r * th.cos(), r * th.sin()) {
                    bits.set(i * sectors + j, true);
                }
            }
        }
        Ok(PolarRaster {
            r_min,
            r_max,
            dr,
            dth,
            rings,
            sectors,
            bits,
        })
    }

    fn snap(r_min: f64, r_max: f64, dr: f64, dth: f64) -> Result<(usize, usize, f64, f64)> {
        if !(r_min >= 0.0 && r_max > r_min && r_min.is_finite() && r_max.is_finite()) {
            return Err(Error::Domain(format!(
                "polar radial range needs 0 <= r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if !(dr > 0.0 && dth > 0.0 && dr.is_finite() && dth.is_finite()) {
            return Err(Error::Domain("polar pitches must be > 0".into()));
        }
        let rings = (((r_max - r_min) / dr).round() as usize).max(1);
        let sectors = ((2.0 * PI / dth).round() as usize).max(1);
        Ok((
            rings,
            sectors,
            (r_max - r_min) / rings as f64,
            2.0 * PI / sectors as f64,
        ))
    }

    /// Builds from explicit per-ring occupancy rows (ring 0 innermost).
    pub fn from_ring_rows(r_min: f64, r_max: f64, rows: &[Vec<bool>]) -> Result<Self> {
        let rings = rows.len();
        let sectors = rows.first().map_or(0, Vec::len);
        if rings == 0 || sectors == 0 || rows.iter().any(|r| r.len() != sectors) {
            return Err(Error::Format("polar rows must be nonempty and rectangular".into()));
        }
        if !(r_min >= 0.0 && r_max > r_min) {
            return Err(Error::Domain("polar radial range invalid".into()));
        }
        let mut bits = BitGrid::new(rings * sectors);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                bits.set(i * sectors + j, v);
            }
        }
        Ok(PolarRaster {
            r_min,
            r_max,
            dr: (r_max - r_min) / rings as f64,
            dth: 2.0 * PI / sectors as f64,
            rings,
            sectors,
            bits,
        })
    }

    #[inline]
    pub fn get(&self, ring: usize, sector: usize) -> bool {
        ring < self.rings && sector < self.sectors && self.bits.get(ring * self.sectors + sector)
    }

    pub fn occupied_count(&self) -> usize {
        self.bits.count()
    }

    pub fn ring_count(&self, ring: usize) -> usize {
        (0..self.sectors).filter(|&j| self.get(ring, j)).count()
    }

    pub fn ring_mid_radius(&self, ring: usize) -> f64 {
        self.r_min + (ring as f64 + 0.5) * self.dr
    }

    /// Exact area of one cell of the given ring: r_mid * dr * dth.
    pub fn cell_area(&self, ring: usize) -> f64 {
        self.ring_mid_radius(ring) * self.dr * self.dth
    }

    /// Exact cell-sum measure.
    pub fn measure(&self) -> f64 {
        (0..self.rings)
            .map(|i| self.ring_count(i) as f64 * self.cell_area(i))
            .sum()
    }

    pub fn cell_center(&self, ring: usize, sector: usize) -> [f64; 2] {
        let r = self.ring_mid_radius(ring);
        let th = self.sector_mid_angle(sector);
        [r * th.cos(), r * th.sin()]
    }

    pub fn sector_mid_angle(&self, sector: usize) -> f64 {
        -PI + (sector as f64 + 0.5) * self.dth
    }

    pub fn occupied_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rings)
            .flat_map(move |i| (0..self.sectors).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.get(i, j))
    }

    /// The four polar corners of a cell.
    fn cell_corners(&self, ring: usize, sector: usize) -> [[f64; 2]; 4] {
        let r0 = self.r_min + ring as f64 * self.dr;
        let r1 = r0 + self.dr;
        let t0 = -PI + sector as f64 * self.dth;
        let t1 = t0 + self.dth;
        [
            [r0 * t0.cos(), r0 * t0.sin()],
            [r0 * t1.cos(), r0 * t1.sin()],
            [r1 * t0.cos(), r1 * t0.sin()],
            [r1 * t1.cos(), r1 * t1.sin()],
        ]
    }

    fn is_boundary(&self, ring: usize, sector: usize) -> bool {
        for di in -1i64..=1 {
            let ni = ring as i64 + di;
            if ni < 0 || ni >= self.rings as i64 {
                return true;
            }
            for dj in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let nj = (sector as i64 + dj).rem_euclid(self.sectors as i64);
                if !self.get(ni as usize, nj as usize) {
                    return true;
                }
            }
        }
        false
    }

    /// Diameter of the union of occupied cells via boundary-cell
    /// corners; 0 for an empty raster. Exact for the cell union
    /// because the farthest pair of two annular sectors is attained at
    /// corners (distance is convex in each radius and increasing in
    /// angular separation up to pi).
    pub fn diameter(&self) -> f64 {
        let mut corners = Vec::new();
        for (i, j) in self.occupied_cells() {
            if self.is_boundary(i, j) {
                corners.extend(self.cell_corners(i, j));
            }
        }
        farthest_pair_distance(&corners)
    }

    /// Largest absolute occupied-sector center angle, or `None` when empty.
    pub fn max_abs_center_angle(&self) -> Option<f64> {
        self.occupied_cells()
            .map(|(_, j)| self.sector_mid_angle(j).abs())
            .max_by(f64::total_cmp)
    }

    /// True when every occupied cell lies strictly inside the angular
    /// window (-pi/2, pi/2), measured at cell centers.
    pub fn within_half_window(&self) -> bool {
        self.max_abs_center_angle()
            .is_none_or(|a| a < PI / 2.0 - 1e-12)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "PRASTER {} {} {} {}\n",
            self.r_min, self.r_max, self.dr, self.dth
        );
        for i in 0..self.rings {
            for j in 0..self.sectors {
                out.push(if self.get(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty polar raster text".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "PRASTER" {
            return Err(Error::Format(
                "polar raster header must be 'PRASTER rmin rmax dr dth'".into(),
            ));
        }
        let vals: Vec<f64> = fields[1..]
            .iter()
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Format(format!("bad polar header value {v}")))
            })
            .collect::<Result<_>>()?;
        let (r_min, r_max, dr, dth) = (vals[0], vals[1], vals[2], vals[3]);
        let (rings, sectors, _, _) = Self::snap(r_min, r_max, dr, dth)?;
        let mut rows = Vec::with_capacity(rings);
        for _ in 0..rings {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format("polar raster text truncated".into()))?;
            if line.len() != sectors {
                return Err(Error::Format(format!(
                    "polar row has {} cells, expected {sectors}",
                    line.len()
                )));
            }
            let row: Vec<bool> = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Format(format!("bad polar cell character {c:?}"))),
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        Self::from_ring_rows(r_min, r_max, &rows)
    }
}

/// Rasterizes a planar region onto a polar grid.
pub fn to_polar(s: &SetRegion, r_min: f64, r_max: f64, dr: f64, dth: f64) -> Result<PolarRaster> {
    if s.dim != 2 {
        return Err(Error::Domain("polar rasterization supports dimension 2 only".into()));
    }
    PolarRaster::from_fn(r_min, r_max, dr, dth, |x, y| s.contains(&Point::xy(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Clip, Disk};

    fn unit_disk() -> SetRegion {
        SetRegion::disk_union(2, vec![Disk::new(Point::xy(0.0, 0.0), 1.0)]).unwrap()
    }

    fn annulus_region(inner: f64, outer: f64) -> SetRegion {
        SetRegion::new(
            2,
            vec![Disk::new(Point::xy(0.0, 0.0), outer)],
            vec![Clip::Annulus(inner, outer)],
        )
        .unwrap()
    }

    #[test]
    fn raster_measure_tracks_region_measure() {
        let r = rasterize(&unit_disk(), 0.01).unwrap();
        let err = (r.measure() - PI).abs();
        assert!(err < 0.005 * PI, "raster measure off by {err}");
    }

    #[test]
    fn empty_region_rasterizes_empty() {
        let empty = SetRegion::disk_union(2, vec![]).unwrap();
        let r = rasterize(&empty, 0.1).unwrap();
        assert_eq!(r.occupied_count(), 0);
        assert_eq!(r.measure(), 0.0);
        assert!(r.diameter().is_err());
    }

    #[test]
    fn raster_diameter_brackets_true_diameter() {
        let r = rasterize(&unit_disk(), 0.01).unwrap();
        let d = r.diameter().unwrap();
        let slack = 2.0 * 0.01 * 2f64.sqrt();
        assert!(d >= 2.0 - slack && d <= 2.0 + slack, "diameter {d}");
    }

    #[test]
    fn raster_text_round_trip() {
        let r = rasterize(&unit_disk(), 0.05).unwrap();
        let text = r.to_text();
        assert!(text.starts_with("RASTER h=0.05 "));
        let back = CartesianRaster::from_text(&text).unwrap();
        assert_eq!(r, back);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn malformed_raster_text_is_rejected() {
        assert!(CartesianRaster::from_text("").is_err());
        assert!(CartesianRaster::from_text("RASTER h=0.1 w=2 ht=1 ox=0\n01\n").is_err());
        assert!(CartesianRaster::from_text("RASTER h=0.1 w=2 ht=1 ox=0 oy=0\n012\n").is_err());
        assert!(CartesianRaster::from_text("RASTER h=0.1 w=2 ht=2 ox=0 oy=0\n01\n").is_err());
        assert!(CartesianRaster::from_text("RASTER h=0.1 w=2 ht=1 ox=0 oy=0\n0x\n").is_err());
    }

    #[test]
    fn polar_measure_of_annulus_is_exact_midpoint_sum() {
        // Midpoint areas telescope: sum over full rings of
        // r_mid dr dth sectors = pi (r_max^2 - r_min^2) exactly.
        let p = to_polar(&annulus_region(2.0, 3.0), 2.0, 3.0, 0.05, 0.02).unwrap();
        assert_eq!(p.occupied_count(), p.rings * p.sectors);
        assert!((p.measure() - 5.0 * PI).abs() < 1e-9, "measure {}", p.measure());
    }

    #[test]
    fn polar_snapping_covers_full_circle() {
        let p = PolarRaster::from_fn(2.0, 3.0, 0.33, 1.0, |_, _| true).unwrap();
        assert_eq!(p.rings, 3);
        assert!((p.dr * p.rings as f64 - 1.0).abs() < 1e-15);
        assert!((p.dth * p.sectors as f64 - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn polar_diameter_of_full_annulus() {
        let p = to_polar(&annulus_region(2.0, 3.0), 2.0, 3.0, 0.05, 0.02).unwrap();
        let d = p.diameter();
        assert!((d - 6.0).abs() < 0.1, "diameter {d}");
        assert!(d >= 6.0, "corner diameter must be conservative, got {d}");
    }

    #[test]
    fn polar_diameter_of_single_cell_is_its_diagonal() {
        let mut rows = vec![vec![false; 64]; 4];
        rows[1][3] = true;
        let p = PolarRaster::from_ring_rows(2.0, 2.4, &rows).unwrap();
        let corners = p.cell_corners(1, 3);
        let mut expect = 0.0f64;
        for a in &corners {
            for b in &corners {
                expect = expect.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
            }
        }
        assert!((p.diameter() - expect).abs() < 1e-12);
    }

    #[test]
    fn polar_text_round_trip() {
        let p = to_polar(&annulus_region(2.0, 2.5), 2.0, 2.5, 0.1, 0.5).unwrap();
        let text = p.to_text();
        assert!(text.starts_with("PRASTER 2 2.5 "));
        let back = PolarRaster::from_text(&text).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn window_detection() {
        let cap = SetRegion::new(
            2,
            vec![Disk::new(Point::xy(2.3, 0.0), 1.0)],
            vec![Clip::Annulus(2.0, 3.0)],
        )
        .unwrap();
        let p = to_polar(&cap, 2.0, 3.0, 0.02, 0.01).unwrap();
        assert!(p.within_half_window());
        let full = to_polar(&annulus_region(2.0, 3.0), 2.0, 3.0, 0.05, 0.02).unwrap();
        assert!(!full.within_half_window());
    }

    #[test]
    fn cartesian_to_polar_agrees_with_direct_polar() {
        let cap = SetRegion::new(
            2,
            vec![Disk::new(Point::xy(2.3, 0.0), 1.0)],
            vec![Clip::Annulus(2.0, 3.0)],
        )
        .unwrap();
        let direct = to_polar(&cap, 2.0, 3.0, 0.05, 0.05).unwrap();
        let via_cart = rasterize(&cap, 0.005)
            .unwrap()
            .to_polar(2.0, 3.0, 0.05, 0.05)
            .unwrap();
        // Center rules differ only near the boundary; measures agree to O(h).
        assert!((direct.measure() - via_cart.measure()).abs() < 0.05);
    }

    #[test]
    fn budget_is_enforced() {
        let r = rasterize(&unit_disk(), 1e-5);
        assert!(matches!(r, Err(Error::Resource(_))));
    }
}
