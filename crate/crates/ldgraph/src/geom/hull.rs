//! Planar convex hull and rotating-calipers farthest pair.

type P2 = [f64; 2];

fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn sqdist(a: P2, b: P2) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

/// Andrew monotone chain; returns hull vertices in counterclockwise
/// order without the closing repeat. Collinear points are dropped.
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| a[0] == b[0] && a[1] == b[1]);
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut lower: Vec<P2> = Vec::with_capacity(n);
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::with_capacity(n);
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend_from_slice(&upper);
    lower
}

/// Maximum pairwise distance via rotating calipers over the hull.
/// Returns 0 for fewer than two distinct points.
pub fn farthest_pair_distance(points: &[P2]) -> f64 {
    let hull = convex_hull(points);
    let n = hull.len();
    match n {
        0 | 1 => 0.0,
        2 => sqdist(hull[0], hull[1]).sqrt(),
        _ => {
            let mut best = 0.0f64;
            let mut j = 1;
            for i in 0..n {
                let edge_next = (i + 1) % n;
                // Advance j while the triangle area keeps growing.
                while cross(hull[i], hull[edge_next], hull[(j + 1) % n])
                    > cross(hull[i], hull[edge_next], hull[j])
                {
                    j = (j + 1) % n;
                }
                best = best.max(sqdist(hull[i], hull[j]));
                best = best.max(sqdist(hull[edge_next], hull[j]));
            }
            best.sqrt()
        }
    }
}
