//! One-dimensional interval-set algebra used by the section quadrature.
//!
//! An interval set is a sorted list of disjoint closed intervals.
//! Degenerate (zero-length) intervals are dropped; adjacency within
//! `MERGE_EPS` is merged so unions of tangent chords stay well formed.

const MERGE_EPS: f64 = 1e-14;

pub type IntervalSet = Vec<(f64, f64)>;

/// Normalizes an arbitrary list of intervals into a sorted disjoint set.
pub fn normalize(mut raw: Vec<(f64, f64)>) -> IntervalSet {
    raw.retain(|&(lo, hi)| hi - lo > 0.0);
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: IntervalSet = Vec::with_capacity(raw.len());
    for (lo, hi) in raw {
        match out.last_mut() {
            Some(last) if lo <= last.1 + MERGE_EPS => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Intersection of two sorted disjoint interval sets.
pub fn intersect(a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if hi - lo > 0.0 {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

pub fn total_length(set: &IntervalSet) -> f64 {
    set.iter().map(|&(lo, hi)| hi - lo).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_merges_overlaps() {
        let set = normalize(vec![(0.0, 1.0), (0.5, 2.0), (3.0, 4.0), (4.0, 5.0)]);
        assert_eq!(set, vec![(0.0, 2.0), (3.0, 5.0)]);
        assert!((total_length(&set) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn intersect_clips_pairs() {
        let a = normalize(vec![(0.0, 2.0), (3.0, 5.0)]);
        let b = normalize(vec![(1.0, 4.0)]);
        assert_eq!(intersect(&a, &b), vec![(1.0, 2.0), (3.0, 4.0)]);
        assert!(intersect(&a, &Vec::new()).is_empty());
    }

    #[test]
    fn degenerate_intervals_vanish() {
        assert!(normalize(vec![(1.0, 1.0), (2.0, 1.0)]).is_empty());
    }
}
