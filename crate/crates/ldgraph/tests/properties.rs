//! Randomized property tests for the structural invariants: measure
//! arithmetic, raster diameter brackets, isodiametric bounds, polar
//! regridding, symmetrization, graphon monotonicity, witness
//! exactness, and Monte Carlo reproducibility.

use ldgraph::bounds::{lens_area, BoundLedger, Z_MAX, Z_MIN};
use ldgraph::geom::{Disk, Point, SetRegion};
use ldgraph::graph::{
    clique_witness_region, edge_measure_mc, graphon_density, MotifGraph, StepGraphon,
};
use ldgraph::raster::{rasterize, to_polar, PolarRaster};
use ldgraph::symmetry::circular_symmetrize;
use proptest::prelude::*;
use std::f64::consts::PI;

fn disk_strategy(c_range: f64, r_lo: f64, r_hi: f64) -> impl Strategy<Value = Disk> {
    (
        -c_range..c_range,
        -c_range..c_range,
        r_lo..r_hi,
    )
        .prop_map(|(x, y, r)| Disk::new(Point::xy(x, y), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Union measure of disks forced apart equals the sum of areas.
    #[test]
    fn measure_is_additive_on_disjoint_disks(
        r1 in 0.3f64..1.2,
        r2 in 0.3f64..1.2,
        gap in 0.05f64..1.5,
    ) {
        let a = Disk::new(Point::xy(0.0, 0.0), r1);
        let b = Disk::new(Point::xy(r1 + r2 + gap, 0.0), r2);
        let s = SetRegion::disk_union(2, vec![a, b]).unwrap();
        let m = s.measure().unwrap();
        let exact = PI * (r1 * r1 + r2 * r2);
        prop_assert!((m - exact).abs() < 5e-5, "union {m} vs sum {exact}");
    }

    /// Adding a disk never shrinks the measure.
    #[test]
    fn measure_is_monotone_under_adding_disks(
        base in disk_strategy(1.5, 0.3, 1.0),
        extra in disk_strategy(1.5, 0.3, 1.0),
    ) {
        let small = SetRegion::disk_union(2, vec![base.clone()]).unwrap();
        let big = SetRegion::disk_union(2, vec![base, extra]).unwrap();
        let ms = small.measure().unwrap();
        let mb = big.measure().unwrap();
        prop_assert!(mb >= ms - 5e-5, "grew region shrank: {mb} < {ms}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Raster diameter brackets the true diameter for a convex set.
    #[test]
    fn raster_diameter_brackets_disk_diameter(
        d in disk_strategy(1.0, 0.4, 1.5),
        h in prop::sample::select(vec![0.02f64, 0.05, 0.1]),
    ) {
        let s = SetRegion::disk_union(2, vec![d.clone()]).unwrap();
        let raster = rasterize(&s, h).unwrap();
        let slack = 2.0 * h * std::f64::consts::SQRT_2;
        let truth = 2.0 * d.radius;
        let got = raster.diameter().unwrap();
        prop_assert!(got >= truth - slack, "raster {got} below {truth} - {slack}");
        prop_assert!(got <= truth + slack, "raster {got} above {truth} + {slack}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    /// Planar isodiametric inequality: diameter <= 2 forces measure <= pi.
    #[test]
    fn diameter_two_unions_never_beat_the_disk(
        seeds in prop::collection::vec((0.1f64..0.7, 0.0f64..1.0, 0.0f64..std::f64::consts::TAU), 1..4),
    ) {
        let disks: Vec<Disk> = seeds
            .into_iter()
            .map(|(rad, frac, th)| {
                let c = frac * (1.0 - rad);
                Disk::new(Point::xy(c * th.cos(), c * th.sin()), rad)
            })
            .collect();
        let s = SetRegion::disk_union(2, disks).unwrap();
        prop_assert!(s.diameter().unwrap() <= 2.0 + 1e-9);
        prop_assert!(s.measure().unwrap() <= PI + 1e-4);
    }

    /// Quadrature and polar cell counting agree within grid error.
    #[test]
    fn polar_regridding_preserves_measure(
        cx in 2.3f64..2.8,
        cy in -0.2f64..0.2,
        rad in 0.5f64..1.0,
    ) {
        let s = SetRegion::disk_union(2, vec![Disk::new(Point::xy(cx, cy), rad)]).unwrap();
        let p = to_polar(&s, 1.0, 4.0, 0.004, 0.002).unwrap();
        let quad = s.measure().unwrap();
        let polar = p.measure();
        // Boundary band: perimeter times the largest cell extent.
        let slack = 2.0 * PI * rad * (0.004f64).max(4.0 * 0.002) * 2.0;
        prop_assert!((quad - polar).abs() < slack, "quad {quad} vs polar {polar} (slack {slack})");
    }
}

fn random_polar_rows() -> impl Strategy<Value = Vec<Vec<bool>>> {
    prop::collection::vec(prop::collection::vec(any::<bool>(), 48), 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Circular symmetrization: exact per-ring counts, idempotence,
    /// and reflection symmetry up to the odd-count tie cell.
    #[test]
    fn circular_symmetrization_contracts(rows in random_polar_rows()) {
        let p = PolarRaster::from_ring_rows(2.0, 2.6, &rows).unwrap();
        let once = circular_symmetrize(&p);
        let twice = circular_symmetrize(&once);
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(p.measure(), once.measure());
        for ring in 0..p.rings {
            prop_assert_eq!(p.ring_count(ring), once.ring_count(ring));
            let occupied: Vec<usize> =
                (0..once.sectors).filter(|&j| once.get(ring, j)).collect();
            // Contiguous run.
            if let (Some(&lo), Some(&hi)) = (occupied.first(), occupied.last()) {
                prop_assert_eq!(hi - lo + 1, occupied.len());
            }
            // Mirror symmetry up to one tie cell.
            let asym = (0..once.sectors)
                .filter(|&j| once.get(ring, j) != once.get(ring, once.sectors - 1 - j))
                .count();
            prop_assert!(asym <= 2, "ring {} has {} asymmetric cells", ring, asym);
        }
    }

    /// Ledger rows stay finite and internally consistent on the
    /// closed-form domain.
    #[test]
    fn ledger_rows_are_consistent(t in 0.0f64..=1.0) {
        let z = Z_MIN + t * (Z_MAX - Z_MIN);
        let row = BoundLedger::evaluate(z).unwrap();
        for v in [row.a, row.g, row.h, row.f, row.f_prime, row.h_residual] {
            prop_assert!(v.is_finite());
        }
        prop_assert!((0.0..=1.0).contains(&row.a));
        prop_assert!((row.f - 2.0 * (row.g + row.h)).abs() < 1e-12);
        prop_assert!((lens_area(z).unwrap() - 2.0 * row.g).abs() < 1e-12);
        prop_assert!(row.h_residual.abs() < 1e-9);
        prop_assert!(row.f_prime > 0.0 || z > Z_MAX - 1e-9);
    }

    /// Graphon density never increases when the motif gains an edge.
    #[test]
    fn graphon_density_is_monotone_in_motif_edges(
        w01 in 0.0f64..=1.0,
        w02 in 0.0f64..=1.0,
        w12 in 0.0f64..=1.0,
        split in 0.2f64..0.8,
        edges in prop::collection::vec((1u8..=4, 1u8..=4), 0..5),
    ) {
        let weights = vec![split / 2.0, split / 2.0, 1.0 - split];
        let values = vec![
            vec![0.0, w01, w02],
            vec![w01, 0.0, w12],
            vec![w02, w12, 0.0],
        ];
        let g = StepGraphon::new(weights, values).unwrap();
        let clean: Vec<(u8, u8)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .collect();
        let base = MotifGraph::new(4, clean.clone()).unwrap();
        let t_base = graphon_density(&g, &base).unwrap();
        for u in 1u8..=4 {
            for v in (u + 1)..=4 {
                let mut more = clean.clone();
                more.push((u, v));
                let denser = MotifGraph::new(4, more).unwrap();
                let t_more = graphon_density(&g, &denser).unwrap();
                prop_assert!(
                    t_more <= t_base + 1e-12,
                    "adding ({u},{v}) raised density {t_base} -> {t_more}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Any returned clique witness satisfies the strict pairwise
    /// distance condition exactly.
    #[test]
    fn clique_witnesses_are_exact(
        gap in 2.2f64..4.0,
        rad in 0.2f64..0.5,
        k in 2usize..=3,
    ) {
        // k small disks pairwise far apart guarantee a witness.
        let disks: Vec<Disk> = (0..k)
            .map(|i| Disk::new(Point::xy(i as f64 * (gap + 2.0 * rad), 0.0), rad))
            .collect();
        let s = SetRegion::disk_union(2, disks).unwrap();
        let outcome = clique_witness_region(&s, k, 0.1).unwrap();
        let witness = outcome.witness.expect("far disks must yield a witness");
        prop_assert_eq!(witness.len(), k);
        for i in 0..k {
            for j in i + 1..k {
                let dist = witness[i].dist(&witness[j]);
                prop_assert!(dist > 2.0, "witness pair at distance {}", dist);
                prop_assert!(s.contains(&witness[i]));
            }
        }
    }

    /// Monte Carlo estimates are a pure function of (scene, seed,
    /// samples).
    #[test]
    fn monte_carlo_is_reproducible(
        seed in any::<u64>(),
        samples in 1_000u64..10_000,
        sep in 2.5f64..4.0,
    ) {
        let s = SetRegion::disk_union(
            2,
            vec![
                Disk::new(Point::xy(0.0, 0.0), 1.0),
                Disk::new(Point::xy(sep + 2.0, 0.0), 1.0),
            ],
        )
        .unwrap();
        let a = edge_measure_mc(&s, 2.0, samples, seed).unwrap();
        let b = edge_measure_mc(&s, 2.0, samples, seed).unwrap();
        prop_assert_eq!(a.value, b.value);
        prop_assert_eq!(a.std_error, b.std_error);
        prop_assert_eq!(a.samples, samples);
        prop_assert!(a.std_error >= 0.0);
    }
}
