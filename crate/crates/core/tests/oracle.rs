mod common;

use common::{arb_polygon, published, seeded_polygon, DISC_2};
use latpoly::bruteforce::{classify_bruteforce, enumerate_bruteforce, BoundedMatrixOracle};
use latpoly::enumerator::{enumerate_classes, EnumerationOptions};
use latpoly::equivalence::{apply_map, find_unimodular_map, random_unimodular_map};
use latpoly::geometry::{ConvexLatticePolygon, LatticePoint};
use latpoly::region::{lattice_points_in_region, Region};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::ops::Sub;

fn fast(region: &Region) -> Vec<(usize, u64)> {
    enumerate_classes(region, &EnumerationOptions::default())
        .unwrap()
        .0
        .counts()
}

/// A random convex lattice set in `[-3, 3]²` with at most `limit` points.
fn random_point_region(seed: u64, limit: usize) -> Region {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(3..=6);
        let gens: Vec<LatticePoint> = (0..n)
            .map(|_| LatticePoint::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
            .collect();
        let Ok(p) = ConvexLatticePolygon::from_generators(&gens) else {
            continue;
        };
        if p.len() <= limit && p.len() >= 5 {
            let mut pts = p.points().to_vec();
            pts.shuffle(&mut rng);
            return Region::points(pts);
        }
    }
}

#[test]
fn bruteforce_disc_two_matches_published_table() {
    let brute = enumerate_bruteforce(&Region::disc(2)).unwrap();
    assert_eq!(brute.counts(), published(&DISC_2));
    assert_eq!(brute.total(), 75);
    assert_eq!(fast(&Region::disc(2)), brute.counts());
}

#[test]
fn disc_one_agrees() {
    let brute = enumerate_bruteforce(&Region::disc(1)).unwrap();
    assert_eq!(fast(&Region::disc(1)), brute.counts());
    // unit triangle, the triangle with one doubled side, the diamond itself
    assert_eq!(brute.counts(), vec![(3, 1), (4, 1), (5, 1)]);
}

#[test]
fn random_point_sets_agree() {
    for seed in 0..8 {
        let region = random_point_region(seed, 14);
        let brute = enumerate_bruteforce(&region).unwrap();
        assert_eq!(fast(&region), brute.counts(), "seed {seed}: {region}");
    }
}

#[test]
fn bruteforce_classes_are_pairwise_inequivalent_under_eq() {
    let (_, reps) = classify_bruteforce(&Region::disc(2)).unwrap();
    for level in reps.values() {
        for (i, a) in level.iter().enumerate() {
            for b in &level[i + 1..] {
                assert!(find_unimodular_map(a, b).is_none());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn eq_agrees_with_bounded_matrix_sweep(p in arb_polygon(3, 7), q in arb_polygon(3, 7)) {
        let oracle = BoundedMatrixOracle::for_box(3);
        let slow = oracle.find_map(&oracle.prepare(&p), &q);
        prop_assert_eq!(find_unimodular_map(&p, &q).is_some(), slow.is_some());
        if let Some(m) = slow {
            prop_assert_eq!(apply_map(&m, &p), q);
        }
    }
}

#[test]
fn eq_agrees_with_sweep_on_equivalent_pairs_in_box() {
    let oracle = BoundedMatrixOracle::for_box(3);
    let mut checked = 0;
    for seed in 0..400u64 {
        let p = seeded_polygon(seed, 2);
        let image = apply_map(&random_unimodular_map(seed ^ 0xabc, 2), &p);
        let (xs, ys): (Vec<i64>, Vec<i64>) = image.points().iter().map(|c| (c.x, c.y)).unzip();
        let centre = LatticePoint::new(
            (xs.iter().min().unwrap() + xs.iter().max().unwrap()).div_euclid(2),
            (ys.iter().min().unwrap() + ys.iter().max().unwrap()).div_euclid(2),
        );
        let q = image.translate(LatticePoint::ORIGIN.sub(centre));
        if q.points().iter().any(|c| c.x.abs() > 3 || c.y.abs() > 3) {
            continue;
        }
        assert!(find_unimodular_map(&p, &q).is_some());
        assert!(oracle.equivalent(&p, &q), "seed {seed}");
        checked += 1;
    }
    assert!(checked >= 50, "only {checked} images stayed in the box");
}

#[test]
fn explicit_regions_are_closed_under_hull() {
    let region = random_point_region(3, 14);
    let pts = lattice_points_in_region(&region).unwrap();
    let hull = ConvexLatticePolygon::from_generators(&pts).unwrap();
    assert_eq!(hull.points(), pts.as_slice());
}
