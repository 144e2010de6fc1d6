#![allow(dead_code)]

use latpoly::geometry::{ConvexLatticePolygon, LatticePoint};
use proptest::prelude::*;

/// Published class counts for `w = 3, 4, …` in the discs of radius 2, 3, 4.
pub const DISC_2: [u64; 11] = [1, 3, 6, 11, 15, 16, 12, 6, 3, 1, 1];
pub const DISC_3: [u64; 27] = [
    1, 3, 6, 13, 21, 40, 62, 95, 143, 220, 297, 389, 462, 514, 512, 463, 380, 280, 192, 123, 75, 40, 21, 11, 6, 2, 1,
];
pub const DISC_4: [u64; 47] = [
    1, 3, 6, 13, 21, 41, 67, 110, 170, 268, 386, 584, 846, 1223, 1695, 2346, 3111, 4132, 5383, 6898, 8558, 10392,
    12198, 14001, 15589, 16726, 17165, 16998, 16185, 14771, 12967, 10950, 8899, 6918, 5186, 3696, 2537, 1640, 1023,
    583, 324, 162, 83, 31, 12, 2, 1,
];
/// The plotted value at w = 27 for the radius-4 disc, which differs from the table.
pub const DISC_4_W27_PLOTTED: u64 = 15598;

pub fn published(table: &[u64]) -> Vec<(usize, u64)> {
    table.iter().enumerate().map(|(i, &c)| (i + 3, c)).collect()
}

pub fn poly(v: &[(i64, i64)]) -> ConvexLatticePolygon {
    let pts: Vec<LatticePoint> = v.iter().map(|&p| p.into()).collect();
    ConvexLatticePolygon::from_generators(&pts).unwrap()
}

/// Closure of 3..=max random generators in `[-h, h]²`; rejects collinear draws.
pub fn arb_polygon(h: i64, max: usize) -> impl Strategy<Value = ConvexLatticePolygon> {
    prop::collection::vec((-h..=h, -h..=h), 3..=max).prop_filter_map("degenerate", |v| {
        let pts: Vec<LatticePoint> = v.into_iter().map(LatticePoint::from).collect();
        ConvexLatticePolygon::from_generators(&pts).ok()
    })
}

/// Deterministic pseudo-random closed polygon for plain loops.
pub fn seeded_polygon(seed: u64, h: i64) -> ConvexLatticePolygon {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(3..=7);
        let pts: Vec<LatticePoint> = (0..n)
            .map(|_| LatticePoint::new(rng.gen_range(-h..=h), rng.gen_range(-h..=h)))
            .collect();
        if let Ok(p) = ConvexLatticePolygon::from_generators(&pts) {
            return p;
        }
    }
}
