//! The five unimodular invariants and their two-level comparison.

use serde::{Deserialize, Serialize};
use std::ops::Sub;

use crate::geometry::{cross, ConvexLatticePolygon};

/// Invariant signature of a polygon.
///
/// `sides` counts lattice points per side including both endpoints, so
/// every entry is at least 2. `tr2` holds the doubled area of the triangle
/// formed by each vertex and its two neighbours. Both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantVector {
    pub f0: usize,
    pub bound: u64,
    pub area2: i128,
    pub sides: Vec<u64>,
    pub tr2: Vec<i128>,
}

impl InvariantVector {
    pub fn first_level(&self) -> (usize, u64, i128) {
        (self.f0, self.bound, self.area2)
    }

    pub fn second_level(&self) -> (&[u64], &[i128]) {
        (&self.sides, &self.tr2)
    }
}

/// Doubled adjacent-triangle area at every hull vertex, in hull order.
pub fn adjacent_triangle_areas(polygon: &ConvexLatticePolygon) -> Vec<i128> {
    let hull = polygon.hull();
    let n = hull.len();
    (0..n)
        .map(|i| cross(hull[(i + n - 1) % n], hull[i], hull[(i + 1) % n]))
        .collect()
}

pub fn compute_invariants(polygon: &ConvexLatticePolygon) -> InvariantVector {
    let hull = polygon.hull();
    let n = hull.len();
    let mut sides: Vec<u64> = (0..n).map(|i| hull[(i + 1) % n].sub(hull[i]).content() + 1).collect();
    let bound = sides.iter().map(|s| s - 1).sum();
    sides.sort_unstable();
    let mut tr2 = adjacent_triangle_areas(polygon);
    tr2.sort_unstable();
    InvariantVector {
        f0: n,
        bound,
        area2: polygon.doubled_area(),
        sides,
        tr2,
    }
}

/// Two-level comparison: the second level is only inspected when the
/// first level agrees.
pub fn compare_invariants(a: &InvariantVector, b: &InvariantVector) -> bool {
    if a.first_level() != b.first_level() {
        return false;
    }
    a.second_level() == b.second_level()
}

/// Exact hash key for an invariant vector. Two keys are equal iff
/// [`compare_invariants`] holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BucketKey(Box<[i128]>);

pub fn bucket_key(inv: &InvariantVector) -> BucketKey {
    // f0 fixes both list lengths, so the flat layout is injective
    let mut flat = Vec::with_capacity(3 + 2 * inv.f0);
    flat.push(inv.f0 as i128);
    flat.push(inv.bound as i128);
    flat.push(inv.area2);
    flat.extend(inv.sides.iter().map(|&s| s as i128));
    flat.extend_from_slice(&inv.tr2);
    BucketKey(flat.into_boxed_slice())
}
