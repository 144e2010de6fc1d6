//! Unimodular maps and the pairwise equivalence test.
//!
//! Equivalence is decided by anchoring a vertex of the first polygon whose
//! adjacent triangle is minimal, trying every vertex of the second polygon
//! with the same adjacent-triangle area as its image, solving for the linear
//! part from the two incident edge vectors (in both pairings), and accepting
//! only integral matrices that carry the whole vertex cycle across.

use std::fmt;
use std::ops::{Add, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{ConvexLatticePolygon, LatticePoint};
use crate::invariants::adjacent_triangle_areas;

/// An affine map `p ↦ A·p + b` with integral `A`, `det A = ±1`, integral `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularMap {
    matrix: [[i64; 2]; 2],
    translation: LatticePoint,
}

impl UnimodularMap {
    pub const IDENTITY: UnimodularMap = UnimodularMap {
        matrix: [[1, 0], [0, 1]],
        translation: LatticePoint::ORIGIN,
    };

    /// Returns `None` unless `det matrix = ±1`.
    pub fn new(matrix: [[i64; 2]; 2], translation: LatticePoint) -> Option<Self> {
        let det = matrix[0][0] as i128 * matrix[1][1] as i128 - matrix[0][1] as i128 * matrix[1][0] as i128;
        (det == 1 || det == -1).then_some(Self { matrix, translation })
    }

    pub fn linear(matrix: [[i64; 2]; 2]) -> Option<Self> {
        Self::new(matrix, LatticePoint::ORIGIN)
    }

    pub fn translation_by(offset: LatticePoint) -> Self {
        Self {
            translation: offset,
            ..Self::IDENTITY
        }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn translation(&self) -> LatticePoint {
        self.translation
    }

    pub fn det(&self) -> i64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    #[inline]
    pub fn apply_linear(&self, p: LatticePoint) -> LatticePoint {
        let [[a, b], [c, d]] = self.matrix;
        LatticePoint::new(a * p.x + b * p.y, c * p.x + d * p.y)
    }

    #[inline]
    pub fn apply(&self, p: LatticePoint) -> LatticePoint {
        self.apply_linear(p).add(self.translation)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        let [[a, b], [c, d]] = self.matrix;
        let [[e, f], [g, h]] = other.matrix;
        UnimodularMap {
            matrix: [[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]],
            translation: self.apply(other.translation),
        }
    }

    pub fn inverse(&self) -> UnimodularMap {
        let [[a, b], [c, d]] = self.matrix;
        let det = self.det();
        // det = ±1, so A⁻¹ = det · adj(A)
        let inv = UnimodularMap {
            matrix: [[d * det, -b * det], [-c * det, a * det]],
            translation: LatticePoint::ORIGIN,
        };
        let t = inv.apply_linear(self.translation);
        UnimodularMap {
            translation: LatticePoint::new(-t.x, -t.y),
            ..inv
        }
    }

    /// Largest absolute matrix entry.
    pub fn max_entry(&self) -> i64 {
        self.matrix.iter().flatten().map(|e| e.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.matrix;
        write!(
            f,
            "A=[[{a},{b}],[{c},{d}]] b=({},{})",
            self.translation.x, self.translation.y
        )
    }
}

/// Image of a polygon under `map`, re-canonicalized.
pub fn apply_map(map: &UnimodularMap, polygon: &ConvexLatticePolygon) -> ConvexLatticePolygon {
    let mut points: Vec<LatticePoint> = polygon.points().iter().map(|&p| map.apply(p)).collect();
    points.sort_unstable();
    let mut hull: Vec<LatticePoint> = polygon.hull().iter().map(|&p| map.apply(p)).collect();
    if map.det() < 0 {
        hull.reverse();
    }
    let start = hull
        .iter()
        .enumerate()
        .min_by_key(|(_, p)| **p)
        .map(|(i, _)| i)
        .unwrap_or(0);
    hull.rotate_left(start);
    ConvexLatticePolygon::from_parts(points, hull)
}

/// Solves `A·a = c`, `A·b = d` for an integral unimodular `A`.
fn solve_integral(a: LatticePoint, b: LatticePoint, c: LatticePoint, d: LatticePoint) -> Option<[[i64; 2]; 2]> {
    let det = a.x as i128 * b.y as i128 - a.y as i128 * b.x as i128;
    if det == 0 {
        return None;
    }
    // A = [c d] · adj([a b]) / det
    let (ax, ay, bx, by) = (a.x as i128, a.y as i128, b.x as i128, b.y as i128);
    let (cx, cy, dx, dy) = (c.x as i128, c.y as i128, d.x as i128, d.y as i128);
    let num = [
        [cx * by - dx * ay, -cx * bx + dx * ax],
        [cy * by - dy * ay, -cy * bx + dy * ax],
    ];
    let mut out = [[0i64; 2]; 2];
    for (row, num_row) in out.iter_mut().zip(num.iter()) {
        for (entry, &n) in row.iter_mut().zip(num_row.iter()) {
            if n % det != 0 {
                return None;
            }
            *entry = i64::try_from(n / det).ok()?;
        }
    }
    let m = out;
    let det_a = m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128;
    (det_a == 1 || det_a == -1).then_some(m)
}

/// Does `matrix` send the cycle of `h1` anchored at `i` onto the cycle of
/// `h2` anchored at `j`, walking `h2` forwards (`reversed = false`) or
/// backwards?
fn maps_cycle(
    matrix: [[i64; 2]; 2],
    h1: &[LatticePoint],
    i: usize,
    h2: &[LatticePoint],
    j: usize,
    reversed: bool,
) -> bool {
    let n = h1.len();
    let [[a, b], [c, d]] = matrix;
    let (o1, o2) = (h1[i], h2[j]);
    (1..n).all(|k| {
        let p = h1[(i + k) % n].sub(o1);
        let q_idx = if reversed { (j + n - k) % n } else { (j + k) % n };
        let q = h2[q_idx].sub(o2);
        a * p.x + b * p.y == q.x && c * p.x + d * p.y == q.y
    })
}

/// Finds a unimodular map carrying `p1` onto `p2`, if one exists.
pub fn find_unimodular_map(p1: &ConvexLatticePolygon, p2: &ConvexLatticePolygon) -> Option<UnimodularMap> {
    if p1.len() != p2.len() || p1.f0() != p2.f0() {
        return None;
    }
    let (h1, h2) = (p1.hull(), p2.hull());
    let n = h1.len();
    let tr1 = adjacent_triangle_areas(p1);
    let tr2 = adjacent_triangle_areas(p2);
    let (anchor, &s1) = tr1.iter().enumerate().min_by_key(|(_, t)| **t)?;

    let prev1 = h1[(anchor + n - 1) % n].sub(h1[anchor]);
    let next1 = h1[(anchor + 1) % n].sub(h1[anchor]);

    for j in (0..n).filter(|&j| tr2[j] == s1) {
        let prev2 = h2[(j + n - 1) % n].sub(h2[j]);
        let next2 = h2[(j + 1) % n].sub(h2[j]);
        let candidates = [
            (solve_integral(prev1, next1, prev2, next2), false),
            (solve_integral(prev1, next1, next2, prev2), true),
        ];
        for (matrix, reversed) in candidates {
            let Some(matrix) = matrix else { continue };
            if maps_cycle(matrix, h1, anchor, h2, j, reversed) {
                let linear = UnimodularMap::linear(matrix)?;
                let image = linear.apply_linear(h1[anchor]);
                return UnimodularMap::new(matrix, h2[j].sub(image));
            }
        }
    }
    None
}

pub fn are_equivalent(p1: &ConvexLatticePolygon, p2: &ConvexLatticePolygon) -> bool {
    find_unimodular_map(p1, p2).is_some()
}

const SIGNED_PERMUTATIONS: [[[i64; 2]; 2]; 8] = [
    [[1, 0], [0, 1]],
    [[-1, 0], [0, 1]],
    [[1, 0], [0, -1]],
    [[-1, 0], [0, -1]],
    [[0, 1], [1, 0]],
    [[0, -1], [1, 0]],
    [[0, 1], [-1, 0]],
    [[0, -1], [-1, 0]],
];

/// Deterministic pseudo-random unimodular map with matrix entries bounded
/// by `entry_bound` in absolute value.
///
/// Built from a signed permutation followed by up to `4·(entry_bound − 1)`
/// elementary shears, each kept only if the entries stay in bounds, plus a
/// translation with coordinates in `[−4·entry_bound, 4·entry_bound]`.
pub fn random_unimodular_map(seed: u64, entry_bound: i64) -> UnimodularMap {
    let bound = entry_bound.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut map = UnimodularMap::linear(SIGNED_PERMUTATIONS[rng.gen_range(0..8)]).unwrap();
    let steps = rng.gen_range(0..=4 * (bound - 1).min(8));
    for _ in 0..steps {
        let k = if rng.gen_bool(0.5) { 1 } else { -1 };
        let shear = if rng.gen_bool(0.5) {
            [[1, k], [0, 1]]
        } else {
            [[1, 0], [k, 1]]
        };
        let next = UnimodularMap::linear(shear).unwrap().compose(&map);
        if next.max_entry() <= bound {
            map = next;
        }
    }
    let t = 4 * bound;
    map.translation = LatticePoint::new(rng.gen_range(-t..=t), rng.gen_range(-t..=t));
    map
}
