//! Exact integer primitives for convex lattice polygons.
//!
//! Everything here works on `i64` coordinates with `i128` intermediates, so
//! coordinates up to `2^31` in magnitude never overflow. Areas are always
//! stored doubled so they stay integral.

use std::fmt;
use std::ops::{Add, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    #[inline]
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Multiplies both coordinates by `k`.
    #[inline]
    pub fn scale(self, k: i64) -> LatticePoint {
        LatticePoint::new(self.x * k, self.y * k)
    }

    /// Gcd of the absolute coordinates; 1 means the vector is primitive.
    pub fn content(self) -> u64 {
        self.x.unsigned_abs().gcd(&self.y.unsigned_abs())
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;

    #[inline]
    fn add(self, other: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + other.x, self.y + other.y)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;

    #[inline]
    fn sub(self, other: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - other.x, self.y - other.y)
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([x, y]: [i64; 2]) -> Self {
        LatticePoint::new(x, y)
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint::new(x, y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Cross product of `a - o` and `b - o`. Positive for a left turn.
#[inline]
pub fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i128 {
    let (ax, ay) = (a.x as i128 - o.x as i128, a.y as i128 - o.y as i128);
    let (bx, by) = (b.x as i128 - o.x as i128, b.y as i128 - o.y as i128);
    ax * by - ay * bx
}

/// Andrew's monotone chain over points that are already sorted and deduplicated.
/// Returns strict vertices, counterclockwise, starting at `sorted[0]`.
fn monotone_chain(sorted: &[LatticePoint]) -> Vec<LatticePoint> {
    if sorted.len() < 2 {
        return sorted.to_vec();
    }
    let mut hull: Vec<LatticePoint> = Vec::with_capacity(sorted.len() + 1);
    for &p in sorted {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in sorted.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    // the last point pushed is sorted[0] again
    hull.pop();
    hull
}

/// Strict convex hull vertices of `points`, counterclockwise from the
/// lexicographically smallest vertex. Collinear boundary points are dropped.
pub fn convex_hull(points: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let hull = monotone_chain(&sorted);
    if hull.len() < 3 {
        return Err(Error::DimensionTooLow);
    }
    Ok(hull)
}

/// Twice the area of a counterclockwise cycle (shoelace sum).
pub fn doubled_area(hull: &[LatticePoint]) -> i128 {
    if hull.len() < 3 {
        return 0;
    }
    let origin = hull[0];
    hull.windows(2)
        .skip(1)
        .map(|w| cross(origin, w[0], w[1]))
        .sum::<i128>()
        .max(0)
}

/// Number of lattice points on the closed segment `[p, q]`.
pub fn segment_lattice_count(p: LatticePoint, q: LatticePoint) -> Result<u64> {
    if p == q {
        return Err(Error::DegenerateSegment);
    }
    Ok(q.sub(p).content() + 1)
}

/// Lattice points on the boundary of `polygon`, each counted once.
pub fn boundary_lattice_count(polygon: &ConvexLatticePolygon) -> u64 {
    cycle_boundary_count(&polygon.hull)
}

fn cycle_boundary_count(hull: &[LatticePoint]) -> u64 {
    let n = hull.len();
    (0..n).map(|i| hull[(i + 1) % n].sub(hull[i]).content()).sum()
}

#[inline]
fn inside_ccw(hull: &[LatticePoint], r: LatticePoint) -> bool {
    let n = hull.len();
    (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], r) >= 0)
}

/// All lattice points inside or on a counterclockwise hull, sorted.
pub fn lattice_points_in_hull(hull: &[LatticePoint]) -> Vec<LatticePoint> {
    if hull.is_empty() {
        return Vec::new();
    }
    let (min_x, max_x) = hull
        .iter()
        .fold((i64::MAX, i64::MIN), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
    let (min_y, max_y) = hull
        .iter()
        .fold((i64::MAX, i64::MIN), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)));
    let mut out = Vec::new();
    for x in min_x..=max_x {
        for y in min_y..=max_y {
            let r = LatticePoint::new(x, y);
            if inside_ccw(hull, r) {
                out.push(r);
            }
        }
    }
    out
}

/// A full-dimensional convex lattice polygon, carried with its complete
/// lattice-point set.
///
/// Layout is canonical: `points` sorted lexicographically, `hull`
/// counterclockwise from the lexicographically smallest vertex. Structural
/// equality is therefore point-set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexLatticePolygon {
    points: Vec<LatticePoint>,
    hull: Vec<LatticePoint>,
}

impl ConvexLatticePolygon {
    /// Assembles a polygon from a closed point set and its hull. Both must
    /// already be in canonical layout.
    pub(crate) fn from_parts(points: Vec<LatticePoint>, hull: Vec<LatticePoint>) -> Self {
        let polygon = Self { points, hull };
        debug_assert!(polygon.hull.len() >= 3);
        debug_assert!(polygon.is_pick_consistent(), "Pick's formula fails for {polygon:?}");
        polygon
    }

    /// Builds the polygon `conv(hull) ∩ Z²` from arbitrary generating points.
    pub fn from_generators(points: &[LatticePoint]) -> Result<Self> {
        let hull = convex_hull(points)?;
        let points = lattice_points_in_hull(&hull);
        Ok(Self::from_parts(points, hull))
    }

    /// Removes `v` from the point set. `v` must be a vertex, which keeps the
    /// remainder closed. Returns `None` when the remainder is degenerate.
    pub(crate) fn without_vertex(&self, v: LatticePoint) -> Option<Self> {
        let idx = self.points.binary_search(&v).ok()?;
        let mut points = Vec::with_capacity(self.points.len() - 1);
        points.extend_from_slice(&self.points[..idx]);
        points.extend_from_slice(&self.points[idx + 1..]);
        let hull = monotone_chain(&points);
        if hull.len() < 3 {
            return None;
        }
        Some(Self::from_parts(points, hull))
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn hull(&self) -> &[LatticePoint] {
        &self.hull
    }

    /// Cardinality `|P|`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of vertices `f₀(P)`.
    pub fn f0(&self) -> usize {
        self.hull.len()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn is_vertex(&self, p: LatticePoint) -> bool {
        self.hull.contains(&p)
    }

    pub fn doubled_area(&self) -> i128 {
        doubled_area(&self.hull)
    }

    pub fn boundary_count(&self) -> u64 {
        cycle_boundary_count(&self.hull)
    }

    pub fn interior_count(&self) -> u64 {
        self.points.len() as u64 - self.boundary_count()
    }

    /// `2A = 2I + B - 2`.
    pub fn is_pick_consistent(&self) -> bool {
        let b = self.boundary_count() as i128;
        let i = self.points.len() as i128 - b;
        i >= 0 && self.doubled_area() == 2 * i + b - 2
    }

    /// Translates by `offset`. Canonical layout is preserved.
    pub fn translate(&self, offset: LatticePoint) -> Self {
        Self {
            points: self.points.iter().map(|p| p.add(offset)).collect(),
            hull: self.hull.iter().map(|p| p.add(offset)).collect(),
        }
    }
}

/// Validates that `points` is exactly `conv(points) ∩ Z²` with positive area,
/// and returns it in canonical layout.
pub fn make_polygon(points: &[LatticePoint]) -> Result<ConvexLatticePolygon> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let hull = monotone_chain(&sorted);
    if hull.len() < 3 {
        return Err(Error::DimensionTooLow);
    }
    let closure = lattice_points_in_hull(&hull);
    if closure.len() != sorted.len() {
        return Err(Error::NotClosed {
            missing: closure.len() - sorted.len(),
        });
    }
    debug_assert_eq!(closure, sorted);
    Ok(ConvexLatticePolygon::from_parts(sorted, hull))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn disc(r2: i64) -> Vec<LatticePoint> {
        let r = (r2 as f64).sqrt() as i64 + 1;
        let mut out = Vec::new();
        for x in -r..=r {
            for y in -r..=r {
                if x * x + y * y <= r2 {
                    out.push(LatticePoint::new(x, y));
                }
            }
        }
        out
    }

    /// Brute-force hull vertices: p is a vertex iff it is not in the closed
    /// convex hull of the others, checked via every triangle and segment.
    fn brute_vertices(points: &[LatticePoint]) -> Vec<LatticePoint> {
        let in_tri = |a: LatticePoint, b: LatticePoint, c: LatticePoint, p: LatticePoint| {
            let d1 = cross(a, b, p);
            let d2 = cross(b, c, p);
            let d3 = cross(c, a, p);
            let neg = d1 < 0 || d2 < 0 || d3 < 0;
            let pos = d1 > 0 || d2 > 0 || d3 > 0;
            !(neg && pos)
        };
        let mut out = Vec::new();
        for &p in points {
            let others: Vec<_> = points.iter().copied().filter(|&q| q != p).collect();
            let mut covered = false;
            'outer: for i in 0..others.len() {
                for j in i + 1..others.len() {
                    for k in j + 1..others.len() {
                        let (a, b, c) = (others[i], others[j], others[k]);
                        if cross(a, b, c) != 0 && in_tri(a, b, c, p) {
                            covered = true;
                            break 'outer;
                        }
                    }
                    // on the open segment between two others
                    let (a, b) = (others[i], others[j]);
                    if cross(a, b, p) == 0 && (p.x - a.x) * (p.x - b.x) <= 0 && (p.y - a.y) * (p.y - b.y) <= 0 {
                        covered = true;
                        break 'outer;
                    }
                }
            }
            if !covered {
                out.push(p);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn hull_of_unit_triangle() {
        let h = convex_hull(&pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(h, pts(&[(0, 0), (1, 0), (0, 1)]));
    }

    #[test]
    fn hull_of_disc_two_skips_collinear_points() {
        let all = disc(4);
        assert_eq!(all.len(), 13);
        let h = convex_hull(&all).unwrap();
        assert_eq!(h, pts(&[(-2, 0), (0, -2), (2, 0), (0, 2)]));
        let mut sorted = h.clone();
        sorted.sort();
        assert_eq!(sorted, brute_vertices(&all));
    }

    #[test]
    fn hull_matches_brute_force_on_discs() {
        for r2 in [1, 2, 5, 8, 10, 13] {
            let all = disc(r2);
            let mut h = convex_hull(&all).unwrap();
            h.sort();
            assert_eq!(h, brute_vertices(&all), "r2={r2}");
        }
    }

    #[test]
    fn hull_collinear_and_duplicates() {
        assert!(matches!(
            convex_hull(&pts(&[(0, 0), (1, 0), (2, 0)])),
            Err(Error::DimensionTooLow)
        ));
        assert!(matches!(
            convex_hull(&pts(&[(3, 3), (3, 3)])),
            Err(Error::DimensionTooLow)
        ));
        let h = convex_hull(&pts(&[(0, 0), (1, 0), (0, 1), (0, 1), (1, 0)])).unwrap();
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn doubled_areas() {
        assert_eq!(doubled_area(&pts(&[(0, 0), (1, 0), (0, 1)])), 1);
        assert_eq!(doubled_area(&pts(&[(-2, 0), (0, -2), (2, 0), (0, 2)])), 16);
        assert_eq!(doubled_area(&pts(&[(0, 0), (3, 0), (3, 3), (0, 3)])), 18);
        assert_eq!(doubled_area(&pts(&[(0, 0), (1, 0)])), 0);
    }

    #[test]
    fn doubled_area_large_coordinates() {
        let big = 1i64 << 31;
        let h = pts(&[(-big, -big), (big, -big), (big, big), (-big, big)]);
        assert_eq!(doubled_area(&h), 2 * (2 * big as i128) * (2 * big as i128));
    }

    #[test]
    fn segment_counts() {
        let p = LatticePoint::new;
        assert_eq!(segment_lattice_count(p(0, 0), p(4, 2)).unwrap(), 3);
        assert_eq!(segment_lattice_count(p(0, 0), p(1, 1)).unwrap(), 2);
        assert_eq!(segment_lattice_count(p(2, 0), p(0, 2)).unwrap(), 3);
        assert_eq!(segment_lattice_count(p(0, 2), p(2, 0)).unwrap(), 3);
        assert!(matches!(
            segment_lattice_count(p(1, 1), p(1, 1)),
            Err(Error::DegenerateSegment)
        ));
    }

    #[test]
    fn boundary_counts() {
        let tri = make_polygon(&pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(boundary_lattice_count(&tri), 3);
        let n2 = make_polygon(&disc(4)).unwrap();
        assert_eq!(boundary_lattice_count(&n2), 8);
        let sq = ConvexLatticePolygon::from_generators(&pts(&[(0, 0), (3, 0), (3, 3), (0, 3)])).unwrap();
        assert_eq!(boundary_lattice_count(&sq), 12);
    }

    #[test]
    fn points_in_hull() {
        assert_eq!(
            lattice_points_in_hull(&pts(&[(0, 0), (1, 0), (0, 1)])),
            pts(&[(0, 0), (0, 1), (1, 0)])
        );
        assert_eq!(
            lattice_points_in_hull(&pts(&[(-2, 0), (0, -2), (2, 0), (0, 2)])).len(),
            13
        );
        assert_eq!(lattice_points_in_hull(&pts(&[(0, 0), (2, 0), (2, 2), (0, 2)])).len(), 9);
    }

    #[test]
    fn make_polygon_validation() {
        let tri = make_polygon(&pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(tri.len(), 3);
        assert_eq!(tri.f0(), 3);
        assert!(matches!(
            make_polygon(&pts(&[(0, 0), (2, 0), (0, 1)])),
            Err(Error::NotClosed { missing: 1 })
        ));
        let n2 = make_polygon(&disc(4)).unwrap();
        assert_eq!((n2.f0(), n2.len()), (4, 13));
        assert!(matches!(
            make_polygon(&pts(&[(0, 0), (5, 5)])),
            Err(Error::DimensionTooLow)
        ));
    }

    #[test]
    fn without_vertex_keeps_closure() {
        let n2 = make_polygon(&disc(4)).unwrap();
        let child = n2.without_vertex(LatticePoint::new(2, 0)).unwrap();
        assert_eq!(child.len(), 12);
        assert_eq!(child.points(), lattice_points_in_hull(child.hull()).as_slice());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point_set() -> impl Strategy<Value = Vec<LatticePoint>> {
            prop::collection::vec((-6i64..=6, -6i64..=6).prop_map(LatticePoint::from), 1..14)
        }

        proptest! {
            #[test]
            fn hull_idempotent(s in point_set()) {
                if let Ok(h) = convex_hull(&s) {
                    let closed = lattice_points_in_hull(&h);
                    prop_assert_eq!(convex_hull(&closed).unwrap(), h.clone());
                    for p in &s {
                        prop_assert!(closed.binary_search(p).is_ok());
                    }
                    let poly = make_polygon(&closed).unwrap();
                    prop_assert!(poly.is_pick_consistent());
                    prop_assert_eq!(poly.interior_count() + poly.boundary_count(), poly.len() as u64);
                    for w in poly.hull().windows(3) {
                        prop_assert!(cross(w[0], w[1], w[2]) > 0);
                    }
                }
            }

            #[test]
            fn segment_count_symmetric(a in (-50i64..50, -50i64..50), b in (-50i64..50, -50i64..50)) {
                let (a, b) = (LatticePoint::from(a), LatticePoint::from(b));
                prop_assume!(a != b);
                prop_assert_eq!(segment_lattice_count(a, b).unwrap(), segment_lattice_count(b, a).unwrap());
            }
        }
    }
}
