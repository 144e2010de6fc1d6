//! Exhaustive reference implementations used to cross-check the shaving
//! enumerator and the equivalence test.
//!
//! Nothing in here touches the invariant vectors or the vertex-anchored
//! equivalence search: equivalence is decided by sweeping every integer
//! matrix with entries in `[-C, C]`, and polygons are found by testing every
//! subset of the region's lattice points.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Sub};

use crate::enumerator::{ClassTable, LevelCount};
use crate::equivalence::UnimodularMap;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, lattice_points_in_hull, ConvexLatticePolygon, LatticePoint};
use crate::region::{lattice_points_in_region, Region};

/// Largest point count accepted by [`enumerate_bruteforce`] (2¹⁶ subsets).
pub const BRUTEFORCE_POINT_LIMIT: usize = 16;

/// Entry bound sufficient for any unimodular map between polygons whose
/// points lie in a box of half-width `half_width`: every difference vector
/// has coordinates in `[-2h, 2h]`, so solving `A = [c d]·[a b]⁻¹` gives
/// entries of size at most `2·(2h)²`.
pub fn matrix_entry_bound(half_width: i64) -> i64 {
    2 * (2 * half_width) * (2 * half_width)
}

/// A polygon prepared for the bounded-matrix sweep: for each row vector `r`
/// with entries in `[-C, C]`, the width `max r·p − min r·p` over its points,
/// indexed by width.
pub struct PreparedPolygon {
    polygon: ConvexLatticePolygon,
    rows_by_width: HashMap<i64, Vec<[i64; 2]>>,
}

impl PreparedPolygon {
    pub fn polygon(&self) -> &ConvexLatticePolygon {
        &self.polygon
    }
}

fn axis_width(points: &[LatticePoint], row: [i64; 2]) -> i64 {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for p in points {
        let v = row[0] * p.x + row[1] * p.y;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi - lo
}

/// Exhaustive bounded-matrix equivalence oracle.
#[derive(Clone, Copy, Debug)]
pub struct BoundedMatrixOracle {
    entry_bound: i64,
    max_width: i64,
}

impl BoundedMatrixOracle {
    /// Oracle for polygons whose points lie in `[-h, h]²`.
    pub fn for_box(half_width: i64) -> Self {
        Self {
            entry_bound: matrix_entry_bound(half_width),
            max_width: 2 * half_width,
        }
    }

    pub fn entry_bound(&self) -> i64 {
        self.entry_bound
    }

    pub fn prepare(&self, polygon: &ConvexLatticePolygon) -> PreparedPolygon {
        let c = self.entry_bound;
        let mut rows_by_width: HashMap<i64, Vec<[i64; 2]>> = HashMap::new();
        for r0 in -c..=c {
            for r1 in -c..=c {
                // a target polygon in the box never has projected width above 2h
                let w = axis_width(polygon.points(), [r0, r1]);
                if w <= self.max_width {
                    rows_by_width.entry(w).or_default().push([r0, r1]);
                }
            }
        }
        PreparedPolygon {
            polygon: polygon.clone(),
            rows_by_width,
        }
    }

    /// Tries every matrix with bounded entries whose rows reproduce the
    /// target's x- and y-extents, and the unique translation aligning the
    /// lexicographic minima.
    pub fn find_map(&self, source: &PreparedPolygon, target: &ConvexLatticePolygon) -> Option<UnimodularMap> {
        let src = source.polygon.points();
        let dst = target.points();
        if src.len() != dst.len() {
            return None;
        }
        let rows_x = source.rows_by_width.get(&axis_width(dst, [1, 0]))?;
        let rows_y = source.rows_by_width.get(&axis_width(dst, [0, 1]))?;
        let mut image = Vec::with_capacity(src.len());
        for &r0 in rows_x {
            for &r1 in rows_y {
                let Some(linear) = UnimodularMap::linear([r0, r1]) else {
                    continue;
                };
                image.clear();
                image.extend(src.iter().map(|&p| linear.apply_linear(p)));
                image.sort_unstable();
                let shift = dst[0].sub(image[0]);
                if image.iter().zip(dst).all(|(&p, &q)| p.add(shift) == q) {
                    return UnimodularMap::new([r0, r1], shift);
                }
            }
        }
        None
    }

    pub fn equivalent(&self, a: &ConvexLatticePolygon, b: &ConvexLatticePolygon) -> bool {
        self.find_map(&self.prepare(a), b).is_some()
    }
}

/// Half-width of the smallest origin-centred box holding all `points`.
pub fn box_half_width(points: &[LatticePoint]) -> i64 {
    points.iter().map(|p| p.x.abs().max(p.y.abs())).max().unwrap_or(0)
}

/// Every closed, two-dimensional subset of `points`, in mask order.
pub fn closed_subsets(points: &[LatticePoint]) -> Result<Vec<ConvexLatticePolygon>> {
    if points.len() > BRUTEFORCE_POINT_LIMIT {
        return Err(Error::TooManyPoints {
            count: points.len(),
            limit: BRUTEFORCE_POINT_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut subset = Vec::with_capacity(points.len());
    for mask in 0u32..(1u32 << points.len()) {
        if mask.count_ones() < 3 {
            continue;
        }
        subset.clear();
        subset.extend((0..points.len()).filter(|i| mask >> i & 1 == 1).map(|i| points[i]));
        let Ok(hull) = convex_hull(&subset) else { continue };
        let closure = lattice_points_in_hull(&hull);
        if closure.len() == subset.len() {
            out.push(ConvexLatticePolygon::from_generators(&hull)?);
        }
    }
    Ok(out)
}

/// Classifies every closed subset of the region's lattice points with the
/// bounded-matrix oracle.
pub fn enumerate_bruteforce(region: &Region) -> Result<ClassTable> {
    let (table, _) = classify_bruteforce(region)?;
    Ok(table)
}

/// Like [`enumerate_bruteforce`], also returning one representative per class.
pub fn classify_bruteforce(region: &Region) -> Result<(ClassTable, BTreeMap<usize, Vec<ConvexLatticePolygon>>)> {
    let points = lattice_points_in_region(region)?;
    let subsets = closed_subsets(&points)?;
    let oracle = BoundedMatrixOracle::for_box(box_half_width(&points));

    let mut reps: BTreeMap<usize, Vec<PreparedPolygon>> = BTreeMap::new();
    for candidate in subsets {
        let level = reps.entry(candidate.len()).or_default();
        if !level.iter().any(|kept| oracle.find_map(kept, &candidate).is_some()) {
            level.push(oracle.prepare(&candidate));
        }
    }

    let max_w = points.len();
    let rows: Vec<LevelCount> = (3..=max_w)
        .map(|w| LevelCount {
            w,
            count: reps.get(&w).map_or(0, |v| v.len() as u64),
        })
        .collect();
    let table = ClassTable::new(region.to_string(), rows);
    let reps = reps
        .into_iter()
        .map(|(w, v)| (w, v.into_iter().map(|p| p.polygon).collect()))
        .collect();
    Ok((table, reps))
}
