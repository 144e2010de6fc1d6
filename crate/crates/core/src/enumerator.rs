//! Level-by-level shaving enumeration.
//!
//! Starting from the maximal polygon of a region, every vertex of every
//! representative with `n` points is shaved off, and the children are
//! reduced to one representative per unimodular class to form level `n − 1`.
//! Children are bucketed by their exact invariant vector, so the expensive
//! equivalence test only runs between candidates with identical invariants.

use std::collections::{BTreeMap, HashMap};
use std::io;
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equivalence::are_equivalent;
use crate::error::{Error, Result};
use crate::geometry::{ConvexLatticePolygon, LatticePoint};
use crate::invariants::{bucket_key, compute_invariants, BucketKey};
use crate::region::{largest_polygon, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCount {
    pub w: usize,
    pub count: u64,
}

/// Class counts per cardinality, optionally with the representatives.
#[derive(Clone, Debug)]
pub struct ClassTable {
    region: String,
    rows: Vec<LevelCount>,
    representatives: Option<BTreeMap<usize, Vec<ConvexLatticePolygon>>>,
}

impl ClassTable {
    pub fn new(region: String, rows: Vec<LevelCount>) -> Self {
        Self {
            region,
            rows,
            representatives: None,
        }
    }

    pub fn region(&self) -> &str {
        &self.region
    }

    /// One row per cardinality `w`, ascending.
    pub fn rows(&self) -> &[LevelCount] {
        &self.rows
    }

    pub fn counts(&self) -> Vec<(usize, u64)> {
        self.rows.iter().map(|r| (r.w, r.count)).collect()
    }

    pub fn count(&self, w: usize) -> u64 {
        self.rows.iter().find(|r| r.w == w).map_or(0, |r| r.count)
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn representatives(&self) -> Option<&BTreeMap<usize, Vec<ConvexLatticePolygon>>> {
        self.representatives.as_ref()
    }
}

/// Counters gathered during an enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    /// Lattice points in the region (`W`).
    pub lattice_points: usize,
    /// Largest vertex count over all representatives (observed `M`).
    pub max_vertices: usize,
    /// Total number of classes (`N`).
    pub classes: u64,
    /// Vertices shaved, including shavings that collapsed to a segment.
    pub shaves: u64,
    /// Children that survived the dimension check.
    pub candidates: u64,
    /// One bucket lookup per candidate; stands in for the pairwise
    /// invariant comparisons of a linear scan.
    pub invariant_comparisons: u64,
    pub eq_calls: u64,
    /// Candidates rejected because a kept member had the identical point set.
    pub exact_duplicates: u64,
    /// Largest number of candidates held for one level.
    pub peak_level_candidates: u64,
}

/// Upper bound `16·(2π)^{1/3}·R^{2/3}` on the vertex count of any convex
/// lattice polygon in a disc of squared radius `radius2`.
pub fn vertex_count_bound(radius2: f64) -> f64 {
    16.0 * (2.0 * std::f64::consts::PI).cbrt() * radius2.cbrt()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub workers: usize,
    /// Reproducible representative choice: children are generated in
    /// parallel, then merged in one ordered pass.
    pub deterministic: bool,
    /// Shuffles each level's candidate stream before deduplication
    /// (deterministic mode only).
    pub shuffle_seed: Option<u64>,
    pub keep_representatives: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            deterministic: true,
            shuffle_seed: None,
            keep_representatives: false,
        }
    }
}

/// Receives each completed level, largest cardinality first.
pub trait LevelSink: Send {
    fn write_level(&mut self, w: usize, representatives: &[ConvexLatticePolygon]) -> io::Result<()>;
}

pub struct NullSink;

impl LevelSink for NullSink {
    fn write_level(&mut self, _w: usize, _representatives: &[ConvexLatticePolygon]) -> io::Result<()> {
        Ok(())
    }
}

#[derive(Default)]
struct Counters {
    shaves: AtomicU64,
    candidates: AtomicU64,
    eq_calls: AtomicU64,
    exact_duplicates: AtomicU64,
}

impl Counters {
    fn bump(counter: &AtomicU64, by: u64) {
        counter.fetch_add(by, Ordering::Relaxed);
    }
}

/// Shaves vertex `v` off `polygon`. `None` when the remainder is not
/// two-dimensional.
pub fn shave(polygon: &ConvexLatticePolygon, v: LatticePoint) -> Result<Option<ConvexLatticePolygon>> {
    if !polygon.is_vertex(v) {
        return Err(Error::NotAVertex { x: v.x, y: v.y });
    }
    Ok(polygon.without_vertex(v))
}

fn children(polygon: &ConvexLatticePolygon, counters: &Counters) -> Vec<ConvexLatticePolygon> {
    Counters::bump(&counters.shaves, polygon.f0() as u64);
    let out: Vec<_> = polygon
        .hull()
        .iter()
        .filter_map(|&v| polygon.without_vertex(v))
        .collect();
    Counters::bump(&counters.candidates, out.len() as u64);
    out
}

fn is_duplicate(kept: &ConvexLatticePolygon, candidate: &ConvexLatticePolygon, counters: &Counters) -> bool {
    if kept.points() == candidate.points() {
        Counters::bump(&counters.exact_duplicates, 1);
        return true;
    }
    Counters::bump(&counters.eq_calls, 1);
    are_equivalent(kept, candidate)
}

/// First-kept-wins reduction of one bucket, in stream order.
fn reduce_bucket(members: &[usize], polys: &[ConvexLatticePolygon], counters: &Counters) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for &i in members {
        if !kept.iter().any(|&k| is_duplicate(&polys[k], &polys[i], counters)) {
            kept.push(i);
        }
    }
    kept
}

/// Groups candidates by bucket key and reduces buckets in parallel. The
/// survivors come back in stream order.
fn dedup_ordered(
    polys: Vec<ConvexLatticePolygon>,
    keys: Vec<BucketKey>,
    counters: &Counters,
) -> Vec<ConvexLatticePolygon> {
    let mut buckets: HashMap<BucketKey, Vec<usize>> = HashMap::new();
    for (i, key) in keys.into_iter().enumerate() {
        buckets.entry(key).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = buckets.into_values().collect();
    let mut kept: Vec<usize> = groups
        .par_iter()
        .flat_map_iter(|g| reduce_bucket(g, &polys, counters))
        .collect();
    kept.sort_unstable();

    let mut slots: Vec<Option<ConvexLatticePolygon>> = polys.into_iter().map(Some).collect();
    kept.into_iter().filter_map(|i| slots[i].take()).collect()
}

/// Reduces equal-cardinality candidates to one representative per
/// unimodular class, keeping the first member of each class seen.
pub fn dedup_level(candidates: Vec<ConvexLatticePolygon>) -> Vec<ConvexLatticePolygon> {
    let keys = candidates.iter().map(|p| bucket_key(&compute_invariants(p))).collect();
    dedup_ordered(candidates, keys, &Counters::default())
}

fn next_level_ordered(
    level: &[ConvexLatticePolygon],
    shuffle_seed: Option<u64>,
    w: usize,
    counters: &Counters,
) -> (Vec<ConvexLatticePolygon>, u64) {
    let mut cands: Vec<(ConvexLatticePolygon, BucketKey)> = level
        .par_iter()
        .flat_map_iter(|p| children(p, counters))
        .map(|c| {
            let key = bucket_key(&compute_invariants(&c));
            (c, key)
        })
        .collect();
    let produced = cands.len() as u64;
    if let Some(seed) = shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (w as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        cands.shuffle(&mut rng);
    }
    let (polys, keys): (Vec<_>, Vec<_>) = cands.into_iter().unzip();
    (dedup_ordered(polys, keys, counters), produced)
}

fn next_level_concurrent(level: &[ConvexLatticePolygon], counters: &Counters) -> (Vec<ConvexLatticePolygon>, u64) {
    let buckets: DashMap<BucketKey, Vec<ConvexLatticePolygon>> = DashMap::new();
    let produced = AtomicU64::new(0);
    level.par_iter().for_each(|p| {
        for c in children(p, counters) {
            produced.fetch_add(1, Ordering::Relaxed);
            let key = bucket_key(&compute_invariants(&c));
            let mut bucket = buckets.entry(key).or_default();
            if !bucket.iter().any(|k| is_duplicate(k, &c, counters)) {
                bucket.push(c);
            }
        }
    });
    let next = buckets.into_iter().flat_map(|(_, v)| v).collect();
    (next, produced.into_inner())
}

/// Enumerates all classes of convex lattice polygons in `region`.
pub fn enumerate_classes(region: &Region, options: &EnumerationOptions) -> Result<(ClassTable, EnumerationStats)> {
    enumerate_classes_with_sink(region, options, &mut NullSink)
}

/// As [`enumerate_classes`], handing every finished level to `sink`.
pub fn enumerate_classes_with_sink(
    region: &Region,
    options: &EnumerationOptions,
    sink: &mut dyn LevelSink,
) -> Result<(ClassTable, EnumerationStats)> {
    let root = largest_polygon(region)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| Error::Io(io::Error::other(e)))?;
    pool.install(|| run_levels(region, root.polygon, options, sink))
}

fn run_levels(
    region: &Region,
    root: ConvexLatticePolygon,
    options: &EnumerationOptions,
    sink: &mut dyn LevelSink,
) -> Result<(ClassTable, EnumerationStats)> {
    let top = root.len();
    let counters = Counters::default();
    let mut stats = EnumerationStats {
        lattice_points: top,
        ..Default::default()
    };
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    let mut kept: BTreeMap<usize, Vec<ConvexLatticePolygon>> = BTreeMap::new();

    let mut w = top;
    let mut level = vec![root];
    loop {
        counts.insert(w, level.len() as u64);
        stats.max_vertices = level.iter().map(|p| p.f0()).fold(stats.max_vertices, usize::max);
        sink.write_level(w, &level).map_err(Error::CheckpointWriteFailure)?;
        if w <= 3 || level.is_empty() {
            if options.keep_representatives {
                kept.insert(w, level);
            }
            break;
        }
        let (next, produced) = if options.deterministic {
            next_level_ordered(&level, options.shuffle_seed, w, &counters)
        } else {
            next_level_concurrent(&level, &counters)
        };
        stats.peak_level_candidates = stats.peak_level_candidates.max(produced);
        stats.invariant_comparisons += produced;
        if options.keep_representatives {
            kept.insert(w, std::mem::replace(&mut level, next));
        } else {
            level = next;
        }
        w -= 1;
    }

    let rows: Vec<LevelCount> = (3..=top)
        .map(|w| LevelCount {
            w,
            count: counts.get(&w).copied().unwrap_or(0),
        })
        .collect();
    let mut table = ClassTable::new(region.to_string(), rows);
    if options.keep_representatives {
        table.representatives = Some(kept);
    }
    stats.classes = table.total();
    stats.shaves = counters.shaves.into_inner();
    stats.candidates = counters.candidates.into_inner();
    stats.eq_calls = counters.eq_calls.into_inner();
    stats.exact_duplicates = counters.exact_duplicates.into_inner();
    Ok((table, stats))
}
