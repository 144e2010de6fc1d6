//! Lower-bound constructions built from primitive vectors.
//!
//! The fan `V_τ` collects the primitive vectors in the right half-disc of
//! radius `τ`. Chaining them by decreasing angle from the origin and closing
//! along the x-axis gives `M_τ`; doubling the chain gives `2M_τ`, whose short
//! sides each carry a midpoint. Choosing, on every short side but the last,
//! either the midpoint or the far endpoint yields the family `Q_u` of
//! `2^{|V_τ|-1}` polygons, which pair up under the reflection
//! `x ↦ n − x` and are otherwise pairwise inequivalent.

use std::cmp::Ordering;
use std::ops::Add;

use rayon::prelude::*;
use serde::Serialize;

use crate::equivalence::{apply_map, find_unimodular_map, UnimodularMap};
use crate::error::{Error, Result};
use crate::geometry::{cross, segment_lattice_count, ConvexLatticePolygon, LatticePoint};
use crate::region::{floor_sqrt, Rational};

/// Primitive vectors `(x, y)` with `x > 0` and `x² + y² ≤ τ²`, sorted by
/// decreasing angle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveFan {
    tau2: Rational,
    vectors: Vec<LatticePoint>,
}

impl PrimitiveFan {
    pub fn tau2(&self) -> Rational {
        self.tau2
    }

    pub fn vectors(&self) -> &[LatticePoint] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn sum(&self) -> LatticePoint {
        self.vectors.iter().fold(LatticePoint::ORIGIN, |acc, &v| acc.add(v))
    }
}

fn within(tau2: Rational, v: LatticePoint) -> bool {
    let norm = v.x as i128 * v.x as i128 + v.y as i128 * v.y as i128;
    norm * (*tau2.denom() as i128) <= *tau2.numer() as i128
}

pub fn primitive_vectors(tau2: Rational) -> Result<PrimitiveFan> {
    if tau2 < Rational::from_integer(2) {
        return Err(Error::TauTooSmall(tau2.to_string()));
    }
    let r = floor_sqrt(tau2);
    let mut vectors: Vec<LatticePoint> = (1..=r)
        .flat_map(|x| (-r..=r).map(move |y| LatticePoint::new(x, y)))
        .filter(|&v| within(tau2, v) && v.content() == 1)
        .collect();
    // u before v when u is counterclockwise of v
    vectors.sort_by(|&u, &v| cross(LatticePoint::ORIGIN, u, v).cmp(&0));
    Ok(PrimitiveFan { tau2, vectors })
}

/// Choice of point on each of the first `|V_τ| − 1` short sides of `2M_τ`:
/// `1` is the midpoint, `2` the far endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSelector(Vec<u8>);

impl QSelector {
    pub fn new(choices: Vec<u8>) -> Result<Self> {
        if let Some(bad) = choices.iter().find(|&&c| c != 1 && c != 2) {
            return Err(Error::Parse(format!("selector entries must be 1 or 2, got {bad}")));
        }
        Ok(Self(choices))
    }

    /// Selector whose `k`-th entry is `1 + bit k of mask`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        Self((0..len).map(|k| 1 + (mask >> k & 1) as u8).collect())
    }

    pub fn choices(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct MTauPolygon {
    polygon: ConvexLatticePolygon,
    scale: i64,
    /// Vertices from the origin along the short sides, clockwise.
    chain: Vec<LatticePoint>,
    diameter_length_sq: i128,
    /// `(q⁰, q¹, q²)` for every short side of `2M_τ`; empty when `scale = 1`.
    short_sides: Vec<[LatticePoint; 3]>,
}

impl MTauPolygon {
    pub fn polygon(&self) -> &ConvexLatticePolygon {
        &self.polygon
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn chain(&self) -> &[LatticePoint] {
        &self.chain
    }

    pub fn diameter_length_sq(&self) -> i128 {
        self.diameter_length_sq
    }

    /// Length of the closing side on the x-axis.
    pub fn diameter_length(&self) -> i64 {
        self.chain.last().map_or(0, |p| p.x)
    }

    pub fn short_sides(&self) -> &[[LatticePoint; 3]] {
        &self.short_sides
    }

    /// Largest y-coordinate of the polygon.
    pub fn height(&self) -> i64 {
        self.chain.iter().map(|p| p.y).max().unwrap_or(0)
    }
}

fn violated(msg: impl Into<String>) -> Error {
    Error::ConstructionInvariantViolated(msg.into())
}

/// Builds `M_τ` (`scale = 1`) or `2M_τ` (`scale = 2`).
pub fn build_m_tau(fan: &PrimitiveFan, scale: i64) -> Result<MTauPolygon> {
    if scale != 1 && scale != 2 {
        return Err(violated(format!("scale must be 1 or 2, got {scale}")));
    }
    let mut chain = Vec::with_capacity(fan.len() + 1);
    chain.push(LatticePoint::ORIGIN);
    for &v in fan.vectors() {
        let last = *chain.last().unwrap();
        chain.push(last.add(v.scale(scale)));
    }
    let end = *chain.last().unwrap();
    if end.y != 0 || end.x <= 0 {
        return Err(violated(format!(
            "closing side is not on the positive x-axis: ends at {end}"
        )));
    }
    let polygon = ConvexLatticePolygon::from_generators(&chain)?;
    if polygon.f0() != fan.len() + 1 {
        return Err(violated(format!(
            "expected {} vertices, hull has {}",
            fan.len() + 1,
            polygon.f0()
        )));
    }
    for w in chain.windows(2) {
        let count = segment_lattice_count(w[0], w[1])?;
        if count != scale as u64 + 1 {
            return Err(violated(format!(
                "short side {}–{} has {count} lattice points",
                w[0], w[1]
            )));
        }
    }
    let short_sides = if scale == 2 {
        chain
            .windows(2)
            .zip(fan.vectors())
            .map(|(w, &v)| [w[0], w[0].add(v), w[1]])
            .collect()
    } else {
        Vec::new()
    };
    Ok(MTauPolygon {
        polygon,
        scale,
        diameter_length_sq: end.x as i128 * end.x as i128,
        chain,
        short_sides,
    })
}

/// `Q_u = conv{q₁⁰, q₁^{u₁}, …, q_{k}^{u_k}, q_{|V|}²}`.
pub fn build_q(m2: &MTauPolygon, u: &QSelector) -> Result<ConvexLatticePolygon> {
    if m2.scale != 2 {
        return Err(violated("Q_u requires the doubled polygon"));
    }
    let sides = m2.short_sides();
    if u.len() + 1 != sides.len() {
        return Err(Error::SelectorLengthMismatch {
            expected: sides.len().saturating_sub(1),
            got: u.len(),
        });
    }
    let mut gens = Vec::with_capacity(sides.len() + 1);
    gens.push(sides[0][0]);
    gens.extend(sides.iter().zip(u.choices()).map(|(side, &i)| side[i as usize]));
    gens.push(sides[sides.len() - 1][2]);
    ConvexLatticePolygon::from_generators(&gens)
}

/// The reflection `(x, y) ↦ (n − x, y)` about the diameter's midpoint.
pub fn mirror_map(diameter_length: i64) -> UnimodularMap {
    UnimodularMap::new([[-1, 0], [0, 1]], LatticePoint::new(diameter_length, 0)).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalentPair {
    pub first: usize,
    pub second: usize,
    pub witness: String,
    /// The reflection about the diameter's midpoint carries `first` onto `second`.
    pub mirror: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    pub tau2: String,
    pub fan_size: usize,
    pub polygons: usize,
    pub classes: usize,
    pub max_class_size: usize,
    /// `2^{|V_τ| − 2}`.
    pub lower_bound: u64,
    pub pairs: Vec<EquivalentPair>,
}

impl PairingReport {
    pub fn all_pairs_mirrored(&self) -> bool {
        self.pairs.iter().all(|p| p.mirror)
    }

    pub fn meets_lower_bound(&self) -> bool {
        self.classes as u64 >= self.lower_bound
    }
}

/// Builds every `Q_u` for the fan of `tau2` and classifies them pairwise.
pub fn verify_q_family(tau2: Rational) -> Result<PairingReport> {
    let fan = primitive_vectors(tau2)?;
    let m2 = build_m_tau(&fan, 2)?;
    let k = fan.len() - 1;
    if k >= 24 {
        return Err(violated(format!("2^{k} polygons is too many to compare pairwise")));
    }
    let family: Vec<ConvexLatticePolygon> = (0..1u64 << k)
        .map(|mask| build_q(&m2, &QSelector::from_mask(mask, k)))
        .collect::<Result<_>>()?;
    let mirror = mirror_map(m2.diameter_length());

    let n = family.len();
    let mut pairs: Vec<EquivalentPair> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let family = &family;
            (i + 1..n).filter_map(move |j| {
                let witness = find_unimodular_map(&family[i], &family[j])?;
                debug_assert_eq!(apply_map(&witness, &family[i]), family[j]);
                Some(EquivalentPair {
                    first: i,
                    second: j,
                    witness: witness.to_string(),
                    mirror: apply_map(&mirror, &family[i]) == family[j],
                })
            })
        })
        .collect();
    pairs.sort_by_key(|p| (p.first, p.second));

    let mut partners = vec![0usize; n];
    for p in &pairs {
        partners[p.first] += 1;
        partners[p.second] += 1;
    }
    if let Some((index, &count)) = partners.iter().enumerate().find(|(_, &c)| c > 1) {
        return Err(Error::PairingViolation { index, partners: count });
    }
    let max_class_size = if pairs.is_empty() { 1 } else { 2 };
    Ok(PairingReport {
        tau2: tau2.to_string(),
        fan_size: fan.len(),
        polygons: n,
        classes: n - pairs.len(),
        max_class_size,
        lower_bound: 1u64 << (fan.len() - 2),
        pairs,
    })
}

/// Translates `2M_τ` left by half its diameter when `d ≤ √2·R`, checking
/// that every lattice point then lies in the closed disc of squared radius
/// `radius2`.
pub fn fit_in_disc(m2: &MTauPolygon, radius2: Rational) -> Result<Option<ConvexLatticePolygon>> {
    if m2.scale != 2 {
        return Err(violated("disc fitting applies to the doubled polygon"));
    }
    let d = m2.diameter_length();
    if d % 2 != 0 {
        return Err(violated(format!("diameter {d} is odd")));
    }
    // d² ≤ 2R²  ⇔  d²·q ≤ 2p
    let lhs = m2.diameter_length_sq() * *radius2.denom() as i128;
    if lhs.cmp(&(2 * *radius2.numer() as i128)) == Ordering::Greater {
        return Ok(None);
    }
    let moved = m2.polygon().translate(LatticePoint::new(-d / 2, 0));
    if let Some(p) = moved.points().iter().find(|&&p| !within(radius2, p)) {
        return Err(violated(format!("translated point {p} lies outside the disc")));
    }
    Ok(Some(moved))
}
