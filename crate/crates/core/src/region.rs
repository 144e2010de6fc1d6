//! Enclosing regions and their maximal lattice polygon.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, make_polygon, ConvexLatticePolygon, LatticePoint};

pub type Rational = Ratio<i64>;

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let r = Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    Ok(r)
}

/// Largest integer `k ≥ 0` with `k² ≤ r`, for `r ≥ 0`.
pub fn floor_sqrt(r: Rational) -> i64 {
    let floor = r.floor().to_integer().max(0) as u64;
    let mut k = (floor as f64).sqrt() as u64;
    while k * k > floor {
        k -= 1;
    }
    while (k + 1) * (k + 1) <= floor {
        k += 1;
    }
    k as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

/// A convex polygon with rational vertices, kept as an integer hull scaled
/// by the common denominator so membership stays exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolygon {
    vertices: Vec<RationalPoint>,
    scale: i64,
    scaled_hull: Vec<LatticePoint>,
}

impl RationalPolygon {
    /// The region is the convex hull of `vertices`.
    pub fn new(vertices: Vec<RationalPoint>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidRegion("polygon region without vertices".into()));
        }
        let scale = vertices
            .iter()
            .fold(1i64, |acc, v| acc.lcm(v.x.denom()).lcm(v.y.denom()));
        let scaled: Vec<LatticePoint> = vertices
            .iter()
            .map(|v| LatticePoint::new((v.x * scale).to_integer(), (v.y * scale).to_integer()))
            .collect();
        let scaled_hull =
            geometry::convex_hull(&scaled).map_err(|_| Error::InvalidRegion("polygon region has zero area".into()))?;
        Ok(Self {
            vertices,
            scale,
            scaled_hull,
        })
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    fn contains(&self, p: LatticePoint) -> bool {
        let q = p.scale(self.scale);
        let n = self.scaled_hull.len();
        (0..n).all(|i| geometry::cross(self.scaled_hull[i], self.scaled_hull[(i + 1) % n], q) >= 0)
    }

    fn bounding_box(&self) -> (i64, i64, i64, i64) {
        let xs = self.vertices.iter().map(|v| v.x);
        let ys = self.vertices.iter().map(|v| v.y);
        let min_x = xs.clone().min().unwrap().ceil().to_integer();
        let max_x = xs.max().unwrap().floor().to_integer();
        let min_y = ys.clone().min().unwrap().ceil().to_integer();
        let max_y = ys.max().unwrap().floor().to_integer();
        (min_x, max_x, min_y, max_y)
    }
}

/// A bounded convex region of the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    /// Closed disc centred at the origin, given by its squared radius.
    Disc {
        radius2: Rational,
    },
    Polygon(RationalPolygon),
    /// The convex hull of an explicit list of lattice points.
    Points(Vec<LatticePoint>),
}

impl Region {
    pub fn disc(radius: i64) -> Self {
        Region::Disc {
            radius2: Rational::from_integer(radius * radius),
        }
    }

    pub fn disc_squared(radius2: Rational) -> Result<Self> {
        if radius2 < Rational::from_integer(0) {
            return Err(Error::InvalidRegion(format!("negative squared radius {radius2}")));
        }
        Ok(Region::Disc { radius2 })
    }

    pub fn points(points: impl IntoIterator<Item = LatticePoint>) -> Self {
        let mut pts: Vec<LatticePoint> = points.into_iter().collect();
        pts.sort_unstable();
        pts.dedup();
        Region::Points(pts)
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        match self {
            Region::Disc { radius2 } => {
                let norm = p.x as i128 * p.x as i128 + p.y as i128 * p.y as i128;
                norm * (*radius2.denom() as i128) <= *radius2.numer() as i128
            }
            Region::Polygon(poly) => poly.contains(p),
            Region::Points(pts) => match geometry::convex_hull(pts) {
                Ok(hull) => {
                    let n = hull.len();
                    (0..n).all(|i| geometry::cross(hull[i], hull[(i + 1) % n], p) >= 0)
                }
                Err(_) => collinear_closure(pts).binary_search(&p).is_ok(),
            },
        }
    }

    /// Squared radius when the region is a disc.
    pub fn radius2(&self) -> Option<Rational> {
        match self {
            Region::Disc { radius2 } => Some(*radius2),
            _ => None,
        }
    }

    /// Parses a region document: `{"kind":"disc","radius2":"9"}`,
    /// `{"kind":"polygon","vertices":[[x,y],...]}` or
    /// `{"kind":"points","points":[[x,y],...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RegionDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_region()
    }

    pub fn to_document(&self) -> RegionDocument {
        match self {
            Region::Disc { radius2 } => RegionDocument {
                kind: "disc".into(),
                radius2: Some(RationalValue::Text(radius2.to_string())),
                vertices: None,
                points: None,
            },
            Region::Polygon(poly) => RegionDocument {
                kind: "polygon".into(),
                radius2: None,
                vertices: Some(
                    poly.vertices
                        .iter()
                        .map(|v| [RationalValue::from(v.x), RationalValue::from(v.y)])
                        .collect(),
                ),
                points: None,
            },
            Region::Points(pts) => RegionDocument {
                kind: "points".into(),
                radius2: None,
                vertices: None,
                points: Some(pts.clone()),
            },
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Disc { radius2 } => write!(f, "disc radius2={radius2}"),
            Region::Polygon(poly) => {
                write!(f, "polygon")?;
                for v in &poly.vertices {
                    write!(f, " ({},{})", v.x, v.y)?;
                }
                Ok(())
            }
            Region::Points(pts) => write!(f, "points n={}", pts.len()),
        }
    }
}

/// A rational written either as a JSON integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Integer(i64),
    Text(String),
}

impl RationalValue {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalValue::Integer(i) => Ok(Rational::from_integer(*i)),
            RationalValue::Text(s) => parse_rational(s),
        }
    }
}

impl From<Rational> for RationalValue {
    fn from(r: Rational) -> Self {
        if r.is_integer() {
            RationalValue::Integer(r.to_integer())
        } else {
            RationalValue::Text(r.to_string())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionDocument {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius2: Option<RationalValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[RationalValue; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<LatticePoint>>,
}

impl RegionDocument {
    pub fn into_region(self) -> Result<Region> {
        let missing = |field: &str| Error::Parse(format!("region kind {:?} requires field {field:?}", self.kind));
        match self.kind.as_str() {
            "disc" => {
                let r2 = self.radius2.as_ref().ok_or_else(|| missing("radius2"))?;
                Region::disc_squared(r2.to_rational()?)
            }
            "polygon" => {
                let verts = self.vertices.as_ref().ok_or_else(|| missing("vertices"))?;
                let vertices = verts
                    .iter()
                    .map(|[x, y]| {
                        Ok(RationalPoint {
                            x: x.to_rational()?,
                            y: y.to_rational()?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Region::Polygon(RationalPolygon::new(vertices)?))
            }
            "points" => {
                let pts = self.points.as_ref().ok_or_else(|| missing("points"))?;
                Ok(Region::points(pts.iter().copied()))
            }
            other => Err(Error::Parse(format!("unknown region kind {other:?}"))),
        }
    }
}

/// Every lattice point of the region, sorted lexicographically.
pub fn lattice_points_in_region(region: &Region) -> Result<Vec<LatticePoint>> {
    let pts = match region {
        Region::Disc { radius2 } => {
            let r = floor_sqrt(*radius2);
            let mut out = Vec::new();
            for x in -r..=r {
                for y in -r..=r {
                    let p = LatticePoint::new(x, y);
                    if region.contains(p) {
                        out.push(p);
                    }
                }
            }
            out
        }
        Region::Polygon(poly) => {
            let (min_x, max_x, min_y, max_y) = poly.bounding_box();
            let mut out = Vec::new();
            for x in min_x..=max_x {
                for y in min_y..=max_y {
                    let p = LatticePoint::new(x, y);
                    if poly.contains(p) {
                        out.push(p);
                    }
                }
            }
            out
        }
        Region::Points(pts) => match geometry::convex_hull(pts) {
            Ok(hull) => geometry::lattice_points_in_hull(&hull),
            // a point or a segment: its lattice points are the collinear closure
            Err(_) => collinear_closure(pts),
        },
    };
    if pts.is_empty() {
        return Err(Error::EmptyRegion);
    }
    Ok(pts)
}

fn collinear_closure(pts: &[LatticePoint]) -> Vec<LatticePoint> {
    let (Some(&first), Some(&last)) = (pts.first(), pts.last()) else {
        return Vec::new();
    };
    if first == last {
        return vec![first];
    }
    let d = last.sub(first);
    let g = d.content() as i64;
    let step = LatticePoint::new(d.x / g, d.y / g);
    (0..=g).map(|k| first.add(step.scale(k))).collect()
}

/// The enumeration root `conv(region ∩ Z²)` together with its region.
#[derive(Clone, Debug)]
pub struct RootPolygon {
    pub polygon: ConvexLatticePolygon,
    pub region: Region,
}

/// The largest convex lattice polygon inside the region.
pub fn largest_polygon(region: &Region) -> Result<RootPolygon> {
    let points = lattice_points_in_region(region)?;
    let polygon = make_polygon(&points)?;
    Ok(RootPolygon {
        polygon,
        region: region.clone(),
    })
}
