//! 2D polygon kernel.
//!
//! Everything here works on `f64` coordinates with relative tolerances (see
//! [`Tolerance`]). Regions are an outer ring minus hole rings; pieces are
//! hole-free rings. The only boolean operation offered is clipping a region
//! against an axis-aligned rectangle, which is all the overlay phase needs.

mod clip;
mod edges;
mod triangulate;

use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::clip::{clip_rect, rect_fully_inside};
pub use self::edges::shared_edge_length;
pub(crate) use self::edges::shared_edge_length_with;
pub(crate) use self::triangulate::{triangles_overlap_area, Triangle};
pub use self::triangulate::{overlap_area, pieces_overlap, triangulate};

/// Relative scale for point coincidence and area comparisons.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

/// Absolute tolerances derived from the scale of the geometry in play.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Two points closer than this are the same point.
    pub coord: f64,
    /// Areas at or below this are treated as empty.
    pub area: f64,
}

impl Tolerance {
    /// `extent` is the largest model dimension, `area` the container area.
    pub fn relative(extent: f64, area: f64) -> Self {
        Tolerance {
            coord: RELATIVE_TOLERANCE * extent.abs().max(f64::MIN_POSITIVE),
            area: RELATIVE_TOLERANCE * area.abs().max(f64::MIN_POSITIVE),
        }
    }

    pub fn for_bbox(bbox: &Rect) -> Self {
        Tolerance::relative(bbox.width().max(bbox.height()), bbox.area())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(from = "[f64; 2]", into = "[f64; 2]"))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Axis-aligned rectangle at a position.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect {
            min: Point::new(x0.min(x1), y0.min(y1)),
            max: Point::new(x0.max(x1), y0.max(y1)),
        }
    }

    pub fn at(origin: Point, dims: RectDim) -> Self {
        Rect {
            min: origin,
            max: Point::new(origin.x + dims.width, origin.y + dims.height),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Counter-clockwise corner list starting at the bottom-left.
    pub fn corners(&self) -> [Point; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }

    pub fn to_ring(&self) -> Ring {
        Ring::from_raw(self.corners().to_vec())
    }

    /// True when the open interiors intersect by more than `eps` in both axes.
    pub fn interiors_overlap(&self, other: &Rect, eps: f64) -> bool {
        self.min.x < other.max.x - eps
            && other.min.x < self.max.x - eps
            && self.min.y < other.max.y - eps
            && other.min.y < self.max.y - eps
    }

    pub fn contains_rect(&self, other: &Rect, eps: f64) -> bool {
        other.min.x >= self.min.x - eps
            && other.min.y >= self.min.y - eps
            && other.max.x <= self.max.x + eps
            && other.max.y <= self.max.y + eps
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            min: Point::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    pub fn translate(&self, d: Point) -> Rect {
        Rect {
            min: self.min + d,
            max: self.max + d,
        }
    }
}

/// Width and height of a stock panel or other unpositioned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RectDimRepr"))]
pub struct RectDim {
    pub width: f64,
    pub height: f64,
}

impl RectDim {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        if !(width.is_finite() && height.is_finite()) || width <= 0.0 || height <= 0.0 {
            return Err(Error::DegenerateGeometry(format!(
                "rectangle dimensions must be positive and finite, got {width}x{height}"
            )));
        }
        Ok(RectDim { width, height })
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn rotated(&self) -> RectDim {
        RectDim {
            width: self.height,
            height: self.width,
        }
    }

    pub fn at_origin(&self) -> Rect {
        Rect::at(Point::ORIGIN, *self)
    }
}

#[cfg(feature = "serde")]
#[derive(Deserialize)]
struct RectDimRepr {
    width: f64,
    height: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<RectDimRepr> for RectDim {
    type Error = Error;

    fn try_from(r: RectDimRepr) -> Result<Self> {
        RectDim::new(r.width, r.height)
    }
}

/// Closed ring of vertices; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<Point>", into = "Vec<Point>"))]
pub struct Ring {
    vertices: Vec<Point>,
}

impl Ring {
    /// Validates vertex count, finiteness, repeated vertices, non-zero area
    /// and simplicity. Orientation is kept as given.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        ring_area(&vertices)?;
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::DegenerateGeometry(format!(
                    "vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        if let Some((i, j)) = first_self_intersection(&vertices) {
            return Err(Error::InvalidGeometry(format!(
                "ring is self-intersecting (edges {i} and {j})"
            )));
        }
        Ok(Ring { vertices })
    }

    pub(crate) fn from_raw(vertices: Vec<Point>) -> Self {
        Ring { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn reversed(&self) -> Ring {
        let mut v = self.vertices.clone();
        v.reverse();
        Ring { vertices: v }
    }

    /// Same ring, counter-clockwise.
    pub fn to_ccw(&self) -> Ring {
        if self.is_ccw() {
            self.clone()
        } else {
            self.reversed()
        }
    }

    pub fn bbox(&self) -> Rect {
        bbox_of(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.distance(b)).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn translate(&self, d: Point) -> Ring {
        Ring {
            vertices: self.vertices.iter().map(|&p| p + d).collect(),
        }
    }

    /// Even-odd point test. Points on the boundary may go either way.
    pub fn contains_point(&self, p: Point) -> bool {
        let v = &self.vertices;
        let mut inside = false;
        let mut j = v.len() - 1;
        for i in 0..v.len() {
            let (a, b) = (v[i], v[j]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// Distance from `p` to the nearest point on the boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }
}

impl TryFrom<Vec<Point>> for Ring {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        Ring::new(v)
    }
}

impl From<Ring> for Vec<Point> {
    fn from(r: Ring) -> Self {
        r.vertices
    }
}

/// Outer ring minus zero or more holes. The outer ring is stored
/// counter-clockwise and holes clockwise.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RegionRepr"))]
pub struct PolygonRegion {
    outer: Ring,
    holes: Vec<Ring>,
}

#[cfg(feature = "serde")]
#[derive(Deserialize)]
struct RegionRepr {
    outer: Ring,
    #[serde(default)]
    holes: Vec<Ring>,
}

#[cfg(feature = "serde")]
impl TryFrom<RegionRepr> for PolygonRegion {
    type Error = Error;

    fn try_from(r: RegionRepr) -> Result<Self> {
        PolygonRegion::new(r.outer, r.holes)
    }
}

impl PolygonRegion {
    pub fn new(outer: Ring, holes: Vec<Ring>) -> Result<Self> {
        let outer = outer.to_ccw();
        let holes: Vec<Ring> = holes
            .into_iter()
            .map(|h| if h.is_ccw() { h.reversed() } else { h })
            .collect();
        for (i, h) in holes.iter().enumerate() {
            if rings_cross(&outer, h) || !h.vertices().iter().all(|&p| strictly_inside(&outer, p)) {
                return Err(Error::InvalidGeometry(format!(
                    "hole {i} does not lie strictly inside the outer ring"
                )));
            }
        }
        for i in 0..holes.len() {
            for j in (i + 1)..holes.len() {
                let (a, b) = (&holes[i], &holes[j]);
                let nested = a.vertices().iter().any(|&p| b.contains_point(p)) || b.vertices().iter().any(|&p| a.contains_point(p));
                if rings_cross(a, b) || nested {
                    return Err(Error::InvalidGeometry(format!("holes {i} and {j} overlap")));
                }
            }
        }
        let region = PolygonRegion { outer, holes };
        if region.area() <= 0.0 {
            return Err(Error::DegenerateGeometry("region has no area once holes are removed".into()));
        }
        Ok(region)
    }

    pub fn from_ring(outer: Ring) -> Self {
        PolygonRegion {
            outer: outer.to_ccw(),
            holes: Vec::new(),
        }
    }

    pub fn rect(rect: &Rect) -> Self {
        PolygonRegion::from_ring(rect.to_ring())
    }

    pub fn outer(&self) -> &Ring {
        &self.outer
    }

    pub fn holes(&self) -> &[Ring] {
        &self.holes
    }

    pub fn rings(&self) -> impl Iterator<Item = &Ring> {
        core::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn area(&self) -> f64 {
        self.outer.area() - self.holes.iter().map(Ring::area).sum::<f64>()
    }

    pub fn bbox(&self) -> Rect {
        self.outer.bbox()
    }

    pub fn tolerance(&self) -> Tolerance {
        let b = self.bbox();
        Tolerance::relative(b.width().max(b.height()), self.area())
    }

    pub fn contains_point(&self, p: Point) -> bool {
        self.outer.contains_point(p) && !self.holes.iter().any(|h| h.contains_point(p))
    }
}

/// Signed shoelace area: positive for counter-clockwise vertex order.
pub fn ring_area(vertices: &[Point]) -> Result<f64> {
    if vertices.len() < 3 {
        return Err(Error::DegenerateGeometry(format!(
            "ring has {} vertices, at least 3 are required",
            vertices.len()
        )));
    }
    if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
        return Err(Error::DegenerateGeometry(format!("vertex {i} is not finite")));
    }
    let a = shoelace(vertices);
    let extent = bbox_of(vertices);
    let size = extent.width().max(extent.height());
    if a.abs() <= RELATIVE_TOLERANCE * size * size {
        return Err(Error::DegenerateGeometry("ring has zero area".into()));
    }
    Ok(a)
}

/// Outer area minus hole areas.
pub fn region_area(region: &PolygonRegion) -> Result<f64> {
    let mut area = ring_area(region.outer.vertices())?.abs();
    for h in &region.holes {
        area -= ring_area(h.vertices())?.abs();
    }
    Ok(area)
}

pub(crate) fn shoelace(v: &[Point]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    // Offsetting by the first vertex keeps cancellation error proportional to
    // the ring size instead of its distance from the origin.
    let o = v[0];
    let mut s = 0.0;
    for i in 1..n - 1 {
        s += (v[i] - o).cross(v[i + 1] - o);
    }
    s * 0.5
}

pub(crate) fn bbox_of(v: &[Point]) -> Rect {
    let mut r = Rect {
        min: Point::new(f64::INFINITY, f64::INFINITY),
        max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    };
    for p in v {
        r.min.x = r.min.x.min(p.x);
        r.min.y = r.min.y.min(p.y);
        r.max.x = r.max.x.max(p.x);
        r.max.y = r.max.y.max(p.y);
    }
    r
}

pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test (touching counts).
pub(crate) fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn first_self_intersection(v: &[Point]) -> Option<(usize, usize)> {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (v[j], v[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Neighbours share one vertex; they may only fold back on each other.
                let shared = if j == i + 1 { b } else { a };
                let (p, q) = if j == i + 1 { (a, d) } else { (b, c) };
                if orient(p, shared, q) == 0.0 && (p - shared).dot(q - shared) > 0.0 {
                    return Some((i, j));
                }
            } else if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

fn rings_cross(a: &Ring, b: &Ring) -> bool {
    a.edges().any(|(p, q)| b.edges().any(|(r, s)| segments_intersect(p, q, r, s)))
}

fn strictly_inside(ring: &Ring, p: Point) -> bool {
    ring.contains_point(p) && ring.boundary_distance(p) > 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Rotation {
    #[default]
    R0,
    R90,
    R180,
    R270,
}

impl Rotation {
    pub const ALL: [Rotation; 4] = [Rotation::R0, Rotation::R90, Rotation::R180, Rotation::R270];

    pub fn quarter_turns(self) -> u8 {
        match self {
            Rotation::R0 => 0,
            Rotation::R90 => 1,
            Rotation::R180 => 2,
            Rotation::R270 => 3,
        }
    }

    /// Rotate `d` counter-clockwise by this angle.
    fn apply(self, d: Point) -> Point {
        match self {
            Rotation::R0 => d,
            Rotation::R90 => Point::new(-d.y, d.x),
            Rotation::R180 => Point::new(-d.x, -d.y),
            Rotation::R270 => Point::new(d.y, -d.x),
        }
    }
}

/// Mirror (optional), then rotate, both about the bounding-box centre, then translate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Transform {
    pub rotation: Rotation,
    pub flipped: bool,
    pub translation: Point,
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        rotation: Rotation::R0,
        flipped: false,
        translation: Point::ORIGIN,
    };

    pub fn new(rotation: Rotation, flipped: bool, translation: Point) -> Self {
        Transform {
            rotation,
            flipped,
            translation,
        }
    }
}

/// Applies `t` to `poly`. A flip mirrors about the vertical axis through the
/// bounding-box centre; vertex order is reversed afterwards so the ring keeps
/// its orientation.
pub fn apply_transform(poly: &Ring, t: &Transform) -> Ring {
    let b = poly.bbox();
    let c = Point::new((b.min.x + b.max.x) * 0.5, (b.min.y + b.max.y) * 0.5);
    let mut out: Vec<Point> = poly
        .vertices()
        .iter()
        .map(|&p| {
            let mut d = p - c;
            if t.flipped {
                d.x = -d.x;
            }
            c + t.rotation.apply(d) + t.translation
        })
        .collect();
    if t.flipped {
        out.reverse();
    }
    Ring::from_raw(out)
}

/// Drops repeated points and vertices lying on the segment between their neighbours.
pub(crate) fn simplify_ring(mut v: Vec<Point>, eps: f64) -> Vec<Point> {
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let mut removed = false;
        let mut i = 0;
        while i < v.len() && v.len() >= 3 {
            let n = v.len();
            let prev = v[(i + n - 1) % n];
            let cur = v[i];
            let next = v[(i + 1) % n];
            let dup = cur.distance(prev) <= eps;
            let collinear = !dup
                && point_segment_distance(cur, prev, next) <= eps
                && (cur - prev).dot(next - cur) >= 0.0;
            if dup || collinear {
                v.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            return v;
        }
    }
}
