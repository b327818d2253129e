//! Planar primitives: points, circles, simple polygons, square cells, and the
//! exact predicates and areas built on them.

mod circle_area;
mod clip;
mod intersect;
mod predicates;

pub use circle_area::{polygon_circle_area, ring_circle_area};
pub use clip::{clip_polygon_to_cell, clip_ring_to_cell, clip_segment_to_rect, segment_meets_open_rect};
pub use intersect::{
    circle_circle_intersection_angles, segment_circle_intersections, segments_intersect,
    CircleCrossing,
};
pub use predicates::{
    classify_cell_vs_circle, classify_cell_vs_polygon, point_in_polygon, point_on_segment,
};

use crate::error::{CoverError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Relative geometric tolerance; multiplied by the relevant length scale.
pub const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    #[inline]
    pub fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    #[inline]
    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        self.sub(o).norm2().sqrt()
    }

    /// Linear interpolation `self + t (o - self)`.
    #[inline]
    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + t * (o.x - self.x), self.y + t * (o.y - self.y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(CoverError::NonFinite);
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(CoverError::InvalidRadius(radius));
        }
        Ok(Self { center, radius })
    }

    /// Closed-disk membership (boundary counts as inside).
    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        p.sub(self.center).norm2() <= self.radius * self.radius
    }

    /// Open-disk membership.
    #[inline]
    pub fn contains_strictly(&self, p: Point) -> bool {
        p.sub(self.center).norm2() < self.radius * self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// Point on the boundary at angle `theta`.
    #[inline]
    pub fn point_at(&self, theta: f64) -> Point {
        Point::new(
            self.center.x + self.radius * theta.cos(),
            self.center.y + self.radius * theta.sin(),
        )
    }

    /// Angle of `p` as seen from the center, in `[0, 2π)`.
    #[inline]
    pub fn angle_of(&self, p: Point) -> f64 {
        normalize_angle((p.y - self.center.y).atan2(p.x - self.center.x))
    }

    pub fn bbox(&self) -> Rect {
        Rect {
            x_min: self.center.x - self.radius,
            y_min: self.center.y - self.radius,
            x_max: self.center.x + self.radius,
            y_max: self.center.y + self.radius,
        }
    }
}

/// Map an angle into `[0, 2π)`.
#[inline]
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Axis-aligned rectangle (not necessarily square).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn from_points<'a>(pts: impl IntoIterator<Item = &'a Point>) -> Option<Rect> {
        let mut it = pts.into_iter();
        let first = it.next()?;
        let mut r = Rect {
            x_min: first.x,
            y_min: first.y,
            x_max: first.x,
            y_max: first.y,
        };
        for p in it {
            r.x_min = r.x_min.min(p.x);
            r.y_min = r.y_min.min(p.y);
            r.x_max = r.x_max.max(p.x);
            r.y_max = r.y_max.max(p.y);
        }
        Some(r)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn union(&self, o: &Rect) -> Rect {
        Rect {
            x_min: self.x_min.min(o.x_min),
            y_min: self.y_min.min(o.y_min),
            x_max: self.x_max.max(o.x_max),
            y_max: self.y_max.max(o.y_max),
        }
    }

    /// Intersection, or `None` when the interiors are disjoint.
    pub fn intersection(&self, o: &Rect) -> Option<Rect> {
        let r = Rect {
            x_min: self.x_min.max(o.x_min),
            y_min: self.y_min.max(o.y_min),
            x_max: self.x_max.min(o.x_max),
            y_max: self.y_max.min(o.y_max),
        };
        (r.x_max > r.x_min && r.y_max > r.y_min).then_some(r)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        o.x_min >= self.x_min && o.x_max <= self.x_max && o.y_min >= self.y_min && o.y_max <= self.y_max
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    /// Smallest square anchored at the min corner that contains this rectangle.
    pub fn square_hull(&self) -> Cell {
        Cell::square(self.x_min, self.y_min, self.width().max(self.height()))
    }
}

/// Axis-aligned square cell of a quadtree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Cell {
    pub fn square(x_min: f64, y_min: f64, side: f64) -> Self {
        Self {
            x_min,
            x_max: x_min + side,
            y_min,
            y_max: y_min + side,
        }
    }

    #[inline]
    pub fn side(&self) -> f64 {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    #[inline]
    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))
    }

    /// Corners in counterclockwise order starting at the min corner.
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x_min, self.y_min),
            Point::new(self.x_max, self.y_min),
            Point::new(self.x_max, self.y_max),
            Point::new(self.x_min, self.y_max),
        ]
    }

    /// Children in quadrant order: SW, SE, NW, NE.
    pub fn children(&self) -> [Cell; 4] {
        let xm = 0.5 * (self.x_min + self.x_max);
        let ym = 0.5 * (self.y_min + self.y_max);
        [
            Cell { x_min: self.x_min, x_max: xm, y_min: self.y_min, y_max: ym },
            Cell { x_min: xm, x_max: self.x_max, y_min: self.y_min, y_max: ym },
            Cell { x_min: self.x_min, x_max: xm, y_min: ym, y_max: self.y_max },
            Cell { x_min: xm, x_max: self.x_max, y_min: ym, y_max: self.y_max },
        ]
    }

    pub fn as_rect(&self) -> Rect {
        Rect {
            x_min: self.x_min,
            y_min: self.y_min,
            x_max: self.x_max,
            y_max: self.y_max,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.as_rect().contains(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionClass {
    Inside,
    Outside,
    Boundary,
}

/// Shoelace signed area; positive for counterclockwise rings.
pub fn signed_area(vertices: &[Point]) -> Result<f64> {
    if vertices.len() < 3 {
        return Err(CoverError::InvalidPolygon(format!(
            "need at least 3 vertices, got {}",
            vertices.len()
        )));
    }
    Ok(ring_signed_area(vertices))
}

/// Shoelace signed area of an arbitrary closed ring (no length check).
pub fn ring_signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    // Relative to the first vertex to limit cancellation far from the origin.
    let o = ring[0];
    let mut s = 0.0;
    for i in 1..n - 1 {
        s += ring[i].sub(o).cross(ring[i + 1].sub(o));
    }
    0.5 * s
}

/// Largest distance between two vertices.
pub fn polygon_diameter(polygon: &Polygon) -> f64 {
    polygon.diameter
}

fn vertex_diameter(v: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.max(v[i].sub(v[j]).norm2());
        }
    }
    best.sqrt()
}

/// A simple polygon with counterclockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
    bbox: Rect,
    diameter: f64,
    area: f64,
}

impl Polygon {
    /// Validate a ring and orient it counterclockwise.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        Self::from_ring(vertices).map(|(p, _)| p)
    }

    /// Like [`Polygon::new`], also reporting whether the input was clockwise
    /// and had to be reversed.
    pub fn from_ring(mut vertices: Vec<Point>) -> Result<(Self, bool)> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(CoverError::NonFinite);
        }
        let area = signed_area(&vertices)?;
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(CoverError::InvalidPolygon(format!(
                    "repeated consecutive vertex at index {i}"
                )));
            }
        }
        if let Some((i, j)) = find_self_intersection(&vertices) {
            return Err(CoverError::SelfIntersecting(i, j));
        }
        if area == 0.0 {
            return Err(CoverError::InvalidPolygon("zero signed area".into()));
        }
        let reversed = area < 0.0;
        if reversed {
            vertices.reverse();
        }
        let bbox = Rect::from_points(&vertices).expect("non-empty");
        let diameter = vertex_diameter(&vertices);
        Ok((
            Self {
                vertices,
                bbox,
                diameter,
                area: area.abs(),
            },
            reversed,
        ))
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Unsigned area.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    #[inline]
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn contains(&self, p: Point) -> bool {
        point_in_polygon(p, self)
    }

    /// Apply `f` to every vertex. `f` must be a similarity with positive scale.
    pub fn map(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    pub fn reversed_vertices(&self) -> Vec<Point> {
        self.vertices.iter().rev().copied().collect()
    }
}

/// First pair of non-adjacent edges that touch, or adjacent edges that fold
/// back onto each other.
fn find_self_intersection(v: &[Point]) -> Option<(usize, usize)> {
    let n = v.len();
    let boxes: Vec<Rect> = (0..n)
        .map(|i| Rect::from_points([&v[i], &v[(i + 1) % n]]).unwrap())
        .collect();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for j in i + 1..n {
            let bi = &boxes[i];
            let bj = &boxes[j];
            if bi.x_max < bj.x_min || bj.x_max < bi.x_min || bi.y_max < bj.y_min || bj.y_max < bi.y_min {
                continue;
            }
            let (c, d) = (v[j], v[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared vertex; reject only a collinear fold-back.
                let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let u = p.sub(shared);
                let w = q.sub(shared);
                if u.cross(w) == 0.0 && u.dot(w) > 0.0 {
                    return Some((i, j));
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

/// A problem instance: one polygon and a list of circles.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub polygon: Polygon,
    pub circles: Vec<Circle>,
    bbox: Rect,
}

impl Scene {
    pub fn new(polygon: Polygon, circles: Vec<Circle>) -> Self {
        let bbox = circles
            .iter()
            .fold(polygon.bbox(), |acc, c| acc.union(&c.bbox()));
        Self { polygon, circles, bbox }
    }

    /// Bounding box of the polygon and every disk.
    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    /// Tight box containing the target region: the polygon's box clipped to
    /// the box of all disks. `None` when the region is necessarily empty.
    pub fn region_box(&self) -> Option<Rect> {
        let first = self.circles.first()?;
        let disks = self.circles.iter().fold(first.bbox(), |acc, c| acc.union(&c.bbox()));
        self.polygon.bbox().intersection(&disks)
    }

    /// Length scale used for geometric tolerances.
    pub fn scale(&self) -> f64 {
        self.bbox.diagonal()
    }

    /// Membership in the closed region `P ∩ (∪ C_k)`.
    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        self.circles.iter().any(|c| c.contains(p)) && self.polygon.contains(p)
    }

    /// Upper bound `min(Area(P), Σ πR²)`.
    pub fn area_upper_bound(&self) -> f64 {
        let disks: f64 = self.circles.iter().map(Circle::area).sum();
        self.polygon.area().min(disks)
    }

    /// Same scene with every coordinate mapped through `x -> s * x + t`.
    pub fn transformed(&self, s: f64, t: Point) -> Result<Scene> {
        if !(s.is_finite() && s > 0.0) {
            return Err(CoverError::InvalidScene(format!("bad scale {s}")));
        }
        let polygon = self.polygon.map(|p| p.scale(s).add(t))?;
        let circles = self
            .circles
            .iter()
            .map(|c| Circle::new(c.center.scale(s).add(t), c.radius * s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scene::new(polygon, circles))
    }
}
