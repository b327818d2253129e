//! Ground-truth area by boundary integration.
//!
//! The boundary of `Ω = P ∩ (∪ C_k)` splits into polygon edge pieces lying in
//! the union of disks and circular arcs lying inside the polygon and outside
//! every other disk. With edges traversed in polygon order and arcs
//! counterclockwise on their own circle, the region is always on the left, so
//! `½ ∮ (x dy − y dx)` summed over all pieces is the exact area, holes
//! included.

use crate::geometry::{
    circle_circle_intersection_angles, segment_circle_intersections, Circle, CircleCrossing, Point,
    Scene, REL_TOL,
};
use rayon::prelude::*;
use std::f64::consts::TAU;

/// An angular interval on one circle, `0 ≤ theta_start < theta_end ≤ 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcInterval {
    pub circle_index: usize,
    pub theta_start: f64,
    pub theta_end: f64,
}

/// A parameter sub-interval of polygon edge `edge_index`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePiece {
    pub edge_index: usize,
    pub t_start: f64,
    pub t_end: f64,
}

/// `½ (x₁y₂ − x₂y₁)`.
#[inline]
pub fn green_segment(p1: Point, p2: Point) -> f64 {
    0.5 * (p1.x * p2.y - p2.x * p1.y)
}

/// Green contribution of the counterclockwise arc `θ ∈ [θ1, θ2]` on the circle
/// with center `(a, b)` and radius `r`.
#[inline]
pub fn green_arc(center: Point, r: f64, theta1: f64, theta2: f64) -> f64 {
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    0.5 * (r * r * (theta2 - theta1) + center.x * r * (s2 - s1) - center.y * r * (c2 - c1))
}

/// Circles that duplicate a lower-indexed circle own no boundary.
fn duplicate_mask(circles: &[Circle]) -> Vec<bool> {
    (0..circles.len())
        .map(|k| {
            (0..k).any(|j| {
                circle_circle_intersection_angles(&circles[j], &circles[k]) == CircleCrossing::Identical
            })
        })
        .collect()
}

fn sort_breaks(mut v: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    v.push(lo);
    v.push(hi);
    v.retain(|t| *t >= lo && *t <= hi);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Merge kept sub-intervals that share an endpoint.
fn merge(kept: impl Iterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in kept {
        match out.last_mut() {
            Some(last) if last.1 == a => last.1 = b,
            _ => out.push((a, b)),
        }
    }
    out
}

struct ArcReport {
    arcs: Vec<ArcInterval>,
    degenerate: bool,
}

fn arcs_for(k: usize, scene: &Scene, dup: &[bool]) -> ArcReport {
    if dup[k] {
        return ArcReport { arcs: Vec::new(), degenerate: true };
    }
    let circle = &scene.circles[k];
    let tol = REL_TOL * scene.scale();
    let cb = circle.bbox();
    let mut degenerate = false;
    let mut breaks = Vec::new();
    for (a, b) in scene.polygon.edges() {
        if a.x.max(b.x) < cb.x_min || a.x.min(b.x) > cb.x_max || a.y.max(b.y) < cb.y_min || a.y.min(b.y) > cb.y_max {
            continue;
        }
        if (a.dist(circle.center) - circle.radius).abs() <= tol {
            degenerate = true;
        }
        for t in segment_circle_intersections(a, b, circle) {
            breaks.push(circle.angle_of(a.lerp(b, t)));
        }
    }
    for (j, other) in scene.circles.iter().enumerate() {
        if j == k || dup[j] {
            continue;
        }
        match circle_circle_intersection_angles(circle, other) {
            CircleCrossing::Crossing(t1, t2) => breaks.extend([t1, t2]),
            CircleCrossing::Tangent(t) => {
                degenerate = true;
                breaks.push(t);
            }
            _ => {}
        }
    }
    let breaks = sort_breaks(breaks, 0.0, TAU);
    let kept = breaks.windows(2).filter_map(|w| {
        let (t0, t1) = (w[0], w[1]);
        if t1 <= t0 {
            return None;
        }
        let p = circle.point_at(0.5 * (t0 + t1));
        let covered = scene
            .circles
            .iter()
            .enumerate()
            .any(|(j, c)| j != k && !dup[j] && c.contains_strictly(p));
        (!covered && scene.polygon.contains(p)).then_some((t0, t1))
    });
    let arcs = merge(kept)
        .into_iter()
        .map(|(a, b)| ArcInterval { circle_index: k, theta_start: a, theta_end: b })
        .collect();
    ArcReport { arcs, degenerate }
}

/// Arcs of circle `k` that lie inside the polygon and outside every other
/// open disk, sorted and disjoint.
pub fn circle_boundary_arcs(k: usize, scene: &Scene) -> Vec<ArcInterval> {
    arcs_for(k, scene, &duplicate_mask(&scene.circles)).arcs
}

fn pieces_with_mask(scene: &Scene, dup: &[bool]) -> Vec<EdgePiece> {
    let live: Vec<&Circle> = scene
        .circles
        .iter()
        .zip(dup)
        .filter(|(_, d)| !**d)
        .map(|(c, _)| c)
        .collect();
    let mut out = Vec::new();
    for (i, (a, b)) in scene.polygon.edges().enumerate() {
        let (ex0, ex1) = (a.x.min(b.x), a.x.max(b.x));
        let (ey0, ey1) = (a.y.min(b.y), a.y.max(b.y));
        let near: Vec<&Circle> = live
            .iter()
            .copied()
            .filter(|c| {
                let cb = c.bbox();
                !(ex1 < cb.x_min || ex0 > cb.x_max || ey1 < cb.y_min || ey0 > cb.y_max)
            })
            .collect();
        if near.is_empty() {
            continue;
        }
        let breaks: Vec<f64> = near
            .iter()
            .flat_map(|c| segment_circle_intersections(a, b, c))
            .collect();
        let breaks = sort_breaks(breaks, 0.0, 1.0);
        let kept = breaks.windows(2).filter_map(|w| {
            let (t0, t1) = (w[0], w[1]);
            if t1 <= t0 {
                return None;
            }
            let p = a.lerp(b, 0.5 * (t0 + t1));
            near.iter().any(|c| c.contains(p)).then_some((t0, t1))
        });
        out.extend(
            merge(kept)
                .into_iter()
                .map(|(t0, t1)| EdgePiece { edge_index: i, t_start: t0, t_end: t1 }),
        );
    }
    out
}

/// Maximal sub-intervals of each polygon edge lying in at least one closed
/// disk.
pub fn polygon_edge_pieces_in_union(scene: &Scene) -> Vec<EdgePiece> {
    pieces_with_mask(scene, &duplicate_mask(&scene.circles))
}

/// Full oracle output.
#[derive(Debug, Clone)]
pub struct ExactArea {
    pub area: f64,
    pub arcs: Vec<ArcInterval>,
    pub pieces: Vec<EdgePiece>,
    /// Tangencies, duplicate circles, or vertices on a circle were snapped.
    pub degenerate: bool,
}

pub fn exact_area_detailed(scene: &Scene) -> ExactArea {
    let dup = duplicate_mask(&scene.circles);
    let reports: Vec<ArcReport> = (0..scene.circles.len())
        .into_par_iter()
        .map(|k| arcs_for(k, scene, &dup))
        .collect();
    let pieces = pieces_with_mask(scene, &dup);
    let degenerate = reports.iter().any(|r| r.degenerate);
    let arcs: Vec<ArcInterval> = reports.into_iter().flat_map(|r| r.arcs).collect();

    // Integrate relative to the scene center; the closed-loop sum is
    // translation invariant and this limits cancellation.
    let bb = scene.bbox();
    let o = Point::new(0.5 * (bb.x_min + bb.x_max), 0.5 * (bb.y_min + bb.y_max));
    let mut sum = 0.0;
    for piece in &pieces {
        let (a, b) = scene.polygon.edge(piece.edge_index);
        sum += green_segment(a.lerp(b, piece.t_start).sub(o), a.lerp(b, piece.t_end).sub(o));
    }
    for arc in &arcs {
        let c = &scene.circles[arc.circle_index];
        sum += green_arc(c.center.sub(o), c.radius, arc.theta_start, arc.theta_end);
    }
    if degenerate {
        log::warn!("degenerate configuration snapped to tolerance in boundary integration");
    }
    ExactArea { area: sum.max(0.0), arcs, pieces, degenerate }
}

/// Exact `Area(P ∩ (∪ C_k))` up to rounding.
pub fn exact_area(scene: &Scene) -> f64 {
    exact_area_detailed(scene).area
}
