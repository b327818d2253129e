use super::{normalize_angle, Circle, Point, REL_TOL};

fn orient(a: Point, b: Point, c: Point) -> f64 {
    b.sub(a).cross(c.sub(a))
}

fn on_box(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_box(c, d, a))
        || (d2 == 0.0 && on_box(c, d, b))
        || (d3 == 0.0 && on_box(a, b, c))
        || (d4 == 0.0 && on_box(a, b, d))
}

/// Parameters `t ∈ [0, 1]` where `p1 + t (p2 - p1)` meets the circle,
/// ascending. A tangent line yields a single parameter.
pub fn segment_circle_intersections(p1: Point, p2: Point, circle: &Circle) -> Vec<f64> {
    let d = p2.sub(p1);
    let f = p1.sub(circle.center);
    let a = d.norm2();
    if a == 0.0 {
        return Vec::new();
    }
    let half_b = f.dot(d);
    let c = f.norm2() - circle.radius * circle.radius;
    let disc = half_b * half_b - a * c;
    let scale = half_b * half_b + (a * c).abs();
    let tol = 1e-12 * scale;
    let mut roots: Vec<f64> = if disc < -tol {
        Vec::new()
    } else if disc <= tol {
        vec![-half_b / a]
    } else {
        let s = disc.sqrt();
        let q = -half_b - half_b.signum() * s;
        if q == 0.0 {
            vec![-s / a, s / a]
        } else {
            let (r1, r2) = (q / a, c / q);
            if r1 < r2 {
                vec![r1, r2]
            } else {
                vec![r2, r1]
            }
        }
    };
    let t_tol = REL_TOL;
    roots.retain(|t| *t >= -t_tol && *t <= 1.0 + t_tol);
    for t in roots.iter_mut() {
        *t = t.clamp(0.0, 1.0);
    }
    roots.dedup_by(|x, y| (*x - *y).abs() <= t_tol);
    roots
}

/// How two circles meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleCrossing {
    Disjoint,
    /// One disk inside the other, boundaries not touching.
    Nested,
    /// Same center and radius (within tolerance).
    Identical,
    /// Boundaries touch at one point; angle on the first circle.
    Tangent(f64),
    /// Two crossing angles on the first circle, ascending in `[0, 2π)`.
    Crossing(f64, f64),
}

impl CircleCrossing {
    /// Crossing angles; empty for every non-crossing configuration.
    pub fn angles(&self) -> Vec<f64> {
        match *self {
            CircleCrossing::Crossing(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, CircleCrossing::Identical | CircleCrossing::Tangent(_))
    }
}

pub fn circle_circle_intersection_angles(c1: &Circle, c2: &Circle) -> CircleCrossing {
    let v = c2.center.sub(c1.center);
    let d = v.norm2().sqrt();
    let (r1, r2) = (c1.radius, c2.radius);
    let tol = REL_TOL * r1.max(r2).max(d);
    if d <= tol && (r1 - r2).abs() <= tol {
        return CircleCrossing::Identical;
    }
    let base = v.y.atan2(v.x);
    if (d - (r1 + r2)).abs() <= tol {
        return CircleCrossing::Tangent(normalize_angle(base));
    }
    if d > r1 + r2 {
        return CircleCrossing::Disjoint;
    }
    if (d - (r1 - r2).abs()).abs() <= tol {
        let theta = if r1 >= r2 { base } else { base + std::f64::consts::PI };
        return CircleCrossing::Tangent(normalize_angle(theta));
    }
    if d < (r1 - r2).abs() {
        return CircleCrossing::Nested;
    }
    let cos_a = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0);
    let alpha = cos_a.acos();
    let t1 = normalize_angle(base - alpha);
    let t2 = normalize_angle(base + alpha);
    if t1 <= t2 {
        CircleCrossing::Crossing(t1, t2)
    } else {
        CircleCrossing::Crossing(t2, t1)
    }
}
