use super::{ring_signed_area, Cell, Point, Polygon, Rect};

/// Liang–Barsky: parameter range `[t0, t1]` of the segment inside the closed
/// rectangle, or `None` if they do not touch.
pub fn clip_segment_to_rect(a: Point, b: Point, r: &Rect) -> Option<(f64, f64)> {
    let d = b.sub(a);
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-d.x, a.x - r.x_min),
        (d.x, r.x_max - a.x),
        (-d.y, a.y - r.y_min),
        (d.y, r.y_max - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
            if t0 > t1 {
                return None;
            }
        }
    }
    Some((t0, t1))
}

/// Whether the segment passes through the open interior of the rectangle.
/// Segments that only run along or touch its boundary do not.
pub fn segment_meets_open_rect(a: Point, b: Point, r: &Rect) -> bool {
    match clip_segment_to_rect(a, b, r) {
        Some((t0, t1)) if t0 < t1 => {
            let m = a.lerp(b, 0.5 * (t0 + t1));
            r.x_min < m.x && m.x < r.x_max && r.y_min < m.y && m.y < r.y_max
        }
        _ => false,
    }
}

/// Sutherland–Hodgman clip of a ring against a square cell. Non-convex input
/// can produce zero-width bridge edges; these cancel in any Green-type sum.
pub fn clip_ring_to_cell(ring: &[Point], cell: &Cell) -> Vec<Point> {
    let mut out: Vec<Point> = ring.to_vec();
    let mut buf: Vec<Point> = Vec::with_capacity(ring.len() + 8);
    // (axis, bound, keep_greater)
    let planes = [
        (0u8, cell.x_min, true),
        (0u8, cell.x_max, false),
        (1u8, cell.y_min, true),
        (1u8, cell.y_max, false),
    ];
    for &(axis, bound, keep_ge) in &planes {
        if out.is_empty() {
            break;
        }
        buf.clear();
        let coord = |p: &Point| if axis == 0 { p.x } else { p.y };
        let inside = |p: &Point| if keep_ge { coord(p) >= bound } else { coord(p) <= bound };
        let n = out.len();
        for i in 0..n {
            let cur = out[i];
            let prev = out[(i + n - 1) % n];
            let (cin, pin) = (inside(&cur), inside(&prev));
            if cin != pin {
                let t = (bound - coord(&prev)) / (coord(&cur) - coord(&prev));
                let mut x = prev.lerp(cur, t);
                // Snap onto the clip line exactly.
                if axis == 0 {
                    x.x = bound;
                } else {
                    x.y = bound;
                }
                buf.push(x);
            }
            if cin {
                buf.push(cur);
            }
        }
        std::mem::swap(&mut out, &mut buf);
    }
    out
}

/// `Area(E ∩ P)`.
pub fn clip_polygon_to_cell(polygon: &Polygon, cell: &Cell) -> f64 {
    let bb = polygon.bbox();
    if cell.x_min >= bb.x_max || cell.x_max <= bb.x_min || cell.y_min >= bb.y_max || cell.y_max <= bb.y_min {
        return 0.0;
    }
    if bb.x_min >= cell.x_min && bb.x_max <= cell.x_max && bb.y_min >= cell.y_min && bb.y_max <= cell.y_max {
        return polygon.area();
    }
    let ring = clip_ring_to_cell(polygon.vertices(), cell);
    ring_signed_area(&ring).clamp(0.0, cell.area())
}
