use super::{segment_meets_open_rect, Cell, Circle, Point, Polygon, RegionClass, REL_TOL};

/// Whether `p` lies within `tol` of the segment `a`–`b`.
pub fn point_on_segment(p: Point, a: Point, b: Point, tol: f64) -> bool {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let len2 = ab.norm2();
    let t = if len2 > 0.0 { (ap.dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    a.lerp(b, t).sub(p).norm2() <= tol * tol
}

/// Ray-casting containment test. Points on the boundary (within
/// `1e-12 · diameter`) count as inside.
pub fn point_in_polygon(p: Point, polygon: &Polygon) -> bool {
    let bb = polygon.bbox();
    let tol = REL_TOL * polygon.diameter();
    if p.x < bb.x_min - tol || p.x > bb.x_max + tol || p.y < bb.y_min - tol || p.y > bb.y_max + tol {
        return false;
    }
    let mut inside = false;
    for (a, b) in polygon.edges() {
        let (lo, hi) = if a.y < b.y { (a.y, b.y) } else { (b.y, a.y) };
        if p.y < lo - tol || p.y > hi + tol {
            continue;
        }
        if point_on_segment(p, a, b, tol) {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// INSIDE when every corner is within the closed disk, OUTSIDE when the
/// closest point of the cell is at distance ≥ R from the center.
pub fn classify_cell_vs_circle(cell: &Cell, circle: &Circle) -> RegionClass {
    let c = circle.center;
    let r2 = circle.radius * circle.radius;
    let dx_far = (c.x - cell.x_min).abs().max((cell.x_max - c.x).abs());
    let dy_far = (c.y - cell.y_min).abs().max((cell.y_max - c.y).abs());
    if dx_far * dx_far + dy_far * dy_far <= r2 {
        return RegionClass::Inside;
    }
    let dx_near = (cell.x_min - c.x).max(0.0).max(c.x - cell.x_max);
    let dy_near = (cell.y_min - c.y).max(0.0).max(c.y - cell.y_max);
    if dx_near * dx_near + dy_near * dy_near >= r2 {
        RegionClass::Outside
    } else {
        RegionClass::Boundary
    }
}

/// BOUNDARY when any polygon edge passes through the open cell; otherwise the
/// cell lies entirely on one side and a single containment test at its center
/// decides. Edges running along the cell border leave the cell INSIDE or
/// OUTSIDE, so a cell coinciding with a rectangular polygon is INSIDE.
pub fn classify_cell_vs_polygon(cell: &Cell, polygon: &Polygon) -> RegionClass {
    let rect = cell.as_rect();
    let bb = polygon.bbox();
    if rect.x_min > bb.x_max || rect.x_max < bb.x_min || rect.y_min > bb.y_max || rect.y_max < bb.y_min {
        return RegionClass::Outside;
    }
    if polygon
        .edges()
        .any(|(a, b)| segment_meets_open_rect(a, b, &rect))
    {
        return RegionClass::Boundary;
    }
    if point_in_polygon(cell.center(), polygon) {
        RegionClass::Inside
    } else {
        RegionClass::Outside
    }
}
