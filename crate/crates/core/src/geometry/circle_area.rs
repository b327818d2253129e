use super::{segment_circle_intersections, Circle, Point, Polygon};

/// Green contribution of a closed ring intersected with a disk.
///
/// Each edge is split at its crossings with the circle. Pieces inside the disk
/// contribute `½ (x₁y₂ − x₂y₁)`; pieces outside are replaced by the arc
/// between the radial projections of their endpoints, contributing `½ R² Δθ`.
/// Coordinates are taken relative to the circle center. The sum is the signed
/// area of `ring ∩ disk` for any closed ring, including the degenerate bridge
/// edges left by Sutherland–Hodgman clipping.
pub fn ring_circle_area(ring: &[Point], circle: &Circle) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let c = circle.center;
    let r2 = circle.radius * circle.radius;
    let rel = Circle { center: Point::new(0.0, 0.0), radius: circle.radius };
    let mut sum = 0.0;
    let mut breaks: Vec<f64> = Vec::with_capacity(4);
    for i in 0..n {
        let a = ring[i].sub(c);
        let b = ring[(i + 1) % n].sub(c);
        if a == b {
            continue;
        }
        breaks.clear();
        breaks.push(0.0);
        breaks.extend(segment_circle_intersections(a, b, &rel));
        breaks.push(1.0);
        for w in breaks.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if t1 <= t0 {
                continue;
            }
            let p = a.lerp(b, t0);
            let q = a.lerp(b, t1);
            let mid = a.lerp(b, 0.5 * (t0 + t1));
            if mid.norm2() <= r2 {
                sum += 0.5 * p.cross(q);
            } else {
                sum += 0.5 * r2 * p.cross(q).atan2(p.dot(q));
            }
        }
    }
    sum
}

/// Exact `Area(P ∩ C)`.
pub fn polygon_circle_area(polygon: &Polygon, circle: &Circle) -> f64 {
    let bb = polygon.bbox();
    let cb = circle.bbox();
    if cb.x_min >= bb.x_max || cb.x_max <= bb.x_min || cb.y_min >= bb.y_max || cb.y_max <= bb.y_min {
        return 0.0;
    }
    let a = ring_circle_area(polygon.vertices(), circle);
    a.clamp(0.0, polygon.area().min(circle.area()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tests::{pts, unit_square};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn circle(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point::new(x, y), r).unwrap()
    }

    fn l_shape() -> Polygon {
        Polygon::new(pts(&[(0., 0.), (2., 0.), (2., 2.), (1., 2.), (1., 1.), (0., 1.)])).unwrap()
    }

    /// Midpoint-grid estimate over the circle's bounding box.
    fn grid_estimate(poly: &Polygon, c: &Circle, n: usize) -> f64 {
        let bb = c.bbox();
        let h = bb.width() / n as f64;
        let mut count = 0usize;
        for i in 0..n {
            for j in 0..n {
                let p = Point::new(bb.x_min + (i as f64 + 0.5) * h, bb.y_min + (j as f64 + 0.5) * h);
                if c.contains(p) && poly.contains(p) {
                    count += 1;
                }
            }
        }
        count as f64 * h * h
    }

    #[test]
    fn polygon_circle_examples() {
        let sq = unit_square();
        assert_relative_eq!(polygon_circle_area(&sq, &circle(0., 0., 1.)), PI / 4.0, epsilon = 1e-14);
        assert_relative_eq!(polygon_circle_area(&sq, &circle(0.5, 0.5, 2.)), 1.0, epsilon = 1e-14);
        assert_eq!(polygon_circle_area(&sq, &circle(5., 5., 1.)), 0.0);
        // Disk strictly inside.
        assert_relative_eq!(polygon_circle_area(&sq, &circle(0.5, 0.5, 0.25)), PI / 16.0, epsilon = 1e-14);
    }

    #[test]
    fn l_shape_three_quadrants() {
        let expected = 0.75 * PI * 0.25;
        let grid = grid_estimate(&l_shape(), &circle(1., 1., 0.5), 2000);
        // Frozen brute-force value agrees with three quarters of the disk.
        assert_relative_eq!(grid, expected, max_relative = 2e-3);
        assert_relative_eq!(polygon_circle_area(&l_shape(), &circle(1., 1., 0.5)), expected, epsilon = 1e-14);
    }

    #[test]
    fn agrees_with_grid_on_random_instances() {
        use crate::scenario::{gen_polygon, GenSpec};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for seed in 0..50u64 {
            let spec = GenSpec { n_vertices: 3 + (seed as usize % 12), seed, diameter: 4.0, ..GenSpec::default() };
            let poly = gen_polygon(&spec);
            let c = circle(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5), rng.random_range(0.3..1.8));
            let n = 2000;
            let h = 2.0 * c.radius / n as f64;
            let exact = polygon_circle_area(&poly, &c);
            let grid = grid_estimate(&poly, &c, n);
            let bound = 2.0 * h * h * (poly.perimeter() + 2.0 * PI * c.radius) / h;
            assert!((exact - grid).abs() <= bound, "seed {seed}: {exact} vs {grid}");
            assert!(exact >= 0.0 && exact <= poly.area().min(c.area()) + 1e-12);
        }
    }

    #[test]
    fn clockwise_ring_is_negative() {
        let ring: Vec<Point> = unit_square().reversed_vertices();
        assert_relative_eq!(ring_circle_area(&ring, &circle(0., 0., 1.)), -PI / 4.0, epsilon = 1e-14);
    }
}
