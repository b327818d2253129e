//! Comparison methods: plain Monte Carlo, uniform grid, grid integration,
//! adaptive subdivision and triangle-wise analytic intersection.
//!
//! Sampling and grids cover the region box (polygon bounding box clipped to
//! the circles' bounding box), which contains the covered region.

mod grid;
mod monte_carlo;
mod subdivision;
mod triangulation;

pub use grid::{grid_integration, uniform_grid};
pub use monte_carlo::{monte_carlo, McEstimate, Z_975};
pub use subdivision::adaptive_subdivision;
pub use triangulation::{ear_clip, triangulation};

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::geometry::{Circle, Point, Polygon, Scene};

    pub fn square(lo: f64, hi: f64) -> Polygon {
        Polygon::new(vec![
            Point::new(lo, lo),
            Point::new(hi, lo),
            Point::new(hi, hi),
            Point::new(lo, hi),
        ])
        .unwrap()
    }

    pub fn circle(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point::new(x, y), r).unwrap()
    }

    /// Polygon equal to its own bounding box under one huge circle.
    pub fn full_box() -> Scene {
        Scene::new(square(0., 2.), vec![circle(1., 1., 100.)])
    }

    pub fn disjoint() -> Scene {
        Scene::new(square(0., 1.), vec![circle(10., 10., 1.)])
    }

    /// Unit circle at the corner of a large square: area π/4.
    pub fn quarter_disk() -> Scene {
        Scene::new(square(0., 10.), vec![circle(0., 0., 1.)])
    }
}
