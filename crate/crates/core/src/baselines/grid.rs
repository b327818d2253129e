use crate::aqbf::classify_cell;
use crate::error::{CoverError, Result};
use crate::geometry::{Cell, Point, RegionClass, Scene};
use rayon::prelude::*;

const STENCIL: usize = 5;

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution == 0 {
        return Err(CoverError::InvalidParams("grid resolution must be at least 1".into()));
    }
    Ok(())
}

/// Midpoint rule: `resolution × resolution` cells over the region box, each
/// counted in full when its center is covered.
pub fn uniform_grid(scene: &Scene, resolution: usize) -> Result<f64> {
    check_resolution(resolution)?;
    let Some(b) = scene.region_box() else { return Ok(0.0) };
    let (dx, dy) = (b.width() / resolution as f64, b.height() / resolution as f64);
    let count: u64 = (0..resolution)
        .into_par_iter()
        .map(|j| {
            let y = b.y_min + (j as f64 + 0.5) * dy;
            (0..resolution)
                .filter(|&i| scene.contains(Point::new(b.x_min + (i as f64 + 0.5) * dx, y)))
                .count() as u64
        })
        .sum();
    Ok(count as f64 * dx * dy)
}

/// Cells classified as fully covered or fully uncovered count exactly; mixed
/// cells take the covered fraction of a 5×5 midpoint stencil.
pub fn grid_integration(scene: &Scene, resolution: usize) -> Result<f64> {
    check_resolution(resolution)?;
    let Some(b) = scene.region_box() else { return Ok(0.0) };
    let (dx, dy) = (b.width() / resolution as f64, b.height() / resolution as f64);
    let rows: Vec<f64> = (0..resolution)
        .into_par_iter()
        .map(|j| {
            let mut row = 0.0;
            for i in 0..resolution {
                let cell = Cell {
                    x_min: b.x_min + i as f64 * dx,
                    x_max: b.x_min + (i + 1) as f64 * dx,
                    y_min: b.y_min + j as f64 * dy,
                    y_max: b.y_min + (j + 1) as f64 * dy,
                };
                row += match classify_cell(&cell, scene) {
                    RegionClass::Inside => cell.area(),
                    RegionClass::Outside => 0.0,
                    RegionClass::Boundary => cell.area() * stencil_fraction(&cell, scene),
                };
            }
            row
        })
        .collect();
    Ok(rows.iter().sum())
}

fn stencil_fraction(cell: &Cell, scene: &Scene) -> f64 {
    let (w, h) = (cell.x_max - cell.x_min, cell.y_max - cell.y_min);
    let mut hits = 0;
    for a in 0..STENCIL {
        for c in 0..STENCIL {
            let p = Point::new(
                cell.x_min + (a as f64 + 0.5) / STENCIL as f64 * w,
                cell.y_min + (c as f64 + 0.5) / STENCIL as f64 * h,
            );
            if scene.contains(p) {
                hits += 1;
            }
        }
    }
    hits as f64 / (STENCIL * STENCIL) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::fixtures::*;
    use crate::exact::exact_area;
    use crate::scenario::{gen_scene, GenSpec};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn trivial_scenes() {
        assert_relative_eq!(uniform_grid(&full_box(), 37).unwrap(), 4.0, max_relative = 1e-12);
        assert_relative_eq!(grid_integration(&full_box(), 37).unwrap(), 4.0, max_relative = 1e-12);
        assert_eq!(uniform_grid(&disjoint(), 50).unwrap(), 0.0);
        assert_eq!(grid_integration(&disjoint(), 50).unwrap(), 0.0);
        assert!(uniform_grid(&full_box(), 0).is_err());
    }

    #[test]
    fn quarter_disk_accuracy() {
        let ug = uniform_grid(&quarter_disk(), 1000).unwrap();
        assert!((ug - PI / 4.0).abs() / (PI / 4.0) < 0.01);
        let gi = grid_integration(&quarter_disk(), 200).unwrap();
        assert!((gi - PI / 4.0).abs() / (PI / 4.0) < 0.005);
    }

    #[test]
    fn stencil_rule_matches_brute_force() {
        // Grid integration at resolution r equals the midpoint rule at 5r on
        // mixed cells and the exact cell area elsewhere; with every cell mixed
        // or classified it is bounded by the 5r midpoint rule's error.
        let scene = quarter_disk();
        let gi = grid_integration(&scene, 40).unwrap();
        let fine = uniform_grid(&scene, 200).unwrap();
        assert!((gi - fine).abs() < 2.0 * (1.0 / 200.0) * PI / 2.0 * (1.0 / 200.0) * 50.0);
    }

    #[test]
    fn median_error_decreases_with_resolution() {
        let scenes: Vec<_> = (1..=20).map(|seed| gen_scene(&GenSpec { seed, ..GenSpec::default() })).collect();
        let exact: Vec<f64> = scenes.iter().map(exact_area).collect();
        let median = |f: &dyn Fn(&Scene) -> f64| {
            let mut e: Vec<f64> = scenes.iter().zip(&exact).map(|(s, x)| ((f(s) - x) / x).abs()).collect();
            e.sort_by(f64::total_cmp);
            0.5 * (e[9] + e[10])
        };
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for res in [25, 50, 100, 200] {
            let cur = (
                median(&|s| uniform_grid(s, res).unwrap()),
                median(&|s| grid_integration(s, res).unwrap()),
            );
            assert!(cur.0 < prev.0 && cur.1 < prev.1, "resolution {res}: {cur:?} after {prev:?}");
            prev = cur;
        }
    }
}
