use crate::aqbf::classify_cell;
use crate::error::{CoverError, Result};
use crate::geometry::{Cell, RegionClass, Scene};

/// Recursive subdivision of the region box: covered cells count in full,
/// uncovered cells not at all, and cells still mixed at `max_depth` count for
/// half their area.
pub fn adaptive_subdivision(scene: &Scene, max_depth: u32) -> Result<f64> {
    if max_depth > 30 {
        return Err(CoverError::InvalidParams(format!("max_depth {max_depth} exceeds 30")));
    }
    let Some(b) = scene.region_box() else { return Ok(0.0) };
    let root = Cell { x_min: b.x_min, x_max: b.x_max, y_min: b.y_min, y_max: b.y_max };
    Ok(recurse(&root, scene, max_depth).0)
}

/// (estimate, total area of cells left mixed at the depth limit)
fn recurse(cell: &Cell, scene: &Scene, depth_left: u32) -> (f64, f64) {
    match classify_cell(cell, scene) {
        RegionClass::Inside => (cell.area(), 0.0),
        RegionClass::Outside => (0.0, 0.0),
        RegionClass::Boundary if depth_left == 0 => (0.5 * cell.area(), cell.area()),
        RegionClass::Boundary => cell.children().iter().fold((0.0, 0.0), |acc, c| {
            let (a, m) = recurse(c, scene, depth_left - 1);
            (acc.0 + a, acc.1 + m)
        }),
    }
}
