//! Sensor deployment preset for the Caribbean coastline study: five regions,
//! 71 nodes, radii drawn in kilometres and converted to degrees.

use crate::geometry::{Circle, Point, Rect};
use crate::rng;
use rand::Rng;

/// Degrees of arc per kilometre on a 111.32 km/degree sphere.
pub const DEFAULT_DEG_PER_KM: f64 = 1.0 / 111.32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetRegion {
    pub name: &'static str,
    pub nodes: usize,
    /// Longitude (east positive) × latitude box in degrees.
    pub bounds: Rect,
    pub radius_km: (f64, f64),
}

const fn region(name: &'static str, nodes: usize, lon: (f64, f64), lat: (f64, f64), r: (f64, f64)) -> PresetRegion {
    PresetRegion {
        name,
        nodes,
        bounds: Rect { x_min: lon.0, y_min: lat.0, x_max: lon.1, y_max: lat.1 },
        radius_km: r,
    }
}

pub const CARIBBEAN_REGIONS: [PresetRegion; 5] = [
    region("Cuba", 15, (-85.0, -74.0), (19.5, 23.5), (30.0, 120.0)),
    region("Hispaniola", 12, (-75.0, -68.0), (17.5, 20.0), (25.0, 100.0)),
    region("Trinidad", 9, (-62.0, -60.5), (10.0, 11.0), (20.0, 80.0)),
    // Open sea near 15°N 85°W; no extent given, a 2°×2° box is used.
    region("Area A", 15, (-86.0, -84.0), (14.0, 16.0), (40.0, 100.0)),
    // Band along 10°N between 75°W and 65°W.
    region("Area B", 20, (-75.0, -65.0), (9.5, 10.5), (35.0, 90.0)),
];

pub fn caribbean_preset(seed: u64, deg_per_km: f64) -> Vec<Circle> {
    let mut out = Vec::with_capacity(71);
    for (k, reg) in CARIBBEAN_REGIONS.iter().enumerate() {
        let mut rng = rng::substream(seed, k as u64);
        let b = reg.bounds;
        for _ in 0..reg.nodes {
            let x = b.x_min + rng.random::<f64>() * b.width();
            let y = b.y_min + rng.random::<f64>() * b.height();
            let r_km = rng.random_range(reg.radius_km.0..=reg.radius_km.1);
            out.push(Circle::new(Point::new(x, y), r_km * deg_per_km).expect("positive radius"));
        }
    }
    out
}
