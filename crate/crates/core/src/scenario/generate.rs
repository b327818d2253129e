use crate::geometry::{Circle, Point, Polygon, Rect, Scene};
use crate::rng;
use rand::Rng;
use std::f64::consts::TAU;

const POLYGON_STREAM: u64 = 0x706f_6c79;
const CIRCLE_STREAM: u64 = 0x6369_7263;

/// Parameters of the synthetic generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n_vertices: usize,
    pub n_circles: usize,
    pub diameter: f64,
    pub center_box: Rect,
    pub radius_range: (f64, f64),
    pub seed: u64,
}

impl Default for GenSpec {
    fn default() -> Self {
        Self {
            n_vertices: 50,
            n_circles: 30,
            diameter: 10.0,
            center_box: Rect { x_min: -4.0, y_min: -4.0, x_max: 4.0, y_max: 4.0 },
            radius_range: (1.0, 2.5),
            seed: 42,
        }
    }
}

/// Star-shaped polygon about the origin: sorted uniform angles, radii uniform
/// in `[0.3, 1] · diameter / 2`, rescaled so the vertex diameter equals
/// `spec.diameter`.
pub fn gen_polygon(spec: &GenSpec) -> Polygon {
    assert!(spec.n_vertices >= 3, "need at least 3 vertices");
    let mut rng = rng::substream(spec.seed, POLYGON_STREAM);
    let n = spec.n_vertices;
    let half = 0.5 * spec.diameter;
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
        angles.sort_by(f64::total_cmp);
        // Consecutive angular gaps must stay below π for the origin to be a
        // kernel point; distinct angles keep the ring simple.
        let max_gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain(std::iter::once(angles[0] + TAU - angles[n - 1]))
            .fold(0.0f64, f64::max);
        let min_gap = angles.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if max_gap >= std::f64::consts::PI || min_gap <= 1e-9 {
            continue;
        }
        let raw: Vec<Point> = angles
            .iter()
            .map(|&t| {
                let r = half * rng.random_range(0.3..=1.0);
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        let d0 = vertex_diameter(&raw);
        let s = spec.diameter / d0;
        let verts: Vec<Point> = raw.iter().map(|p| p.scale(s)).collect();
        match Polygon::new(verts) {
            Ok(p) => return p,
            Err(e) => log::debug!("rejected generated polygon: {e}"),
        }
    }
}

fn vertex_diameter(v: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.max(v[i].dist(v[j]));
        }
    }
    best
}

/// Circles with centers uniform in `center_box` and radii uniform in
/// `radius_range`.
pub fn gen_circles(spec: &GenSpec) -> Vec<Circle> {
    let mut rng = rng::substream(spec.seed, CIRCLE_STREAM);
    let b = spec.center_box;
    let (r0, r1) = spec.radius_range;
    (0..spec.n_circles)
        .map(|_| {
            let x = b.x_min + rng.random::<f64>() * b.width();
            let y = b.y_min + rng.random::<f64>() * b.height();
            let r = if r1 > r0 { rng.random_range(r0..=r1) } else { r0 };
            Circle::new(Point::new(x, y), r).expect("radius range is positive")
        })
        .collect()
}

pub fn gen_scene(spec: &GenSpec) -> Scene {
    Scene::new(gen_polygon(spec), gen_circles(spec))
}
