use super::AqbfParams;
use crate::geometry::{
    classify_cell_vs_circle, classify_cell_vs_polygon, clip_polygon_to_cell, clip_ring_to_cell,
    clip_segment_to_rect, point_in_polygon, ring_circle_area, Cell, Point, Polygon, RegionClass, Scene,
};
use rand::Rng;

/// Per-cell coverage summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCoverageInfo {
    /// Circles containing the whole cell.
    pub inside: Vec<usize>,
    /// Circles whose boundary crosses the cell.
    pub boundary: Vec<usize>,
    /// `|boundary|`.
    pub multiplicity: usize,
    /// Sum of `1 / R` over the crossing circles.
    pub kappa_sum: f64,
    /// `Area(E ∩ P)`.
    pub covered_polygon_area: f64,
}

/// Area attributed to one leaf and the number of points it drew.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Contribution {
    pub area: f64,
    pub samples: u64,
}

pub fn coverage_info(cell: &Cell, scene: &Scene) -> CellCoverageInfo {
    let mut inside = Vec::new();
    let mut boundary = Vec::new();
    for (k, c) in scene.circles.iter().enumerate() {
        match classify_cell_vs_circle(cell, c) {
            RegionClass::Inside => inside.push(k),
            RegionClass::Boundary => boundary.push(k),
            RegionClass::Outside => {}
        }
    }
    let kappa_sum = boundary.iter().map(|&k| 1.0 / scene.circles[k].radius).sum();
    CellCoverageInfo {
        multiplicity: boundary.len(),
        inside,
        boundary,
        kappa_sum,
        covered_polygon_area: clip_polygon_to_cell(&scene.polygon, cell),
    }
}

/// `min(N_max, max(N_min, ⌈C · m · κ_sum · area / ε_sampling²⌉))`.
pub fn subsample_count(multiplicity: usize, kappa_sum: f64, cell_area: f64, params: &AqbfParams) -> u64 {
    let eps = params.epsilon_sampling;
    let raw = params.c * multiplicity as f64 * kappa_sum * cell_area / (eps * eps);
    // Shave float noise so exact products are not bumped to the next integer.
    let n = (raw * (1.0 - 1e-12)).ceil();
    if !(n < params.n_max as f64) {
        return params.n_max;
    }
    (n.max(0.0) as u64).clamp(params.n_min, params.n_max)
}

/// Area of `E ∩ P ∩ (∪ C_k)` for one BOUNDARY leaf. Cells inside some circle
/// take the clipped polygon area, cells with one crossing circle are
/// integrated exactly, and cells with several are subsampled.
pub fn cell_contribution<R: Rng + ?Sized>(cell: &Cell, scene: &Scene, params: &AqbfParams, rng: &mut R) -> Contribution {
    let info = coverage_info(cell, scene);
    let a_e = info.covered_polygon_area;
    if params.multiplicity_weighted {
        return match info.boundary.len() {
            0 => Contribution { area: info.inside.len() as f64 * a_e, samples: 0 },
            1 => Contribution { area: single_circle(cell, scene, info.boundary[0], a_e), samples: 0 },
            _ => sample(cell, scene, &info, params, rng),
        };
    }
    if !info.inside.is_empty() {
        return Contribution { area: a_e, samples: 0 };
    }
    match info.boundary.len() {
        0 => Contribution::default(),
        1 => Contribution { area: single_circle(cell, scene, info.boundary[0], a_e), samples: 0 },
        _ => sample(cell, scene, &info, params, rng),
    }
}

fn single_circle(cell: &Cell, scene: &Scene, k: usize, a_e: f64) -> f64 {
    if a_e <= 0.0 {
        return 0.0;
    }
    let ring = clip_ring_to_cell(scene.polygon.vertices(), cell);
    ring_circle_area(&ring, &scene.circles[k]).clamp(0.0, a_e)
}

fn sample<R: Rng + ?Sized>(
    cell: &Cell,
    scene: &Scene,
    info: &CellCoverageInfo,
    params: &AqbfParams,
    rng: &mut R,
) -> Contribution {
    let n = subsample_count(info.multiplicity, info.kappa_sum, cell.area(), params);
    if info.covered_polygon_area <= 0.0 {
        return Contribution { area: 0.0, samples: 0 };
    }
    let local = LocalPolygon::new(cell, &scene.polygon);
    let circles: Vec<_> = info.boundary.iter().map(|&k| scene.circles[k]).collect();
    let side = cell.side();
    let mut hits = 0u64;
    for _ in 0..n {
        let p = Point::new(cell.x_min + rng.random::<f64>() * side, cell.y_min + rng.random::<f64>() * side);
        if circles.iter().any(|c| c.contains(p)) && local.contains(p) {
            hits += 1;
        }
    }
    Contribution { area: cell.area() * hits as f64 / n as f64, samples: n }
}

/// Polygon membership restricted to one cell: the parity at a reference point
/// is flipped by every touching edge the segment to the query point crosses.
struct LocalPolygon {
    all_inside: bool,
    reference: Point,
    reference_inside: bool,
    edges: Vec<(Point, Point)>,
}

impl LocalPolygon {
    fn new(cell: &Cell, polygon: &Polygon) -> Self {
        let rect = cell.as_rect();
        let edges: Vec<_> = polygon.edges().filter(|&(a, b)| clip_segment_to_rect(a, b, &rect).is_some()).collect();
        let all_inside = classify_cell_vs_polygon(cell, polygon) == RegionClass::Inside;
        // Pick a reference point well away from every touching edge.
        let side = cell.side();
        let candidates = [(0.5, 0.5), (0.3141, 0.6931), (0.7071, 0.2718), (0.1618, 0.1414), (0.8660, 0.5772)];
        let mut best = (cell.center(), -1.0);
        for (fx, fy) in candidates {
            let r = Point::new(cell.x_min + fx * side, cell.y_min + fy * side);
            let clearance = edges.iter().map(|&(a, b)| segment_distance(r, a, b)).fold(f64::INFINITY, f64::min);
            if clearance > best.1 {
                best = (r, clearance);
            }
            if clearance > 1e-6 * side {
                break;
            }
        }
        let reference = best.0;
        Self { all_inside, reference, reference_inside: point_in_polygon(reference, polygon), edges }
    }

    fn contains(&self, p: Point) -> bool {
        if self.all_inside {
            return true;
        }
        let r = self.reference;
        let mut inside = self.reference_inside;
        for &(a, b) in &self.edges {
            let d1 = orient(a, b, r);
            let d2 = orient(a, b, p);
            let d3 = orient(r, p, a);
            let d4 = orient(r, p, b);
            if ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0)) && d1 != 0.0 && d2 != 0.0 {
                inside = !inside;
            }
        }
        inside
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    b.sub(a).cross(c.sub(a))
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.norm2();
    let t = if len2 > 0.0 { (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    a.lerp(b, t).dist(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_area;
    use crate::geometry::Circle;
    use crate::rng::substream;
    use crate::scenario::{gen_scene, GenSpec};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn square(x: f64, y: f64, side: f64) -> Polygon {
        Polygon::new(vec![
            Point::new(x, y),
            Point::new(x + side, y),
            Point::new(x + side, y + side),
            Point::new(x, y + side),
        ])
        .unwrap()
    }

    fn circle(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point::new(x, y), r).unwrap()
    }

    #[test]
    fn budget_examples() {
        let p = AqbfParams::default();
        assert_eq!(subsample_count(2, 9.0, 1e-6, &p), 7200);
        assert_eq!(subsample_count(2, 2.0, 1e-10, &p), 450);
        assert_eq!(subsample_count(50, 1e3, 1.0, &p), 1_000_000);
        let capped = AqbfParams { n_max: 1000, ..p };
        assert_eq!(subsample_count(2, 9.0, 1e-6, &capped), 1000);
    }

    #[test]
    fn coverage_info_example() {
        let scene = Scene::new(square(0., 0., 1.), vec![circle(0., 0., 5.), circle(0.5, 0.5, 0.2), circle(9., 9., 1.)]);
        let info = coverage_info(&Cell::square(0.25, 0.25, 0.5), &scene);
        assert_eq!(info.inside, vec![0]);
        assert_eq!(info.boundary, vec![1]);
        assert_eq!(info.multiplicity, 1);
        assert_relative_eq!(info.kappa_sum, 5.0);
        assert_relative_eq!(info.covered_polygon_area, 0.25);
    }

    #[test]
    fn contained_cell_takes_clipped_polygon_area() {
        // Triangle cutting the cell diagonally; a big circle covers the cell.
        let tri = Polygon::new(vec![Point::new(0., 0.), Point::new(1., 0.), Point::new(0., 1.)]).unwrap();
        let scene = Scene::new(tri, vec![circle(0.5, 0.5, 2.0), circle(0.5, 0.5, 0.3)]);
        let cell = Cell::square(0., 0., 1.);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = cell_contribution(&cell, &scene, &AqbfParams::default(), &mut rng);
        assert_relative_eq!(c.area, 0.5);
        assert_eq!(c.samples, 0);
    }

    #[test]
    fn single_crossing_circle_is_exact() {
        // Cell inside the polygon, one circle crossing it: compare with the
        // boundary-integration oracle on the cell itself.
        let scene = Scene::new(square(-5., -5., 10.), vec![circle(0.3, 0.2, 0.45)]);
        let cell = Cell::square(0., 0., 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let got = cell_contribution(&cell, &scene, &AqbfParams::default(), &mut rng);
        let oracle = exact_area(&Scene::new(square(0., 0., 0.5), scene.circles.clone()));
        assert_relative_eq!(got.area, oracle, max_relative = 1e-12);
        assert_eq!(got.samples, 0);
    }

    #[test]
    fn no_circle_contributes_nothing() {
        let scene = Scene::new(square(0., 0., 1.), vec![circle(5., 5., 1.)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = cell_contribution(&Cell::square(0., 0., 1.), &scene, &AqbfParams::default(), &mut rng);
        assert_eq!(c, Contribution::default());
    }

    #[test]
    fn two_crossing_circles_match_oracle_within_binomial_error() {
        let scene = Scene::new(square(-5., -5., 10.), vec![circle(0.0, 0.5, 0.6), circle(1.0, 0.5, 0.6)]);
        let cell = Cell::square(0., 0., 1.);
        let params = AqbfParams { n_min: 40_000, ..AqbfParams::default() };
        let oracle = exact_area(&Scene::new(square(0., 0., 1.), scene.circles.clone()));
        let mut rng = substream(7, 1);
        let got = cell_contribution(&cell, &scene, &params, &mut rng);
        assert!(got.samples >= 40_000);
        let p = oracle;
        let sigma = (p * (1.0 - p) / got.samples as f64).sqrt();
        assert!((got.area - oracle).abs() < 4.0 * sigma, "{} vs {oracle}", got.area);
    }

    #[test]
    fn local_polygon_agrees_with_global_test() {
        for seed in 1..=5 {
            let scene = gen_scene(&GenSpec { n_vertices: 40, seed, ..GenSpec::default() });
            let bb = scene.polygon.bbox();
            let side = bb.width().max(bb.height()) / 8.0;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..8 {
                for j in 0..8 {
                    let cell = Cell::square(bb.x_min + i as f64 * side, bb.y_min + j as f64 * side, side);
                    let local = LocalPolygon::new(&cell, &scene.polygon);
                    for _ in 0..50 {
                        let p = Point::new(
                            cell.x_min + rng.random::<f64>() * side,
                            cell.y_min + rng.random::<f64>() * side,
                        );
                        assert_eq!(local.contains(p), point_in_polygon(p, &scene.polygon));
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicity_weighted_counts_containing_circles() {
        let scene = Scene::new(square(0., 0., 1.), vec![circle(0.5, 0.5, 3.0), circle(0.4, 0.5, 3.0)]);
        let cell = Cell::square(0., 0., 0.5);
        let literal = AqbfParams { multiplicity_weighted: true, ..AqbfParams::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_relative_eq!(cell_contribution(&cell, &scene, &literal, &mut rng).area, 0.5);
        assert_relative_eq!(cell_contribution(&cell, &scene, &AqbfParams::default(), &mut rng).area, 0.25);
    }
}
