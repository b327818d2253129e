//! Adaptive quadtree with boundary focusing.
//!
//! All formulas run on a scene normalized so the polygon diameter is 1:
//! the cell-size threshold is `δ = √ε_partition` and the per-cell sample
//! budget `max(N_min, ⌈C · m · κ_sum · Area(E) / ε_sampling²⌉)` is then
//! independent of the input length unit. Areas are mapped back by `L²`.

mod focus;
mod tree;

pub use focus::{cell_contribution, coverage_info, subsample_count, CellCoverageInfo, Contribution};
pub use tree::{classify_cell, depth_limit, partition, root_cell, Leaf, QuadNode};

use crate::error::{CoverError, Result};
use crate::geometry::{Point, RegionClass, Scene};
use crate::rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Tuning parameters of the algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct AqbfParams {
    /// Tolerance driving the cell-size threshold `√ε · L`.
    pub epsilon_partition: f64,
    /// Tolerance in the per-cell sample budget.
    pub epsilon_sampling: f64,
    /// Constant factor `C` of the sample budget.
    pub c: f64,
    pub n_min: u64,
    pub n_max: u64,
    pub seed: u64,
    /// Reproduce the literal weighting `|I| · A_E` instead of union coverage.
    pub multiplicity_weighted: bool,
}

impl Default for AqbfParams {
    fn default() -> Self {
        Self {
            epsilon_partition: 1e-6,
            epsilon_sampling: 1e-4,
            c: 4.0,
            n_min: 450,
            n_max: 1_000_000,
            seed: 42,
            multiplicity_weighted: false,
        }
    }
}

impl AqbfParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v.is_finite() && v > 0.0 && v <= 1.0;
        if !unit(self.epsilon_partition) {
            return Err(CoverError::InvalidParams(format!(
                "epsilon_partition must be in (0, 1], got {}",
                self.epsilon_partition
            )));
        }
        if self.epsilon_partition < 1e-18 {
            return Err(CoverError::InvalidParams("epsilon_partition below 1e-18 exceeds the depth limit".into()));
        }
        if !unit(self.epsilon_sampling) {
            return Err(CoverError::InvalidParams(format!(
                "epsilon_sampling must be in (0, 1], got {}",
                self.epsilon_sampling
            )));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(CoverError::InvalidParams(format!("C must be positive, got {}", self.c)));
        }
        if self.n_min < 1 || self.n_max < self.n_min {
            return Err(CoverError::InvalidParams(format!(
                "need 1 <= n_min <= n_max, got {} and {}",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }
}

/// Area plus diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AreaResult {
    pub area: f64,
    pub n_leaf: usize,
    pub n_interior: usize,
    pub n_boundary: usize,
    pub n_exterior: usize,
    /// Every node of the tree is classified exactly once.
    pub n_cells_classified: usize,
    pub total_subsamples: u64,
    pub max_depth_reached: u32,
    /// Scale factor `L` between input and normalized coordinates.
    pub scale: f64,
    pub wall_time_seconds: f64,
}

impl AreaResult {
    /// Operation count used as the complexity proxy: cells classified plus
    /// Monte Carlo points drawn.
    pub fn work(&self) -> u64 {
        self.n_cells_classified as u64 + self.total_subsamples
    }
}

/// Scale the scene about the origin so the polygon diameter becomes 1.
/// Returns the normalized scene and the scale `L`.
pub fn normalize_scene(scene: &Scene) -> Result<(Scene, f64)> {
    let l = scene.polygon.diameter();
    if !(l.is_finite() && l > 0.0) {
        return Err(CoverError::InvalidScene("polygon has zero diameter".into()));
    }
    if l == 1.0 {
        return Ok((scene.clone(), 1.0));
    }
    Ok((scene.transformed(1.0 / l, Point::new(0.0, 0.0))?, l))
}

/// Area of `P ∩ (∪ C_k)` by adaptive quadtree partitioning and boundary
/// focusing. Deterministic for a given scene and parameter set, independent of
/// the number of worker threads.
pub fn compute_area(scene: &Scene, params: &AqbfParams) -> Result<AreaResult> {
    let start = Instant::now();
    params.validate()?;
    let (norm, l) = normalize_scene(scene)?;
    let root = partition(&norm, params);
    let leaves = root.leaves();

    let parts: Vec<Contribution> = leaves
        .par_iter()
        .map(|leaf| match leaf.class {
            RegionClass::Inside => Contribution { area: leaf.cell.area(), samples: 0 },
            RegionClass::Outside => Contribution { area: 0.0, samples: 0 },
            RegionClass::Boundary => {
                let mut rng = rng::substream(params.seed, leaf.path);
                cell_contribution(&leaf.cell, &norm, params, &mut rng)
            }
        })
        .collect();

    // Canonical depth-first, quadrant-ordered reduction.
    let mut sum = 0.0;
    let mut samples = 0u64;
    for p in &parts {
        sum += p.area;
        samples += p.samples;
    }
    let count = |c: RegionClass| leaves.iter().filter(|l| l.class == c).count();
    Ok(AreaResult {
        area: l * l * sum,
        n_leaf: leaves.len(),
        n_interior: count(RegionClass::Inside),
        n_boundary: count(RegionClass::Boundary),
        n_exterior: count(RegionClass::Outside),
        n_cells_classified: root.node_count(),
        total_subsamples: samples,
        max_depth_reached: root.max_depth(),
        scale: l,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_area;
    use crate::geometry::{Circle, Polygon};
    use crate::scenario::{gen_scene, GenSpec};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn square(lo: f64, hi: f64) -> Polygon {
        Polygon::new(vec![
            Point::new(lo, lo),
            Point::new(hi, lo),
            Point::new(hi, hi),
            Point::new(lo, hi),
        ])
        .unwrap()
    }

    fn circle(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point::new(x, y), r).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let tri = Polygon::new(vec![Point::new(0., 0.), Point::new(6., 0.), Point::new(0., 8.)]).unwrap();
        let scene = Scene::new(tri, vec![circle(1., 1., 2.)]);
        let (n, l) = normalize_scene(&scene).unwrap();
        assert_eq!(l, 10.0);
        assert_relative_eq!(n.polygon.diameter(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(n.circles[0].radius, 0.2);

        let unit = Polygon::new(vec![Point::new(0., 0.), Point::new(0.6, 0.), Point::new(0., 0.8)]).unwrap();
        let scene = Scene::new(unit, vec![circle(0.1, 0.1, 0.2)]);
        let (n, l) = normalize_scene(&scene).unwrap();
        assert_eq!(l, 1.0);
        assert_eq!(n, scene);
    }

    #[test]
    fn scaling_law() {
        let scene = gen_scene(&GenSpec { n_vertices: 12, n_circles: 6, seed: 5, ..GenSpec::default() });
        let params = AqbfParams { epsilon_partition: 1e-4, ..AqbfParams::default() };
        let (norm, l) = normalize_scene(&scene).unwrap();
        let a = compute_area(&scene, &params).unwrap().area;
        let b = compute_area(&norm, &params).unwrap().area;
        assert_relative_eq!(a, l * l * b, max_relative = 1e-12);
    }

    #[test]
    fn compute_area_examples() {
        let params = AqbfParams::default();
        let inside = Scene::new(square(0., 10.), vec![circle(5., 5., 2.)]);
        assert_relative_eq!(compute_area(&inside, &params).unwrap().area, 4.0 * PI, max_relative = 1e-3);
        let quarter = Scene::new(square(0., 10.), vec![circle(0., 0., 1.)]);
        assert_relative_eq!(compute_area(&quarter, &params).unwrap().area, PI / 4.0, max_relative = 1e-3);
        let lens = Scene::new(square(-10., 10.), vec![circle(0., 0., 1.), circle(0.5, 0., 1.)]);
        assert_relative_eq!(compute_area(&lens, &params).unwrap().area, 4.1310765, max_relative = 1e-3);
    }

    #[test]
    fn disjoint_scene_is_a_single_exterior_leaf() {
        let scene = Scene::new(square(0., 1.), vec![circle(10., 10., 1.)]);
        let r = compute_area(&scene, &AqbfParams::default()).unwrap();
        assert_eq!(r.area, 0.0);
        assert_eq!(r.n_leaf, 1);
        assert_eq!(r.n_exterior, 1);
    }

    #[test]
    fn deterministic_given_seed() {
        let scene = gen_scene(&GenSpec { seed: 3, ..GenSpec::default() });
        let params = AqbfParams { epsilon_partition: 1e-5, ..AqbfParams::default() };
        let a = compute_area(&scene, &params).unwrap();
        let b = compute_area(&scene, &params).unwrap();
        assert_eq!(a.area.to_bits(), b.area.to_bits());
        assert_eq!(a.total_subsamples, b.total_subsamples);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = one.install(|| compute_area(&scene, &params)).unwrap();
        assert_eq!(a.area.to_bits(), c.area.to_bits());
    }

    #[test]
    fn rejects_bad_params() {
        let scene = Scene::new(square(0., 1.), vec![circle(0., 0., 1.)]);
        for p in [
            AqbfParams { epsilon_partition: 0.0, ..AqbfParams::default() },
            AqbfParams { epsilon_sampling: 2.0, ..AqbfParams::default() },
            AqbfParams { c: -1.0, ..AqbfParams::default() },
            AqbfParams { n_min: 10, n_max: 5, ..AqbfParams::default() },
        ] {
            assert!(matches!(compute_area(&scene, &p), Err(CoverError::InvalidParams(_))));
        }
    }

    #[test]
    fn accurate_on_generated_scenes() {
        for seed in [1u64, 2, 3] {
            let scene = gen_scene(&GenSpec { seed, ..GenSpec::default() });
            let exact = exact_area(&scene);
            let got = compute_area(&scene, &AqbfParams::default()).unwrap();
            assert!(((got.area - exact) / exact).abs() < 5e-3, "seed {seed}: {} vs {exact}", got.area);
            assert_eq!(got.n_leaf, got.n_interior + got.n_boundary + got.n_exterior);
        }
    }
}
