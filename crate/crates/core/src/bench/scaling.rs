use crate::aqbf::{compute_area, normalize_scene, AqbfParams};
use crate::baselines::monte_carlo;
use crate::error::{CoverError, Result};
use crate::geometry::Scene;
use serde::Serialize;

/// AQBF operation counts at one tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub epsilon: f64,
    pub max_depth: u32,
    pub n_boundary: usize,
    pub cells_classified: usize,
    pub subsamples: u64,
    /// Cells classified plus points drawn.
    pub work: u64,
}

fn point(epsilon: f64, scene: &Scene, params: &AqbfParams) -> Result<ScalingPoint> {
    let r = compute_area(scene, params)?;
    Ok(ScalingPoint {
        epsilon,
        max_depth: r.max_depth_reached,
        n_boundary: r.n_boundary,
        cells_classified: r.n_cells_classified,
        subsamples: r.total_subsamples,
        work: r.work(),
    })
}

/// Counts with `ε_partition = ε_sampling = ε` and the per-cell cap lifted, so
/// the budget formula alone sets the sample counts.
pub fn aqbf_work_scaling(scene: &Scene, epsilons: &[f64], base: &AqbfParams) -> Result<Vec<ScalingPoint>> {
    epsilons
        .iter()
        .map(|&e| {
            let p = AqbfParams { epsilon_partition: e, epsilon_sampling: e, n_max: u64::MAX, ..base.clone() };
            point(e, scene, &p)
        })
        .collect()
}

/// Counts as `ε_partition` varies with the other parameters fixed.
pub fn boundary_scaling(scene: &Scene, epsilons: &[f64], base: &AqbfParams) -> Result<Vec<ScalingPoint>> {
    epsilons
        .iter()
        .map(|&e| point(e, scene, &AqbfParams { epsilon_partition: e, ..base.clone() }))
        .collect()
}

/// Monte Carlo sample count whose standard error equals `ε` in normalized
/// units (polygon diameter 1): `p (1 − p) (A_box / L²)² / ε²`, with the hit
/// rate `p` from a pilot run.
pub fn mc_matched_samples(scene: &Scene, epsilon: f64, pilot_samples: u64, seed: u64) -> Result<u64> {
    if !(epsilon > 0.0) {
        return Err(CoverError::InvalidParams(format!("epsilon must be positive, got {epsilon}")));
    }
    let (norm, _) = normalize_scene(scene)?;
    let Some(domain) = norm.region_box() else { return Ok(0) };
    let pilot = monte_carlo(&norm, pilot_samples, seed)?;
    let p = pilot.n_inside as f64 / pilot.n_samples as f64;
    let a = domain.area();
    Ok((p * (1.0 - p) * a * a / (epsilon * epsilon)).ceil() as u64)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_area;
    use crate::scenario::{gen_scene, GenSpec};
    use approx::assert_relative_eq;

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 10.0, 100.0, 1000.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.5)).collect();
        assert_relative_eq!(log_log_slope(&x, &y), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn matched_samples_hit_target_error() {
        let scene = gen_scene(&GenSpec { n_vertices: 12, n_circles: 6, seed: 3, ..GenSpec::default() });
        let (norm, _) = normalize_scene(&scene).unwrap();
        let exact = exact_area(&norm);
        let eps = 3e-3;
        let n = mc_matched_samples(&scene, eps, 100_000, 1).unwrap();
        let errs: Vec<f64> = (0..40).map(|s| monte_carlo(&norm, n, 100 + s).unwrap().area - exact).collect();
        let rms = (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt();
        assert!(rms > 0.5 * eps && rms < 2.0 * eps, "rms {rms} for n {n}");
        let n2 = mc_matched_samples(&scene, eps / 10.0, 100_000, 1).unwrap();
        assert!((n2 as f64 / n as f64 - 100.0).abs() < 1.0);
    }

    #[test]
    fn boundary_counts_grow() {
        let scene = gen_scene(&GenSpec { seed: 5, ..GenSpec::default() });
        let pts = boundary_scaling(&scene, &[1e-2, 1e-4], &AqbfParams::default()).unwrap();
        assert!(pts[1].n_boundary > pts[0].n_boundary);
        assert_eq!((pts[0].max_depth, pts[1].max_depth), (4, 7));
    }
}
