use crate::error::{CoverError, Result};
use crate::geometry::{Point, Scene};
use crate::rng;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z_975: f64 = 1.959964;

const MC_STREAM: u64 = 0x6d63;
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub area: f64,
    /// Half-width of the 95% confidence interval, `z · A_box / (2√N)`.
    pub half_width: f64,
    pub n_samples: u64,
    pub n_inside: u64,
}

/// Hit-or-miss estimate over the region box. Samples are drawn in fixed-size
/// chunks with independent substreams, so the estimate does not depend on the
/// thread count.
pub fn monte_carlo(scene: &Scene, n: u64, seed: u64) -> Result<McEstimate> {
    if n == 0 {
        return Err(CoverError::InvalidParams("Monte Carlo needs at least one sample".into()));
    }
    let Some(domain) = scene.region_box() else {
        return Ok(McEstimate { area: 0.0, half_width: 0.0, n_samples: n, n_inside: 0 });
    };
    let chunks = n.div_ceil(CHUNK);
    let n_inside: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng::substream(rng::derive(seed, MC_STREAM), c);
            let count = CHUNK.min(n - c * CHUNK);
            let mut hits = 0u64;
            for _ in 0..count {
                let p = Point::new(
                    domain.x_min + r.random::<f64>() * domain.width(),
                    domain.y_min + r.random::<f64>() * domain.height(),
                );
                if scene.circles.iter().any(|k| k.contains(p)) && scene.polygon.contains(p) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let a_box = domain.area();
    Ok(McEstimate {
        area: a_box * n_inside as f64 / n as f64,
        half_width: Z_975 * a_box / (2.0 * (n as f64).sqrt()),
        n_samples: n,
        n_inside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::fixtures::*;
    use crate::exact::exact_area;
    use crate::scenario::{gen_scene, GenSpec};
    use std::f64::consts::PI;

    #[test]
    fn trivial_scenes() {
        let est = monte_carlo(&full_box(), 10_000, 1).unwrap();
        assert_eq!(est.area, 4.0);
        assert_eq!(est.n_inside, est.n_samples);
        assert_eq!(monte_carlo(&disjoint(), 10_000, 1).unwrap().area, 0.0);
        assert!(monte_carlo(&full_box(), 0, 1).is_err());
    }

    #[test]
    fn half_width_formula() {
        let est = monte_carlo(&quarter_disk(), 40_000, 3).unwrap();
        // Region box is the unit square.
        assert!((est.half_width - Z_975 / (2.0 * 200.0)).abs() < 1e-15);
        assert!(est.n_inside <= est.n_samples);
    }

    #[test]
    fn quarter_disk_within_four_half_widths() {
        for seed in 0..5 {
            let est = monte_carlo(&quarter_disk(), 1_000_000, seed).unwrap();
            assert!((est.area - PI / 4.0).abs() < 4.0 * est.half_width, "seed {seed}: {}", est.area);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let scene = gen_scene(&GenSpec::default());
        let a = monte_carlo(&scene, 300_000, 9).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| monte_carlo(&scene, 300_000, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unbiased_over_repetitions() {
        for seed in 1..=5u64 {
            let scene = gen_scene(&GenSpec { seed, ..GenSpec::default() });
            let exact = exact_area(&scene);
            let est: Vec<f64> =
                (0..200).map(|r| monte_carlo(&scene, 10_000, seed * 1000 + r).unwrap().area).collect();
            let mean = est.iter().sum::<f64>() / est.len() as f64;
            let var = est.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (est.len() - 1) as f64;
            let sem = (var / est.len() as f64).sqrt();
            assert!((mean - exact).abs() < 3.0 * sem, "seed {seed}: mean {mean} exact {exact} sem {sem}");
        }
    }
}
