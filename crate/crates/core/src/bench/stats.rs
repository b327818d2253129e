//! Nonparametric significance tests.

use crate::error::{CoverError, Result};
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Largest sample size handled by exact enumeration of the null distribution.
pub const EXACT_MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// 1-based ranks with ties given the mean of the ranks they span.
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = 0.5 * ((i + 1) + (j + 1)) as f64;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Two-sided Wilcoxon signed-rank test on paired samples.
///
/// Zero differences are dropped. The statistic is `W = min(W⁺, W⁻)` with
/// mid-ranked ties and the p-value is `P(min(T⁺, T⁻) ≤ W)` under random signs:
/// exact for up to [`EXACT_MAX_N`] pairs, otherwise from the normal
/// approximation with continuity and tie corrections.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.len() != y.len() {
        return Err(CoverError::InvalidParams(format!("paired samples differ in length: {} vs {}", x.len(), y.len())));
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
    if diffs.is_empty() && !x.is_empty() {
        return Err(CoverError::Degenerate("all paired differences are zero".into()));
    }
    let n = diffs.len();
    if n < 5 {
        return Err(CoverError::InvalidParams(format!("need at least 5 nonzero differences, got {n}")));
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = mid_ranks(&abs);
    let w_plus: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w = w_plus.min(total - w_plus) + 0.0;
    let p = if n <= EXACT_MAX_N { exact_p(&ranks, w) } else { normal_p(&abs, n, w) };
    Ok(TestResult { statistic: w, p_value: p.clamp(0.0, 1.0), n })
}

/// Null distribution of `T⁺` over all sign patterns, on doubled ranks so
/// mid-ranks stay integral.
fn exact_p(ranks: &[f64], w: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    for &r in &doubled {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let w2 = (2.0 * w).round() as usize;
    let tail: u64 = counts
        .iter()
        .enumerate()
        .filter(|&(s, _)| s <= w2 || s >= total - w2)
        .map(|(_, c)| c)
        .sum();
    tail as f64 / 2f64.powi(ranks.len() as i32)
}

fn normal_p(abs: &[f64], n: usize, w: f64) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let mut sorted = abs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((mean - w).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::standard();
    2.0 * normal.sf(z)
}

/// Friedman rank test over `n` blocks (rows) of `k` treatments (columns).
/// Statistic `12/(n k (k+1)) Σ R_j² − 3 n (k+1)` with mid-ranks inside each
/// block; p-value from the chi-square tail with `k − 1` degrees of freedom.
pub fn friedman_test(matrix: &[Vec<f64>]) -> Result<TestResult> {
    let n = matrix.len();
    if n < 2 {
        return Err(CoverError::InvalidParams(format!("need at least 2 blocks, got {n}")));
    }
    let k = matrix[0].len();
    if k < 3 {
        return Err(CoverError::InvalidParams(format!("need at least 3 treatments, got {k}")));
    }
    if matrix.iter().any(|row| row.len() != k) {
        return Err(CoverError::InvalidParams("ragged block matrix".into()));
    }
    let mut rank_sums = vec![0.0; k];
    for row in matrix {
        for (j, r) in mid_ranks(row).into_iter().enumerate() {
            rank_sums[j] += r;
        }
    }
    let (nf, kf) = (n as f64, k as f64);
    let sum_sq: f64 = rank_sums.iter().map(|r| r * r).sum();
    let chi2 = (12.0 / (nf * kf * (kf + 1.0)) * sum_sq - 3.0 * nf * (kf + 1.0)).max(0.0);
    let dist = ChiSquared::new(kf - 1.0).expect("positive degrees of freedom");
    Ok(TestResult { statistic: chi2, p_value: dist.sf(chi2).clamp(0.0, 1.0), n })
}
