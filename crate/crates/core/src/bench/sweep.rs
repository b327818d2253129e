use crate::aqbf::{compute_area, AqbfParams};
use crate::error::{CoverError, Result};
use crate::exact::exact_area;
use crate::geometry::Scene;
use crate::rng;
use serde::Serialize;
use std::io::Write;
use std::str::FromStr;

/// AQBF parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    C,
    NMin,
    /// The sampling tolerance `ε_sampling`.
    Epsilon,
    EpsPartition,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::C => "C",
            SweepAxis::NMin => "nmin",
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::EpsPartition => "eps-part",
        }
    }

    /// Copy of `base` with this axis set to `value`.
    pub fn apply(self, base: &AqbfParams, value: f64) -> Result<AqbfParams> {
        let mut p = base.clone();
        match self {
            SweepAxis::C => p.c = value,
            SweepAxis::NMin => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(CoverError::InvalidParams(format!("N_min must be a positive integer, got {value}")));
                }
                p.n_min = value as u64;
            }
            SweepAxis::Epsilon => p.epsilon_sampling = value,
            SweepAxis::EpsPartition => p.epsilon_partition = value,
        }
        p.validate()?;
        Ok(p)
    }
}

impl FromStr for SweepAxis {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c" => Ok(SweepAxis::C),
            "nmin" | "n_min" | "n-min" => Ok(SweepAxis::NMin),
            "epsilon" | "eps" | "eps-samp" | "epsilon_sampling" => Ok(SweepAxis::Epsilon),
            "eps-part" | "epsilon_partition" => Ok(SweepAxis::EpsPartition),
            _ => Err(CoverError::InvalidParams(format!("unknown sweep axis '{s}'"))),
        }
    }
}

/// Parse `start:end:step` (inclusive of `end` up to rounding) or a comma list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || CoverError::InvalidParams(format!("bad grid '{spec}'"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, c] => {
            let (start, end, step) = (num(a)?, num(b)?, num(c)?);
            if !(step > 0.0) || end < start {
                return Err(bad());
            }
            let count = ((end - start) / step).round() as usize + 1;
            // Index-based so decimal steps do not accumulate error.
            (0..count).map(|i| round_decimal(start + i as f64 * step)).collect()
        }
        [_] => spec.split(',').filter(|s| !s.trim().is_empty()).map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad()),
    };
    if grid.is_empty() || grid.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(grid)
}

/// Snap `0.30000000000000004`-style values to the nearest 12-digit decimal.
fn round_decimal(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let digits = 12 - v.abs().log10().ceil() as i32;
    let f = 10f64.powi(digits);
    (v * f).round() / f
}

/// One grid point of a sweep, averaged over replicate seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: String,
    pub param_value: f64,
    pub area: f64,
    pub exact_area: f64,
    pub rel_error: f64,
    pub time_s: f64,
    pub total_subsamples: f64,
    pub replicates: usize,
}

/// Run AQBF at every grid value. Each value is run with the same `replicates`
/// seeds (the first is `base.seed` itself) and the mean absolute relative
/// error is reported.
pub fn sweep(
    scene: &Scene,
    axis: SweepAxis,
    grid: &[f64],
    base: &AqbfParams,
    replicates: usize,
    record_time: bool,
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(CoverError::InvalidParams("empty sweep grid".into()));
    }
    if replicates == 0 {
        return Err(CoverError::InvalidParams("replicates must be at least 1".into()));
    }
    let exact = exact_area(scene);
    let seeds: Vec<u64> =
        (0..replicates).map(|r| if r == 0 { base.seed } else { rng::derive(base.seed, r as u64) }).collect();
    grid.iter()
        .map(|&value| {
            let params = axis.apply(base, value)?;
            let (mut area, mut err, mut time, mut samples) = (0.0, 0.0, 0.0, 0.0);
            for &seed in &seeds {
                let r = compute_area(scene, &AqbfParams { seed, ..params.clone() })?;
                area += r.area;
                err += if exact > 0.0 { (r.area - exact).abs() / exact } else { r.area.abs() };
                time += r.wall_time_seconds;
                samples += r.total_subsamples as f64;
            }
            let n = replicates as f64;
            Ok(SweepRow {
                axis: axis.name().to_string(),
                param_value: value,
                area: area / n,
                exact_area: exact,
                rel_error: err / n,
                time_s: if record_time { time / n } else { 0.0 },
                total_subsamples: samples / n,
                replicates,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(writer: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
