//! Minimal GeoJSON reader: exterior rings of Polygon and MultiPolygon
//! geometries, found anywhere inside a FeatureCollection, Feature,
//! GeometryCollection, or bare geometry.

use crate::error::{CoverError, Result};
use crate::geometry::{ring_signed_area, Point, Polygon};
use serde_json::Value;
use std::path::Path;
use std::str::FromStr;

/// Which exterior ring to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RingSelector {
    /// Largest absolute shoelace area.
    #[default]
    Largest,
    /// The n-th exterior ring in document order.
    Index(usize),
}

impl FromStr for RingSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "largest" {
            return Ok(RingSelector::Largest);
        }
        s.strip_prefix("index:")
            .unwrap_or(s)
            .parse::<usize>()
            .map(RingSelector::Index)
            .map_err(|_| format!("expected `largest`, `N`, or `index:N`, got `{s}`"))
    }
}

fn collect_rings(v: &Value, out: &mut Vec<Vec<Point>>) -> Result<()> {
    let Some(kind) = v.get("type").and_then(Value::as_str) else {
        return Ok(());
    };
    match kind {
        "FeatureCollection" => {
            for f in v.get("features").and_then(Value::as_array).into_iter().flatten() {
                collect_rings(f, out)?;
            }
        }
        "Feature" => {
            if let Some(g) = v.get("geometry") {
                collect_rings(g, out)?;
            }
        }
        "GeometryCollection" => {
            for g in v.get("geometries").and_then(Value::as_array).into_iter().flatten() {
                collect_rings(g, out)?;
            }
        }
        "Polygon" => {
            if let Some(rings) = v.get("coordinates").and_then(Value::as_array) {
                if let Some(ext) = rings.first() {
                    out.push(parse_ring(ext)?);
                }
            }
        }
        "MultiPolygon" => {
            for poly in v.get("coordinates").and_then(Value::as_array).into_iter().flatten() {
                if let Some(ext) = poly.as_array().and_then(|r| r.first()) {
                    out.push(parse_ring(ext)?);
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn parse_ring(v: &Value) -> Result<Vec<Point>> {
    let bad = || CoverError::InvalidPolygon("malformed GeoJSON position".into());
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|pos| {
            let a = pos.as_array().ok_or_else(bad)?;
            let x = a.first().and_then(Value::as_f64).ok_or_else(bad)?;
            let y = a.get(1).and_then(Value::as_f64).ok_or_else(bad)?;
            Ok(Point::new(x, y))
        })
        .collect()
}

fn clean_ring(mut ring: Vec<Point>) -> Vec<Point> {
    ring.dedup();
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    ring
}

pub fn ingest_geojson_str(text: &str, selector: RingSelector) -> Result<Polygon> {
    let doc: Value = serde_json::from_str(text)?;
    let mut rings = Vec::new();
    collect_rings(&doc, &mut rings)?;
    let rings: Vec<Vec<Point>> = rings.into_iter().map(clean_ring).collect();
    if rings.is_empty() {
        return Err(CoverError::NoPolygonFound);
    }
    let chosen = match selector {
        RingSelector::Largest => rings
            .into_iter()
            .max_by(|a, b| ring_signed_area(a).abs().total_cmp(&ring_signed_area(b).abs()))
            .expect("non-empty"),
        RingSelector::Index(i) => rings.into_iter().nth(i).ok_or(CoverError::NoPolygonFound)?,
    };
    if chosen.len() < 3 {
        return Err(CoverError::InvalidPolygon(format!(
            "selected ring has {} vertices",
            chosen.len()
        )));
    }
    Polygon::new(chosen)
}

/// Read a GeoJSON file and return the selected exterior ring as a
/// counterclockwise polygon. Coordinates are used as planar values.
pub fn ingest_geojson(path: impl AsRef<Path>, selector: RingSelector) -> Result<Polygon> {
    ingest_geojson_str(&std::fs::read_to_string(path)?, selector)
}
