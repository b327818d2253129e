use crate::error::Result;
use crate::geometry::{Circle, Point, Polygon, Scene};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// On-disk scene layout: an open polygon ring and a list of circles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub polygon: Vec<[f64; 2]>,
    pub circles: Vec<CircleRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleRecord {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

/// A validated scene plus what had to be normalized on the way in.
#[derive(Debug, Clone)]
pub struct LoadedScene {
    pub scene: Scene,
    /// The polygon was clockwise and has been reversed.
    pub reoriented: bool,
}

impl SceneFile {
    pub fn from_scene(scene: &Scene) -> Self {
        Self {
            polygon: scene.polygon.vertices().iter().map(|p| [p.x, p.y]).collect(),
            circles: scene
                .circles
                .iter()
                .map(|c| CircleRecord { cx: c.center.x, cy: c.center.y, r: c.radius })
                .collect(),
        }
    }

    pub fn into_scene(self) -> Result<LoadedScene> {
        let mut ring: Vec<Point> = self.polygon.iter().map(|&[x, y]| Point::new(x, y)).collect();
        if ring.len() > 3 && ring.first() == ring.last() {
            ring.pop();
        }
        let (polygon, reoriented) = Polygon::from_ring(ring)?;
        let circles = self
            .circles
            .iter()
            .map(|c| Circle::new(Point::new(c.cx, c.cy), c.r))
            .collect::<Result<Vec<_>>>()?;
        Ok(LoadedScene { scene: Scene::new(polygon, circles), reoriented })
    }
}

pub fn parse_scene(json: &str) -> Result<LoadedScene> {
    let file: SceneFile = serde_json::from_str(json)?;
    file.into_scene()
}

pub fn load_scene(path: impl AsRef<Path>) -> Result<LoadedScene> {
    let text = std::fs::read_to_string(path)?;
    let loaded = parse_scene(&text)?;
    if loaded.reoriented {
        log::info!("polygon was clockwise; reversed to counterclockwise");
    }
    Ok(loaded)
}

pub fn scene_to_json(scene: &Scene) -> String {
    let mut s = serde_json::to_string_pretty(&SceneFile::from_scene(scene)).expect("serializable");
    s.push('\n');
    s
}

pub fn save_scene(scene: &Scene, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, scene_to_json(scene))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CoverError;
    use crate::scenario::{gen_scene, GenSpec};

    #[test]
    fn round_trip_is_byte_stable() {
        let scene = gen_scene(&GenSpec { n_vertices: 12, n_circles: 5, ..GenSpec::default() });
        let text = scene_to_json(&scene);
        let back = parse_scene(&text).unwrap();
        assert!(!back.reoriented);
        assert_eq!(scene_to_json(&back.scene), text);
        assert_eq!(back.scene, scene);
    }

    #[test]
    fn clockwise_polygon_is_reoriented() {
        let json = r#"{"polygon": [[0,0],[0,1],[1,1],[1,0]], "circles": [{"cx": 0.5, "cy": 0.5, "r": 1}]}"#;
        let loaded = parse_scene(json).unwrap();
        assert!(loaded.reoriented);
        assert!(crate::geometry::signed_area(loaded.scene.polygon.vertices()).unwrap() > 0.0);
    }

    #[test]
    fn error_kinds_are_distinct() {
        let zero_r = r#"{"polygon": [[0,0],[1,0],[1,1]], "circles": [{"cx": 0, "cy": 0, "r": 0}]}"#;
        assert!(matches!(parse_scene(zero_r), Err(CoverError::InvalidRadius(r)) if r == 0.0));
        let bowtie = r#"{"polygon": [[0,0],[1,1],[1,0],[0,1]], "circles": []}"#;
        assert!(matches!(parse_scene(bowtie), Err(CoverError::SelfIntersecting(..))));
        assert!(matches!(parse_scene("{not json"), Err(CoverError::Parse(_))));
        let missing = r#"{"polygon": [[0,0],[1,1],[1,0]]}"#;
        assert!(matches!(parse_scene(missing), Err(CoverError::Parse(_))));
    }

    #[test]
    fn closed_ring_input_drops_duplicate() {
        let json = r#"{"polygon": [[0,0],[1,0],[1,1],[0,1],[0,0]], "circles": []}"#;
        assert_eq!(parse_scene(json).unwrap().scene.polygon.len(), 4);
    }
}
