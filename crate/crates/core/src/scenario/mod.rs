//! Problem instances: seeded synthetic generators, the scene file format, and
//! GeoJSON coastline ingestion.

mod generate;
mod geojson;
mod io;
mod preset;

pub use generate::{gen_circles, gen_polygon, gen_scene, GenSpec};
pub use geojson::{ingest_geojson, ingest_geojson_str, RingSelector};
pub use io::{load_scene, parse_scene, save_scene, scene_to_json, LoadedScene, SceneFile};
pub use preset::{caribbean_preset, PresetRegion, CARIBBEAN_REGIONS, DEFAULT_DEG_PER_KM};
