use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoverError>;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("polygon is self-intersecting: edges {0} and {1} cross")]
    SelfIntersecting(usize, usize),

    #[error("invalid radius {0}: must be finite and strictly positive")]
    InvalidRadius(f64),

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no polygon found in GeoJSON input")]
    NoPolygonFound,

    #[error("triangulation failed: {0}")]
    Triangulation(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
