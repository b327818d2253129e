//! Area of a simple polygon intersected with a union of disks.
//!
//! The main entry point is [`aqbf::compute_area`], an adaptive quadtree that
//! resolves interior cells directly, integrates single-circle boundary cells
//! analytically, and Monte Carlo subsamples cells crossed by several circle
//! boundaries with a curvature/multiplicity driven sample budget.
//!
//! [`exact::exact_area`] is the ground-truth oracle (boundary integration over
//! the decomposed boundary of the region) and [`baselines`] holds the five
//! comparison methods. [`scenario`] provisions problem instances and
//! [`bench`] runs experiments and significance tests.

pub mod aqbf;
pub mod baselines;
pub mod bench;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod rng;
pub mod scenario;

pub use error::{CoverError, Result};
pub use geometry::{Cell, Circle, Point, Polygon, Rect, RegionClass, Scene};
