//! Exact outer billiard outside the regular octagon.
//!
//! Everything is computed over the field Q(√2): the billiard map `T`, the
//! three-piece induced rotation map on the fundamental quadrilateral, its
//! first-return maps, the self-similar census of periodic octagons, the
//! aperiodic point at the end of the spiral, and exact area bookkeeping.
//! Floats appear only when writing SVG.

pub mod billiard;
pub mod cli;
pub mod error;
pub mod field;
pub mod geometry;
pub mod induced;
pub mod lifting;
pub mod render;
pub mod renorm;
pub mod sampling;
mod scaled;
pub mod verify;

pub use billiard::{build_table_atlas, orbit, OrbitOutcome, TableAtlas, Tangent};
pub use error::{Error, Result};
pub use field::{QSqrt2, Sign};
pub use geometry::{AffineMap, ConvexPolygon, Location, Point2, SimplePolygon};
pub use induced::{build_induced_atlas, InducedAtlas};
pub use renorm::{build_renormalization, PeriodicComponent, RenormalizationData};
