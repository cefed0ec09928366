//! Planar primitives, input instances, staircase tiles, and generalized
//! tiles whose upper boundary may contain arcs of the unit hyperbola.
//!
//! All types are immutable after construction and all operations are pure.

mod generalized;
mod instance;
mod point;
mod tile;

pub use generalized::{GeneralizedTile, Section};
pub use instance::{is_general_position, perturb_general_position, perturb_until_general, Instance};
pub use point::{dominates, strictly_dominates, Point, Rect};
pub use tile::Tile;

/// Default absolute tolerance for hyperbola membership on normalized scale.
pub const HYPERBOLA_TOL: f64 = 1e-9;
