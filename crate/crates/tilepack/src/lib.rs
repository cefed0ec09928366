//! Greedy staircase tile packing for lower-left anchored rectangles.
//!
//! Each input point in the unit square anchors one axis-aligned rectangle at
//! its lower-left corner. The greedy packer partitions the square into
//! staircase tiles, one per point, and picks an area-maximal rectangle inside
//! each tile. This crate implements the packer together with the numeric
//! machinery used to certify how much area it covers:
//!
//! - [`geometry`]: points, instances, staircase tiles, generalized tiles
//!   whose boundary may contain hyperbola arcs, and their measures.
//! - [`packing`]: the greedy packer plus structural verifiers (partition,
//!   exclusive areas).
//! - [`charging`]: towers, crowns, slide contributions, and the checks that
//!   crowns are disjoint, fit in the area-3/2 pentagon, and satisfy the
//!   per-tile charging-ratio bound.
//! - [`bounds`]: the weak/strong ratio bound functions, the critical density
//!   rho* ~ 0.3901, point-convexity checks, and tangent-based coverage
//!   certificates.
//! - [`transforms`]: area-preserving tile transformations that never increase
//!   the charging ratio, with a numeric checker for that order.
//! - [`generators`]: diagonal, random, crown-tight, worst-case, and the
//!   ODE-driven adversarial instance families.
//!
//! ```
//! use tilepack::{bounds, generators, packing};
//!
//! let instance = generators::gen_random(50, 7);
//! let pk = packing::pack(&instance)?;
//! let cert = bounds::certify(&pk)?;
//! assert!(pk.coverage() >= cert.certified_coverage);
//! assert!(cert.certified_coverage >= cert.rho_star);
//! # Ok::<(), tilepack::Error>(())
//! ```

pub mod bounds;
pub mod charging;
mod error;
pub mod generators;
pub mod geometry;
pub mod packing;
pub mod transforms;

pub use error::{Error, Result};
