//! The greedy tile packer and structural verifiers.
//!
//! Points are processed from top-right to bottom-left by descending diagonal
//! x+y. Each point's tile is its dominance quadrant minus the quadrants of
//! all previously processed points; the packer picks an area-maximal anchored
//! rectangle inside each tile.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{Instance, Point, Rect, Tile};
use crate::{Error, Result};

/// A tile packing: one staircase tile and one chosen maximal rectangle per
/// input point, in processing order (descending diagonal).
#[derive(Debug, Clone)]
pub struct TilePacking {
    tiles: Vec<Tile>,
    chosen: Vec<(Rect, Point)>,
}

impl TilePacking {
    /// Assemble a packing from tiles, choosing the maximal rectangle of
    /// each. Used when reloading serialized packings.
    pub fn from_tiles(tiles: Vec<Tile>) -> Self {
        let chosen = tiles.iter().map(Tile::max_rectangle).collect();
        TilePacking { tiles, chosen }
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn chosen_rects(&self) -> &[(Rect, Point)] {
        &self.chosen
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Σ over tiles of the chosen rectangle area.
    pub fn coverage(&self) -> f64 {
        self.chosen.iter().map(|(r, _)| r.area()).sum()
    }

    /// Σ of tile areas; 1 within tolerance for a packing of the unit square.
    pub fn total_tile_area(&self) -> f64 {
        self.tiles.iter().map(Tile::area).sum()
    }

}

/// Run the greedy packer. The instance must be in general position.
pub fn pack(inst: &Instance) -> Result<TilePacking> {
    inst.validate()?;
    if inst.is_empty() {
        return Err(Error::InvalidInstance("no points".into()));
    }
    if !inst.is_general_position() {
        return Err(Error::NotGeneralPosition(format!("instance '{}'", inst.label)));
    }

    let mut order: Vec<Point> = inst.points.clone();
    order.sort_by(|a, b| b.diag().total_cmp(&a.diag()));

    // Pareto frontier (minimal points under coordinate-wise order) of the
    // processed prefix, sorted by increasing x / decreasing y.
    let mut frontier: Vec<Point> = Vec::new();
    let mut tiles = Vec::with_capacity(order.len());
    let mut chosen = Vec::with_capacity(order.len());

    for p in order {
        let pos = frontier.partition_point(|f| f.x < p.x);
        // frontier point directly left of p has the least y among all
        // processed points left of p
        let left_y = (pos > 0).then(|| frontier[pos - 1].y);
        // frontier points inside p's open quadrant form a contiguous run
        let mut end = pos;
        while end < frontier.len() && frontier[end].y > p.y {
            end += 1;
        }
        // first processed point below p's row, if any
        let right_x = (end < frontier.len()).then(|| frontier[end].x);

        // effective blockers, Pareto-minimal, sorted by x
        let mut blockers: Vec<Point> = Vec::with_capacity(end - pos + 2);
        if let Some(y) = left_y {
            blockers.push(Point::new(p.x, y));
        }
        blockers.extend_from_slice(&frontier[pos..end]);
        if let Some(x) = right_x {
            blockers.push(Point::new(x, p.y));
        }

        let mut gamma: Vec<Point> = Vec::with_capacity(blockers.len() + 1);
        if blockers.is_empty() {
            gamma.push(Point::new(1.0, 1.0));
        } else {
            // empty corners between consecutive blockers, clipped to the
            // unit square at both ends
            if blockers[0].x > p.x {
                gamma.push(Point::new(blockers[0].x, 1.0));
            }
            for w in blockers.windows(2) {
                gamma.push(Point::new(w[1].x, w[0].y));
            }
            let last = blockers[blockers.len() - 1];
            if last.y > p.y {
                gamma.push(Point::new(1.0, last.y));
            }
        }

        let tile = Tile::try_new(p, gamma)?;
        let (rect, q) = tile.max_rectangle();
        tiles.push(tile);
        chosen.push((rect, q));

        // p joins the frontier, displacing the points it dominates
        frontier.splice(pos..end, [p]);
    }

    Ok(TilePacking { tiles, chosen })
}

/// Σ of chosen rectangle areas.
pub fn coverage(pk: &TilePacking) -> f64 {
    pk.coverage()
}

/// Lower staircase points `(x(q_{i-1}), y(q_i))` of a tile. In a greedy
/// packing these are input points.
pub fn lower_staircase_points(tile: &Tile) -> Vec<Point> {
    tile.gamma()
        .windows(2)
        .map(|w| Point::new(w[0].x, w[1].y))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionViolation {
    pub sample: Point,
    pub containing_tiles: Vec<usize>,
}

/// Report of the sampled partition check: tile areas must sum to 1 and every
/// sampled point must lie in exactly one tile.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub total_tile_area: f64,
    pub area_ok: bool,
    pub samples: usize,
    pub violations: Vec<PartitionViolation>,
    pub pass: bool,
}

pub fn verify_partition(pk: &TilePacking, samples: usize, seed: u64) -> PartitionReport {
    let total = pk.total_tile_area();
    let area_ok = (total - 1.0).abs() <= 1e-9;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let q = Point::new(rng.random::<f64>(), rng.random::<f64>());
        let containing: Vec<usize> = pk
            .tiles
            .iter()
            .enumerate()
            .filter(|(_, t)| point_in_tile(t, q))
            .map(|(i, _)| i)
            .collect();
        if containing.len() != 1 {
            violations.push(PartitionViolation { sample: q, containing_tiles: containing });
            if violations.len() >= 32 {
                break;
            }
        }
    }
    let pass = area_ok && violations.is_empty();
    PartitionReport { total_tile_area: total, area_ok, samples, violations, pass }
}

/// Membership in the half-open staircase region of a tile.
pub fn point_in_tile(tile: &Tile, q: Point) -> bool {
    tile.anchor().dominates_below(q)
        && tile.gamma().iter().any(|g| q.strictly_dominates_below(*g))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExclusiveViolation {
    pub tile_index: usize,
    pub offending_point: Point,
}

/// Report of the exclusive-area check: no input point may lie strictly above
/// a tile anchor's diagonal and strictly below-left of one of its staircase
/// points.
#[derive(Debug, Clone, Serialize)]
pub struct ExclusiveAreaReport {
    pub violations: Vec<ExclusiveViolation>,
    pub pass: bool,
}

pub fn verify_exclusive_areas(inst: &Instance, pk: &TilePacking) -> ExclusiveAreaReport {
    let mut violations = Vec::new();
    for (i, t) in pk.tiles.iter().enumerate() {
        let anchor = t.anchor();
        for p in &inst.points {
            if p.diag() > anchor.diag()
                && t.gamma().iter().any(|g| p.strictly_dominates_below(*g))
            {
                violations.push(ExclusiveViolation { tile_index: i, offending_point: *p });
            }
        }
    }
    let pass = violations.is_empty();
    ExclusiveAreaReport { violations, pass }
}

/// Per-tile record of the packing JSON schema.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct TileRecord {
    pub anchor: Point,
    pub gamma: Vec<Point>,
    pub rect: Rect,
    pub area: f64,
    pub density: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub crown_area: Option<f64>,
}

/// Serializable view of a packing: per-tile records plus coverage and size.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct PackingRecord {
    pub n: usize,
    pub coverage: f64,
    pub tiles: Vec<TileRecord>,
}

impl PackingRecord {
    pub fn new(pk: &TilePacking, crown_areas: Option<&[f64]>) -> Self {
        let tiles = pk
            .tiles
            .iter()
            .zip(&pk.chosen)
            .enumerate()
            .map(|(i, (t, (rect, _)))| TileRecord {
                anchor: t.anchor(),
                gamma: t.gamma().to_vec(),
                rect: *rect,
                area: t.area(),
                density: t.density().unwrap_or(f64::NAN),
                crown_area: crown_areas.map(|c| c[i]),
            })
            .collect();
        PackingRecord { n: pk.len(), coverage: pk.coverage(), tiles }
    }

    /// Rebuild the packing from its record.
    pub fn to_packing(&self) -> Result<TilePacking> {
        let tiles = self
            .tiles
            .iter()
            .map(|r| Tile::try_new(r.anchor, r.gamma.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(TilePacking::from_tiles(tiles))
    }
}
