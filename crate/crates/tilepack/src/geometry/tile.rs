use serde::{Deserialize, Serialize};

use super::{Point, Rect};
use crate::{Error, Result};

/// A staircase tile: an anchor point plus upper staircase points with
/// strictly increasing x and strictly decreasing y, each strictly dominating
/// the anchor. The tile is the region between the anchor and the staircase.
///
/// Degenerate tiles (shared coordinates, weak domination) arise as
/// intermediate states of transformations and are permitted through
/// [`Tile::try_new_degenerate`]; all measures remain well defined on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    anchor: Point,
    gamma: Vec<Point>,
}

impl Tile {
    pub fn try_new(anchor: Point, gamma: Vec<Point>) -> Result<Self> {
        let tile = Tile { anchor, gamma };
        tile.validate(true)?;
        Ok(tile)
    }

    /// Relaxed construction permitting shared coordinates and weak
    /// domination of the anchor.
    pub fn try_new_degenerate(anchor: Point, gamma: Vec<Point>) -> Result<Self> {
        let tile = Tile { anchor, gamma };
        tile.validate(false)?;
        Ok(tile)
    }

    fn validate(&self, strict: bool) -> Result<()> {
        if !self.anchor.is_finite() {
            return Err(Error::InvalidTile("non-finite anchor".into()));
        }
        if self.gamma.is_empty() {
            return Err(Error::InvalidTile("empty upper staircase".into()));
        }
        for q in &self.gamma {
            if !q.is_finite() {
                return Err(Error::InvalidTile("non-finite staircase point".into()));
            }
            let dominated = if strict {
                self.anchor.strictly_dominates_below(*q)
            } else {
                self.anchor.dominates_below(*q)
            };
            if !dominated {
                return Err(Error::InvalidTile(format!(
                    "staircase point ({}, {}) does not dominate the anchor ({}, {})",
                    q.x, q.y, self.anchor.x, self.anchor.y
                )));
            }
        }
        for w in self.gamma.windows(2) {
            let ordered = if strict {
                w[0].x < w[1].x && w[0].y > w[1].y
            } else {
                w[0].x <= w[1].x && w[0].y >= w[1].y
            };
            if !ordered {
                return Err(Error::InvalidTile(format!(
                    "staircase points ({}, {}) and ({}, {}) out of order",
                    w[0].x, w[0].y, w[1].x, w[1].y
                )));
            }
        }
        Ok(())
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    pub fn gamma(&self) -> &[Point] {
        &self.gamma
    }

    /// Tile area as the column sum over staircase points.
    pub fn area(&self) -> f64 {
        let mut area = 0.0;
        let mut x_prev = self.anchor.x;
        for q in &self.gamma {
            area += (q.x - x_prev) * (q.y - self.anchor.y);
            x_prev = q.x;
        }
        area
    }

    /// An area-maximal anchored rectangle and the staircase point spanning
    /// it. Ties broken by the smallest x among maximizers.
    pub fn max_rectangle(&self) -> (Rect, Point) {
        let mut best = self.gamma[0];
        let mut best_area = f64::NEG_INFINITY;
        for q in &self.gamma {
            let a = (q.x - self.anchor.x) * (q.y - self.anchor.y);
            if a > best_area {
                best_area = a;
                best = *q;
            }
        }
        let rect = Rect::new(self.anchor, best.x - self.anchor.x, best.y - self.anchor.y);
        (rect, best)
    }

    /// Area of the maximal anchored rectangle, the constant of the tile's
    /// hyperbola.
    pub fn max_rect_area(&self) -> f64 {
        self.max_rectangle().0.area()
    }

    /// Density: maximal rectangle area over tile area.
    pub fn density(&self) -> Result<f64> {
        let area = self.area();
        if area <= 0.0 {
            return Err(Error::DegenerateTile("zero-area tile has no density".into()));
        }
        Ok(self.max_rect_area() / area)
    }

    /// Whether `q` lies on the tile's hyperbola, the anchor-translated curve
    /// on which anchored rectangles have exactly the maximal area.
    pub fn on_hyperbola(&self, q: Point, tol: f64) -> bool {
        let prod = (q.x - self.anchor.x) * (q.y - self.anchor.y);
        (prod - self.max_rect_area()).abs() <= tol
    }

    /// Remove staircase points dominated by another staircase point. The
    /// pruned tile covers the same region; its crown cannot grow.
    pub fn pruned(&self) -> Tile {
        let mut kept: Vec<Point> = Vec::with_capacity(self.gamma.len());
        for (i, q) in self.gamma.iter().enumerate() {
            // exact duplicates keep their first occurrence
            let dominated = self
                .gamma
                .iter()
                .enumerate()
                .any(|(j, q2)| j != i && q.dominates_below(*q2) && (*q2 != *q || j < i));
            if !dominated {
                kept.push(*q);
            }
        }
        Tile { anchor: self.anchor, gamma: kept }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let tile: Tile = serde_json::from_str(s)?;
        tile.validate(false)?;
        Ok(tile)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tile serialization cannot fail")
    }
}
