use serde::{Deserialize, Serialize};

/// A point in the plane. Serialized as a two-element array `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite());
        Point { x, y }
    }

    /// Coordinate-wise order: `self.x <= other.x` and `self.y <= other.y`.
    pub fn dominates_below(self, other: Point) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    /// Strict variant: both coordinates strictly smaller.
    pub fn strictly_dominates_below(self, other: Point) -> bool {
        self.x < other.x && self.y < other.y
    }

    /// Position of the slope -1 line through this point; the greedy packer
    /// processes points by descending diagonal.
    pub fn diag(self) -> f64 {
        self.x + self.y
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

impl From<Point> for (f64, f64) {
    fn from(p: Point) -> Self {
        (p.x, p.y)
    }
}

/// `p` dominates-below `q`, i.e. `p` is coordinate-wise at most `q`.
pub fn dominates(p: Point, q: Point) -> bool {
    p.dominates_below(q)
}

/// Strict domination: both coordinates strictly smaller.
pub fn strictly_dominates(p: Point, q: Point) -> bool {
    p.strictly_dominates_below(q)
}

/// An axis-aligned rectangle given by its lower-left corner and extents.
/// Serialized as `[x, y, width, height]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, f64, f64)", into = "(f64, f64, f64, f64)")]
pub struct Rect {
    pub lower_left: Point,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn new(lower_left: Point, width: f64, height: f64) -> Self {
        Rect { lower_left, width, height }
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }
}

impl From<(f64, f64, f64, f64)> for Rect {
    fn from((x, y, width, height): (f64, f64, f64, f64)) -> Self {
        Rect { lower_left: Point::new(x, y), width, height }
    }
}

impl From<Rect> for (f64, f64, f64, f64) {
    fn from(r: Rect) -> Self {
        (r.lower_left.x, r.lower_left.y, r.width, r.height)
    }
}
