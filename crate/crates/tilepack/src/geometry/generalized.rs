use serde::{Deserialize, Serialize};

use super::{Point, Tile};
use crate::{Error, Result};

/// One section of a generalized tile's upper boundary: either a single
/// staircase point, or a slide, an arc of the unit hyperbola y = 1/x over
/// `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Point(Point),
    Slide(f64, f64),
}

/// A normalized generalized tile: anchored at the origin with maximal
/// rectangle area 1, its boundary a left-to-right sequence of point and
/// slide sections with disjoint increasing x-extents and weakly decreasing
/// heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedTile {
    sections: Vec<Section>,
}

impl GeneralizedTile {
    pub fn try_new(sections: Vec<Section>) -> Result<Self> {
        if sections.is_empty() {
            return Err(Error::InvalidTile("generalized tile needs at least one section".into()));
        }
        let mut x_prev = 0.0;
        let mut h_prev = f64::INFINITY;
        for s in &sections {
            let (x_left, x_right, h_left, h_right) = match *s {
                Section::Point(q) => {
                    if !q.is_finite() || q.x <= 0.0 || q.y <= 0.0 {
                        return Err(Error::InvalidTile(format!(
                            "point section ({}, {}) must lie strictly above the origin",
                            q.x, q.y
                        )));
                    }
                    (q.x, q.x, q.y, q.y)
                }
                Section::Slide(a, b) => {
                    if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b < a {
                        return Err(Error::InvalidTile(format!(
                            "slide [{a}, {b}] must satisfy 0 < a <= b"
                        )));
                    }
                    (a, b, 1.0 / a, 1.0 / b)
                }
            };
            // extents may touch at a shared corner but not overlap
            if x_left < x_prev || (x_left == x_prev && x_right == x_prev) {
                return Err(Error::InvalidTile(format!(
                    "section x-extents must be increasing with disjoint interiors (x = {x_left} after {x_prev})"
                )));
            }
            if h_left > h_prev {
                return Err(Error::InvalidTile(format!(
                    "section heights must not increase left to right ({h_left} after {h_prev})"
                )));
            }
            x_prev = x_right;
            h_prev = h_right;
        }
        Ok(GeneralizedTile { sections })
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    /// Area between the origin and the boundary: point columns contribute
    /// `(x_i - X_prev) * y_i`, a slide contributes `(a - X_prev)/a + ln(b/a)`.
    pub fn area(&self) -> f64 {
        let mut area = 0.0;
        let mut x_prev = 0.0;
        for s in &self.sections {
            match *s {
                Section::Point(q) => {
                    area += (q.x - x_prev) * q.y;
                    x_prev = q.x;
                }
                Section::Slide(a, b) => {
                    area += (a - x_prev) / a + (b / a).ln();
                    x_prev = b;
                }
            }
        }
        area
    }

    /// Area of the maximal anchored rectangle. Nonempty slides realize
    /// exactly 1 by construction.
    pub fn max_rect_area(&self) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for s in &self.sections {
            let v = match *s {
                Section::Point(q) => q.x * q.y,
                Section::Slide(..) => 1.0,
            };
            best = best.max(v);
        }
        best
    }

    pub fn density(&self) -> Result<f64> {
        let area = self.area();
        if area <= 0.0 {
            return Err(Error::DegenerateTile("zero-area generalized tile".into()));
        }
        Ok(self.max_rect_area() / area)
    }

    /// Boundary corner points together with, for each gap between
    /// consecutive corners, whether that gap is a slide arc.
    pub fn boundary(&self) -> (Vec<Point>, Vec<bool>) {
        let mut nodes: Vec<Point> = Vec::new();
        let mut slide_gap = Vec::new();
        let push = |nodes: &mut Vec<Point>, slide_gap: &mut Vec<bool>, q: Point| {
            // a slide may share its endpoint with an adjacent point section
            if nodes.last() == Some(&q) {
                return;
            }
            if !nodes.is_empty() {
                slide_gap.push(false);
            }
            nodes.push(q);
        };
        for s in &self.sections {
            match *s {
                Section::Point(q) => push(&mut nodes, &mut slide_gap, q),
                Section::Slide(a, b) => {
                    push(&mut nodes, &mut slide_gap, Point::new(a, 1.0 / a));
                    if b > a {
                        slide_gap.push(true);
                        nodes.push(Point::new(b, 1.0 / b));
                    }
                }
            }
        }
        (nodes, slide_gap)
    }

    /// Replace each slide by `m` points equally spaced in ln x along the
    /// hyperbola. The resulting staircase tile's area converges to
    /// [`GeneralizedTile::area`] with error O(1/m).
    pub fn discretize(&self, m: usize) -> Result<Tile> {
        if m < 2 {
            return Err(Error::Parameter(format!("discretization needs m >= 2 points per slide, got {m}")));
        }
        let mut gamma = Vec::new();
        for s in &self.sections {
            match *s {
                Section::Point(q) => gamma.push(q),
                Section::Slide(a, b) => {
                    if b <= a {
                        gamma.push(Point::new(a, 1.0 / a));
                        continue;
                    }
                    let la = a.ln();
                    let lb = b.ln();
                    for j in 0..m {
                        let x = if j == 0 {
                            a
                        } else if j == m - 1 {
                            b
                        } else {
                            (la + (lb - la) * j as f64 / (m as f64 - 1.0)).exp()
                        };
                        gamma.push(Point::new(x, 1.0 / x));
                    }
                }
            }
        }
        Ok(Tile::try_new_degenerate(Point::ORIGIN, gamma)?.pruned())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let gt: GeneralizedTile = serde_json::from_str(s)?;
        GeneralizedTile::try_new(gt.sections)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("generalized tile serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_is_a_rectangle() {
        let gt = GeneralizedTile::try_new(vec![Section::Point(Point::new(1.0, 1.0))]).unwrap();
        assert_eq!(gt.area(), 1.0);
        assert_eq!(gt.max_rect_area(), 1.0);
    }

    #[test]
    fn single_slide_area_closed_form() {
        // slide [v, 1/v] with v = e^{-1/2} has area 1 - 2 ln v = 2
        let v = (-0.5f64).exp();
        let gt = GeneralizedTile::try_new(vec![Section::Slide(v, 1.0 / v)]).unwrap();
        assert!((gt.area() - 2.0).abs() < 1e-14);
        assert_eq!(gt.max_rect_area(), 1.0);
    }

    #[test]
    fn mixed_sections_area() {
        // point (0.8, 1.25) on the hyperbola, point (1, 1), slide [1, 1.5]
        // sharing its left endpoint with that point
        let gt = GeneralizedTile::try_new(vec![
            Section::Point(Point::new(0.8, 1.25)),
            Section::Point(Point::new(1.0, 1.0)),
            Section::Slide(1.0, 1.5),
        ])
        .unwrap();
        let expect = 1.0 + 0.2 + 1.5f64.ln();
        assert!((gt.area() - expect).abs() < 1e-15, "{} vs {}", gt.area(), expect);
        let (nodes, gaps) = gt.boundary();
        assert_eq!(nodes.len(), 3);
        assert_eq!(gaps, vec![false, true]);
    }

    #[test]
    fn section_ordering_validated() {
        assert!(GeneralizedTile::try_new(vec![
            Section::Slide(0.5, 2.0),
            Section::Point(Point::new(1.0, 1.0)),
        ])
        .is_err());
        // increasing heights rejected
        assert!(GeneralizedTile::try_new(vec![
            Section::Point(Point::new(0.5, 1.0)),
            Section::Point(Point::new(0.8, 1.2)),
        ])
        .is_err());
    }

    #[test]
    fn discretize_zero_length_slide_is_identity() {
        let gt = GeneralizedTile::try_new(vec![Section::Slide(1.0, 1.0)]).unwrap();
        let t = gt.discretize(16).unwrap();
        assert_eq!(t.gamma(), &[Point::new(1.0, 1.0)]);
    }

    #[test]
    fn discretize_point_only_is_identity() {
        let gt = GeneralizedTile::try_new(vec![
            Section::Point(Point::new(0.5, 2.0)),
            Section::Point(Point::new(2.0, 0.5)),
        ])
        .unwrap();
        let t = gt.discretize(8).unwrap();
        assert_eq!(t.gamma().len(), 2);
    }

    #[test]
    fn discretize_converges_to_generalized_area() {
        let v = (-0.5f64).exp();
        let gt = GeneralizedTile::try_new(vec![Section::Slide(v, 1.0 / v)]).unwrap();
        let target = gt.area();
        let mut prev_err = f64::INFINITY;
        for m in [10usize, 100, 1000, 10_000] {
            let t = gt.discretize(m).unwrap();
            let err = (t.area() - target).abs();
            assert!(err < prev_err, "discretization error must shrink with m");
            prev_err = err;
        }
        assert!(prev_err < 1e-4, "m = 10^4 should be within 1e-4, err {prev_err}");
    }

    #[test]
    fn discretize_rejects_tiny_m() {
        let gt = GeneralizedTile::try_new(vec![Section::Slide(0.5, 2.0)]).unwrap();
        assert!(gt.discretize(1).is_err());
    }
}
