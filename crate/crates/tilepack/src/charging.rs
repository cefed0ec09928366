//! The crown charging scheme.
//!
//! A tile's area is charged to its crown: one 45-degree-rotated rectangle
//! (a tower) per consecutive pair of upper staircase points, plus a closed
//! form contribution per hyperbola slide of a generalized tile. On greedy
//! packings crowns are pairwise disjoint and fit inside a pentagon of area
//! 3/2, which caps the total charge; the per-tile charging ratio is bounded
//! below by the functions in [`crate::bounds`].

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{GeneralizedTile, Point, Tile};
use crate::packing::TilePacking;
use crate::{Error, Result};

/// The 45-degree-rotated rectangle charging a consecutive staircase pair:
/// bounded by the slope -1 lines through the base point and through the
/// peak `(x(q1), y(q2))`, and the slope +1 lines through `q1` and `q2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tower {
    pub base: Point,
    pub q1: Point,
    pub q2: Point,
}

/// Which of the two staircase points of a tower moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerPoint {
    Q1,
    Q2,
}

/// Direction of the linear motion applied to a tower point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveDirection {
    Horizontal,
    Vertical,
}

impl Tower {
    pub fn new(base: Point, q1: Point, q2: Point) -> Self {
        debug_assert!(base.dominates_below(q1) && base.dominates_below(q2));
        debug_assert!(q1.x <= q2.x && q1.y >= q2.y);
        Tower { base, q1, q2 }
    }

    /// Closed-form area `(x1 + y2) * (w2 + h1) / 2` in coordinates relative
    /// to the base point.
    pub fn area(&self) -> f64 {
        let x1 = self.q1.x - self.base.x;
        let y1 = self.q1.y - self.base.y;
        let x2 = self.q2.x - self.base.x;
        let y2 = self.q2.y - self.base.y;
        (x1 + y2) * ((x2 - x1) + (y1 - y2)) / 2.0
    }

    /// Quad corners in counterclockwise order, starting at the base-left
    /// corner.
    pub fn vertices(&self) -> [Point; 4] {
        let (bx, by) = (self.base.x, self.base.y);
        let x1 = self.q1.x - bx;
        let y1 = self.q1.y - by;
        let x2 = self.q2.x - bx;
        let y2 = self.q2.y - by;
        [
            Point::new(bx + (x1 - y1) / 2.0, by + (y1 - x1) / 2.0),
            Point::new(bx + (x2 - y2) / 2.0, by + (y2 - x2) / 2.0),
            Point::new(bx + (x1 + x2) / 2.0, by + y2 - (x2 - x1) / 2.0),
            Point::new(bx + x1 - (y1 - y2) / 2.0, by + (y1 + y2) / 2.0),
        ]
    }

    pub fn is_degenerate(&self) -> bool {
        self.area() <= 0.0
    }

    fn bbox(&self) -> (f64, f64, f64, f64) {
        let mut lo_x = f64::INFINITY;
        let mut lo_y = f64::INFINITY;
        let mut hi_x = f64::NEG_INFINITY;
        let mut hi_y = f64::NEG_INFINITY;
        for v in self.vertices() {
            lo_x = lo_x.min(v.x);
            lo_y = lo_y.min(v.y);
            hi_x = hi_x.max(v.x);
            hi_y = hi_y.max(v.y);
        }
        (lo_x, lo_y, hi_x, hi_y)
    }
}

/// First and second derivative of the tower area under the four linear
/// motions of a staircase point with rate `alpha`.
///
/// Moving `q1` vertically or `q2` horizontally changes the area linearly
/// with slope `alpha*(x1+y2)/2`; moving `q1` horizontally or `q2`
/// vertically has slope `alpha*(w2+h1-x1-y2)/2` and constant second
/// derivative `-alpha^2`.
pub fn tower_derivatives(
    tower: &Tower,
    which: TowerPoint,
    direction: MoveDirection,
    alpha: f64,
) -> (f64, f64) {
    let x1 = tower.q1.x - tower.base.x;
    let y1 = tower.q1.y - tower.base.y;
    let x2 = tower.q2.x - tower.base.x;
    let y2 = tower.q2.y - tower.base.y;
    let w2 = x2 - x1;
    let h1 = y1 - y2;
    match (which, direction) {
        (TowerPoint::Q1, MoveDirection::Vertical) | (TowerPoint::Q2, MoveDirection::Horizontal) => {
            (alpha * (x1 + y2) / 2.0, 0.0)
        }
        (TowerPoint::Q1, MoveDirection::Horizontal) | (TowerPoint::Q2, MoveDirection::Vertical) => {
            (alpha * (w2 + h1 - (x1 + y2)) / 2.0, -alpha * alpha)
        }
    }
}

/// Crown contribution of a hyperbola slide `[a, b]` of a normalized tile:
/// `[ln z + (z^2 - z^-2)/4]` evaluated from `a` to `b`.
pub fn slide_contribution(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b < a {
        return Err(Error::Parameter(format!("slide bounds must satisfy 0 < a <= b, got [{a}, {b}]")));
    }
    let f = |z: f64| z.ln() + (z * z - z.powi(-2)) / 4.0;
    Ok(f(b) - f(a))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlideCharge {
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

/// The charging area of one tile: its towers plus slide contributions.
#[derive(Debug, Clone, Serialize)]
pub struct Crown {
    pub towers: Vec<Tower>,
    pub slide_contributions: Vec<SlideCharge>,
    pub total: f64,
}

impl Crown {
    fn from_parts(towers: Vec<Tower>, slide_contributions: Vec<SlideCharge>) -> Self {
        let total = towers.iter().map(Tower::area).sum::<f64>()
            + slide_contributions.iter().map(|s| s.value).sum::<f64>();
        Crown { towers, slide_contributions, total }
    }
}

/// Crown of a staircase tile: one tower per consecutive staircase pair.
/// A single staircase point has an empty crown.
pub fn crown_of_tile(tile: &Tile) -> Crown {
    let towers = tile
        .gamma()
        .windows(2)
        .map(|w| Tower::new(tile.anchor(), w[0], w[1]))
        .collect();
    Crown::from_parts(towers, Vec::new())
}

/// Crown of a generalized tile: towers across the gaps between boundary
/// corners, closed-form contributions along slides.
pub fn crown_of_generalized(gt: &GeneralizedTile) -> Crown {
    let (nodes, slide_gaps) = gt.boundary();
    let mut towers = Vec::new();
    let mut slides = Vec::new();
    for (i, is_slide) in slide_gaps.iter().enumerate() {
        let (u, v) = (nodes[i], nodes[i + 1]);
        if *is_slide {
            let value = slide_contribution(u.x, v.x).expect("slide bounds were validated");
            slides.push(SlideCharge { a: u.x, b: v.x, value });
        } else {
            towers.push(Tower::new(Point::ORIGIN, u, v));
        }
    }
    Crown::from_parts(towers, slides)
}

/// Crowns of every tile of a packing, in tile order.
pub fn crowns(pk: &TilePacking) -> Vec<Crown> {
    pk.tiles().iter().map(crown_of_tile).collect()
}

/// Total charged area c* of a packing's crowns.
pub fn total_charge(crowns: &[Crown]) -> f64 {
    crowns.iter().map(|c| c.total).sum()
}

/// Signed area of a polygon (positive when counterclockwise).
pub fn polygon_area(poly: &[Point]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        s += a.x * b.y - b.x * a.y;
    }
    s / 2.0
}

/// Clip a polygon to the left half-plane of the directed edge a -> b.
fn clip_halfplane(poly: &[Point], a: Point, b: Point) -> Vec<Point> {
    let side = |p: Point| (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let s = poly[i];
        let e = poly[(i + 1) % n];
        let sc = side(s);
        let ec = side(e);
        if sc >= 0.0 {
            out.push(s);
        }
        if (sc > 0.0) != (ec > 0.0) && sc != ec {
            let t = sc / (sc - ec);
            out.push(Point::new(s.x + (e.x - s.x) * t, s.y + (e.y - s.y) * t));
        }
    }
    out
}

/// Intersection of two convex polygons (counterclockwise) by iterated
/// half-plane clipping.
pub fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut poly = subject.to_vec();
    for i in 0..clip.len() {
        if poly.is_empty() {
            break;
        }
        poly = clip_halfplane(&poly, clip[i], clip[(i + 1) % clip.len()]);
    }
    poly
}

/// Area of the intersection of two convex counterclockwise polygons.
pub fn intersection_area(a: &[Point], b: &[Point]) -> f64 {
    polygon_area(&clip_convex(a, b)).max(0.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapWitness {
    pub tile_a: usize,
    pub tower_a: usize,
    pub tile_b: usize,
    pub tower_b: usize,
    pub overlap_area: f64,
    pub witness: Vec<Point>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DisjointReport {
    pub worst_overlap: f64,
    pub violations: Vec<OverlapWitness>,
    pub pass: bool,
}

/// Check that towers of different tiles are pairwise disjoint up to `tol`
/// intersection area. Degenerate towers are skipped.
pub fn crowns_disjoint(crowns: &[Crown], tol: f64) -> DisjointReport {
    struct Entry {
        tile: usize,
        tower: usize,
        verts: [Point; 4],
        bbox: (f64, f64, f64, f64),
    }
    let entries: Vec<Entry> = crowns
        .iter()
        .enumerate()
        .flat_map(|(ti, c)| {
            c.towers.iter().enumerate().filter(|(_, t)| !t.is_degenerate()).map(
                move |(wi, t)| Entry { tile: ti, tower: wi, verts: t.vertices(), bbox: t.bbox() },
            )
        })
        .collect();

    let mut violations: Vec<OverlapWitness> = (0..entries.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let entries = &entries;
            (i + 1..entries.len()).filter_map(move |j| {
                let (a, b) = (&entries[i], &entries[j]);
                if a.tile == b.tile {
                    return None;
                }
                if a.bbox.2 <= b.bbox.0
                    || b.bbox.2 <= a.bbox.0
                    || a.bbox.3 <= b.bbox.1
                    || b.bbox.3 <= a.bbox.1
                {
                    return None;
                }
                let poly = clip_convex(&a.verts, &b.verts);
                let overlap = polygon_area(&poly).max(0.0);
                if overlap <= tol {
                    return None;
                }
                Some(OverlapWitness {
                    tile_a: a.tile,
                    tower_a: a.tower,
                    tile_b: b.tile,
                    tower_b: b.tower,
                    overlap_area: overlap,
                    witness: poly,
                })
            })
        })
        .collect();

    violations.sort_by(|a, b| b.overlap_area.total_cmp(&a.overlap_area));
    let worst = violations.first().map_or(0.0, |v| v.overlap_area);
    violations.truncate(32);
    DisjointReport { worst_overlap: worst, violations: violations.clone(), pass: violations.is_empty() }
}

/// The pentagon bounding every crown: the unit square plus two isosceles
/// triangles, with vertices (-1/2,1/2), (1/2,-1/2), (1,0), (1,1), (0,1) in
/// counterclockwise order. Its area is 3/2.
pub fn pentagon() -> [Point; 5] {
    [
        Point::new(-0.5, 0.5),
        Point::new(0.5, -0.5),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct PentagonViolation {
    pub tile: usize,
    pub tower: usize,
    pub vertex: Point,
    pub signed_distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PentagonReport {
    pub violations: Vec<PentagonViolation>,
    pub pass: bool,
}

/// Check that every tower vertex lies inside the pentagon within `tol`
/// (signed distance to each edge at least `-tol`).
pub fn pentagon_containment(crowns: &[Crown], tol: f64) -> PentagonReport {
    let penta = pentagon();
    let mut violations = Vec::new();
    for (ti, c) in crowns.iter().enumerate() {
        for (wi, t) in c.towers.iter().enumerate() {
            if t.is_degenerate() {
                continue;
            }
            for v in t.vertices() {
                let mut worst = f64::INFINITY;
                for i in 0..penta.len() {
                    let a = penta[i];
                    let b = penta[(i + 1) % penta.len()];
                    let len = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
                    let cross = (b.x - a.x) * (v.y - a.y) - (b.y - a.y) * (v.x - a.x);
                    worst = worst.min(cross / len);
                }
                if worst < -tol {
                    violations.push(PentagonViolation {
                        tile: ti,
                        tower: wi,
                        vertex: v,
                        signed_distance: worst,
                    });
                }
            }
        }
    }
    let pass = violations.is_empty();
    PentagonReport { violations, pass }
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioRecord {
    pub tile_index: usize,
    pub rho: f64,
    pub ratio: f64,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub per_tile: Vec<RatioRecord>,
    pub min_slack: f64,
    pub pass: bool,
}

/// Per-tile charging ratios `c_t/|t|` against a lower-bound function of the
/// density. Slack below `-1e-9` fails the report.
pub fn charging_ratio_report(
    pk: &TilePacking,
    crowns: &[Crown],
    bound: impl Fn(f64) -> f64,
) -> RatioReport {
    let mut per_tile = Vec::with_capacity(pk.len());
    let mut min_slack = f64::INFINITY;
    for (i, (tile, crown)) in pk.tiles().iter().zip(crowns).enumerate() {
        let area = tile.area();
        let rho = tile.density().expect("greedy tiles have positive area");
        let ratio = crown.total / area;
        let b = bound(rho);
        let slack = ratio - b;
        min_slack = min_slack.min(slack);
        per_tile.push(RatioRecord { tile_index: i, rho, ratio, bound: b, slack });
    }
    if per_tile.is_empty() {
        min_slack = 0.0;
    }
    RatioReport { per_tile, min_slack, pass: min_slack >= -1e-9 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Section;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn shoelace_of(t: &Tower) -> f64 {
        polygon_area(&t.vertices())
    }

    #[test]
    fn tower_area_example_and_shoelace() {
        let t = Tower::new(Point::ORIGIN, Point::new(0.5, 1.0), Point::new(1.0, 0.5));
        assert!((t.area() - 0.5).abs() < 1e-15);
        assert!((shoelace_of(&t) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_tower_has_zero_area() {
        let q = Point::new(0.7, 0.7);
        let t = Tower::new(Point::ORIGIN, q, q);
        assert_eq!(t.area(), 0.0);
        assert!(t.is_degenerate());
    }

    #[test]
    fn tower_closed_form_matches_shoelace_on_random_towers() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let base = Point::new(rng.random::<f64>(), rng.random::<f64>());
            let x1 = rng.random::<f64>();
            let x2 = x1 + rng.random::<f64>();
            let y2 = rng.random::<f64>();
            let y1 = y2 + rng.random::<f64>();
            let t = Tower::new(
                base,
                Point::new(base.x + x1, base.y + y1),
                Point::new(base.x + x2, base.y + y2),
            );
            assert!((t.area() - shoelace_of(&t)).abs() <= 1e-12);
        }
    }

    #[test]
    fn hyperbola_pair_tower_equals_twice_rectangle_at_unit_product() {
        // consecutive staircase points on the unit hyperbola with
        // x_{i-1} * x_i = 1 give a tower of exactly twice the incremental
        // rectangle area
        let x0 = 0.5;
        let x1 = 2.0;
        let t = Tower::new(
            Point::ORIGIN,
            Point::new(x0, 1.0 / x0),
            Point::new(x1, 1.0 / x1),
        );
        let r = (x1 - x0) * (1.0 / x1);
        assert!((t.area() - 2.0 * r).abs() < 1e-14);
    }

    #[test]
    fn hyperbola_pair_tower_rectangle_identity() {
        // T_i = R_i (1 + u)^2 / (2u) with u = x_{i-1} x_i, and T_i >= 2 R_i
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2_000 {
            let x0 = 0.1 + 2.0 * rng.random::<f64>();
            let x1 = x0 * (1.0 + rng.random::<f64>());
            let t = Tower::new(
                Point::ORIGIN,
                Point::new(x0, 1.0 / x0),
                Point::new(x1, 1.0 / x1),
            );
            let r = (x1 - x0) / x1;
            let u = x0 * x1;
            let expect = r * (1.0 + u) * (1.0 + u) / (2.0 * u);
            assert!((t.area() - expect).abs() <= 1e-12 * expect.max(1.0));
            assert!(t.area() >= 2.0 * r - 1e-12);
        }
    }

    #[test]
    fn tower_derivatives_zero_alpha() {
        let t = Tower::new(Point::ORIGIN, Point::new(0.5, 1.0), Point::new(1.0, 0.5));
        assert_eq!(tower_derivatives(&t, TowerPoint::Q1, MoveDirection::Vertical, 0.0), (0.0, 0.0));
    }

    #[test]
    fn tower_derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let eps = 1e-5;
        for _ in 0..500 {
            let x1 = 0.2 + rng.random::<f64>();
            let x2 = x1 + 0.2 + rng.random::<f64>();
            let y2 = 0.2 + rng.random::<f64>();
            let y1 = y2 + 0.2 + rng.random::<f64>();
            let alpha = if rng.random::<bool>() { 1.25 } else { -0.75 };
            for (which, dir) in [
                (TowerPoint::Q1, MoveDirection::Vertical),
                (TowerPoint::Q2, MoveDirection::Horizontal),
                (TowerPoint::Q1, MoveDirection::Horizontal),
                (TowerPoint::Q2, MoveDirection::Vertical),
            ] {
                let at = |e: f64| {
                    let mut q1 = Point::new(x1, y1);
                    let mut q2 = Point::new(x2, y2);
                    let delta = alpha * e;
                    match (which, dir) {
                        (TowerPoint::Q1, MoveDirection::Vertical) => q1.y += delta,
                        (TowerPoint::Q1, MoveDirection::Horizontal) => q1.x += delta,
                        (TowerPoint::Q2, MoveDirection::Vertical) => q2.y += delta,
                        (TowerPoint::Q2, MoveDirection::Horizontal) => q2.x += delta,
                    }
                    Tower::new(Point::ORIGIN, q1, q2).area()
                };
                let t = Tower::new(Point::ORIGIN, Point::new(x1, y1), Point::new(x2, y2));
                let (d1, d2) = tower_derivatives(&t, which, dir, alpha);
                let fd1 = (at(eps) - at(-eps)) / (2.0 * eps);
                let fd2 = (at(eps) - 2.0 * at(0.0) + at(-eps)) / (eps * eps);
                assert!((d1 - fd1).abs() < 1e-6, "first derivative {d1} vs {fd1}");
                assert!((d2 - fd2).abs() < 1e-4, "second derivative {d2} vs {fd2}");
            }
        }
    }

    /// Independent oracle: area under the rotated hyperbola sqrt(x^2+2)
    /// between the rotated images of the slide endpoints, by Simpson's rule.
    fn slide_quadrature(a: f64, b: f64) -> f64 {
        let xr = |z: f64| (z - 1.0 / z) / 2f64.sqrt();
        let (lo, hi) = (xr(a), xr(b));
        let n = 8192;
        let h = (hi - lo) / n as f64;
        let f = |x: f64| (x * x + 2.0).sqrt();
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            let x = lo + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        s * h / 3.0
    }

    #[test]
    fn slide_contribution_examples() {
        assert_eq!(slide_contribution(1.3, 1.3).unwrap(), 0.0);
        assert!(slide_contribution(0.0, 1.0).is_err());
        assert!(slide_contribution(2.0, 1.0).is_err());

        // frozen from the quadrature oracle; equals 1 + (e^2 - e^-2)/4
        let h = slide_contribution(1.0, std::f64::consts::E).unwrap();
        assert!((h - 2.8134302039235095).abs() < 1e-12);
        assert!((h - slide_quadrature(1.0, std::f64::consts::E)).abs() < 1e-8);
        let h2 = slide_contribution(0.5, 2.0).unwrap();
        assert!((h2 - slide_quadrature(0.5, 2.0)).abs() < 1e-8);
    }

    #[test]
    fn slide_contribution_is_tower_sum_limit() {
        let v: f64 = 0.4;
        let gt = GeneralizedTile::try_new(vec![Section::Slide(v, 1.0 / v)]).unwrap();
        let h = slide_contribution(v, 1.0 / v).unwrap();
        let mut prev = f64::INFINITY;
        for m in [100usize, 1000, 10_000] {
            let tile = gt.discretize(m).unwrap();
            let total = crown_of_tile(&tile).total;
            let err = (total - h).abs();
            assert!(err < prev, "tower sum must converge to the slide contribution");
            assert!(err <= 60.0 / m as f64, "error {err} too large for m={m}");
            prev = err;
        }
    }

    #[test]
    fn crown_of_single_point_tile_is_empty() {
        let t = Tile::try_new(Point::ORIGIN, vec![Point::new(1.0, 1.0)]).unwrap();
        let c = crown_of_tile(&t);
        assert!(c.towers.is_empty());
        assert_eq!(c.total, 0.0);
    }

    #[test]
    fn step_tile_crown_ratio_closed_form() {
        // symmetric step tile: c_t/|t| = 2 - 2 rho
        for v in [0.3, 0.5, 0.8, 0.95] {
            let t = Tile::try_new(
                Point::ORIGIN,
                vec![Point::new(v, 1.0 / v), Point::new(1.0 / v, v)],
            )
            .unwrap();
            let rho = t.density().unwrap();
            let ratio = crown_of_tile(&t).total / t.area();
            assert!((ratio - (2.0 - 2.0 * rho)).abs() < 1e-12, "v={v}");
        }
    }

    #[test]
    fn hyperbola_tile_crown_ratio_closed_form() {
        // single slide [v, 1/v]: c_t/|t| = 1 - rho (1 + sinh(1 - 1/rho))
        for rho in [0.2f64, 0.35, 0.5] {
            let v = (0.5 - 1.0 / (2.0 * rho)).exp();
            let gt = GeneralizedTile::try_new(vec![Section::Slide(v, 1.0 / v)]).unwrap();
            let c = crown_of_generalized(&gt);
            let ratio = c.total / gt.area();
            let expect = 1.0 - rho * (1.0 + (1.0 - 1.0 / rho).sinh());
            assert!((ratio - expect).abs() < 1e-12, "rho={rho}: {ratio} vs {expect}");
            assert!(c.towers.is_empty());
        }
    }

    #[test]
    fn towers_of_one_tile_are_disjoint_and_sum_to_crown() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let k = 2 + rng.random_range(0..6);
            let mut xs: Vec<f64> = (0..k).map(|_| 0.05 + rng.random::<f64>()).collect();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let mut ys: Vec<f64> = (0..xs.len()).map(|_| 0.05 + rng.random::<f64>()).collect();
            ys.sort_by(|a, b| b.total_cmp(a));
            ys.dedup();
            if ys.len() != xs.len() {
                continue;
            }
            let gamma: Vec<Point> =
                xs.iter().zip(&ys).map(|(&x, &y)| Point::new(x, y)).collect();
            let Ok(tile) = Tile::try_new(Point::ORIGIN, gamma) else { continue };
            let c = crown_of_tile(&tile);
            let sum: f64 = c.towers.iter().map(Tower::area).sum();
            assert!((c.total - sum).abs() < 1e-12);
            for i in 0..c.towers.len() {
                for j in i + 1..c.towers.len() {
                    let overlap = intersection_area(
                        &c.towers[i].vertices(),
                        &c.towers[j].vertices(),
                    );
                    assert!(overlap <= 1e-12, "towers {i},{j} overlap by {overlap}");
                }
            }
        }
    }

    #[test]
    fn pentagon_area_is_three_halves() {
        assert!((polygon_area(&pentagon()) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn greedy_crowns_disjoint_and_inside_pentagon() {
        let inst = crate::generators::gen_random(100, 4242);
        let pk = crate::packing::pack(&inst).unwrap();
        let cr = crowns(&pk);
        let d = crowns_disjoint(&cr, 1e-12);
        assert!(d.pass, "worst overlap {}", d.worst_overlap);
        let p = pentagon_containment(&cr, 1e-9);
        assert!(p.pass, "violation: {:?}", p.violations.first());
        assert!(total_charge(&cr) <= 1.5 + 1e-9);
    }

    #[test]
    fn overlapping_towers_are_reported() {
        let t1 = Tower::new(Point::ORIGIN, Point::new(0.5, 1.0), Point::new(1.0, 0.5));
        let t2 = Tower::new(Point::new(0.1, 0.1), Point::new(0.55, 0.95), Point::new(0.9, 0.6));
        let crowns = vec![
            Crown::from_parts(vec![t1], Vec::new()),
            Crown::from_parts(vec![t2], Vec::new()),
        ];
        let report = crowns_disjoint(&crowns, 1e-12);
        assert!(!report.pass);
        assert!(report.violations[0].overlap_area > 1e-3);
        assert!(polygon_area(&report.violations[0].witness) > 0.0);
    }

    #[test]
    fn single_point_instance_has_zero_charge() {
        let inst = Instance::new("one", vec![Point::ORIGIN]).unwrap();
        let pk = crate::packing::pack(&inst).unwrap();
        let cr = crowns(&pk);
        assert_eq!(total_charge(&cr), 0.0);
        assert!(pentagon_containment(&cr, 1e-9).pass);
    }

    use crate::geometry::Instance;

    #[test]
    fn charging_ratio_examples() {
        // step tile at v = 0.8
        let v = 0.8;
        let t = Tile::try_new(
            Point::ORIGIN,
            vec![Point::new(v, 1.0 / v), Point::new(1.0 / v, v)],
        )
        .unwrap();
        let rho = t.density().unwrap();
        assert!((rho - 1.0 / 1.36).abs() < 1e-12);
        let ratio = crown_of_tile(&t).total / t.area();
        assert!((ratio - (2.0 - 2.0 * rho)).abs() < 1e-12);
        assert!((ratio - 0.5294117647058824).abs() < 1e-12);

        // a single staircase point has density 1 and charges nothing
        let unit = Tile::try_new(Point::ORIGIN, vec![Point::new(1.0, 1.0)]).unwrap();
        assert_eq!(crown_of_tile(&unit).total, 0.0);
        assert_eq!(unit.density().unwrap(), 1.0);
    }

    #[test]
    fn discretized_hyperbola_tile_slack_is_small_and_nonnegative() {
        // inside the low-density branch the discretized slide converges to
        // the bound from above
        let rho = 0.35f64;
        let v = (0.5 - 1.0 / (2.0 * rho)).exp();
        let gt = GeneralizedTile::try_new(vec![Section::Slide(v, 1.0 / v)]).unwrap();
        let tile = gt.discretize(10_000).unwrap();
        let rho_actual = tile.density().unwrap();
        let ratio = crown_of_tile(&tile).total / tile.area();
        let bound = crate::bounds::xi(crate::bounds::XiKind::Strong, rho_actual).unwrap();
        let slack = ratio - bound;
        assert!(slack >= 0.0, "slack {slack}");
        assert!(slack <= 1e-3, "slack {slack}");
    }

    #[test]
    fn ratio_report_on_greedy_packing() {
        let inst = crate::generators::gen_random(80, 7);
        let pk = crate::packing::pack(&inst).unwrap();
        let cr = crowns(&pk);
        let report = charging_ratio_report(&pk, &cr, |rho| {
            crate::bounds::xi(crate::bounds::XiKind::Strong, rho).unwrap()
        });
        assert!(report.pass, "min slack {}", report.min_slack);
        assert_eq!(report.per_tile.len(), pk.len());
    }
}
