//! Tile transformations that preserve density and never increase the
//! charging ratio, together with a numeric checker for that order.

use serde::Serialize;

use crate::charging::{crown_of_generalized, crown_of_tile};
use crate::geometry::{GeneralizedTile, Point, Section, Tile, HYPERBOLA_TOL};
use crate::{Error, Result};

/// Density and charging-ratio deltas of a transformation. The transformation
/// respects the order when the density is preserved and the ratio does not
/// increase, both within 1e-9.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransformResult {
    pub rho_before: f64,
    pub rho_after: f64,
    pub ratio_before: f64,
    pub ratio_after: f64,
    pub rho_delta: f64,
    pub ratio_delta: f64,
    pub precedes_ok: bool,
}

/// The measures entering the transformation order.
#[derive(Debug, Clone, Copy)]
pub struct Measures {
    pub area: f64,
    pub max_rect: f64,
    pub crown: f64,
}

impl Measures {
    pub fn of_tile(t: &Tile) -> Measures {
        Measures { area: t.area(), max_rect: t.max_rect_area(), crown: crown_of_tile(t).total }
    }

    pub fn of_generalized(gt: &GeneralizedTile) -> Measures {
        Measures {
            area: gt.area(),
            max_rect: gt.max_rect_area(),
            crown: crown_of_generalized(gt).total,
        }
    }

    fn rho(&self) -> f64 {
        self.max_rect / self.area
    }

    fn ratio(&self) -> f64 {
        self.crown / self.area
    }
}

pub fn check_precedes(before: &Measures, after: &Measures) -> TransformResult {
    let rho_before = before.rho();
    let rho_after = after.rho();
    let ratio_before = before.ratio();
    let ratio_after = after.ratio();
    let rho_delta = rho_after - rho_before;
    let ratio_delta = ratio_after - ratio_before;
    TransformResult {
        rho_before,
        rho_after,
        ratio_before,
        ratio_after,
        rho_delta,
        ratio_delta,
        precedes_ok: rho_delta.abs() <= 1e-9 && ratio_delta <= 1e-9,
    }
}

pub fn check_precedes_tiles(before: &Tile, after: &Tile) -> TransformResult {
    check_precedes(&Measures::of_tile(before), &Measures::of_tile(after))
}

/// Translate the anchor to the origin and scale lengths by `1/sqrt(|A_t|)`
/// so the maximal rectangle has area 1. Density and charging ratio are
/// invariant under this map.
pub fn normalize(t: &Tile) -> Tile {
    let a = t.anchor();
    let scale = t.max_rect_area().sqrt();
    let gamma = t
        .gamma()
        .iter()
        .map(|q| Point::new((q.x - a.x) / scale, (q.y - a.y) / scale))
        .collect();
    Tile::try_new_degenerate(Point::ORIGIN, gamma)
        .expect("normalization preserves staircase ordering")
}

/// Remove staircase points dominated by other staircase points. The pruned
/// tile covers the same region; the crown never grows.
pub fn prune_degenerate(t: &Tile) -> Tile {
    t.pruned()
}

/// Result of the two-point slide: `converged` is false when the iteration
/// budget ran out before reaching at most one off-hyperbola point.
#[derive(Debug, Clone)]
pub struct TwoPointOutcome {
    pub tile: Tile,
    pub converged: bool,
}

/// Repeatedly move one off-hyperbola staircase point vertically and another
/// horizontally, with rates coupled so the tile area is exactly preserved,
/// in the crown-non-increasing direction, until an event lands a point on
/// the hyperbola or collides two coordinates (then the tile is pruned).
/// Terminates with at most one point off the hyperbola.
pub fn two_point_slide(t: &Tile, max_iter: usize) -> Result<TwoPointOutcome> {
    if t.anchor() != Point::ORIGIN || (t.max_rect_area() - 1.0).abs() > 1e-6 {
        return Err(Error::Precondition(
            "two_point_slide expects a normalized tile (anchor at the origin, maximal rectangle area 1)".into(),
        ));
    }
    let target = t.max_rect_area();
    let mut gamma: Vec<Point> = t.gamma().to_vec();

    for _ in 0..max_iter {
        let off: Vec<usize> = gamma
            .iter()
            .enumerate()
            .filter(|(_, q)| (q.x * q.y - target).abs() > HYPERBOLA_TOL)
            .map(|(i, _)| i)
            .collect();
        if off.len() <= 1 {
            let tile = Tile::try_new(Point::ORIGIN, gamma)?;
            return Ok(TwoPointOutcome { tile, converged: true });
        }
        let (i, j) = (off[0], off[1]);
        let k = gamma.len();

        let w_i = gamma[i].x - if i > 0 { gamma[i - 1].x } else { 0.0 };
        let h_j = gamma[j].y - if j + 1 < k { gamma[j + 1].y } else { 0.0 };

        // crown value under the coupled move (q_i up by s*e, q_j right by
        // alpha_j*e); both candidate signs probed, the crown is quadratic in
        // e with non-positive curvature so the smaller probe is the
        // non-increasing direction
        let crown_at = |s: f64, e: f64| -> f64 {
            let alpha_j = -s * w_i / h_j;
            let mut g = gamma.clone();
            g[i].y += s * e;
            g[j].x += alpha_j * e;
            g.windows(2)
                .map(|w| {
                    let (x1, y1) = (w[0].x, w[0].y);
                    let (x2, y2) = (w[1].x, w[1].y);
                    (x1 + y2) * ((x2 - x1) + (y1 - y2)) / 2.0
                })
                .sum()
        };
        let probe = 1e-7;
        let s = if crown_at(1.0, probe) <= crown_at(-1.0, probe) { 1.0 } else { -1.0 };
        let alpha_j = -s * w_i / h_j;

        // event-driven step: the largest e before a hyperbola landing or a
        // coordinate collision; each event carries the exact coordinate it
        // lands on so rounding cannot break the staircase ordering
        enum Event {
            YLands(f64),
            XLands(f64),
        }
        let mut events: Vec<(f64, Event)> = Vec::with_capacity(4);
        if s > 0.0 {
            events.push(((target / gamma[i].x - gamma[i].y) / s, Event::YLands(target / gamma[i].x)));
            if i > 0 {
                events.push(((gamma[i - 1].y - gamma[i].y) / s, Event::YLands(gamma[i - 1].y)));
            }
        } else {
            let floor = if i + 1 < k { gamma[i + 1].y } else { 0.0 };
            events.push(((gamma[i].y - floor) / -s, Event::YLands(floor)));
        }
        if alpha_j > 0.0 {
            events.push(((target / gamma[j].y - gamma[j].x) / alpha_j, Event::XLands(target / gamma[j].y)));
            if j + 1 < k {
                events.push(((gamma[j + 1].x - gamma[j].x) / alpha_j, Event::XLands(gamma[j + 1].x)));
            }
        } else {
            let wall = if j > 0 { gamma[j - 1].x } else { 0.0 };
            events.push(((gamma[j].x - wall) / -alpha_j, Event::XLands(wall)));
        }
        let (e_max, event) = events
            .into_iter()
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("event list is never empty");
        if !(e_max.is_finite() && e_max > 0.0) {
            return Err(Error::Precondition(format!(
                "two_point_slide cannot advance (event step {e_max})"
            )));
        }

        match event {
            Event::YLands(y) => {
                gamma[i].y = y;
                gamma[j].x += alpha_j * e_max;
            }
            Event::XLands(x) => {
                gamma[j].x = x;
                gamma[i].y += s * e_max;
            }
        }
        // keep the non-snapped coordinate weakly inside its walls
        if i > 0 {
            gamma[i].y = gamma[i].y.min(gamma[i - 1].y);
        }
        if i + 1 < k {
            gamma[i].y = gamma[i].y.max(gamma[i + 1].y);
        }
        if j > 0 {
            gamma[j].x = gamma[j].x.max(gamma[j - 1].x);
        }
        if j + 1 < k {
            gamma[j].x = gamma[j].x.min(gamma[j + 1].x);
        }

        let t = Tile::try_new_degenerate(Point::ORIGIN, gamma)?.pruned();
        gamma = t.gamma().to_vec();
    }

    let tile = Tile::try_new_degenerate(Point::ORIGIN, gamma)?.pruned();
    Ok(TwoPointOutcome { tile, converged: false })
}

/// Replace a step `(q1, q2)` followed by a slide `[x2, x3]` (with
/// `x1 >= 1/x3`) by a slide `[x1, x4]` and a step ending at `x3`, where
/// `x4 = x1*x3/x2`. The area is preserved exactly and the crown cannot grow.
pub fn shorter_side_swap(gt: &GeneralizedTile, step_index: usize) -> Result<GeneralizedTile> {
    let sections = gt.sections();
    if step_index + 1 >= sections.len() {
        return Err(Error::Precondition(format!(
            "no slide follows section {step_index}"
        )));
    }
    // x1: right end of the section before the step gap, which must sit on
    // the unit hyperbola
    let x1 = match sections[step_index] {
        Section::Point(q) => {
            if (q.x * q.y - 1.0).abs() > HYPERBOLA_TOL {
                return Err(Error::Precondition(format!(
                    "step start ({}, {}) is not on the unit hyperbola",
                    q.x, q.y
                )));
            }
            q.x
        }
        Section::Slide(_, b) => b,
    };
    let Section::Slide(x2, x3) = sections[step_index + 1] else {
        return Err(Error::Precondition(format!(
            "section {} is not a slide",
            step_index + 1
        )));
    };
    if x3 <= x2 {
        return Err(Error::Precondition(format!("slide [{x2}, {x3}] is empty")));
    }
    if x1 * x3 < 1.0 - 1e-12 {
        return Err(Error::Precondition(format!(
            "shorter_side_swap needs x1 >= 1/x3 (x1 = {x1}, x3 = {x3})"
        )));
    }

    let x4 = x1 * x3 / x2;
    let mut out: Vec<Section> = Vec::with_capacity(sections.len() + 1);
    out.extend_from_slice(&sections[..step_index]);
    match sections[step_index] {
        Section::Point(_) => out.push(Section::Slide(x1, x4)),
        Section::Slide(a, _) => out.push(Section::Slide(a, x4)),
    }
    if x4 < x3 {
        out.push(Section::Point(Point::new(x3, 1.0 / x3)));
    }
    out.extend_from_slice(&sections[step_index + 2..]);
    GeneralizedTile::try_new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tile(rng: &mut ChaCha8Rng, k: usize) -> Tile {
        loop {
            let mut xs: Vec<f64> = (0..k).map(|_| 0.05 + 0.95 * rng.random::<f64>()).collect();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let mut ys: Vec<f64> = (0..xs.len()).map(|_| 0.05 + 0.95 * rng.random::<f64>()).collect();
            ys.sort_by(|a, b| b.total_cmp(a));
            ys.dedup();
            if ys.len() != xs.len() {
                continue;
            }
            let gamma: Vec<Point> = xs.iter().zip(&ys).map(|(&x, &y)| Point::new(x, y)).collect();
            if let Ok(t) = Tile::try_new(Point::new(rng.random::<f64>() * 0.2, rng.random::<f64>() * 0.2), gamma) {
                return t;
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let t = Tile::try_new(Point::ORIGIN, vec![Point::new(1.0, 1.0)]).unwrap();
        assert_eq!(normalize(&t), t);

        let t = Tile::try_new(Point::new(0.2, 0.2), vec![Point::new(0.7, 0.7)]).unwrap();
        let n = normalize(&t);
        assert_eq!(n.anchor(), Point::ORIGIN);
        assert!((n.gamma()[0].x - 1.0).abs() < 1e-15);
        assert!((n.gamma()[0].y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalize_preserves_density_and_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let k = 2 + rng.random_range(0..5);
            let t = random_tile(&mut rng, k);
            let n = normalize(&t);
            assert!((n.max_rect_area() - 1.0).abs() < 1e-12);
            let r = check_precedes_tiles(&t, &n);
            assert!(r.precedes_ok, "rho delta {} ratio delta {}", r.rho_delta, r.ratio_delta);
            assert!(r.rho_delta.abs() < 1e-12);
            assert!(r.ratio_delta.abs() < 1e-12);
        }
    }

    #[test]
    fn prune_examples() {
        let t = Tile::try_new(
            Point::ORIGIN,
            vec![Point::new(0.5, 1.0), Point::new(1.0, 0.5)],
        )
        .unwrap();
        assert_eq!(prune_degenerate(&t), t);

        let d = Tile::try_new_degenerate(
            Point::ORIGIN,
            vec![Point::new(0.5, 1.0), Point::new(0.5, 0.7), Point::new(1.0, 0.5)],
        )
        .unwrap();
        let p = prune_degenerate(&d);
        assert_eq!(p.gamma().len(), 2);
        assert!((p.area() - d.area()).abs() < 1e-15);
        assert!(crown_of_tile(&p).total <= crown_of_tile(&d).total + 1e-15);
    }

    #[test]
    fn prune_random_degenerate_tiles() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let t = random_tile(&mut rng, 3);
            // duplicate a coordinate to make it degenerate
            let mut gamma = t.gamma().to_vec();
            let g1 = gamma[1];
            gamma.insert(1, Point::new(gamma[0].x, (g1.y + gamma[0].y) / 2.0));
            let Ok(d) = Tile::try_new_degenerate(t.anchor(), gamma) else { continue };
            let p = prune_degenerate(&d);
            assert!((p.area() - d.area()).abs() <= 1e-12);
            assert!(crown_of_tile(&p).total <= crown_of_tile(&d).total + 1e-12);
        }
    }

    fn off_hyperbola_count(t: &Tile) -> usize {
        let a = t.max_rect_area();
        t.gamma()
            .iter()
            .filter(|q| ((q.x - t.anchor().x) * (q.y - t.anchor().y) - a).abs() > HYPERBOLA_TOL)
            .count()
    }

    #[test]
    fn two_point_slide_identity_cases() {
        // all points on the hyperbola
        let t = Tile::try_new(
            Point::ORIGIN,
            vec![Point::new(0.5, 2.0), Point::new(1.0, 1.0), Point::new(2.0, 0.5)],
        )
        .unwrap();
        let out = two_point_slide(&t, 100).unwrap();
        assert!(out.converged);
        assert_eq!(out.tile, t);

        // one off-hyperbola point
        let t = Tile::try_new(
            Point::ORIGIN,
            vec![Point::new(0.5, 2.0), Point::new(1.0, 0.9), Point::new(2.0, 0.5)],
        )
        .unwrap();
        let out = two_point_slide(&t, 100).unwrap();
        assert!(out.converged);
        assert_eq!(out.tile, t);
    }

    #[test]
    fn two_point_slide_reduces_off_hyperbola_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 300 {
            let k = 3 + rng.random_range(0..4);
            let raw = random_tile(&mut rng, k);
            let t = normalize(&raw).pruned();
            if t.gamma().len() < 3 || off_hyperbola_count(&t) < 3 {
                continue;
            }
            let before = Measures::of_tile(&t);
            let out = two_point_slide(&t, 200).unwrap();
            assert!(out.converged, "iteration budget must suffice");
            assert!(off_hyperbola_count(&out.tile) <= 1);
            let after = Measures::of_tile(&out.tile);
            let r = check_precedes(&before, &after);
            assert!(
                r.rho_delta.abs() <= 1e-6 && r.ratio_delta <= 1e-6,
                "rho delta {}, ratio delta {}",
                r.rho_delta,
                r.ratio_delta
            );
            checked += 1;
        }
    }

    #[test]
    fn shorter_side_swap_example() {
        // step from (0.8, 1.25) to the slide [1.0, 1.5]
        let gt = GeneralizedTile::try_new(vec![
            Section::Point(Point::new(0.8, 1.25)),
            Section::Slide(1.0, 1.5),
        ])
        .unwrap();
        let out = shorter_side_swap(&gt, 0).unwrap();
        match out.sections() {
            [Section::Slide(a, b), Section::Point(q)] => {
                assert!((a - 0.8).abs() < 1e-15);
                assert!((b - 1.2).abs() < 1e-15);
                assert!((q.x - 1.5).abs() < 1e-15);
            }
            other => panic!("unexpected sections {other:?}"),
        }
        // area identity: 0.2 + ln 1.5 on both sides
        assert!((out.area() - gt.area()).abs() < 1e-15);
        // crown delta matches the closed form and is non-positive
        let delta = crown_of_generalized(&out).total - crown_of_generalized(&gt).total;
        let (x1, x2, x3): (f64, f64, f64) = (0.8, 1.0, 1.5);
        let expect = (x2 - x1).powi(2) * (x3 * x3 - x2 * x2) * (1.0 - x1 * x1 * x3 * x3)
            / (4.0 * x1 * x1 * x2 * x2 * x3 * x3);
        assert!((delta - expect).abs() < 1e-12, "{delta} vs {expect}");
        assert!(delta <= 1e-12);
    }

    #[test]
    fn shorter_side_swap_boundary_cases() {
        // x1*x3 = 1 exactly: crown unchanged
        let x1: f64 = 0.8;
        let x3 = 1.0 / x1;
        let x2 = 1.0;
        let gt = GeneralizedTile::try_new(vec![
            Section::Point(Point::new(x1, 1.0 / x1)),
            Section::Slide(x2, x3),
        ])
        .unwrap();
        let out = shorter_side_swap(&gt, 0).unwrap();
        let delta = crown_of_generalized(&out).total - crown_of_generalized(&gt).total;
        assert!(delta.abs() < 1e-12);
        assert!((out.area() - gt.area()).abs() < 1e-14);

        // empty step (x2 == x1): pure relabeling into a single slide
        let gt = GeneralizedTile::try_new(vec![
            Section::Point(Point::new(1.0, 1.0)),
            Section::Slide(1.0, 1.5),
        ])
        .unwrap();
        let out = shorter_side_swap(&gt, 0).unwrap();
        assert_eq!(out.sections(), &[Section::Slide(1.0, 1.5)]);
        assert!((out.area() - gt.area()).abs() < 1e-15);

        // precondition x1 >= 1/x3 violated
        let gt = GeneralizedTile::try_new(vec![
            Section::Point(Point::new(0.5, 2.0)),
            Section::Slide(0.75, 1.2),
        ])
        .unwrap();
        assert!(shorter_side_swap(&gt, 0).is_err());

        // pattern mismatch
        let gt = GeneralizedTile::try_new(vec![
            Section::Point(Point::new(0.9, 1.1)),
            Section::Point(Point::new(1.5, 1.0 / 1.5)),
        ])
        .unwrap();
        assert!(shorter_side_swap(&gt, 0).is_err());
    }

    #[test]
    fn shorter_side_swap_random_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut checked = 0;
        while checked < 2_000 {
            let x1 = 0.4 + 1.2 * rng.random::<f64>();
            let x2 = x1 * (1.0 + rng.random::<f64>());
            let x3 = x2 + rng.random::<f64>();
            if x1 * x3 < 1.0 {
                continue;
            }
            let gt = GeneralizedTile::try_new(vec![
                Section::Point(Point::new(x1, 1.0 / x1)),
                Section::Slide(x2, x3),
            ])
            .unwrap();
            let out = shorter_side_swap(&gt, 0).unwrap();
            assert!((out.area() - gt.area()).abs() <= 1e-12);
            let before = Measures::of_generalized(&gt);
            let after = Measures::of_generalized(&out);
            let r = check_precedes(&before, &after);
            assert!(r.precedes_ok, "rho {} ratio {}", r.rho_delta, r.ratio_delta);
            checked += 1;
        }
    }

    #[test]
    fn check_precedes_flags_worsened_tiles() {
        let t = Tile::try_new(
            Point::ORIGIN,
            vec![Point::new(0.5, 2.0), Point::new(2.0, 0.5)],
        )
        .unwrap();
        let r = check_precedes_tiles(&t, &t);
        assert!(r.precedes_ok);
        assert_eq!(r.rho_delta, 0.0);
        assert_eq!(r.ratio_delta, 0.0);

        // pushing a point up off the hyperbola changes the area: not a
        // valid transformation
        let worsened = Tile::try_new(
            Point::ORIGIN,
            vec![Point::new(0.5, 2.2), Point::new(2.0, 0.5)],
        )
        .unwrap();
        let r = check_precedes_tiles(&t, &worsened);
        assert!(!r.precedes_ok);
    }
}
