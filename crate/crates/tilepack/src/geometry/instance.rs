use serde::{Deserialize, Serialize};

use super::Point;
use crate::{Error, Result};

/// An input instance: points in the unit square `[0,1)^2`, one of them the
/// origin. Serialized as `{"label": ..., "points": [[x, y], ...]}` with
/// value-exact double round-trips.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub label: String,
    pub points: Vec<Point>,
}

impl Instance {
    pub fn new(label: impl Into<String>, points: Vec<Point>) -> Result<Self> {
        let inst = Instance { label: label.into(), points };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.points.iter().any(|p| p.x == 0.0 && p.y == 0.0) {
            return Err(Error::InvalidInstance("the origin (0,0) must be an input point".into()));
        }
        for p in &self.points {
            if !p.is_finite() {
                return Err(Error::InvalidInstance(format!("non-finite point ({}, {})", p.x, p.y)));
            }
            if !(0.0..1.0).contains(&p.x) || !(0.0..1.0).contains(&p.y) {
                return Err(Error::InvalidInstance(format!(
                    "point ({}, {}) outside the half-open unit square",
                    p.x, p.y
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// No two points share an x-coordinate, a y-coordinate, or a diagonal
    /// value x+y, under exact floating comparison.
    pub fn is_general_position(&self) -> bool {
        is_general_position(&self.points)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(s)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }
}

pub fn is_general_position(points: &[Point]) -> bool {
    let mut xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let mut ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    let mut ds: Vec<f64> = points.iter().map(|p| p.diag()).collect();
    for v in [&mut xs, &mut ys, &mut ds] {
        v.sort_by(f64::total_cmp);
        if v.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
    }
    true
}

/// Move every point except the origin toward the top-right, the i-th point
/// (1-based over the instance order) by `i*delta/n` in each coordinate. This
/// separates shared coordinates and shared diagonals deterministically while
/// the greedy processing order of points with distinct diagonals stays fixed.
///
/// Errors when `delta` is large enough to threaten the processing order
/// (conservatively: when `2*delta` reaches the smallest positive diagonal
/// gap) or to push a point out of the unit square.
pub fn perturb_general_position(inst: &Instance, delta: f64) -> Result<Instance> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::Parameter(format!("perturbation delta must be >= 0, got {delta}")));
    }
    if delta == 0.0 {
        return Ok(inst.clone());
    }
    // Diagonal gaps at or below this scale are ties being broken, not an
    // order to preserve: boundary clamping and mirrored constructions leave
    // clusters separated by anything from rounding noise up to the 1e-9
    // clamp width, while structural gaps sit far above it.
    const TIE_TOL: f64 = 1e-8;
    let mut diags: Vec<f64> = inst.points.iter().map(|p| p.diag()).collect();
    diags.sort_by(f64::total_cmp);
    let min_gap = diags
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|g| *g > TIE_TOL)
        .fold(f64::INFINITY, f64::min);
    if 2.0 * delta >= min_gap {
        return Err(Error::Parameter(format!(
            "delta {delta} may change the processing order (smallest positive diagonal gap {min_gap})"
        )));
    }

    let n = inst.points.len() as f64;
    let mut points = Vec::with_capacity(inst.points.len());
    for (i, p) in inst.points.iter().enumerate() {
        if p.x == 0.0 && p.y == 0.0 {
            points.push(*p);
            continue;
        }
        let shift = (i as f64 + 1.0) * delta / n;
        let q = Point::new(p.x + shift, p.y + shift);
        if q.x >= 1.0 || q.y >= 1.0 {
            return Err(Error::Parameter(format!(
                "delta {delta} pushes point ({}, {}) out of the unit square",
                p.x, p.y
            )));
        }
        points.push(q);
    }
    Ok(Instance { label: inst.label.clone(), points })
}

/// Perturb with geometrically escalating delta until the general-position
/// predicate holds. Instances already in general position pass through
/// unchanged. Escalation is needed when `delta/n` falls below the floating
/// point resolution of the coordinates.
pub fn perturb_until_general(inst: &Instance, delta: f64) -> Result<Instance> {
    if inst.is_general_position() {
        return Ok(inst.clone());
    }
    let mut d = delta.max(f64::MIN_POSITIVE);
    for _ in 0..48 {
        let out = perturb_general_position(inst, d)?;
        if out.is_general_position() {
            return Ok(out);
        }
        d *= 16.0;
    }
    Err(Error::NotGeneralPosition(format!(
        "perturbation failed to reach general position for instance '{}'",
        inst.label
    )))
}
