//! Instance families: equally spaced diagonal points, seeded random points,
//! the crown-tight family, worst-case tiles, and the ODE-driven adversarial
//! construction that drives coverage toward (1 - e^-2)/2.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{perturb_until_general, GeneralizedTile, Instance, Point, Section, Tile};
use crate::{Error, Result};

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// `n` equally spaced points along the ascending diagonal, `(i/n, i/n)` for
/// `i = 0..n-1`. Already in general position; the perturbation is a no-op.
pub fn gen_diagonal(n: usize) -> Result<Instance> {
    if n == 0 {
        return Err(Error::Parameter("diagonal family needs n >= 1".into()));
    }
    let points = (0..n)
        .map(|i| {
            let c = i as f64 / n as f64;
            Point::new(c, c)
        })
        .collect();
    let inst = Instance::new(format!("diagonal-{n}"), points)?;
    perturb_until_general(&inst, 1e-12)
}

/// The origin plus `n-1` uniform points, re-drawn from the seeded stream
/// until the set is in general position. Deterministic per seed.
pub fn gen_random(n: usize, seed: u64) -> Instance {
    assert!(n >= 1, "random family needs n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut points = vec![Point::ORIGIN];
        points.extend((1..n).map(|_| Point::new(rng.random::<f64>(), rng.random::<f64>())));
        let inst = Instance::new(format!("random-n{n}-s{seed}"), points)
            .expect("uniform draws lie in the unit square");
        if inst.is_general_position() {
            return inst;
        }
    }
}

/// The crown-tight family: the origin together with the mirrored point
/// pairs `(k*eps, 1 - k*eps^2)` and `(1 - k*eps^2, k*eps)`. The origin
/// tile's crown fills the pentagon as eps shrinks.
pub fn gen_crown_tight(eps: f64) -> Result<Instance> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    let m = (1.0 / eps).round();
    if ((1.0 / eps) - m).abs() > 1e-9 {
        return Err(Error::Parameter(format!("1/eps must be an integer, got 1/{eps}")));
    }
    let m = m as usize;
    let mut points = vec![Point::ORIGIN];
    for k in 1..m {
        let a = k as f64 * eps;
        let b = 1.0 - k as f64 * eps * eps;
        points.push(Point::new(a, b));
        points.push(Point::new(b, a));
    }
    let inst = Instance::new(format!("crown-tight-{m}"), points)?;
    perturb_until_general(&inst, 1e-12)
}

/// Which worst-case tile family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorstCaseKind {
    /// Symmetric two-point step tile; tight for densities above 1/2.
    Step,
    /// Discretized symmetric hyperbola slide; tight for densities below 1/2.
    Hyperbola,
}

/// Worst-case tiles parametrized by `v in (0,1)`: the step tile has
/// staircase `{(v, 1/v), (1/v, v)}`; the hyperbola tile discretizes the
/// slide `[v, 1/v]` with `m` points.
pub fn gen_worstcase_tile(kind: WorstCaseKind, v: f64, m: usize) -> Result<Tile> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Parameter(format!("v must lie in (0, 1), got {v}")));
    }
    match kind {
        WorstCaseKind::Step => Tile::try_new(
            Point::ORIGIN,
            vec![Point::new(v, 1.0 / v), Point::new(1.0 / v, v)],
        ),
        WorstCaseKind::Hyperbola => {
            GeneralizedTile::try_new(vec![Section::Slide(v, 1.0 / v)])?.discretize(m)
        }
    }
}

/// Parameters of the adversarial construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AdversarialParams {
    /// Target maximal-rectangle area of the origin tile, in (0, 1).
    pub a: f64,
    /// Number of hyperbola anchors per side.
    pub k: usize,
    /// Grid spacing in the rotated frame.
    pub eps: f64,
    /// Perturbation used to reach general position after rotating back.
    pub perturb_delta: f64,
}

impl AdversarialParams {
    pub fn new(a: f64, k: usize, eps: f64) -> Self {
        AdversarialParams { a, k, eps, perturb_delta: 1e-12 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a < 1.0) {
            return Err(Error::Parameter(format!("A must lie in (0, 1), got {}", self.a)));
        }
        if self.k < 2 {
            return Err(Error::Parameter("need at least k = 2 anchors per side".into()));
        }
        if !(self.eps > 0.0 && self.eps < SQRT2 / 8.0) {
            return Err(Error::Parameter(format!("eps out of range: {}", self.eps)));
        }
        Ok(())
    }
}

/// Clockwise rotation by 45 degrees; the unit square maps to the diamond
/// spanning x in [0, sqrt(2)].
pub fn rotate_cw(p: Point) -> Point {
    Point::new((p.x + p.y) / SQRT2, (p.y - p.x) / SQRT2)
}

/// Inverse of [`rotate_cw`].
pub fn rotate_ccw(p: Point) -> Point {
    Point::new((p.x - p.y) / SQRT2, (p.x + p.y) / SQRT2)
}

/// The integrated curve family of the adversarial construction, on the
/// rotated-frame grid. Row `r` stores curve `i = r - k`; `f_0` is the
/// diagonal, `f_{+-k}` the square boundary, and `f_{-i} = -f_i`.
#[derive(Debug, Clone, Serialize)]
pub struct CurveFamily {
    pub a: f64,
    pub k: usize,
    pub eps: f64,
    pub grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    /// Anchors q_0..q_k on the hyperbola (rotated frame), x snapped down to
    /// grid multiples.
    pub anchors: Vec<Point>,
}

impl CurveFamily {
    pub fn value(&self, i: isize, j: usize) -> f64 {
        self.values[(i + self.k as isize) as usize][j]
    }

    /// CSV dump: header `x,f_-k,...,f_k`, one row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for i in -(self.k as isize)..=(self.k as isize) {
            out.push_str(&format!(",f_{i}"));
        }
        out.push('\n');
        for (j, x) in self.grid.iter().enumerate() {
            out.push_str(&format!("{x}"));
            for row in &self.values {
                out.push_str(&format!(",{}", row[j]));
            }
            out.push('\n');
        }
        out
    }
}

// Minimal strict separation kept between neighboring curves when forward
// Euler lands inside the exponential tangency band near the boundaries.
const ORDER_FLOOR: f64 = 1e-12;

/// Build the adversarial instance and its curve family.
///
/// Anchors are placed on the hyperbola `x^2 - y^2 = 2A` with equally spaced
/// rotated x-coordinates between `sqrt(2A)` and the top-edge intersection
/// `(1+A)/sqrt(2)`, snapped down to grid multiples. Interior curves start
/// with slope -1 left of their anchor and follow the coupled slope rule
/// `f_i' = 1 - 2 (f_i - f_{i-1}) / (f_{i+1} - f_{i-1})` by forward Euler,
/// with the diagonal and the square boundary as fixed walls. Emitted points
/// are rotated back into the unit square and perturbed to general position.
pub fn gen_adversarial(params: &AdversarialParams) -> Result<(Instance, CurveFamily)> {
    params.validate()?;
    let (a, k, eps) = (params.a, params.k, params.eps);
    let x0 = (2.0 * a).sqrt();
    let xstar = (1.0 + a) / SQRT2;
    debug_assert!(x0 < xstar);

    // anchor columns, snapped down to the grid
    let mut act_idx = Vec::with_capacity(k + 1);
    let mut anchors = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let raw = x0 + i as f64 * (xstar - x0) / k as f64;
        let idx = (raw / eps + 1e-9).floor() as usize;
        let qx = idx as f64 * eps;
        let qy = (qx * qx - 2.0 * a).max(0.0).sqrt();
        act_idx.push(idx);
        anchors.push(Point::new(qx, qy));
    }
    for w in act_idx.windows(2) {
        if w[1] < w[0] + 2 {
            return Err(Error::Parameter(format!(
                "anchor spacing below 2*eps (columns {} and {}); decrease eps or k",
                w[0], w[1]
            )));
        }
    }

    let n = ((SQRT2 / eps) - 1e-9).ceil() as usize;
    let grid: Vec<f64> = (0..n).map(|j| j as f64 * eps).collect();

    // rows 0..=k hold f_0..f_k; the negative side is mirrored afterwards
    let mut f: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    f.push(vec![0.0; n]);
    for q in anchors.iter().take(k).skip(1) {
        f.push(grid.iter().map(|x| q.y + (q.x - x)).collect());
    }
    f.push(grid.iter().map(|x| SQRT2 - x).collect());

    for j in 0..n - 1 {
        for i in 1..k {
            if j >= act_idx[i] {
                let lo = f[i - 1][j];
                let hi = f[i + 1][j];
                let slope = 1.0 - 2.0 * (f[i][j] - lo) / (hi - lo);
                f[i][j + 1] = f[i][j] + eps * slope;
            }
        }
        // order-preserving guard: forward Euler cannot track the
        // exponentially tight gap against a falling neighbor and would
        // otherwise cross by a rounding-scale amount
        for i in (1..k).rev() {
            if j >= act_idx[i] {
                let cap = f[i + 1][j + 1] - ORDER_FLOOR;
                if f[i][j + 1] > cap {
                    let excess = f[i][j + 1] - cap;
                    let span = f[i + 1][j] - f[i - 1][j];
                    if excess > 1e-3 * eps && span > 8.0 * eps {
                        return Err(Error::CoarseGrid { x: grid[j + 1] });
                    }
                    f[i][j + 1] = cap;
                }
            }
        }
    }

    // assemble the full family with mirrored negative curves
    let mut values = Vec::with_capacity(2 * k + 1);
    for i in (1..=k).rev() {
        values.push(f[i].iter().map(|v| -v).collect::<Vec<f64>>());
    }
    for row in &f {
        values.push(row.clone());
    }
    let family = CurveFamily { a, k, eps, grid: grid.clone(), values, anchors };

    // emit P: curves -k < i < k from their anchor column on, rotated back
    let mut pts: Vec<Point> = Vec::new();
    for (i, &start) in act_idx.iter().enumerate().take(k) {
        for j in start..n {
            let u = rotate_ccw(Point::new(grid[j], f[i][j]));
            pts.push(clamp_into_unit(u));
            if i > 0 {
                let m = rotate_ccw(Point::new(grid[j], -f[i][j]));
                pts.push(clamp_into_unit(m));
            }
        }
    }
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    pts.dedup();
    let mut points = vec![Point::ORIGIN];
    points.extend(pts);

    let label = format!("adversarial-A{:.6}-k{k}-eps{:.3e}", a, eps);
    let inst = Instance::new(label, points)?;
    let inst = perturb_until_general(&inst, params.perturb_delta)?;
    Ok((inst, family))
}

fn clamp_into_unit(p: Point) -> Point {
    let clamp = |c: f64| c.clamp(0.0, 1.0 - 1e-9);
    Point::new(clamp(p.x), clamp(p.y))
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveFamilyReport {
    pub ordered_ok: bool,
    pub ordering_witness: Option<(isize, f64)>,
    pub crossings_ok: bool,
    pub crossing_witness: Option<(isize, usize)>,
    pub slopes_ok: bool,
    pub slope_witness: Option<(isize, f64)>,
    pub pass: bool,
}

/// Grid checks of the curve family: strict ordering of all curves, exactly
/// one hyperbola crossing per curve, and discrete slopes within [-1, 1] up
/// to tolerance.
pub fn verify_curve_family(cf: &CurveFamily) -> CurveFamilyReport {
    let k = cf.k as isize;
    let n = cf.grid.len();

    let mut ordered_ok = true;
    let mut ordering_witness = None;
    'ord: for j in 0..n {
        for r in 0..cf.values.len() - 1 {
            if cf.values[r][j] >= cf.values[r + 1][j] {
                ordered_ok = false;
                ordering_witness = Some((r as isize - k, cf.grid[j]));
                break 'ord;
            }
        }
    }

    let mut crossings_ok = true;
    let mut crossing_witness = None;
    for i in -k..=k {
        let mut changes = 0usize;
        let mut prev_sign = None;
        for j in 0..n {
            let x = cf.grid[j];
            let v = cf.value(i, j);
            let g = x * x - v * v - 2.0 * cf.a;
            let sign = g >= 0.0;
            if let Some(p) = prev_sign {
                if p != sign {
                    changes += 1;
                }
            }
            prev_sign = Some(sign);
        }
        if changes != 1 {
            crossings_ok = false;
            crossing_witness = Some((i, changes));
        }
    }

    let slope_tol = 1e-6;
    let mut slopes_ok = true;
    let mut slope_witness = None;
    'sl: for (r, row) in cf.values.iter().enumerate() {
        for j in 0..n - 1 {
            let s = (row[j + 1] - row[j]) / cf.eps;
            if s.abs() > 1.0 + slope_tol {
                slopes_ok = false;
                slope_witness = Some((r as isize - k, s));
                break 'sl;
            }
        }
    }

    let pass = ordered_ok && crossings_ok && slopes_ok;
    CurveFamilyReport {
        ordered_ok,
        ordering_witness,
        crossings_ok,
        crossing_witness,
        slopes_ok,
        slope_witness,
        pass,
    }
}
