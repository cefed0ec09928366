//! Lower-bound functions on the charging ratio, the critical density, and
//! the tangent-based coverage certificate.
//!
//! The weak bound is `xi_w(rho) = 2(1-rho)`. The strong bound keeps the weak
//! bound for densities above 1/2 and switches to
//! `1 - rho*(1 + sinh(1 - 1/rho))` at or below 1/2 (the function jumps at
//! the branch point; both branches are implemented verbatim). The density
//! rho* where the strong bound equals the total-charge cap 3/2 is the
//! certified coverage of any greedy packing, roughly 0.3901.

use std::sync::OnceLock;

use serde::Serialize;

use crate::charging::{self, Crown};
use crate::packing::TilePacking;
use crate::{Error, Result};

/// Which charging-ratio bound to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum XiKind {
    Weak,
    Strong,
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Parameter(format!("density must lie in (0, 1], got {rho}")));
    }
    Ok(())
}

/// Evaluate the bound function at a density in (0, 1].
pub fn xi(kind: XiKind, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(match kind {
        XiKind::Weak => 2.0 * (1.0 - rho),
        XiKind::Strong => {
            if rho <= 0.5 {
                1.0 - rho * (1.0 + (1.0 - 1.0 / rho).sinh())
            } else {
                2.0 * (1.0 - rho)
            }
        }
    })
}

/// Branch-analytic derivative; one-sided from the sinh branch at rho = 1/2.
pub fn xi_prime(kind: XiKind, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(match kind {
        XiKind::Weak => -2.0,
        XiKind::Strong => {
            if rho <= 0.5 {
                let w = 1.0 - 1.0 / rho;
                -1.0 - w.sinh() - w.cosh() / rho
            } else {
                -2.0
            }
        }
    })
}

/// A bound function bundled with its evaluators.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct XiFunction {
    pub kind: XiKind,
}

impl XiFunction {
    pub fn new(kind: XiKind) -> Self {
        XiFunction { kind }
    }

    pub fn eval(&self, rho: f64) -> Result<f64> {
        xi(self.kind, rho)
    }

    pub fn derivative(&self, rho: f64) -> Result<f64> {
        xi_prime(self.kind, rho)
    }
}

/// The density at which the bound equals the total-charge cap 3/2. Exactly
/// 1/4 for the weak bound; for the strong bound, found by bisection on the
/// sinh branch to 1e-12.
pub fn rho_star(kind: XiKind) -> f64 {
    match kind {
        XiKind::Weak => 0.25,
        XiKind::Strong => *STRONG_RHO_STAR.get_or_init(|| {
            let mut lo = 0.05;
            let mut hi = 0.5;
            debug_assert!(xi(XiKind::Strong, lo).unwrap() > 1.5);
            debug_assert!(xi(XiKind::Strong, hi).unwrap() < 1.5);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if xi(XiKind::Strong, mid).unwrap() > 1.5 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }),
    }
}

static STRONG_RHO_STAR: OnceLock<f64> = OnceLock::new();

#[derive(Debug, Clone, Serialize)]
pub struct ConvexityReport {
    pub rho0: f64,
    pub grid: usize,
    pub max_violation: f64,
    pub witness_rho: Option<f64>,
    pub pass: bool,
}

/// Check point-convexity numerically: the tangent at `rho0` must not exceed
/// the function anywhere on a `grid`-point mesh of (0, 1].
pub fn check_point_convexity(kind: XiKind, rho0: f64, grid: usize) -> Result<ConvexityReport> {
    let f0 = xi(kind, rho0)?;
    let d0 = xi_prime(kind, rho0)?;
    let mut max_violation: f64 = 0.0;
    let mut witness = None;
    for j in 1..=grid {
        let rho = j as f64 / grid as f64;
        let tangent = f0 + d0 * (rho - rho0);
        let gap = tangent - xi(kind, rho)?;
        if gap > max_violation {
            max_violation = gap;
            witness = Some(rho);
        }
    }
    Ok(ConvexityReport {
        rho0,
        grid,
        max_violation,
        witness_rho: witness,
        pass: max_violation <= 1e-12,
    })
}

/// Tangent-based coverage certificate for a packing.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCertificate {
    pub rho_star: f64,
    pub xi_at_rho_star: f64,
    pub xi_prime_at_rho_star: f64,
    pub c_star: f64,
    pub per_tile_ok: bool,
    pub certified_coverage: f64,
}

/// Certify a coverage lower bound from the crown charging scheme: with
/// per-tile ratios above the strong bound and total charge c*, the packing
/// covers at least `rho* + (c* - 3/2)/xi'(rho*)`.
pub fn certify(pk: &TilePacking) -> Result<BoundCertificate> {
    let crowns = charging::crowns(pk);
    certify_with_crowns(pk, &crowns)
}

/// Certify using precomputed crowns (one per tile, in tile order).
pub fn certify_with_crowns(pk: &TilePacking, crowns: &[Crown]) -> Result<BoundCertificate> {
    let ratio = charging::charging_ratio_report(pk, crowns, |rho| {
        xi(XiKind::Strong, rho).expect("tile densities lie in (0, 1]")
    });
    let c_star = charging::total_charge(crowns);
    certify_from_parts(c_star, ratio.pass, pk.coverage())
}

fn certify_from_parts(c_star: f64, per_tile_ok: bool, coverage: f64) -> Result<BoundCertificate> {
    if !per_tile_ok {
        return Err(Error::Certification(
            "a tile's charging ratio fell below the strong bound; no certificate".into(),
        ));
    }
    let rs = rho_star(XiKind::Strong);
    let xi_rs = xi(XiKind::Strong, rs).unwrap();
    let d_rs = xi_prime(XiKind::Strong, rs).unwrap();
    let certified = rs + (c_star - 1.5) / d_rs;
    if c_star <= 1.5 && certified < rs - 1e-12 {
        return Err(Error::Certification(format!(
            "certificate {certified} fell below rho* {rs} despite c* = {c_star} <= 3/2"
        )));
    }
    if coverage < certified - 1e-9 {
        return Err(Error::Certification(format!(
            "actual coverage {coverage} is below the certificate {certified}"
        )));
    }
    Ok(BoundCertificate {
        rho_star: rs,
        xi_at_rho_star: xi_rs,
        xi_prime_at_rho_star: d_rs,
        c_star,
        per_tile_ok,
        certified_coverage: certified,
    })
}
