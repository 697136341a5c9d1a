//! Sup-norm bounds for the scaled canonical density on the interior strip,
//! their extension across cusp neighbourhoods, and the resulting curvature
//! constant estimate.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// End-to-end record of the density bound chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FBoundResult {
    /// Cutoff parameter of the averaging kernel.
    pub a: f64,
    /// Point count fed into the interior bound.
    pub n_used: u64,
    /// Bound on the interior strip.
    pub sup_y: f64,
    /// Bound on the whole curve (interior plus cusp neighbourhoods).
    pub sup_x: f64,
    /// Curvature constant bound sup_x / genus.
    pub zeta: f64,
}

/// Interior bound (a - 1) N / (8 pi log^2((a + 1)/2)) from the averaging
/// argument: N is a count of orbit points within invariant distance
/// 2 a^2 - 1. Requires a > 1 (the log vanishes at 1) and N >= 1.
pub fn f_sup_bound_interior(a: f64, n: u64) -> Result<f64> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::OutOfDomain {
            name: "a",
            value: a,
            needs: "a > 1",
        });
    }
    if n == 0 {
        return Err(Error::OutOfDomain {
            name: "N",
            value: 0.0,
            needs: "a count of at least 1",
        });
    }
    let l = ((a + 1.0) / 2.0).ln();
    Ok((a - 1.0) * n as f64 / (8.0 * PI * l * l))
}

/// Factor by which the interior bound can grow across a cusp neighbourhood
/// of size eps: 1 for eps <= 2 pi, else ((eps / 2 pi) exp(2 pi / eps - 1))^2.
/// Always between 1 and max{1, (eps / 2 pi)^2}, and continuous at 2 pi.
pub fn f_cusp_extension_factor(eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::OutOfDomain {
            name: "eps",
            value: eps,
            needs: "eps > 0",
        });
    }
    let ratio = eps / (2.0 * PI);
    if ratio <= 1.0 {
        Ok(1.0)
    } else {
        let f = ratio * (2.0 * PI / eps - 1.0).exp();
        Ok(f * f)
    }
}

/// Coarse bound over the whole curve: max{1, (n eps_unit / 2 pi)^2} * sup_y,
/// using that every cusp width is at most the level n.
pub fn f_sup_bound_x(sup_y: f64, level: u32, eps_unit: f64) -> Result<f64> {
    if !(sup_y > 0.0) || !sup_y.is_finite() {
        return Err(Error::OutOfDomain {
            name: "sup_y",
            value: sup_y,
            needs: "a positive bound",
        });
    }
    if level == 0 {
        return Err(Error::InvalidLevel { level, reason: "level must be at least 1" });
    }
    if !(eps_unit > 0.0) || !eps_unit.is_finite() {
        return Err(Error::OutOfDomain {
            name: "eps_unit",
            value: eps_unit,
            needs: "a positive neighbourhood size",
        });
    }
    let r = level as f64 * eps_unit / (2.0 * PI);
    Ok((r * r).max(1.0) * sup_y)
}

/// Curvature constant bound sup_x / genus (the -1/volume term is dropped,
/// keeping a valid upper bound). Requires genus >= 1.
pub fn zeta_bound(sup_x: f64, genus: u32) -> Result<f64> {
    if genus == 0 {
        return Err(Error::GenusZero);
    }
    if !(sup_x > 0.0) || !sup_x.is_finite() {
        return Err(Error::OutOfDomain {
            name: "sup_x",
            value: sup_x,
            needs: "a positive bound",
        });
    }
    Ok(sup_x / genus as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shc_transform::shc_weight2_indicator;

    #[test]
    fn interior_bound_values() {
        let v = f_sup_bound_interior(1.44, 58).unwrap();
        assert!((v - 25.679458920038244).abs() < 1e-12);
        // linear in the count
        let w = f_sup_bound_interior(1.44, 116).unwrap();
        assert!((w - 2.0 * v).abs() < 1e-12);
        let x = f_sup_bound_interior(3.0, 58).unwrap();
        assert!((x - 9.6065).abs() < 1e-2);
    }

    #[test]
    fn interior_bound_matches_transform_identity() {
        // the denominator is the squared weight-2 transform over 2 pi
        for (a, n) in [(1.2f64, 7u64), (1.44, 58), (2.5, 100)] {
            let h = shc_weight2_indicator(a).unwrap();
            let expect = 2.0 * PI * (a - 1.0) * n as f64 / (h * h);
            let got = f_sup_bound_interior(a, n).unwrap();
            assert!((got - expect).abs() <= 1e-12 * expect, "a={a}");
        }
    }

    #[test]
    fn interior_bound_validation() {
        assert!(f_sup_bound_interior(1.0, 58).is_err());
        assert!(f_sup_bound_interior(0.9, 58).is_err());
        assert!(f_sup_bound_interior(1.44, 0).is_err());
    }

    #[test]
    fn extension_factor_branches() {
        // below the threshold the factor is exactly 1
        assert_eq!(f_cusp_extension_factor(11.0 * 0.138702).unwrap(), 1.0);
        assert_eq!(f_cusp_extension_factor(2.0 * PI).unwrap(), 1.0);
        // at twice the threshold: (2 e^{-1/2})^2 = 4/e
        let v = f_cusp_extension_factor(4.0 * PI).unwrap();
        assert!((v - 1.4715177646857693).abs() < 1e-15);
        // continuous at the branch point
        let just_above = f_cusp_extension_factor(2.0 * PI * (1.0 + 1e-12)).unwrap();
        assert!((just_above - 1.0).abs() < 1e-11);
        // dominated by max{1, (eps/2pi)^2}
        for eps in [1.0, 5.0, 7.0, 50.0] {
            let f = f_cusp_extension_factor(eps).unwrap();
            assert!(f >= 1.0 && f <= (eps / (2.0 * PI)).powi(2).max(1.0) + 1e-15);
        }
        assert!(f_cusp_extension_factor(0.0).is_err());
    }

    #[test]
    fn whole_curve_bound() {
        // small levels leave the interior bound unchanged
        assert_eq!(f_sup_bound_x(25.7, 1, 0.138702).unwrap(), 25.7);
        assert_eq!(f_sup_bound_x(25.7, 45, 0.138702).unwrap(), 25.7);
        // large levels scale quadratically
        let v = f_sup_bound_x(25.7, 100, 0.138702).unwrap();
        assert!((v - 125.2375).abs() < 1e-2);
        assert!(f_sup_bound_x(0.0, 10, 0.1).is_err());
        assert!(f_sup_bound_x(25.7, 0, 0.1).is_err());
    }

    #[test]
    fn curvature_constant() {
        assert_eq!(zeta_bound(25.7, 1).unwrap(), 25.7);
        assert!((zeta_bound(25.7, 5).unwrap() - 5.14).abs() < 1e-12);
        assert!(matches!(zeta_bound(25.7, 0), Err(Error::GenusZero)));
    }
}
