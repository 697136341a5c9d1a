//! Upper half-plane geometry: points, real Moebius maps, the point-pair
//! invariant and the rotation-invariant free-space Green kernel.
//!
//! Everything downstream measures distances through the point-pair invariant
//!
//! ```text
//! u(z, w) = 1 + |z - w|^2 / (2 Im(z) Im(w)) = cosh d(z, w),
//! ```
//!
//! which is symmetric, equals 1 exactly on the diagonal, and is preserved by
//! real Moebius maps of determinant one.

use crate::error::{Error, Result};
use crate::modular_group::GroupSpec;
use crate::point_counting::enumerate_pair_elements;

use serde::{Deserialize, Serialize};

/// Matrices are accepted as isometries when |det - 1| is at most this.
pub const DET_TOL: f64 = 1e-12;

/// Slack used when comparing the point-pair invariant against a threshold,
/// so that orbit points sitting exactly on a ball boundary are kept.
pub const THRESHOLD_TOL: f64 = 1e-12;

/// Below `1 + COINCIDENCE_TOL` two points are treated as lying on one orbit.
pub const COINCIDENCE_TOL: f64 = 1e-14;

/// A point x + iy of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UhpPoint {
    pub x: f64,
    pub y: f64,
}

impl UhpPoint {
    /// Checked constructor: coordinates must be finite and y strictly positive.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || y <= 0.0 {
            return Err(Error::InvalidPoint { x, y });
        }
        Ok(Self { x, y })
    }
}

/// A real 2x2 matrix of determinant 1 (within [`DET_TOL`]) acting on the
/// upper half-plane by z -> (az + b) / (cz + d).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moebius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Moebius {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// Scaling map z -> m z, as the unimodular matrix diag(sqrt(m), 1/sqrt(m)).
    ///
    /// Used for cusp widths; requires m > 0.
    pub fn scaling(m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::OutOfDomain {
                name: "m",
                value: m,
                needs: "a finite positive scale",
            });
        }
        let r = m.sqrt();
        Ok(Self { a: r, b: 0.0, c: 0.0, d: 1.0 / r })
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Inverse of a determinant-one matrix: (a b; c d)^-1 = (d -b; -c a).
    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Matrix product `self * rhs` (acts as `self` after `rhs`).
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// Image of an upper half-plane point.
    ///
    /// With det = 1 the image has Im = y / |cz + d|^2, so the upper half-plane
    /// is preserved; |cz + d|^2 > 0 whenever y > 0.
    pub fn apply(&self, z: UhpPoint) -> UhpPoint {
        let (x, y) = (z.x, z.y);
        let den = (self.c * x + self.d) * (self.c * x + self.d) + (self.c * y) * (self.c * y);
        let xn = (self.a * x + self.b) * (self.c * x + self.d) + self.a * self.c * y * y;
        UhpPoint { x: xn / den, y: y / den }
    }
}

/// The point-pair invariant u(z, w) = 1 + |z - w|^2 / (2 Im z Im w).
///
/// Equals cosh of the hyperbolic distance; 1 exactly iff z = w; invariant
/// under simultaneous determinant-one Moebius maps of both arguments.
pub fn point_pair_invariant(z: UhpPoint, w: UhpPoint) -> f64 {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    1.0 + (dx * dx + dy * dy) / (2.0 * z.y * w.y)
}

/// Hyperbolic distance d(z, w) = arcosh u(z, w).
pub fn hyperbolic_distance(z: UhpPoint, w: UhpPoint) -> f64 {
    point_pair_invariant(z, w).acosh()
}

/// The free-space Green kernel L(u) = log((u + 1) / (u - 1)) / (4 pi).
///
/// Strictly decreasing on u > 1, with a logarithmic blow-up at u = 1 and
/// decay like 1/(2 pi u) as u grows. Requires u > 1.
pub fn free_green_kernel(u: f64) -> Result<f64> {
    if !(u > 1.0) || !u.is_finite() {
        return Err(Error::OutOfDomain {
            name: "u",
            value: u,
            needs: "u > 1 (kernel is singular on the diagonal)",
        });
    }
    Ok(((u + 1.0) / (u - 1.0)).ln() / (4.0 * std::f64::consts::PI))
}

/// Sum of the free-space kernel over the group orbit near the diagonal:
/// all projective classes gamma with u(z, gamma w) <= delta contribute
/// L(u(z, gamma w)).
///
/// Requires delta > 1. Fails with [`Error::OrbitCoincidence`] when w lies on
/// the orbit of z (some u within 1e-14 of 1), where the sum is singular.
pub fn singular_sum(spec: &GroupSpec, z: UhpPoint, w: UhpPoint, delta: f64) -> Result<f64> {
    if !(delta > 1.0) || !delta.is_finite() {
        return Err(Error::OutOfDomain {
            name: "delta",
            value: delta,
            needs: "delta > 1",
        });
    }
    let elements = enumerate_pair_elements(spec, z, w, delta)?;
    let dedupe_signs = spec.contains_minus_one();
    let mut sum = 0.0;
    for g in &elements {
        if dedupe_signs && !(g.c > 0 || (g.c == 0 && g.d > 0)) {
            // -I is in the group, so matrices come in +/- pairs mapping w to
            // the same point; keep one representative per projective class.
            continue;
        }
        let u = point_pair_invariant(z, g.to_moebius().apply(w));
        if u <= 1.0 + COINCIDENCE_TOL {
            return Err(Error::OrbitCoincidence { u });
        }
        if u <= delta + THRESHOLD_TOL {
            sum += free_green_kernel(u)?;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular_group::Family;

    fn pt(x: f64, y: f64) -> UhpPoint {
        UhpPoint::new(x, y).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(UhpPoint::new(0.0, 1.0).is_ok());
        assert!(UhpPoint::new(0.0, 0.0).is_err());
        assert!(UhpPoint::new(0.0, -2.0).is_err());
        assert!(UhpPoint::new(f64::NAN, 1.0).is_err());
        assert!(UhpPoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn invariant_golden_values() {
        assert_eq!(point_pair_invariant(pt(0.0, 2.0), pt(0.0, 1.0)), 1.25);
        assert_eq!(point_pair_invariant(pt(0.0, 1.0), pt(0.5, 1.0)), 1.125);
        assert_eq!(point_pair_invariant(pt(0.0, 1.0), pt(1.0, 1.0)), 1.5);
        // identical points give exactly 1
        assert_eq!(point_pair_invariant(pt(0.3, 1.7), pt(0.3, 1.7)), 1.0);
    }

    #[test]
    fn distance_matches_cosh_inverse() {
        // u = 1.25 is cosh(ln 2), so d = ln 2 exactly.
        let d = hyperbolic_distance(pt(0.0, 2.0), pt(0.0, 1.0));
        assert!((d - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn kernel_golden_values() {
        assert!((free_green_kernel(3.0).unwrap() - 0.055158900038162898).abs() < 1e-16);
        assert!((free_green_kernel(2.0).unwrap() - 0.087424788141514944).abs() < 1e-16);
        assert!(free_green_kernel(1.0).is_err());
        assert!(free_green_kernel(0.5).is_err());
        assert!(free_green_kernel(f64::NAN).is_err());
        // strictly decreasing
        assert!(free_green_kernel(1.5).unwrap() > free_green_kernel(2.5).unwrap());
    }

    #[test]
    fn moebius_validation_and_action() {
        assert!(Moebius::new(1.0, 0.0, 0.0, 1.0).is_ok());
        assert!(Moebius::new(2.0, 0.0, 0.0, 1.0).is_err());
        assert!(Moebius::new(1.0, 0.5e-12, 0.0, 1.0).is_ok());

        let s = Moebius::new(0.0, -1.0, 1.0, 0.0).unwrap();
        let i = s.apply(pt(0.0, 1.0));
        assert!((i.x - 0.0).abs() < 1e-15 && (i.y - 1.0).abs() < 1e-15);
        let m = s.apply(pt(1.0, 1.0));
        assert!((m.x + 0.5).abs() < 1e-15 && (m.y - 0.5).abs() < 1e-15);

        let inv = s.inverse();
        let back = inv.apply(i);
        assert!((back.x).abs() < 1e-15 && (back.y - 1.0).abs() < 1e-15);

        let id = s.mul(&inv);
        assert!((id.a - 1.0).abs() < 1e-15 && id.b.abs() < 1e-15);
    }

    #[test]
    fn scaling_map() {
        let m = Moebius::scaling(4.0).unwrap();
        let w = m.apply(pt(0.25, 0.5));
        assert!((w.x - 1.0).abs() < 1e-15 && (w.y - 2.0).abs() < 1e-15);
        assert!(Moebius::scaling(0.0).is_err());
        assert!(Moebius::scaling(-1.0).is_err());
    }

    #[test]
    fn invariant_is_isometry_invariant() {
        let s = Moebius::new(0.0, -1.0, 1.0, 0.0).unwrap();
        let t = Moebius::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let m = s.mul(&t).mul(&s);
        let (z, w) = (pt(0.31, 0.9), pt(-0.4, 2.2));
        let u0 = point_pair_invariant(z, w);
        let u1 = point_pair_invariant(m.apply(z), m.apply(w));
        assert!((u0 - u1).abs() <= 1e-9 * u0);
    }

    #[test]
    fn singular_sum_basics() {
        let full = GroupSpec::new(Family::Full, 1).unwrap();
        let z = pt(0.13, 1.21);
        let w = pt(0.14, 1.21);

        // symmetric in its two points
        let a = singular_sum(&full, z, w, 2.0).unwrap();
        let b = singular_sum(&full, w, z, 2.0).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs());
        assert!(a > 0.0);

        // monotone in delta: a larger ball only adds positive kernel terms
        let c = singular_sum(&full, z, w, 3.0).unwrap();
        assert!(c >= a);

        // orbit coincidence is rejected, including at a translate
        assert!(matches!(
            singular_sum(&full, z, z, 2.0),
            Err(Error::OrbitCoincidence { .. })
        ));
        let w2 = pt(z.x + 1.0, z.y);
        assert!(matches!(
            singular_sum(&full, z, w2, 2.0),
            Err(Error::OrbitCoincidence { .. })
        ));

        assert!(singular_sum(&full, z, w, 1.0).is_err());
    }
}
