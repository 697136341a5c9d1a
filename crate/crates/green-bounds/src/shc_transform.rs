//! The generalized Legendre function of two parameters and the radial
//! integral transform built on it, with the weight-2 closed form for
//! indicator kernels.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const SERIES_MAX_TERMS: usize = 2000;
const SIMPSON_MAX_DEPTH: u32 = 40;

/// A piecewise-smooth radial weight function on [1, infinity) with compact
/// support, fed to the transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialKernel {
    kind: KernelKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum KernelKind {
    /// 1 on [1, a], 0 beyond.
    Indicator { a: f64 },
    /// Piecewise-linear interpolation through (knots, values), 0 outside.
    Sampled { knots: Vec<f64>, values: Vec<f64> },
}

impl RadialKernel {
    /// Indicator of [1, a]; requires a > 1.
    pub fn indicator(a: f64) -> Result<Self> {
        if !(a > 1.0) || !a.is_finite() {
            return Err(Error::InvalidKernel {
                reason: format!("indicator cutoff must satisfy a > 1, got {a}"),
            });
        }
        Ok(Self { kind: KernelKind::Indicator { a } })
    }

    /// Piecewise-linear kernel through the given nodes; zero outside their
    /// range. Knots must be strictly increasing, at least two, and >= 1.
    pub fn sampled(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::InvalidKernel {
                reason: "need matching knot/value lists with at least two nodes".into(),
            });
        }
        if knots[0] < 1.0 || !knots[0].is_finite() {
            return Err(Error::InvalidKernel {
                reason: "knots must start at or above 1".into(),
            });
        }
        for pair in knots.windows(2) {
            if !(pair[1] > pair[0]) || !pair[1].is_finite() {
                return Err(Error::InvalidKernel {
                    reason: "knots must be finite and strictly increasing".into(),
                });
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidKernel {
                reason: "values must be finite".into(),
            });
        }
        Ok(Self { kind: KernelKind::Sampled { knots, values } })
    }

    /// Upper end of the support.
    pub fn support_upper(&self) -> f64 {
        match &self.kind {
            KernelKind::Indicator { a } => *a,
            KernelKind::Sampled { knots, .. } => *knots.last().unwrap(),
        }
    }

    /// Kernel value at u >= 1.
    pub fn eval(&self, u: f64) -> f64 {
        match &self.kind {
            KernelKind::Indicator { a } => {
                if u <= *a {
                    1.0
                } else {
                    0.0
                }
            }
            KernelKind::Sampled { knots, values } => {
                if u < knots[0] || u > *knots.last().unwrap() {
                    return 0.0;
                }
                let i = match knots.binary_search_by(|k| k.partial_cmp(&u).unwrap()) {
                    Ok(i) => return values[i],
                    Err(i) => i,
                };
                let (k0, k1) = (knots[i - 1], knots[i]);
                let (v0, v1) = (values[i - 1], values[i]);
                v0 + (v1 - v0) * (u - k0) / (k1 - k0)
            }
        }
    }

    /// Points where the kernel is not smooth, in increasing order, always
    /// including 1 and the support end. Integration splits here.
    fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            KernelKind::Indicator { a } => vec![1.0, *a],
            KernelKind::Sampled { knots, .. } => {
                let mut pts = vec![1.0];
                for &k in knots {
                    if k > pts[pts.len() - 1] {
                        pts.push(k);
                    }
                }
                pts
            }
        }
    }
}

/// The two-parameter Legendre-type function
/// P(s, k; u) = (2/(u+1))^s F(s - k/2, s + k/2; 1; (u-1)/(u+1))
/// evaluated by its hypergeometric series, summed until the next term is
/// below tol * (1 + |partial sum|).
///
/// For k an even integer with s - k/2 a non-positive integer the series
/// terminates exactly; in particular P(0, 2; u) = 2/(u+1).
pub fn legendre_p(s: f64, k: f64, u: f64, tol: f64) -> Result<f64> {
    if !(u >= 1.0) || !u.is_finite() {
        return Err(Error::OutOfDomain {
            name: "u",
            value: u,
            needs: "u >= 1",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::OutOfDomain {
            name: "tol",
            value: tol,
            needs: "tol > 0",
        });
    }
    let t = (u - 1.0) / (u + 1.0);
    let alpha = s - k / 2.0;
    let beta = s + k / 2.0;
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (alpha + nf) * (beta + nf) / ((nf + 1.0) * (nf + 1.0)) * t;
        if term.abs() < tol * (1.0 + sum.abs()) {
            sum += term;
            let prefactor = (2.0 / (u + 1.0)).powf(s);
            return Ok(prefactor * sum);
        }
        sum += term;
    }
    Err(Error::NonConvergentSeries {
        s,
        k,
        u,
        max_terms: SERIES_MAX_TERMS,
    })
}

/// Adaptive Simpson on [a, b] with absolute error target tol; the integrand
/// may fail (series breakdown), which is propagated.
fn adaptive_simpson<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> Result<f64>>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= SIMPSON_MAX_DEPTH {
        return Err(Error::QuadratureDepthExceeded {
            tol,
            max_depth: SIMPSON_MAX_DEPTH,
        });
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1)?;
    Ok(l + r)
}

/// The radial transform 2 pi * integral over [1, U] of theta(u) P(s, k; u) du,
/// by adaptive quadrature split at the kernel's breakpoints, with absolute
/// error target quad_tol.
pub fn shc_transform(theta: &RadialKernel, s: f64, k: f64, quad_tol: f64) -> Result<f64> {
    if !(quad_tol > 0.0) {
        return Err(Error::OutOfDomain {
            name: "quad_tol",
            value: quad_tol,
            needs: "quad_tol > 0",
        });
    }
    let pts = theta.breakpoints();
    let total: f64 = pts.last().unwrap() - pts[0];
    if total <= 0.0 {
        return Ok(0.0);
    }
    let series_tol = (quad_tol * 1e-3).clamp(1e-16, 1e-12);
    let mut integral = 0.0;
    for pair in pts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let piece_tol = quad_tol * ((b - a) / total) / (2.0 * PI);
        let f = |u: f64| -> Result<f64> { Ok(theta.eval(u) * legendre_p(s, k, u, series_tol)?) };
        integral += adaptive_simpson(&f, a, b, piece_tol.max(1e-300))?;
    }
    Ok(2.0 * PI * integral)
}

/// Closed form of the weight-2 transform of an indicator kernel at the
/// spectral base point: 4 pi log((a + 1) / 2). Strictly increasing in a;
/// requires a > 1.
pub fn shc_weight2_indicator(a: f64) -> Result<f64> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::OutOfDomain {
            name: "a",
            value: a,
            needs: "a > 1",
        });
    }
    Ok(4.0 * PI * ((a + 1.0) / 2.0).ln())
}
