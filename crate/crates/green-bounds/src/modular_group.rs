//! Congruence subgroups of SL2(Z): membership, indices, volumes, genus,
//! cusp data with scaling maps, and admissible per-cusp neighbourhood sizes.

use crate::arith::{divisors, egcd, euler_phi, factorize, gcd};
use crate::error::{Error, Result};
use crate::hyperbolic::{Moebius, UhpPoint};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// The four supported families of congruence subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// All of SL2(Z).
    Full,
    /// Lower-left entry divisible by the level.
    Gamma0,
    /// Lower-left divisible by the level, diagonal congruent to 1.
    Gamma1,
    /// Congruent to the identity modulo the level.
    Principal,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Full => "full",
            Family::Gamma0 => "gamma0",
            Family::Gamma1 => "gamma1",
            Family::Principal => "principal",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "sl2z" => Ok(Family::Full),
            "gamma0" => Ok(Family::Gamma0),
            "gamma1" => Ok(Family::Gamma1),
            "principal" | "gamma" => Ok(Family::Principal),
            other => Err(format!(
                "unknown family `{other}` (expected full, gamma0, gamma1 or principal)"
            )),
        }
    }
}

/// An integer matrix (a b; c d) with determinant exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMoebius {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMoebius {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = (a as i128) * (d as i128) - (b as i128) * (c as i128);
        if det != 1 {
            let clamped = det.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
            return Err(Error::NotUnimodularInt { det: clamped });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1, b: 0, c: 0, d: 1 }
    }

    /// The translation z -> z + t.
    pub fn translation(t: i64) -> Self {
        Self { a: 1, b: t, c: 0, d: 1 }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Matrix product; panics on i64 overflow of an entry (entries this crate
    /// produces stay far below that).
    pub fn mul(&self, rhs: &Self) -> Self {
        let p = |x: i128| i64::try_from(x).expect("matrix entry overflow");
        Self {
            a: p(self.a as i128 * rhs.a as i128 + self.b as i128 * rhs.c as i128),
            b: p(self.a as i128 * rhs.b as i128 + self.b as i128 * rhs.d as i128),
            c: p(self.c as i128 * rhs.a as i128 + self.d as i128 * rhs.c as i128),
            d: p(self.c as i128 * rhs.b as i128 + self.d as i128 * rhs.d as i128),
        }
    }

    /// The same matrix over the reals. Determinant is exactly 1 by
    /// construction, so no recheck is needed.
    pub fn to_moebius(&self) -> Moebius {
        Moebius {
            a: self.a as f64,
            b: self.b as f64,
            c: self.c as f64,
            d: self.d as f64,
        }
    }

    pub fn apply(&self, z: UhpPoint) -> UhpPoint {
        self.to_moebius().apply(z)
    }
}

/// A congruence subgroup, described by family and level.
///
/// The full family ignores the level (it is normalized to 1), so
/// `GroupSpec::new(Family::Full, 7)` and level 1 describe the same group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    family: Family,
    level: u32,
}

impl GroupSpec {
    pub fn new(family: Family, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidLevel { level, reason: "level must be at least 1" });
        }
        if level > 1_000_000 {
            return Err(Error::InvalidLevel { level, reason: "level is capped at 1e6" });
        }
        let level = if family == Family::Full { 1 } else { level };
        Ok(Self { family, level })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Membership test for an integer determinant-one matrix.
    pub fn contains(&self, g: &IntMoebius) -> bool {
        let n = self.level as i64;
        let r = |x: i64| x.rem_euclid(n);
        match self.family {
            Family::Full => true,
            Family::Gamma0 => r(g.c) == 0,
            Family::Gamma1 => r(g.c) == 0 && r(g.a - 1) == 0 && r(g.d - 1) == 0,
            Family::Principal => {
                r(g.c) == 0 && r(g.b) == 0 && r(g.a - 1) == 0 && r(g.d - 1) == 0
            }
        }
    }

    /// Whether -identity lies in the group.
    pub fn contains_minus_one(&self) -> bool {
        self.contains(&IntMoebius::identity().neg())
    }

    /// Order of the intersection with {+-identity}: 2 or 1.
    pub fn minus_one_count(&self) -> u32 {
        if self.contains_minus_one() {
            2
        } else {
            1
        }
    }

    /// Index in SL2(Z), as an exact integer.
    pub fn index_in_sl2z(&self) -> u64 {
        let n = self.level as u64;
        // psi(n) = n * prod_{p | n} (1 + 1/p), an integer
        let psi = {
            let mut t = n;
            for (p, _) in factorize(n) {
                t = t / p * (p + 1);
            }
            t
        };
        match self.family {
            Family::Full => 1,
            Family::Gamma0 => psi,
            Family::Gamma1 => euler_phi(n) * psi,
            Family::Principal => n * euler_phi(n) * psi,
        }
    }

    /// Index of the image in PSL2(Z): index * |{+-1} ∩ group| / 2.
    pub fn psl_index(&self) -> u64 {
        self.index_in_sl2z() * self.minus_one_count() as u64 / 2
    }

    /// Hyperbolic volume of the quotient in the stack convention: integrals
    /// over quotients by groups containing -identity are halved, so
    /// vol = (pi / 3) * psl_index / |{+-1} ∩ group| = (pi / 6) * index.
    pub fn volume(&self) -> f64 {
        PI / 6.0 * self.index_in_sl2z() as f64
    }

    /// Number of elliptic classes of order 2 and 3 on the quotient.
    fn elliptic_counts(&self) -> (u64, u64) {
        let n = self.level as u64;
        match self.family {
            Family::Full => (1, 1),
            Family::Gamma0 => {
                let mut nu2 = 1u64;
                let mut nu3 = 1u64;
                for (p, e) in factorize(n) {
                    nu2 *= match (p, e) {
                        (2, 1) => 1,
                        (2, _) => 0,
                        (p, _) if p % 4 == 1 => 2,
                        _ => 0,
                    };
                    nu3 *= match (p, e) {
                        (3, 1) => 1,
                        (3, _) => 0,
                        (p, _) if p % 3 == 1 => 2,
                        _ => 0,
                    };
                }
                (nu2, nu3)
            }
            Family::Gamma1 => match n {
                1 => (1, 1),
                2 => (1, 0),
                3 => (0, 1),
                _ => (0, 0),
            },
            Family::Principal => match n {
                1 => (1, 1),
                _ => (0, 0),
            },
        }
    }

    /// Cusp widths with multiplicities, sorted by width.
    ///
    /// Each entry is (width, number of cusp classes of that width); the
    /// widths weighted by multiplicity always sum to the projective index.
    pub fn width_multiset(&self) -> Vec<(u64, u64)> {
        let n = self.level as u64;
        let mut raw: Vec<(u64, u64)> = match self.family {
            Family::Full => vec![(1, 1)],
            Family::Gamma0 => divisors(n)
                .into_iter()
                .map(|c| (n / gcd((c * c) as i64, n as i64) as u64, euler_phi(gcd(c as i64, (n / c) as i64) as u64)))
                .collect(),
            Family::Gamma1 => match n {
                1 => vec![(1, 1)],
                2 => vec![(1, 1), (2, 1)],
                3 => vec![(1, 1), (3, 1)],
                4 => vec![(1, 2), (4, 1)],
                _ => divisors(n)
                    .into_iter()
                    .map(|c| (n / c, euler_phi(c) * euler_phi(n / c) / 2))
                    .collect(),
            },
            Family::Principal => {
                if n == 1 {
                    vec![(1, 1)]
                } else {
                    vec![(n, self.psl_index() / n)]
                }
            }
        };
        raw.retain(|&(_, count)| count > 0);
        raw.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::new();
        for (w, c) in raw {
            match merged.last_mut() {
                Some((lw, lc)) if *lw == w => *lc += c,
                _ => merged.push((w, c)),
            }
        }
        merged
    }

    /// Number of cusps of the quotient.
    pub fn cusp_count(&self) -> u64 {
        self.width_multiset().iter().map(|&(_, c)| c).sum()
    }

    /// Genus of the compactified quotient, by the standard exact formula
    /// 12 (g - 1) = index - 3 nu2 - 4 nu3 - 6 nu_inf in projective terms.
    pub fn genus(&self) -> u32 {
        let mu = self.psl_index();
        let (nu2, nu3) = self.elliptic_counts();
        let nu_inf = self.cusp_count();
        let twelve_g = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nu_inf as i64;
        debug_assert!(twelve_g >= 0 && twelve_g % 12 == 0, "genus formula must be integral");
        (twelve_g / 12) as u32
    }
}

/// One cusp class with a normalized scaling map.
///
/// `base` is an integer matrix sending infinity to the cusp representative;
/// `scaling` is base composed with the scaling z -> (width) z, so that
/// conjugating the group by `scaling` gives the cusp stabilizer generated by
/// the unit translation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspData {
    pub label: String,
    /// Numerator of the representative (1 for the infinite cusp).
    pub numerator: i64,
    /// Denominator of the representative (0 for the infinite cusp).
    pub denominator: i64,
    pub width: u64,
    pub base: IntMoebius,
    pub scaling: Moebius,
}

/// Cusp classes with scaling maps, for the full and gamma0 families.
///
/// The infinite cusp comes first, then representatives a/c ordered by
/// denominator and numerator. Other families report
/// [`Error::UnsupportedFamily`]; their width multisets remain available.
pub fn cusps(spec: &GroupSpec) -> Result<Vec<CuspData>> {
    match spec.family() {
        Family::Full | Family::Gamma0 => {}
        _ => return Err(Error::UnsupportedFamily { op: "cusps" }),
    }
    let n = spec.level() as i64;
    let mut out = Vec::new();
    out.push(CuspData {
        label: "inf".to_string(),
        numerator: 1,
        denominator: 0,
        width: 1,
        base: IntMoebius::identity(),
        scaling: Moebius::identity(),
    });
    for c in divisors(n as u64).into_iter().map(|c| c as i64) {
        if c == n {
            // the class with denominator n is the class of infinity
            continue;
        }
        let g = gcd(c, n / c);
        let width = (n / gcd(c * c, n)) as u64;
        for a0 in 1..=g {
            if gcd(a0, g) != 1 {
                continue;
            }
            let a = representative_numerator(a0, g, c);
            let base = base_matrix(a, c);
            let scaling = base.to_moebius().mul(&Moebius::scaling(width as f64)?);
            debug_assert!(spec.contains(
                &base
                    .mul(&IntMoebius::translation(width as i64))
                    .mul(&base.inverse())
            ));
            let label = if a == 0 {
                "0".to_string()
            } else {
                format!("{a}/{c}")
            };
            out.push(CuspData {
                label,
                numerator: a,
                denominator: c,
                width,
                base,
                scaling,
            });
        }
    }
    Ok(out)
}

/// Smallest nonnegative numerator congruent to a0 modulo g and coprime to c.
fn representative_numerator(a0: i64, g: i64, c: i64) -> i64 {
    if c == 1 {
        return 0;
    }
    let mut a = a0 % g;
    loop {
        if a > 0 && gcd(a, c) == 1 {
            return a;
        }
        a += g;
        assert!(a <= a0 + g * (c + 1), "no coprime representative found");
    }
}

/// An integer matrix with first column (a, c), mapping infinity to a/c.
fn base_matrix(a: i64, c: i64) -> IntMoebius {
    let (g, x, y) = egcd(a, c);
    debug_assert_eq!(g, 1);
    // a*x + c*y = 1, so (a, -y; c, x) has determinant a*x + c*y = 1
    IntMoebius { a, b: -y, c, d: x }
}

/// Local coordinate at a cusp: returns (q, y) where q = exp(2 pi i w) and
/// y = Im w for w the pullback of z under the cusp's scaling map.
///
/// |q| = exp(-2 pi y) always; the point approaches the cusp as y grows.
pub fn cusp_coordinates(z: UhpPoint, cusp: &CuspData) -> (Complex64, f64) {
    let w = cusp.scaling.inverse().apply(z);
    let q = (-2.0 * PI * w.y).exp() * Complex64::new((2.0 * PI * w.x).cos(), (2.0 * PI * w.x).sin());
    (q, w.y)
}

/// Lower bound for the smallest nonzero |lower-left entry| among elements of
/// the group conjugated by the cusp's scaling map.
///
/// Conjugation multiplies integer lower-left entries by the width, so the
/// width itself is such a bound. This feeds the admissibility limit for
/// per-cusp neighbourhood sizes.
pub fn min_c_lower_bound(_spec: &GroupSpec, cusp: &CuspData) -> f64 {
    cusp.width as f64
}

/// One width class with its admissible neighbourhood sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonClass {
    pub width: u64,
    pub count: u64,
    pub eps: f64,
    pub eps_prime: f64,
}

/// Admissible per-cusp neighbourhood sizes for a merging parameter delta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleEpsilons {
    pub delta: f64,
    /// Unit-width inner size (delta + sqrt(delta^2 - 1))^(-3/2).
    pub eps_unit: f64,
    /// Unit-width outer size (delta + sqrt(delta^2 - 1))^(-1/2).
    pub eps_prime_unit: f64,
    pub classes: Vec<EpsilonClass>,
}

/// Per-width-class neighbourhood sizes eps_c = width * eps_unit and
/// eps_prime_c = width * eps_prime_unit, for delta > 1.
///
/// These satisfy the admissibility identities with equality: the outer size
/// times (delta + sqrt(delta^2 - 1))^(1/2) equals the width bound from
/// [`min_c_lower_bound`], and the inner size times (delta + sqrt(delta^2 - 1))
/// equals the outer size.
pub fn admissible_epsilons(spec: &GroupSpec, delta: f64) -> Result<AdmissibleEpsilons> {
    if !(delta > 1.0) || !delta.is_finite() {
        return Err(Error::OutOfDomain {
            name: "delta",
            value: delta,
            needs: "delta > 1",
        });
    }
    let t = delta + (delta * delta - 1.0).sqrt();
    let eps_prime_unit = 1.0 / t.sqrt();
    let eps_unit = eps_prime_unit / t;
    let classes = spec
        .width_multiset()
        .into_iter()
        .map(|(width, count)| EpsilonClass {
            width,
            count,
            eps: width as f64 * eps_unit,
            eps_prime: width as f64 * eps_prime_unit,
        })
        .collect();
    Ok(AdmissibleEpsilons {
        delta,
        eps_unit,
        eps_prime_unit,
        classes,
    })
}

/// Whether z lies in the cusp's invariant horoball neighbourhood of size eps:
/// some group element moves z so that its pullback under the cusp scaling has
/// imaginary part above 1/eps.
///
/// Only the families supported by [`cusps`] are accepted.
pub fn meets_cusp_disc(spec: &GroupSpec, cusp: &CuspData, z: UhpPoint, eps: f64) -> Result<bool> {
    match spec.family() {
        Family::Full | Family::Gamma0 => {}
        _ => return Err(Error::UnsupportedFamily { op: "meets_cusp_disc" }),
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::OutOfDomain {
            name: "eps",
            value: eps,
            needs: "eps > 0",
        });
    }
    let n = spec.level() as i64;
    let m = cusp.width as f64;
    // Pull the group element through the base matrix: with M = base^-1 *
    // gamma, the condition Im(scaling^-1 gamma z) > 1/eps becomes
    // |r z + s|^2 < y * eps / width for (r, s) the bottom row of M, plus
    // existence of a completion of (r, s) keeping base * M in the group.
    let bound = z.y * eps / m;
    let r_max = (bound.sqrt() / z.y + 1e-9).floor() as i64;
    for r in -r_max..=r_max {
        let disc = bound - (r as f64 * z.y) * (r as f64 * z.y);
        if disc < 0.0 {
            continue;
        }
        let half = disc.sqrt();
        let s_lo = (-(r as f64) * z.x - half - 1e-9).ceil() as i64;
        let s_hi = (-(r as f64) * z.x + half + 1e-9).floor() as i64;
        for s in s_lo..=s_hi {
            if gcd(r, s) != 1 {
                continue;
            }
            let rz_s = (r as f64 * z.x + s as f64).powi(2) + (r as f64 * z.y).powi(2);
            if rz_s >= bound {
                continue;
            }
            // completions M = (p, q; r, s) with p s - q r = 1 form a line
            // p = p0 + t r, q = q0 + t s; gamma = base * M must satisfy the
            // lower-left congruence c_g p + d_g r = 0 mod n.
            let (_, x0, y0) = egcd(s, r);
            let (p0, q0) = (x0, -y0);
            debug_assert_eq!(p0 * s - q0 * r, 1);
            if spec.family() == Family::Full {
                return Ok(true);
            }
            let coeff = (cusp.base.c * r).rem_euclid(n);
            let rhs = (-(cusp.base.c * p0 + cusp.base.d * r)).rem_euclid(n);
            let g = gcd(coeff, n);
            if g == 0 {
                if rhs == 0 {
                    return Ok(true);
                }
            } else if rhs % g == 0 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
