//! Assembly of the explicit two-sided bounds: the spectral constant S, the
//! per-cusp correction terms, the tilde-shifted constants near cusps, the
//! four bounding regimes, and the level-uniform quadratic envelope, plus the
//! worked-example pipeline that produces a full report for a given group.

use crate::error::{Error, Result};
use crate::f_bound::{f_sup_bound_interior, f_sup_bound_x, zeta_bound};
use crate::modular_group::{admissible_epsilons, cusps, Family, GroupSpec};
use crate::point_counting::sup_count_y0;
use crate::rounding::round_up_3sig;

use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

/// A closed interval [lo, hi] bracketing some quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// One cusp class entering the bound: either a concrete cusp (count 1) or a
/// width class with multiplicity, with its admissible neighbourhood sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspParams {
    pub label: String,
    pub width: u64,
    /// Number of cusp classes this row stands for.
    pub count: u64,
    pub eps: f64,
    pub eps_prime: f64,
}

/// All inputs of the bound assembly for one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Merging parameter of the two Green functions, > 1.
    pub delta: f64,
    /// Spectral-gap lower bound, in (0, 1/4].
    pub eta: f64,
    /// Constant lower bound for the ambient Green kernel off the diagonal
    /// (configuration input; derivation out of scope).
    pub a_const: f64,
    /// Constant upper bound, same role as `a_const`.
    pub b_const: f64,
    /// Supremum constant of the spectral heat-type majorant.
    pub c_const: f64,
    /// Density bound on the interior strip.
    pub sup_f_y: f64,
    /// Density bound on the whole curve.
    pub sup_f_x: f64,
    pub genus: u32,
    pub volume: f64,
    /// Curvature constant bound feeding S.
    pub zeta: f64,
    /// Order of the intersection with {+-identity}: 1 or 2.
    pub minus_one_count: u32,
    pub level: u32,
    /// Unit-width neighbourhood sizes (delta-derived).
    pub eps_unit: f64,
    pub eps_prime_unit: f64,
    pub cusps: Vec<CuspParams>,
}

impl BoundParams {
    /// Checks every hypothesis and admissibility inequality the assembled
    /// bounds rely on.
    pub fn validate(&self) -> Result<()> {
        fn domain(name: &'static str, value: f64, ok: bool, needs: &'static str) -> Result<()> {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(Error::OutOfDomain { name, value, needs })
            }
        }
        domain("delta", self.delta, self.delta > 1.0, "delta > 1")?;
        domain("eta", self.eta, self.eta > 0.0 && self.eta <= 0.25, "eta in (0, 1/4]")?;
        domain("A", self.a_const, self.a_const <= self.b_const, "A <= B")?;
        domain("B", self.b_const, self.b_const.is_finite(), "finite")?;
        domain("C", self.c_const, self.c_const > 0.0, "C > 0")?;
        domain("sup_F_Y", self.sup_f_y, self.sup_f_y > 0.0, "positive")?;
        domain(
            "sup_F_X",
            self.sup_f_x,
            self.sup_f_x >= self.sup_f_y * (1.0 - 1e-12),
            "at least sup_F_Y",
        )?;
        domain("zeta", self.zeta, self.zeta >= 0.0, "nonnegative")?;
        domain("volume", self.volume, self.volume > 0.0, "positive")?;
        if self.genus == 0 {
            return Err(Error::GenusZero);
        }
        if !(self.minus_one_count == 1 || self.minus_one_count == 2) {
            return Err(Error::OutOfDomain {
                name: "minus_one_count",
                value: self.minus_one_count as f64,
                needs: "1 or 2",
            });
        }
        if self.level == 0 {
            return Err(Error::InvalidLevel { level: 0, reason: "level must be at least 1" });
        }
        domain("eps_unit", self.eps_unit, self.eps_unit > 0.0, "positive")?;
        domain(
            "eps_prime_unit",
            self.eps_prime_unit,
            self.eps_prime_unit > self.eps_unit,
            "larger than eps_unit",
        )?;
        if self.cusps.is_empty() {
            return Err(Error::OutOfDomain {
                name: "cusps",
                value: 0.0,
                needs: "at least one cusp class",
            });
        }
        let t = self.delta + (self.delta * self.delta - 1.0).sqrt();
        for c in &self.cusps {
            domain("cusp eps", c.eps, c.eps > 0.0 && c.eps < c.eps_prime, "0 < eps < eps_prime")?;
            // admissibility: eps * (delta + sqrt(delta^2-1)) <= eps_prime and
            // eps_prime * sqrt(delta + sqrt(delta^2-1)) <= width
            domain(
                "cusp eps admissibility",
                c.eps * t,
                c.eps * t <= c.eps_prime * (1.0 + 1e-9),
                "eps * (delta + sqrt(delta^2 - 1)) <= eps_prime",
            )?;
            domain(
                "cusp eps_prime admissibility",
                c.eps_prime * t.sqrt(),
                c.eps_prime * t.sqrt() <= c.width as f64 * (1.0 + 1e-9),
                "eps_prime * sqrt(delta + sqrt(delta^2 - 1)) <= width",
            )?;
            if c.count == 0 || c.width == 0 {
                return Err(Error::OutOfDomain {
                    name: "cusp class",
                    value: 0.0,
                    needs: "positive width and count",
                });
            }
        }
        Ok(())
    }
}

/// Certified spectral-gap lower bound for congruence groups: 975/4096.
pub fn kim_sarnak_eta() -> f64 {
    975.0 / 4096.0
}

/// The spectral majorant constant pi/(2 pi - 4)^2 times the certified count
/// at threshold 17.
pub fn c_from_pointcount(sup_n17: u64) -> Result<f64> {
    if sup_n17 == 0 {
        return Err(Error::OutOfDomain {
            name: "sup_N17",
            value: 0.0,
            needs: "a count of at least 1",
        });
    }
    Ok(PI / (2.0 * PI - 4.0).powi(2) * sup_n17 as f64)
}

/// The constant S = sqrt((1/(4 eta^2) + 4) C zeta) controlling the spectral
/// part of every regime bound.
pub fn spectral_constant_s(eta: f64, c: f64, zeta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 0.25) || !eta.is_finite() {
        return Err(Error::OutOfDomain {
            name: "eta",
            value: eta,
            needs: "eta in (0, 1/4]",
        });
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::OutOfDomain { name: "C", value: c, needs: "C > 0" });
    }
    if !(zeta >= 0.0) || !zeta.is_finite() {
        return Err(Error::OutOfDomain {
            name: "zeta",
            value: zeta,
            needs: "zeta >= 0",
        });
    }
    Ok(((1.0 / (4.0 * eta * eta) + 4.0) * c * zeta).sqrt())
}

/// Per-cusp correction term T(eps) = (sup_F_Y / genus) (eps / 4 pi)^2.
pub fn cusp_term_t(sup_f_y: f64, genus: u32, eps: f64) -> Result<f64> {
    if !(sup_f_y > 0.0) || !sup_f_y.is_finite() {
        return Err(Error::OutOfDomain {
            name: "sup_F_Y",
            value: sup_f_y,
            needs: "positive",
        });
    }
    if genus == 0 {
        return Err(Error::GenusZero);
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::OutOfDomain { name: "eps", value: eps, needs: "nonnegative" });
    }
    let r = eps / (4.0 * PI);
    Ok(sup_f_y / genus as f64 * r * r)
}

/// Tail constant r_delta = (sqrt(2/(delta-1)) + arctan sqrt((delta-1)/2)) / (24 pi).
pub fn r_delta(delta: f64) -> Result<f64> {
    if !(delta > 1.0) || !delta.is_finite() {
        return Err(Error::OutOfDomain {
            name: "delta",
            value: delta,
            needs: "delta > 1",
        });
    }
    let h = ((delta - 1.0) / 2.0).sqrt();
    Ok(((2.0 / (delta - 1.0)).sqrt() + h.atan()) / (24.0 * PI))
}

/// Near-cusp shifted constants: with m the order of the {+-1} intersection,
/// bracket = (1/eps_prime)(1 - (2/pi) arctan sqrt((delta-1)/2)), the pair is
/// (A + m (bracket - eps_prime r_delta), B + m (bracket + eps_prime r_delta)).
pub fn tilde_constants(
    a_const: f64,
    b_const: f64,
    minus_one_count: u32,
    eps_prime_c: f64,
    delta: f64,
) -> Result<(f64, f64)> {
    if !(eps_prime_c > 0.0) || !eps_prime_c.is_finite() {
        return Err(Error::OutOfDomain {
            name: "eps_prime_c",
            value: eps_prime_c,
            needs: "positive",
        });
    }
    let r = r_delta(delta)?;
    let m = minus_one_count as f64;
    let bracket = (1.0 - 2.0 / PI * ((delta - 1.0) / 2.0).sqrt().atan()) / eps_prime_c;
    let tilde_a = a_const + m * (bracket - eps_prime_c * r);
    let tilde_b = b_const + m * (bracket + eps_prime_c * r);
    Ok((tilde_a, tilde_b))
}

/// Interval containing the mean of the hyperbolic-to-canonical comparison
/// term: [-zeta/eta, 0].
pub fn int_h_interval(zeta: f64, eta: f64) -> Result<Interval> {
    if !(zeta >= 0.0) || !zeta.is_finite() {
        return Err(Error::OutOfDomain { name: "zeta", value: zeta, needs: "zeta >= 0" });
    }
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::OutOfDomain { name: "eta", value: eta, needs: "eta > 0" });
    }
    Interval::new(-zeta / eta, 0.0)
}

/// Envelopes of the comparison term inside a cusp neighbourhood of size eps,
/// at pulled-back height y_c >= 1/eps: returns (lower, upper) where
/// upper = boundary_sup + log(eps y_c)/volume and lower subtracts the
/// density correction (sup_F/genus)(eps/4pi)^2 (1 - exp(4pi/eps - 4pi y_c)).
pub fn cusp_envelope_h(
    boundary_sup: f64,
    boundary_inf: f64,
    sup_f_boundary: f64,
    genus: u32,
    volume: f64,
    eps: f64,
    y_c: f64,
) -> Result<(f64, f64)> {
    if genus == 0 {
        return Err(Error::GenusZero);
    }
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::OutOfDomain { name: "volume", value: volume, needs: "positive" });
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::OutOfDomain { name: "eps", value: eps, needs: "positive" });
    }
    if !(y_c >= 1.0 / eps) {
        return Err(Error::OutOfDomain {
            name: "y_c",
            value: y_c,
            needs: "y_c >= 1/eps (inside the neighbourhood)",
        });
    }
    let log_term = (eps * y_c).ln() / volume;
    let t = cusp_term_t(sup_f_boundary, genus, eps)?;
    let h_plus = boundary_sup + log_term;
    let h_minus = boundary_inf - t * (1.0 - (4.0 * PI / eps - 4.0 * PI * y_c).exp()) + log_term;
    Ok((h_minus, h_plus))
}

/// Level-uniform quadratic envelope c0 + c1 n + c2 n^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalPolynomial {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Smallest level from which the envelope provably dominates all four
    /// regime upper bounds (where the linear branch of S takes over).
    pub valid_from_level: u32,
}

impl GlobalPolynomial {
    pub fn eval(&self, n: u32) -> f64 {
        let n = n as f64;
        self.c0 + self.c1 * n + self.c2 * n * n
    }
}

/// Quadratic-in-level envelope dominating every regime upper bound for all
/// congruence groups of level at least `valid_from_level`.
///
/// Uniformity is bought by coarsening: genus 1, both signs present (m = 2),
/// every width at most n, and the linear branch S <= sqrt(KC sup_F_Y) *
/// (eps_unit/2pi) n of the spectral constant. The near-cusp renormalization
/// term is bounded by m (log 2 - 2pi/eps'_c)/(2pi); its constant part joins
/// c0 and its negative 1/width part is dropped together with the positive
/// 1/width part of the tilde shift (their sum is negative).
pub fn global_sup_bound(params: &BoundParams, _level: u32) -> Result<GlobalPolynomial> {
    let k = 1.0 / (4.0 * params.eta * params.eta) + 4.0;
    let rd = r_delta(params.delta)?;
    let m = 2.0;
    let zeta_lin = params.sup_f_y * (params.eps_unit / (2.0 * PI)).powi(2);
    let s_const = (k * params.c_const * params.sup_f_y).sqrt();
    let s_lin = (k * params.c_const * zeta_lin).sqrt();
    let c0 = params.b_const + m * LN_2 / (2.0 * PI);
    let c1 = 2.0 * s_lin + m * rd * params.eps_prime_unit;
    let c2 = 2.0 * params.sup_f_y * (params.eps_prime_unit / (4.0 * PI)).powi(2);
    let valid_from_level = if s_lin > 0.0 {
        ((s_const / s_lin).ceil() as u32).max(1)
    } else {
        1
    };
    Ok(GlobalPolynomial { c0, c1, c2, valid_from_level })
}

/// Per-cusp-class entries of the final report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspTermRow {
    pub label: String,
    pub width: u64,
    pub count: u64,
    pub eps: f64,
    pub eps_prime: f64,
    pub t_eps: f64,
    pub t_eps_prime: f64,
    pub tilde_a: f64,
    pub tilde_b: f64,
}

/// The assembled two-sided bounds.
///
/// Regimes (a) and (d) bound regularized quantities: (a) brackets the
/// canonical Green function plus the near-diagonal kernel sum (its upper end
/// also bounds the function itself, the sum being nonnegative), and (d)
/// brackets the function minus m/(2 pi) times log of the cusp-coordinate
/// difference. Regimes (b) and (c) bound the function when one or both
/// points sit inside distinct cusp neighbourhoods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(rename = "S")]
    pub s: f64,
    pub r_delta: f64,
    pub zeta: f64,
    pub int_h: Interval,
    pub cusp_terms: Vec<CuspTermRow>,
    pub regime_a: Interval,
    pub regime_b: Interval,
    pub regime_c: Interval,
    pub regime_d: Interval,
    pub global: GlobalPolynomial,
}

/// Assembles all regime bounds from validated parameters.
pub fn regime_bounds(params: &BoundParams) -> Result<BoundReport> {
    params.validate()?;
    let s = spectral_constant_s(params.eta, params.c_const, params.zeta)?;
    let rd = r_delta(params.delta)?;
    let int_h = int_h_interval(params.zeta, params.eta)?;

    let mut rows = Vec::with_capacity(params.cusps.len());
    for c in &params.cusps {
        let t_eps = cusp_term_t(params.sup_f_y, params.genus, c.eps)?;
        let t_eps_prime = cusp_term_t(params.sup_f_y, params.genus, c.eps_prime)?;
        let (tilde_a, tilde_b) = tilde_constants(
            params.a_const,
            params.b_const,
            params.minus_one_count,
            c.eps_prime,
            params.delta,
        )?;
        rows.push(CuspTermRow {
            label: c.label.clone(),
            width: c.width,
            count: c.count,
            eps: c.eps,
            eps_prime: c.eps_prime,
            t_eps,
            t_eps_prime,
            tilde_a,
            tilde_b,
        });
    }

    let lo_base = params.a_const - 2.0 * s - params.zeta / params.eta;
    let regime_a = Interval::new(lo_base, params.b_const + 2.0 * s)?;

    let mut by_t: Vec<&CuspTermRow> = rows.iter().collect();
    by_t.sort_by(|a, b| b.t_eps.partial_cmp(&a.t_eps).unwrap());
    let t_max = by_t[0].t_eps;
    let regime_b = Interval::new(lo_base, params.b_const + 2.0 * s + t_max)?;

    // largest sum of terms over a pair of distinct cusp classes
    let pair = if by_t[0].count >= 2 {
        2.0 * t_max
    } else if by_t.len() >= 2 {
        t_max + by_t[1].t_eps
    } else {
        t_max
    };
    let regime_c = Interval::new(lo_base, params.b_const + 2.0 * s + pair)?;

    let d_lo = rows
        .iter()
        .map(|r| r.tilde_a)
        .fold(f64::INFINITY, f64::min)
        - 2.0 * s
        - params.zeta / params.eta;
    let d_hi = rows
        .iter()
        .map(|r| r.tilde_b + 2.0 * s + 2.0 * r.t_eps_prime)
        .fold(f64::NEG_INFINITY, f64::max);
    let regime_d = Interval::new(d_lo, d_hi)?;

    let global = global_sup_bound(params, params.level)?;

    Ok(BoundReport {
        s,
        r_delta: rd,
        zeta: params.zeta,
        int_h,
        cusp_terms: rows,
        regime_a,
        regime_b,
        regime_c,
        regime_d,
        global,
    })
}

/// Where the worked example's two fixed point counts come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantsMode {
    /// The published counts 226 and 58.
    Paper,
    /// Fresh certified counts from the grid supremum.
    Computed,
}

impl fmt::Display for ConstantsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantsMode::Paper => "paper",
            ConstantsMode::Computed => "computed",
        })
    }
}

impl FromStr for ConstantsMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(ConstantsMode::Paper),
            "computed" => Ok(ConstantsMode::Computed),
            other => Err(format!("unknown constants mode `{other}` (expected paper or computed)")),
        }
    }
}

/// Tunable inputs of the pipeline; the defaults are the worked example's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub mode: ConstantsMode,
    /// Grid step for computed-mode certificates.
    pub grid_step: f64,
    pub delta: f64,
    /// Averaging-kernel cutoff; the count threshold is 2 a^2 - 1.
    pub cutoff_a: f64,
    pub a_const: f64,
    pub b_const: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            mode: ConstantsMode::Paper,
            grid_step: 0.01,
            delta: 2.0,
            cutoff_a: 1.44,
            a_const: -3.00e4,
            b_const: 1.58e4,
        }
    }
}

/// Intermediate values of the pipeline, kept for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ingredients {
    pub mode: ConstantsMode,
    /// Certified (or published) count at threshold 17.
    pub n17: u64,
    /// Certified (or published) count at the cutoff threshold.
    pub n_cutoff: u64,
    pub cutoff_b: f64,
    pub c_raw: f64,
    /// C after upward 3-significant-figure rounding.
    pub c_used: f64,
    pub sup_y_raw: f64,
    pub sup_y_used: f64,
    pub sup_x: f64,
    /// Whole-curve bound divided by the genus (feeds S).
    pub zeta_genus: f64,
    /// The genus-1 coarsening of the same bound.
    pub zeta_coarse: f64,
    pub genus: u32,
    pub volume: f64,
    pub psl_index: u64,
}

/// A complete pipeline run: inputs, intermediates, and the final report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutput {
    pub family: Family,
    pub level: u32,
    pub ingredients: Ingredients,
    pub params: BoundParams,
    pub report: BoundReport,
}

/// The worked-example pipeline for a group of positive genus: fixes the
/// spectral gap, derives neighbourhood sizes from delta, takes the two point
/// counts from the chosen source, chains the density and curvature bounds,
/// and assembles the regime report.
pub fn example_pipeline(
    family: Family,
    level: u32,
    options: &PipelineOptions,
) -> Result<PipelineOutput> {
    let cutoff_b = 2.0 * options.cutoff_a * options.cutoff_a - 1.0;
    let (n17, n_cutoff) = match options.mode {
        ConstantsMode::Paper => (226, 58),
        ConstantsMode::Computed => (
            sup_count_y0(17.0, options.grid_step)?.certified_sup,
            sup_count_y0(cutoff_b, options.grid_step)?.certified_sup,
        ),
    };
    pipeline_with_counts(family, level, options, n17, n_cutoff)
}

/// Pipeline body with the two point counts supplied by the caller.
pub fn pipeline_with_counts(
    family: Family,
    level: u32,
    options: &PipelineOptions,
    n17: u64,
    n_cutoff: u64,
) -> Result<PipelineOutput> {
    let spec = GroupSpec::new(family, level)?;
    let genus = spec.genus();
    if genus == 0 {
        return Err(Error::GenusZero);
    }
    let cutoff_b = 2.0 * options.cutoff_a * options.cutoff_a - 1.0;
    let eps = admissible_epsilons(&spec, options.delta)?;

    let c_raw = c_from_pointcount(n17)?;
    let c_used = round_up_3sig(c_raw);
    let sup_y_raw = f_sup_bound_interior(options.cutoff_a, n_cutoff)?;
    let sup_y_used = match options.mode {
        ConstantsMode::Paper => round_up_3sig(sup_y_raw),
        ConstantsMode::Computed => sup_y_raw,
    };
    let sup_x = f_sup_bound_x(sup_y_used, spec.level(), eps.eps_unit)?;
    let zeta_genus = zeta_bound(sup_x, genus)?;
    let zeta_coarse = sup_x;

    let cusp_rows = match spec.family() {
        Family::Full | Family::Gamma0 => cusps(&spec)?
            .into_iter()
            .map(|c| CuspParams {
                label: c.label,
                width: c.width,
                count: 1,
                eps: c.width as f64 * eps.eps_unit,
                eps_prime: c.width as f64 * eps.eps_prime_unit,
            })
            .collect(),
        _ => eps
            .classes
            .iter()
            .map(|c| CuspParams {
                label: format!("width-{}", c.width),
                width: c.width,
                count: c.count,
                eps: c.eps,
                eps_prime: c.eps_prime,
            })
            .collect::<Vec<_>>(),
    };

    let params = BoundParams {
        delta: options.delta,
        eta: kim_sarnak_eta(),
        a_const: options.a_const,
        b_const: options.b_const,
        c_const: c_used,
        sup_f_y: sup_y_used,
        sup_f_x: sup_x,
        genus,
        volume: spec.volume(),
        zeta: zeta_genus,
        minus_one_count: spec.minus_one_count(),
        level: spec.level(),
        eps_unit: eps.eps_unit,
        eps_prime_unit: eps.eps_prime_unit,
        cusps: cusp_rows,
    };
    let report = regime_bounds(&params)?;

    Ok(PipelineOutput {
        family,
        level: spec.level(),
        ingredients: Ingredients {
            mode: options.mode,
            n17,
            n_cutoff,
            cutoff_b,
            c_raw,
            c_used,
            sup_y_raw,
            sup_y_used,
            sup_x,
            zeta_genus,
            zeta_coarse,
            genus,
            volume: spec.volume(),
            psl_index: spec.psl_index(),
        },
        params,
        report,
    })
}
