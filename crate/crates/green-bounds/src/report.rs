//! Presentation of a pipeline run: a flat list of named constants carrying
//! raw values, safely rounded display values, and provenance, plus text and
//! JSON renderers. Displayed upper bounds are rounded up and lower bounds
//! down, so every printed figure is still a valid bound.

use crate::green_assembly::{ConstantsMode, PipelineOutput};
use crate::rounding::{
    fmt_raw, round_down_3sig, round_down_sig, round_nearest_sig, round_up_3sig, round_up_sig,
};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt::Write as _;

/// Schema version stamped into every JSON document.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    /// Rounded up for display.
    Upper,
    /// Rounded down for display.
    Lower,
    /// A configuration parameter; displayed to four figures, to nearest.
    Parameter,
}

/// One named constant of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub name: String,
    pub raw: f64,
    /// Full-precision rendering of `raw`.
    pub raw_str: String,
    /// Safely rounded presentation value.
    pub display: String,
    /// "paper" for published configuration values, else the run's mode.
    pub provenance: ConstantsMode,
}

fn entry(name: &str, raw: f64, role: Role, provenance: ConstantsMode) -> ConstantEntry {
    let display = match role {
        Role::Upper => format!("{}", round_up_3sig(raw)),
        Role::Lower => format!("{}", round_down_3sig(raw)),
        Role::Parameter => format!("{}", round_nearest_sig(raw, 4)),
    };
    ConstantEntry {
        name: name.to_string(),
        raw,
        raw_str: fmt_raw(raw),
        display,
        provenance,
    }
}

/// Flattens a pipeline run into named constants with provenance.
pub fn constants_from_output(out: &PipelineOutput) -> Vec<ConstantEntry> {
    let mode = out.ingredients.mode;
    let paper = ConstantsMode::Paper;
    let p = &out.params;
    let r = &out.report;

    let t_eps_max = r.cusp_terms.iter().map(|c| c.t_eps).fold(0.0, f64::max);
    let t_eps_prime_max = r.cusp_terms.iter().map(|c| c.t_eps_prime).fold(0.0, f64::max);
    let tilde_a_min = r
        .cusp_terms
        .iter()
        .map(|c| c.tilde_a)
        .fold(f64::INFINITY, f64::min);
    let tilde_b_max = r
        .cusp_terms
        .iter()
        .map(|c| c.tilde_b)
        .fold(f64::NEG_INFINITY, f64::max);

    vec![
        entry("eta", p.eta, Role::Parameter, paper),
        entry("delta", p.delta, Role::Parameter, paper),
        entry("eps", p.eps_unit, Role::Parameter, paper),
        entry("eps_prime", p.eps_prime_unit, Role::Parameter, paper),
        entry("A", p.a_const, Role::Lower, paper),
        entry("B", p.b_const, Role::Upper, paper),
        entry("r_delta", r.r_delta, Role::Upper, paper),
        entry("C", p.c_const, Role::Upper, mode),
        entry("sup_F_Y", p.sup_f_y, Role::Upper, mode),
        entry("sup_F_X", p.sup_f_x, Role::Upper, mode),
        entry("zeta", r.zeta, Role::Upper, mode),
        entry("zeta_coarse", out.ingredients.zeta_coarse, Role::Upper, mode),
        entry("S", r.s, Role::Upper, mode),
        entry("int_h_lo", r.int_h.lo, Role::Lower, mode),
        entry("T_eps_max", t_eps_max, Role::Upper, mode),
        entry("T_eps_prime_max", t_eps_prime_max, Role::Upper, mode),
        entry("tilde_A_min", tilde_a_min, Role::Lower, mode),
        entry("tilde_B_max", tilde_b_max, Role::Upper, mode),
        entry("regime_a_lo", r.regime_a.lo, Role::Lower, mode),
        entry("regime_a_hi", r.regime_a.hi, Role::Upper, mode),
        entry("regime_b_lo", r.regime_b.lo, Role::Lower, mode),
        entry("regime_b_hi", r.regime_b.hi, Role::Upper, mode),
        entry("regime_c_lo", r.regime_c.lo, Role::Lower, mode),
        entry("regime_c_hi", r.regime_c.hi, Role::Upper, mode),
        entry("regime_d_lo", r.regime_d.lo, Role::Lower, mode),
        entry("regime_d_hi", r.regime_d.hi, Role::Upper, mode),
        entry("global_c0", r.global.c0, Role::Upper, mode),
        entry("global_c1", r.global.c1, Role::Upper, mode),
        entry("global_c2", r.global.c2, Role::Upper, mode),
    ]
}

/// Complete JSON document for a pipeline run.
pub fn bound_json(out: &PipelineOutput) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "bound-report",
        "family": out.family.to_string(),
        "level": out.level,
        "mode": out.ingredients.mode.to_string(),
        "ingredients": serde_json::to_value(&out.ingredients).expect("serializable"),
        "params": serde_json::to_value(&out.params).expect("serializable"),
        "report": serde_json::to_value(&out.report).expect("serializable"),
        "constants": serde_json::to_value(constants_from_output(out)).expect("serializable"),
    })
}

/// Human-readable rendering of a pipeline run.
pub fn bound_text(out: &PipelineOutput) -> String {
    let mut s = String::new();
    let ing = &out.ingredients;
    let r = &out.report;
    let _ = writeln!(s, "canonical Green function bounds");
    let _ = writeln!(
        s,
        "group {}({})  genus {}  volume {:.6}  index {}",
        out.family, out.level, ing.genus, ing.volume, ing.psl_index
    );
    let _ = writeln!(s, "constants mode: {}", ing.mode);
    let _ = writeln!(s);
    let _ = writeln!(s, "ingredients");
    let _ = writeln!(s, "  count at threshold 17        N  = {}", ing.n17);
    let _ = writeln!(
        s,
        "  count at threshold {:<8.4} N' = {}",
        ing.cutoff_b, ing.n_cutoff
    );
    let _ = writeln!(
        s,
        "  C    = {:<12} (raw {:.6}, rounded up)",
        ing.c_used, ing.c_raw
    );
    let _ = writeln!(
        s,
        "  sup_F_Y = {:<9} (raw {:.6})",
        ing.sup_y_used, ing.sup_y_raw
    );
    let _ = writeln!(s, "  sup_F_X = {:.6}", ing.sup_x);
    let _ = writeln!(
        s,
        "  zeta = {:.6} (coarse genus-1 value {:.6})",
        ing.zeta_genus, ing.zeta_coarse
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "assembled constants");
    let _ = writeln!(s, "  S = {:.6}", r.s);
    let _ = writeln!(s, "  r_delta = {:.9}", r.r_delta);
    let _ = writeln!(
        s,
        "  mean comparison term in [{}, {}]",
        round_down_3sig(r.int_h.lo),
        r.int_h.hi
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "cusp classes");
    for c in &r.cusp_terms {
        let _ = writeln!(
            s,
            "  {:<10} width {:<4} x{:<3} eps {:.6}  eps' {:.6}  T(eps) {:.6}  T(eps') {:.6}",
            c.label, c.width, c.count, c.eps, c.eps_prime, c.t_eps, c.t_eps_prime
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "regimes (displayed endpoints rounded outward)");
    for (name, iv, note) in [
        ("a", r.regime_a, "both points off all cusp neighbourhoods (plus near-diagonal sum)"),
        ("b", r.regime_b, "one point inside a cusp neighbourhood"),
        ("c", r.regime_c, "points inside two distinct cusp neighbourhoods"),
        ("d", r.regime_d, "same cusp neighbourhood, log-difference removed"),
    ] {
        let _ = writeln!(
            s,
            "  regime {name}: [{}, {}]  {note}",
            round_down_sig(iv.lo, 6),
            round_up_sig(iv.hi, 6)
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "level-uniform envelope: {} + {} n + {} n^2  (valid from level {})",
        round_up_sig(r.global.c0, 6),
        round_up_sig(r.global.c1, 6),
        round_up_sig(r.global.c2, 6),
        r.global.valid_from_level
    );
    s
}
