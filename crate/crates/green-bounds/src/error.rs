//! Error type shared by every module of the crate.

/// Errors produced by geometry, group, counting, transform and assembly code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A point failed the upper half-plane requirement (finite coordinates, y > 0).
    #[error("point ({x}, {y}) is not in the upper half-plane (need finite coordinates and y > 0)")]
    InvalidPoint { x: f64, y: f64 },

    /// A real 2x2 matrix is too far from determinant one to act as an isometry.
    #[error("matrix determinant {det} differs from 1 by more than 1e-12")]
    NotUnimodular { det: f64 },

    /// An integer 2x2 matrix does not have determinant exactly one.
    #[error("integer matrix determinant is {det}, expected exactly 1")]
    NotUnimodularInt { det: i64 },

    /// A group level outside the supported range.
    #[error("level {level} is invalid: {reason}")]
    InvalidLevel { level: u32, reason: &'static str },

    /// A cusp-related operation was asked for a family it does not support.
    #[error("operation `{op}` supports only the full and gamma0 families")]
    UnsupportedFamily { op: &'static str },

    /// The requested curve has genus zero, so the bound pipeline does not apply.
    #[error("the curve has genus zero; the bound pipeline requires genus at least 1")]
    GenusZero,

    /// A numeric argument fell outside the domain of an operation.
    #[error("argument {name} = {value} is out of domain: needs {needs}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        needs: &'static str,
    },

    /// Two-point evaluation hit the orbit of the singularity.
    #[error("orbit coincidence: u(z, gw) = {u} is within 1e-14 of 1, the points lie on a common orbit")]
    OrbitCoincidence { u: f64 },

    /// The exhaustive-scan oracle was given an entry cube too small to be exhaustive.
    #[error("entry bound {given} is too small for an exhaustive scan at these arguments (need at least {needed})")]
    EntryBoundTooSmall { needed: i64, given: i64 },

    /// A hypergeometric series did not meet its tolerance within the term cap.
    #[error("series for P(s={s}, k={k}) at u={u} did not converge within {max_terms} terms")]
    NonConvergentSeries {
        s: f64,
        k: f64,
        u: f64,
        max_terms: usize,
    },

    /// Adaptive quadrature exceeded its recursion budget before meeting the tolerance.
    #[error("adaptive quadrature did not reach tolerance {tol} within recursion depth {max_depth}")]
    QuadratureDepthExceeded { tol: f64, max_depth: u32 },

    /// A sampled kernel failed validation.
    #[error("invalid radial kernel: {reason}")]
    InvalidKernel { reason: String },

    /// An interval with lo > hi (or non-finite endpoints) was requested.
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
