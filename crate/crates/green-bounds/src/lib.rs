//! Certified numerical bounds for canonical Green functions of modular
//! curves.
//!
//! The crate works with congruence subgroups of the modular group (the full
//! group and the standard three families) and produces fully explicit
//! two-sided bounds on the canonical Green function of the associated
//! curve, split into regimes by how close the two arguments sit to the
//! cusps, together with a level-uniform quadratic envelope.
//!
//! The main layers, bottom to top:
//!
//! * [`hyperbolic`]: upper half-plane geometry, the point-pair invariant,
//!   and the free-space Green kernel;
//! * [`modular_group`]: group families, indices, genus, cusps, widths, and
//!   admissible cusp-neighbourhood sizes;
//! * [`point_counting`]: exact orbit counting over group elements, an
//!   independent brute-force oracle, and certified suprema of counts over
//!   a fundamental-domain strip;
//! * [`shc_transform`]: the spherical-harmonic-type transform of radial
//!   kernels via Legendre functions and adaptive quadrature;
//! * [`f_bound`]: suprema of the averaged density function on the strip
//!   and on the whole curve, and the curvature constant they control;
//! * [`green_assembly`]: the spectral constant, cusp correction terms,
//!   the four bounding regimes, the uniform envelope, and the example
//!   pipeline combining everything;
//! * [`report`]: presentation with direction-safe rounding.

pub mod arith;
pub mod error;
pub mod f_bound;
pub mod green_assembly;
pub mod hyperbolic;
pub mod modular_group;
pub mod point_counting;
pub mod report;
pub mod rounding;
pub mod shc_transform;

pub use error::{Error, Result};
pub use green_assembly::{
    example_pipeline, regime_bounds, BoundParams, BoundReport, ConstantsMode, Interval,
    PipelineOptions, PipelineOutput,
};
pub use hyperbolic::{
    free_green_kernel, hyperbolic_distance, point_pair_invariant, Moebius, UhpPoint,
};
pub use modular_group::{cusps, Family, GroupSpec, IntMoebius};
pub use point_counting::{count_orbit, count_orbit_bruteforce, sup_count_y0, CountCertificate};
pub use shc_transform::{legendre_p, shc_transform, shc_weight2_indicator, RadialKernel};
