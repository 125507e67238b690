//! Spherical discrepancies and pairwise energies on the unit sphere S^d.
//!
//! The crate computes squared L^2 discrepancies of point sets and weighted
//! measures against caps, fixed-height caps, hemispheres, wedges, and
//! slices, both through closed-form invariance identities that reduce them
//! to pairwise-distance energies and through independent Monte Carlo
//! estimates of the defining integrals, so each identity can be
//! cross-validated numerically. It also provides zonal (Gegenbauer) kernel
//! expansions with positive-definiteness verdicts and square-root kernels,
//! an energy maximizer with structural checks on the resulting
//! configurations, low-discrepancy Fibonacci configurations, and the
//! dimension-dependent constants the identities rely on.
//!
//! All randomized routines are deterministic functions of an explicit
//! [`RandomSeed`]; Monte Carlo estimators chunk their sample streams so
//! results do not depend on the number of worker threads.

pub mod discrepancy;
pub mod energy;
pub mod error;
pub mod gegenbauer;
pub mod numerics;
pub mod optimize;
pub mod sphere_geom;

/// Library version, exposed so downstream reports can record it.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use discrepancy::{
    cap_discrepancy_sq, cap_fixed_t_discrepancy_sq, hamming_distance,
    hemisphere_discrepancy_sq, mc_discrepancy_sq, slice_discrepancy_sq, wedge_discrepancy_sq,
    DiscrepancyFamily, MCEstimate,
};
pub use energy::{
    antipodal_pair_measure, continuous_energy_sigma, discrete_energy, energy_gap,
    measure_energy_extremes, vd, EnergyReport, Kernel, WeightedMeasure,
};
pub use error::{Error, Result};
pub use gegenbauer::{
    convolution_square, expand_kernel, f_discrepancy_sq, funk_hecke_coefficient_estimate,
    funk_hecke_residual, gegenbauer_poly, generalized_stolarsky_gap, is_positive_definite,
    lambda_for_dim, sqrt_kernel, GegenbauerExpansion, PDVerdict, DEFAULT_PD_TOL,
};
pub use optimize::{
    check_odd_maximizer_structure, maximize_distance_sum, symmetry_defect,
    verify_hemisphere_balance, OddStructureReport, OptimizationResult, OptimizerConfig,
};
pub use sphere_geom::{
    cap_intersection_measure, cap_measure, constant_cd, constant_cd_mc, euclidean_distance,
    fibonacci_points, geodesic_distance, sample_uniform, PointSet, RandomSeed, SpherePoint,
};
