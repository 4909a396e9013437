//! Exact arithmetic for continuous piecewise-linear self-maps of `[0, 1]`.
//!
//! The crate builds unimodal maps and the tent map `f(x) = 1 − |1 − 2x|`,
//! the sawtooth family `ξ_t` of maps commuting with `f`, grids of iterated
//! pre-images of zero, and the constructions relating PL commutators of a
//! unimodal map `g` to a PL conjugacy between `g` and `f`:
//!
//! * [`commute::halve`] turns a commutator with `2t` laps into one with `t`;
//! * [`conjugacy::build_commutator`] transports `ξ_t` along a conjugacy;
//! * [`conjugacy::fit_conjugacy`] recovers a conjugacy from pre-image grids.
//!
//! All arithmetic is over arbitrary-precision rationals. Floating point only
//! appears in the logarithmic slope and power-law reports.

pub mod commute;
pub mod conjugacy;
pub mod error;
pub mod format;
pub mod plmap;
pub mod rational;
pub mod unimodal;

pub use commute::{
    boundary_checks, classify_triviality, commutes, halve, lap_decomposition, predicted_first_kink,
    reduce_fully, BoundaryReport, LapDecomposition, Triviality,
};
pub use conjugacy::{
    build_commutator, conjugate_map, dyadic_density_demo, fit_conjugacy, power_law_check,
    slope_law_residual, ConjugacyFit, PowerLawReport,
};
pub use error::{Error, Result};
pub use plmap::{compose, Branch, PlMap, Point, PIECE_BUDGET};
pub use rational::Rational;
pub use unimodal::{
    attracting_fixture, check_mu_identities, density_report, mu_grid, tent, xi, PreimageGrid,
    UnimodalMap,
};
