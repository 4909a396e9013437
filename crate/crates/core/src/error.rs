use thiserror::Error;

use crate::rational::Rational;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{x} is outside the domain [{lo}, {hi}]")]
    Domain {
        x: Box<Rational>,
        lo: Box<Rational>,
        hi: Box<Rational>,
    },

    #[error("result needs {needed} breakpoints, over the budget of {cap}")]
    PieceBudget { needed: usize, cap: usize },

    #[error("map is constant at level {level} on [{lo}, {hi}]")]
    FlatSegment {
        level: Box<Rational>,
        lo: Box<Rational>,
        hi: Box<Rational>,
    },

    #[error("map is not strictly monotone on [{lo}, {hi}]")]
    NotMonotone { lo: Box<Rational>, hi: Box<Rational> },

    #[error("map has no interior breakpoint")]
    GloballyLinear,

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("not a unimodal map: {0}")]
    NotUnimodal(String),

    #[error("not an increasing homeomorphism of [0, 1]: {0}")]
    NotHomeomorphism(String),

    #[error("map does not commute with g")]
    NotCommuting,

    #[error("lap count {0} is odd")]
    OddLapCount(usize),

    #[error("lap structure: {0}")]
    LapStructure(String),

    #[error("assembled map is discontinuous at {at}")]
    Discontinuity { at: Rational },

    #[error("slope hypothesis fails: psi'(0) = {psi_slope} is not above g'(0) = {g_slope}")]
    SlopeHypothesis {
        psi_slope: Box<Rational>,
        g_slope: Box<Rational>,
    },

    #[error("g is not the conjugate of the tent map by the given h")]
    ConjugacyMismatch,

    #[error("no grid points fall in the checking window (0, {0}]")]
    EmptyWindow(Rational),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
