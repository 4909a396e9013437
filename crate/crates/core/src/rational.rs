//! The exact scalar used everywhere: an arbitrary-precision fraction kept in
//! lowest terms with a positive denominator.

use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Working precision, in bits, for logarithms of rationals.
pub const LOG_PRECISION_BITS: usize = 96;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// `numer / 2^k`.
pub fn dyadic(numer: u64, k: u32) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::one() << k)
}

/// Parse `"p/q"` or `"p"`. Whitespace is not accepted.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("{s:?} is not a rational of the form p/q or p"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Lowest-terms `"p/q"`, or `"p"` for integers.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Whether `n` is a positive power of two (1 counts as 2^0).
pub fn is_power_of_two(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Exact base-2 logarithm of a positive rational that is a power of two
/// (possibly negative exponent).
pub fn exact_log2(r: &Rational) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let pow2 = |b: &BigInt| -> Option<u64> {
        let bits = b.bits();
        (b == &(BigInt::one() << (bits - 1))).then_some(bits - 1)
    };
    match (pow2(n), pow2(d)) {
        (Some(a), Some(b)) => Some(a as i64 - b as i64),
        _ => None,
    }
}

fn to_ibig(b: &BigInt) -> IBig {
    b.to_string()
        .parse()
        .expect("BigInt decimal form is a valid IBig")
}

/// Natural logarithm of a positive rational at [`LOG_PRECISION_BITS`].
pub fn ln_big(r: &Rational) -> FBig {
    assert!(r.is_positive(), "logarithm of non-positive rational");
    let n = FBig::from(to_ibig(r.numer()))
        .with_precision(LOG_PRECISION_BITS)
        .value();
    let d = FBig::from(to_ibig(r.denom()))
        .with_precision(LOG_PRECISION_BITS)
        .value();
    n.ln() - d.ln()
}

pub fn ln_2_big() -> FBig {
    FBig::from(2u8)
        .with_precision(LOG_PRECISION_BITS)
        .value()
        .ln()
}

pub fn big_to_f64(x: &FBig) -> f64 {
    x.to_f64().value()
}
