#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use plcommute_core::rational::{int, rat};
use plcommute_core::{PlMap, Rational, UnimodalMap};
use rand::seq::index::sample;
use rand::Rng;

/// `ξ_t(x) = (1 − (−1)^[tx]) / 2 + (−1)^[tx] {tx}`, evaluated from the floor
/// and fractional part directly.
pub fn xi_oracle(t: u64, x: &Rational) -> Rational {
    let tx = x * Rational::from_integer(BigInt::from(t));
    let floor = tx.floor();
    let frac = &tx - &floor;
    if floor.to_integer().is_even() {
        frac
    } else {
        Rational::one() - frac
    }
}

/// A uniformly drawn rational in `[0, 1]` with denominator up to `max_den`.
pub fn unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    rat(rng.gen_range(0..=d), d)
}

/// `count` distinct sorted rationals in `(0, 1)` sharing denominator `den`.
pub fn interior_points<R: Rng>(rng: &mut R, den: i64, count: usize) -> Vec<Rational> {
    let count = count.min(den as usize - 1);
    let mut nums: Vec<usize> = sample(rng, den as usize - 1, count)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    nums.sort_unstable();
    nums.into_iter().map(|n| rat(n as i64, den)).collect()
}

pub fn random_plmap<R: Rng>(rng: &mut R, max_kinks: usize) -> PlMap {
    let den = rng.gen_range(max_kinks as i64 + 2..=64);
    let kinks = rng.gen_range(0..=max_kinks);
    let mut xs = vec![Rational::zero()];
    xs.extend(interior_points(rng, den, kinks));
    xs.push(Rational::one());
    PlMap::new(
        xs.into_iter()
            .map(|x| (x, unit_rational(rng, 48)))
            .collect(),
    )
    .unwrap()
}

/// An increasing PL homeomorphism with at most `max_kinks` kinks. With
/// `dyadic_level = Some(j)`, kink abscissas are multiples of `1/2^j`.
pub fn random_homeomorphism<R: Rng>(
    rng: &mut R,
    max_kinks: usize,
    dyadic_level: Option<u32>,
) -> PlMap {
    let kinks = rng.gen_range(1..=max_kinks);
    let xs = match dyadic_level {
        Some(j) => interior_points(rng, 1 << j, kinks),
        None => {
            let den = rng.gen_range(kinks as i64 + 2..=40);
            interior_points(rng, den, kinks)
        }
    };
    let yden = rng.gen_range(xs.len() as i64 + 2..=40);
    let ys = interior_points(rng, yden, xs.len());
    let mut pts = vec![(int(0), int(0))];
    pts.extend(xs.into_iter().zip(ys));
    pts.push((int(1), int(1)));
    PlMap::new(pts).unwrap()
}

/// A unimodal map with a few kinks on each branch.
pub fn random_unimodal<R: Rng>(rng: &mut R) -> UnimodalMap {
    let v = rat(rng.gen_range(1..8), 8);
    let left_kinks = rng.gen_range(0..3);
    let right_kinks = rng.gen_range(0..3);
    let scale = |p: Rational, lo: &Rational, hi: &Rational| lo + p * (hi - lo);
    let mut pts = vec![(int(0), int(0))];
    let lx = interior_points(rng, 17, left_kinks);
    let ly = interior_points(rng, 19, left_kinks);
    for (x, y) in lx.into_iter().zip(ly) {
        pts.push((scale(x, &int(0), &v), y));
    }
    pts.push((v.clone(), int(1)));
    let rx = interior_points(rng, 13, right_kinks);
    let mut ry = interior_points(rng, 23, right_kinks);
    ry.reverse();
    for (x, y) in rx.into_iter().zip(ry) {
        pts.push((scale(x, &v, &int(1)), y));
    }
    pts.push((int(1), int(0)));
    UnimodalMap::new(PlMap::new(pts).unwrap(), Some(v)).unwrap()
}

/// Linear interpolation on a raw breakpoint list.
fn interp(points: &[(Rational, Rational)], x: &Rational) -> Rational {
    let w = points
        .windows(2)
        .find(|w| &w[0].0 <= x && x <= &w[1].0)
        .expect("x inside the domain");
    let (x0, y0) = &w[0];
    let (x1, y1) = &w[1];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// If the PL map given by `points` sends `[lo, hi]` into itself, no iterated
/// pre-image of 0 lies in the interval (0 is outside it), so every pre-image
/// grid has a gap of at least `hi - lo`. Returns that bound.
pub fn trapped_gap_bound(
    points: &[(Rational, Rational)],
    lo: &Rational,
    hi: &Rational,
) -> Option<Rational> {
    if lo.is_zero() || lo >= hi {
        return None;
    }
    // the image of an interval under a PL map is the hull of the images of
    // its endpoints and of the breakpoints inside it
    let mut xs = vec![lo.clone(), hi.clone()];
    xs.extend(
        points
            .iter()
            .map(|p| p.0.clone())
            .filter(|x| lo < x && x < hi),
    );
    let trapped = xs
        .iter()
        .map(|x| interp(points, x))
        .all(|y| lo <= &y && &y <= hi);
    trapped.then(|| hi - lo)
}
