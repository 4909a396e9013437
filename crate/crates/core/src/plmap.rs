//! Continuous piecewise-linear maps stored as exact breakpoint lists.
//!
//! A [`PlMap`] is a self-map of `[0, 1]`; a [`Branch`] is a PL function on
//! an arbitrary closed interval with unrestricted values, used for
//! restrictions and inverse branches. Both are kept in canonical form: no
//! interior breakpoint lies on the segment joining its neighbours, so
//! structural equality is pointwise equality.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Point = (Rational, Rational);

/// Largest breakpoint count any map-producing operation may generate.
pub const PIECE_BUDGET: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlMap {
    points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Branch {
    points: Vec<Point>,
}

fn collinear(a: &Point, b: &Point, c: &Point) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

fn canonicalize(points: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
            out.pop();
        }
        out.push(p);
    }
    out
}

fn is_canonical(points: &[Point]) -> bool {
    points.windows(3).all(|w| !collinear(&w[0], &w[1], &w[2]))
}

fn slope(a: &Point, b: &Point) -> Rational {
    (&b.1 - &a.1) / (&b.0 - &a.0)
}

fn eval_points(points: &[Point], x: &Rational) -> Result<Rational> {
    let idx = points.partition_point(|p| &p.0 < x);
    if idx < points.len() && &points[idx].0 == x {
        return Ok(points[idx].1.clone());
    }
    if idx == 0 || idx == points.len() {
        return Err(Error::Domain {
            x: x.clone().into(),
            lo: points[0].0.clone().into(),
            hi: points[points.len() - 1].0.clone().into(),
        });
    }
    let (a, b) = (&points[idx - 1], &points[idx]);
    Ok(&a.1 + (x - &a.0) * slope(a, b))
}

/// Breakpoints of `outer ∘ inner`: inner's own breakpoints plus, on every
/// non-flat piece of inner, the pre-images of outer's breakpoints.
fn compose_points(outer: &[Point], inner: &[Point], cap: usize) -> Result<Vec<Point>> {
    let mut out: Vec<Point> = Vec::with_capacity(inner.len().max(outer.len()));
    for w in inner.windows(2) {
        let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
        out.push((x0.clone(), eval_points(outer, y0)?));
        if y0 != y1 {
            let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
            let start = outer.partition_point(|p| &p.0 <= lo);
            let end = outer.partition_point(|p| &p.0 < hi).max(start);
            let dx_dy = (x1 - x0) / (y1 - y0);
            let at = |p: &Point| (x0 + (&p.0 - y0) * &dx_dy, p.1.clone());
            if y0 < y1 {
                out.extend(outer[start..end].iter().map(at));
            } else {
                out.extend(outer[start..end].iter().rev().map(at));
            }
        }
        if out.len() >= cap {
            return Err(Error::PieceBudget {
                needed: out.len() + 1,
                cap,
            });
        }
    }
    let (xn, yn) = &inner[inner.len() - 1];
    out.push((xn.clone(), eval_points(outer, yn)?));
    Ok(canonicalize(out))
}

fn restrict_points(points: &[Point], lo: &Rational, hi: &Rational) -> Result<Vec<Point>> {
    let first = &points[0].0;
    let last = &points[points.len() - 1].0;
    if lo >= hi || lo < first || hi > last {
        return Err(Error::Domain {
            x: if lo < first { lo.clone() } else { hi.clone() }.into(),
            lo: first.clone().into(),
            hi: last.clone().into(),
        });
    }
    let mut out = vec![(lo.clone(), eval_points(points, lo)?)];
    out.extend(points.iter().filter(|p| &p.0 > lo && &p.0 < hi).cloned());
    out.push((hi.clone(), eval_points(points, hi)?));
    Ok(canonicalize(out))
}

/// Swap coordinates of a strictly monotone breakpoint list.
fn invert_points(points: &[Point]) -> Option<Vec<Point>> {
    let dir = points[0].1.cmp(&points[1].1);
    if dir == Ordering::Equal || points.windows(2).any(|w| w[0].1.cmp(&w[1].1) != dir) {
        return None;
    }
    let mut out: Vec<Point> = points.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
    if dir == Ordering::Greater {
        out.reverse();
    }
    Some(out)
}

impl PlMap {
    /// Validate and canonicalize a breakpoint list.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        validate(&points)?;
        Ok(PlMap {
            points: canonicalize(points),
        })
    }

    /// Like [`PlMap::new`], but a list with collinear interior breakpoints is
    /// rejected rather than simplified.
    pub fn from_canonical(points: Vec<Point>) -> Result<Self> {
        validate(&points)?;
        if let Some(i) = points
            .windows(3)
            .position(|w| collinear(&w[0], &w[1], &w[2]))
        {
            return Err(Error::InvalidMap(format!(
                "breakpoints[{}] is collinear with its neighbours",
                i + 1
            )));
        }
        Ok(PlMap { points })
    }

    pub fn identity() -> Self {
        PlMap {
            points: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::one(), Rational::one()),
            ],
        }
    }

    pub fn constant(c: Rational) -> Result<Self> {
        PlMap::new(vec![(Rational::zero(), c.clone()), (Rational::one(), c)])
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Number of linear pieces.
    pub fn piece_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn slopes(&self) -> impl Iterator<Item = Rational> + '_ {
        self.points.windows(2).map(|w| slope(&w[0], &w[1]))
    }

    pub fn is_constant(&self) -> bool {
        self.points.len() == 2 && self.points[0].1 == self.points[1].1
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        eval_points(&self.points, x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PlMap) -> Result<PlMap> {
        self.compose_capped(inner, PIECE_BUDGET)
    }

    pub fn compose_capped(&self, inner: &PlMap, cap: usize) -> Result<PlMap> {
        Ok(PlMap {
            points: compose_points(&self.points, &inner.points, cap)?,
        })
    }

    /// The `n`-fold composition `self ∘ … ∘ self`.
    pub fn iterate(&self, n: u32) -> Result<PlMap> {
        self.iterate_capped(n, PIECE_BUDGET)
    }

    pub fn iterate_capped(&self, n: u32, cap: usize) -> Result<PlMap> {
        if n == 0 {
            return Err(Error::Parameter(
                "iteration count must be at least 1".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose_capped(&acc, cap)?;
        }
        Ok(acc)
    }

    /// Maximal intervals of monotonicity, as `(lo, hi)` pairs.
    pub fn monotone_laps(&self) -> Result<Vec<(Rational, Rational)>> {
        let mut laps = Vec::new();
        let mut start = self.points[0].0.clone();
        let mut prev: Option<Ordering> = None;
        for w in self.points.windows(2) {
            let dir = w[0].1.cmp(&w[1].1);
            if dir == Ordering::Equal {
                return Err(Error::FlatSegment {
                    level: w[0].1.clone().into(),
                    lo: w[0].0.clone().into(),
                    hi: w[1].0.clone().into(),
                });
            }
            if prev.is_some_and(|p| p != dir) {
                laps.push((start, w[0].0.clone()));
                start = w[0].0.clone();
            }
            prev = Some(dir);
        }
        laps.push((start, self.points[self.points.len() - 1].0.clone()));
        Ok(laps)
    }

    /// Number of maximal intervals of monotonicity. Fails on any flat piece.
    pub fn laps(&self) -> Result<usize> {
        self.monotone_laps().map(|l| l.len())
    }

    /// Sorted solutions of `self(x) = y`.
    pub fn preimage(&self, y: &Rational) -> Result<Vec<Rational>> {
        if y.is_negative() || y > &Rational::one() {
            return Err(Error::Domain {
                x: y.clone().into(),
                lo: Rational::zero().into(),
                hi: Rational::one().into(),
            });
        }
        let mut out: Vec<Rational> = Vec::new();
        for w in self.points.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            if y0 == y1 {
                if y0 == y {
                    return Err(Error::FlatSegment {
                        level: y.clone().into(),
                        lo: x0.clone().into(),
                        hi: x1.clone().into(),
                    });
                }
                continue;
            }
            let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
            if y < lo || y > hi {
                continue;
            }
            let x = x0 + (y - y0) * (x1 - x0) / (y1 - y0);
            if out.last() != Some(&x) {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Restriction to `[lo, hi]` as a partial map.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Result<Branch> {
        Ok(Branch {
            points: restrict_points(&self.points, lo, hi)?,
        })
    }

    /// Exact inverse of `self` restricted to `[lo, hi]`, defined on the image
    /// of that interval.
    pub fn inverse_branch(&self, lo: &Rational, hi: &Rational) -> Result<Branch> {
        self.restrict(lo, hi)?.inverse()
    }

    /// Slope of the first linear piece.
    pub fn slope_at_zero(&self) -> Rational {
        slope(&self.points[0], &self.points[1])
    }

    /// Smallest interior breakpoint.
    pub fn first_kink(&self) -> Result<Rational> {
        match self.points.get(1) {
            Some(p) if self.points.len() > 2 => Ok(p.0.clone()),
            _ => Err(Error::GloballyLinear),
        }
    }

    /// Interior breakpoints.
    pub fn kinks(&self) -> impl Iterator<Item = &Rational> {
        self.points[1..self.points.len() - 1].iter().map(|p| &p.0)
    }

    pub fn to_branch(&self) -> Branch {
        Branch {
            points: self.points.clone(),
        }
    }
}

fn validate(points: &[Point]) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidMap(msg));
    if points.len() < 2 {
        return bad(format!(
            "needs at least 2 breakpoints, got {}",
            points.len()
        ));
    }
    if !points[0].0.is_zero() {
        return bad(format!(
            "breakpoints[0]: first x must be 0, got {}",
            points[0].0
        ));
    }
    let last = points.len() - 1;
    if !points[last].0.is_one() {
        return bad(format!(
            "breakpoints[{last}]: last x must be 1, got {}",
            points[last].0
        ));
    }
    for (i, w) in points.windows(2).enumerate() {
        if w[1].0 <= w[0].0 {
            return bad(format!(
                "breakpoints[{}]: x = {} does not exceed the previous x = {}",
                i + 1,
                w[1].0,
                w[0].0
            ));
        }
    }
    for (i, (_, y)) in points.iter().enumerate() {
        if y.is_negative() || y > &Rational::one() {
            return bad(format!("breakpoints[{i}]: y = {y} is outside [0, 1]"));
        }
    }
    Ok(())
}

impl Branch {
    /// A partial PL map from breakpoints with strictly increasing `x`.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidMap(
                "a branch needs at least 2 breakpoints".into(),
            ));
        }
        if let Some(i) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidMap(format!(
                "breakpoints[{}]: x is not increasing",
                i + 1
            )));
        }
        Ok(Branch {
            points: canonicalize(points),
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.points[0].0, &self.points[self.points.len() - 1].0)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        eval_points(&self.points, x)
    }

    /// `self ∘ inner`; inner's values must lie in self's domain.
    pub fn compose(&self, inner: &Branch) -> Result<Branch> {
        Ok(Branch {
            points: compose_points(&self.points, &inner.points, PIECE_BUDGET)?,
        })
    }

    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Result<Branch> {
        Ok(Branch {
            points: restrict_points(&self.points, lo, hi)?,
        })
    }

    pub fn is_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].1 < w[1].1)
    }

    pub fn is_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].1 > w[1].1)
    }

    pub fn inverse(&self) -> Result<Branch> {
        let (lo, hi) = self.domain();
        invert_points(&self.points)
            .map(|points| Branch {
                points: canonicalize(points),
            })
            .ok_or_else(|| Error::NotMonotone {
                lo: lo.clone().into(),
                hi: hi.clone().into(),
            })
    }

    pub fn is_canonical(&self) -> bool {
        is_canonical(&self.points)
    }

    /// Promote to a [`PlMap`] when the domain is `[0, 1]` and values fit.
    pub fn into_map(self) -> Result<PlMap> {
        PlMap::new(self.points)
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: &PlMap, inner: &PlMap) -> Result<PlMap> {
    outer.compose(inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn map(pts: &[(i64, i64, i64, i64)]) -> PlMap {
        PlMap::new(
            pts.iter()
                .map(|&(a, b, c, d)| (rat(a, b), rat(c, d)))
                .collect(),
        )
        .unwrap()
    }

    fn tent() -> PlMap {
        map(&[(0, 1, 0, 1), (1, 2, 1, 1), (1, 1, 0, 1)])
    }

    #[test]
    fn eval_tent() {
        let f = tent();
        assert_eq!(f.eval(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(f.eval(&int(0)).unwrap(), int(0));
        assert_eq!(f.eval(&rat(2, 3)).unwrap(), rat(2, 3));
        assert!(matches!(f.eval(&rat(5, 4)), Err(Error::Domain { .. })));
        assert!(matches!(f.eval(&rat(-1, 4)), Err(Error::Domain { .. })));
    }

    #[test]
    fn validation_errors() {
        let e = PlMap::new(vec![
            (int(0), int(0)),
            (rat(1, 2), rat(3, 2)),
            (int(1), int(0)),
        ]);
        assert!(matches!(e, Err(Error::InvalidMap(ref m)) if m.contains("breakpoints[1]")));
        assert!(PlMap::new(vec![(rat(1, 4), int(0)), (int(1), int(0))]).is_err());
        assert!(PlMap::new(vec![
            (int(0), int(0)),
            (rat(1, 2), int(0)),
            (rat(1, 2), int(1)),
            (int(1), int(0))
        ])
        .is_err());
        assert!(PlMap::new(vec![(int(0), int(0))]).is_err());
    }

    #[test]
    fn canonical_form_drops_collinear_points() {
        let m = map(&[(0, 1, 0, 1), (1, 4, 1, 4), (1, 2, 1, 2), (1, 1, 1, 1)]);
        assert_eq!(m, PlMap::identity());
        let strict = PlMap::from_canonical(vec![
            (int(0), int(0)),
            (rat(1, 3), rat(1, 3)),
            (int(1), int(1)),
        ]);
        assert!(matches!(strict, Err(Error::InvalidMap(ref m)) if m.contains("breakpoints[1]")));
    }

    #[test]
    fn compose_tent_with_itself() {
        let f2 = tent().compose(&tent()).unwrap();
        let xs: Vec<_> = f2.points().iter().map(|p| p.0.clone()).collect();
        assert_eq!(xs, vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)]);
        assert_eq!(f2.laps().unwrap(), 4);
        assert_eq!(f2.first_kink().unwrap(), rat(1, 4));
        assert_eq!(PlMap::identity().compose(&tent()).unwrap(), tent());
        assert_eq!(tent().compose(&PlMap::identity()).unwrap(), tent());
    }

    #[test]
    fn piece_budget() {
        let err = tent().iterate_capped(6, 40).unwrap_err();
        assert!(matches!(err, Error::PieceBudget { cap: 40, .. }));
        assert_eq!(tent().iterate_capped(5, 40).unwrap().laps().unwrap(), 32);
        assert!(tent().iterate(0).is_err());
    }

    #[test]
    fn laps_and_flat_pieces() {
        assert_eq!(tent().laps().unwrap(), 2);
        assert_eq!(PlMap::identity().laps().unwrap(), 1);
        let flat = map(&[(0, 1, 0, 1), (1, 3, 1, 2), (2, 3, 1, 2), (1, 1, 1, 1)]);
        assert!(matches!(flat.laps(), Err(Error::FlatSegment { .. })));
        assert!(PlMap::constant(rat(1, 3)).unwrap().laps().is_err());
    }

    #[test]
    fn preimages() {
        assert_eq!(tent().preimage(&int(0)).unwrap(), vec![int(0), int(1)]);
        assert_eq!(
            tent().preimage(&rat(1, 2)).unwrap(),
            vec![rat(1, 4), rat(3, 4)]
        );
        assert_eq!(tent().preimage(&int(1)).unwrap(), vec![rat(1, 2)]);
        let flat = map(&[(0, 1, 0, 1), (1, 3, 1, 2), (2, 3, 1, 2), (1, 1, 1, 1)]);
        assert!(matches!(
            flat.preimage(&rat(1, 2)),
            Err(Error::FlatSegment { .. })
        ));
        assert_eq!(flat.preimage(&rat(1, 4)).unwrap(), vec![rat(1, 6)]);
        assert!(tent().preimage(&int(2)).is_err());
    }

    #[test]
    fn inverse_branches_of_tent() {
        let left = tent().inverse_branch(&int(0), &rat(1, 2)).unwrap();
        assert_eq!(
            left,
            Branch::new(vec![(int(0), int(0)), (int(1), rat(1, 2))]).unwrap()
        );
        let right = tent().inverse_branch(&rat(1, 2), &int(1)).unwrap();
        assert_eq!(
            right,
            Branch::new(vec![(int(0), int(1)), (int(1), rat(1, 2))]).unwrap()
        );
        assert_eq!(right.eval(&rat(1, 2)).unwrap(), rat(3, 4));
        assert!(matches!(
            tent().inverse_branch(&rat(1, 4), &rat(3, 4)),
            Err(Error::NotMonotone { .. })
        ));
    }

    #[test]
    fn slopes_and_kinks() {
        assert_eq!(tent().slope_at_zero(), int(2));
        let h = map(&[(0, 1, 0, 1), (1, 3, 1, 2), (1, 1, 1, 1)]);
        assert_eq!(h.slope_at_zero(), rat(3, 2));
        assert_eq!(tent().first_kink().unwrap(), rat(1, 2));
        assert_eq!(PlMap::identity().first_kink(), Err(Error::GloballyLinear));
    }

    #[test]
    fn branch_round_trip() {
        let m = map(&[(0, 1, 0, 1), (1, 5, 3, 5), (1, 2, 1, 1), (1, 1, 0, 1)]);
        let lap = m.restrict(&int(0), &rat(1, 2)).unwrap();
        let inv = m.inverse_branch(&int(0), &rat(1, 2)).unwrap();
        let id = inv.compose(&lap).unwrap();
        assert_eq!(
            id,
            Branch::new(vec![(int(0), int(0)), (rat(1, 2), rat(1, 2))]).unwrap()
        );
    }
}
