//! Unimodal maps, the tent map and its sawtooth commutators, and grids of
//! iterated pre-images of zero.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::plmap::{Branch, PlMap, PIECE_BUDGET};
use crate::rational::{int, rat, Rational};

/// A PL map that rises strictly from `(0, 0)` to `(v, 1)` and falls strictly
/// back to `(1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodalMap {
    map: PlMap,
    v: Rational,
    left_inv: Branch,
    right_inv: Branch,
}

impl UnimodalMap {
    /// Validate `map` as unimodal. When `v` is `None` the turning point is the
    /// breakpoint where the map reaches 1.
    pub fn new(map: PlMap, v: Option<Rational>) -> Result<Self> {
        let bad = |m: String| Err(Error::NotUnimodal(m));
        let pts = map.points();
        if !pts[0].1.is_zero() {
            return bad(format!("g(0) = {}, expected 0", pts[0].1));
        }
        if !pts[pts.len() - 1].1.is_zero() {
            return bad(format!("g(1) = {}, expected 0", pts[pts.len() - 1].1));
        }
        let v = match v {
            Some(v) => v,
            None => match pts.iter().find(|p| p.1.is_one()) {
                Some(p) => p.0.clone(),
                None => return bad("the map never reaches 1".into()),
            },
        };
        if !v.is_positive() || v >= Rational::one() {
            return bad(format!("turning point {v} is not inside (0, 1)"));
        }
        let gv = map.eval(&v)?;
        if !gv.is_one() {
            return bad(format!("g(v) = {gv} at v = {v}, expected 1"));
        }
        for w in pts.windows(2) {
            let rising = w[1].0 <= v;
            let ok = if rising {
                w[1].1 > w[0].1
            } else {
                w[1].1 < w[0].1
            };
            if !ok {
                return bad(format!(
                    "piece [{}, {}] is not strictly {} the turning point",
                    w[0].0,
                    w[1].0,
                    if rising {
                        "increasing before"
                    } else {
                        "decreasing after"
                    }
                ));
            }
        }
        let left_inv = map.inverse_branch(&Rational::zero(), &v)?;
        let right_inv = map.inverse_branch(&v, &Rational::one())?;
        Ok(UnimodalMap {
            map,
            v,
            left_inv,
            right_inv,
        })
    }

    pub fn map(&self) -> &PlMap {
        &self.map
    }

    pub fn into_map(self) -> PlMap {
        self.map
    }

    pub fn turning_point(&self) -> &Rational {
        &self.v
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.map.eval(x)
    }

    /// Inverse of the increasing branch: `[0, 1] → [0, v]`.
    pub fn left_inverse(&self) -> &Branch {
        &self.left_inv
    }

    /// Inverse of the decreasing branch: `[0, 1] → [v, 1]`.
    pub fn right_inverse(&self) -> &Branch {
        &self.right_inv
    }

    /// The unique positive fixed point, which lies on the decreasing branch.
    pub fn positive_fixed_point(&self) -> Rational {
        let pts = self.map.points();
        for w in pts.windows(2).filter(|w| w[0].0 >= self.v) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            if y0 >= x0 && y1 <= x1 {
                // y0 + s (x - x0) = x
                let s = (y1 - y0) / (x1 - x0);
                return (y0 - &s * x0) / (Rational::one() - s);
            }
        }
        unreachable!("a decreasing branch from 1 to 0 crosses the diagonal")
    }

    /// Sorted `g^{-1}(level)` for a sorted level set containing 1 as its
    /// last element.
    fn pull_back(&self, level: &[Rational]) -> Result<Vec<Rational>> {
        let left: Vec<Rational> = if level.len() > 256 {
            level
                .par_iter()
                .map(|y| self.left_inv.eval(y))
                .collect::<Result<_>>()?
        } else {
            level
                .iter()
                .map(|y| self.left_inv.eval(y))
                .collect::<Result<_>>()?
        };
        let right: Vec<Rational> = if level.len() > 256 {
            level
                .par_iter()
                .rev()
                .map(|y| self.right_inv.eval(y))
                .collect::<Result<_>>()?
        } else {
            level
                .iter()
                .rev()
                .map(|y| self.right_inv.eval(y))
                .collect::<Result<_>>()?
        };
        let mut out = left;
        out.extend(right.into_iter().skip(1));
        Ok(out)
    }
}

/// The tent map `x ↦ 1 − |1 − 2x|`.
pub fn tent() -> UnimodalMap {
    let map = PlMap::new(vec![
        (int(0), int(0)),
        (rat(1, 2), int(1)),
        (int(1), int(0)),
    ])
    .expect("tent breakpoints are valid");
    UnimodalMap::new(map, Some(rat(1, 2))).expect("tent is unimodal")
}

/// The `t`-lap sawtooth with slopes `±t` and kinks at `k/t`, alternating
/// between heights 0 and 1. `xi(1)` is the identity, `xi(2)` the tent map.
pub fn xi(t: u64) -> Result<PlMap> {
    if t == 0 {
        return Err(Error::Parameter("t must be at least 1".into()));
    }
    if t as usize >= PIECE_BUDGET {
        return Err(Error::PieceBudget {
            needed: t as usize + 1,
            cap: PIECE_BUDGET,
        });
    }
    let t_i = t as i64;
    PlMap::new((0..=t_i).map(|k| (rat(k, t_i), int(k % 2))).collect())
}

/// A unimodal map whose increasing branch has a slope-1/4 piece crossing the
/// diagonal at 7/12, an attracting fixed point. The interval `[1/2, 5/8]`
/// is mapped into itself, so no iterated pre-image of 0 ever enters it.
pub fn attracting_fixture() -> UnimodalMap {
    let map = PlMap::new(vec![
        (int(0), int(0)),
        (rat(1, 4), rat(1, 2)),
        (rat(3, 4), rat(5, 8)),
        (rat(7, 8), int(1)),
        (int(1), int(0)),
    ])
    .expect("fixture breakpoints are valid");
    UnimodalMap::new(map, Some(rat(7, 8))).expect("fixture is unimodal")
}

/// The sorted solutions `μ_{n,0} < … < μ_{n,2^{n-1}}` of `g^n(x) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageGrid {
    depth: u32,
    points: Vec<Rational>,
}

impl PreimageGrid {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn get(&self, k: usize) -> Option<&Rational> {
        self.points.get(k)
    }

    /// Largest distance between consecutive points.
    pub fn max_gap(&self) -> Rational {
        self.points
            .windows(2)
            .map(|w| &w[1] - &w[0])
            .max()
            .expect("a grid has at least two points")
    }
}

fn check_depth(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("depth must be at least 1".into()));
    }
    if n > 21 || (1usize << (n - 1)) + 1 > PIECE_BUDGET {
        return Err(Error::PieceBudget {
            needed: if n > 63 {
                usize::MAX
            } else {
                (1usize << (n - 1)) + 1
            },
            cap: PIECE_BUDGET,
        });
    }
    Ok(())
}

/// Grids for every depth `1..=n`, built level by level from `{0, 1}` by
/// pulling back through both branches of `g`.
pub fn mu_grids(g: &UnimodalMap, n: u32) -> Result<Vec<PreimageGrid>> {
    check_depth(n)?;
    let mut grids = Vec::with_capacity(n as usize);
    let mut level = vec![Rational::zero(), Rational::one()];
    for depth in 1..=n {
        if depth > 1 {
            level = g.pull_back(&level)?;
        }
        grids.push(PreimageGrid {
            depth,
            points: level.clone(),
        });
    }
    Ok(grids)
}

pub fn mu_grid(g: &UnimodalMap, n: u32) -> Result<PreimageGrid> {
    check_depth(n)?;
    let mut level = vec![Rational::zero(), Rational::one()];
    for _ in 1..n {
        level = g.pull_back(&level)?;
    }
    Ok(PreimageGrid {
        depth: n,
        points: level,
    })
}

/// Maximum gap of `⋃_{m≤n} g^{-m}(0)` for each `n` in `1..=depth`.
///
/// This is finite-depth evidence about density of the complete pre-image of
/// zero, never a proof either way.
pub fn density_report(g: &UnimodalMap, depth: u32) -> Result<Vec<Rational>> {
    // The grids are nested, so the union up to depth n is the depth-n grid.
    Ok(mu_grids(g, depth)?
        .iter()
        .map(PreimageGrid::max_gap)
        .collect())
}

/// Check, at depth `n ≥ 2` and for every `k ≤ 2^{n-2}`:
/// `g(μ_{n,k}) = μ_{n-1,k}`, `g(μ_{n,k}) = g(μ_{n,2^{n-1}-k})` and
/// `μ_{n-1,k} = μ_{n,2k}`.
pub fn check_mu_identities(g: &UnimodalMap, n: u32) -> Result<bool> {
    if n < 2 {
        return Err(Error::Parameter("identity check needs n >= 2".into()));
    }
    let grids = mu_grids(g, n)?;
    let (coarse, fine) = (&grids[n as usize - 2].points, &grids[n as usize - 1].points);
    let half = 1usize << (n - 2);
    let last = 1usize << (n - 1);
    for k in 0..=half {
        let gk = g.eval(&fine[k])?;
        if gk != coarse[k] || gk != g.eval(&fine[last - k])? || coarse[k] != fine[2 * k] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_values() {
        let f = tent();
        assert_eq!(f.eval(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(f.eval(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(f.eval(&rat(2, 3)).unwrap(), rat(2, 3));
        assert_eq!(f.positive_fixed_point(), rat(2, 3));
    }

    #[test]
    fn xi_small_cases() {
        assert_eq!(xi(1).unwrap(), PlMap::identity());
        assert_eq!(&xi(2).unwrap(), tent().map());
        let x5 = xi(5).unwrap();
        let kinks: Vec<_> = x5.points()[1..5].to_vec();
        assert_eq!(
            kinks,
            vec![
                (rat(1, 5), int(1)),
                (rat(2, 5), int(0)),
                (rat(3, 5), int(1)),
                (rat(4, 5), int(0))
            ]
        );
        assert_eq!(x5.laps().unwrap(), 5);
        assert_eq!(x5.slope_at_zero(), int(5));
        assert!(xi(0).is_err());
    }

    #[test]
    fn unimodal_validation() {
        let not_zero_at_one = PlMap::new(vec![
            (int(0), int(0)),
            (rat(1, 2), int(1)),
            (int(1), rat(1, 3)),
        ])
        .unwrap();
        assert!(matches!(
            UnimodalMap::new(not_zero_at_one, None),
            Err(Error::NotUnimodal(_))
        ));

        let low_peak = PlMap::new(vec![
            (int(0), int(0)),
            (rat(1, 2), rat(3, 4)),
            (int(1), int(0)),
        ])
        .unwrap();
        assert!(UnimodalMap::new(low_peak, None).is_err());

        let bimodal = PlMap::new(vec![
            (int(0), int(0)),
            (rat(1, 4), int(1)),
            (rat(1, 2), rat(1, 2)),
            (rat(3, 4), int(1)),
            (int(1), int(0)),
        ])
        .unwrap();
        assert!(UnimodalMap::new(bimodal, None).is_err());

        let wrong_v = UnimodalMap::new(tent().into_map(), Some(rat(1, 3)));
        assert!(wrong_v.is_err());

        let flat_top = PlMap::new(vec![
            (int(0), int(0)),
            (rat(1, 3), int(1)),
            (rat(2, 3), int(1)),
            (int(1), int(0)),
        ])
        .unwrap();
        assert!(UnimodalMap::new(flat_top, None).is_err());
    }

    #[test]
    fn inferred_turning_point() {
        let m = PlMap::new(vec![
            (int(0), int(0)),
            (rat(1, 3), int(1)),
            (int(1), int(0)),
        ])
        .unwrap();
        let g = UnimodalMap::new(m, None).unwrap();
        assert_eq!(g.turning_point(), &rat(1, 3));
    }

    #[test]
    fn grids() {
        let g = mu_grid(&tent(), 4).unwrap();
        let expect: Vec<_> = (0..=8).map(|k| rat(k, 8)).collect();
        assert_eq!(g.points(), expect.as_slice());
        assert_eq!(
            mu_grid(&attracting_fixture(), 1).unwrap().points(),
            &[int(0), int(1)]
        );
        assert!(mu_grid(&tent(), 0).is_err());
        assert!(matches!(
            mu_grid(&tent(), 40),
            Err(Error::PieceBudget { .. })
        ));
    }

    #[test]
    fn density_of_tent() {
        let gaps = density_report(&tent(), 6).unwrap();
        let expect: Vec<_> = (0..6).map(|n| rat(1, 1 << n)).collect();
        assert_eq!(gaps, expect);
    }

    #[test]
    fn identities_hold() {
        assert!(check_mu_identities(&tent(), 5).unwrap());
        assert!(check_mu_identities(&attracting_fixture(), 2).unwrap());
        assert!(check_mu_identities(&tent(), 1).is_err());
    }
}
