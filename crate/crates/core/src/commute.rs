//! Commutation with a unimodal map, and the lap-halving construction for
//! commutators with an even number of laps.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::plmap::{Branch, PlMap, Point};
use crate::rational::{is_power_of_two, Rational};
use crate::unimodal::UnimodalMap;

/// Exact test of `psi ∘ g = g ∘ psi`.
pub fn commutes(g: &UnimodalMap, psi: &PlMap) -> Result<bool> {
    Ok(psi.compose(g.map())? == g.map().compose(psi)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "power")]
pub enum Triviality {
    Constant,
    /// `psi = g^m`, with `m = 0` meaning the identity.
    IterateOf(u32),
    NonTrivial,
}

/// Whether a commutator of `g` is constant, an iterate of `g`, or neither.
///
/// An iterate `g^m` has exactly `2^m` laps, so at most one iterate needs to
/// be compared.
pub fn classify_triviality(g: &UnimodalMap, psi: &PlMap) -> Result<Triviality> {
    if !commutes(g, psi)? {
        return Err(Error::NotCommuting);
    }
    if psi.is_constant() {
        return Ok(Triviality::Constant);
    }
    let laps = psi.laps()?;
    if !is_power_of_two(laps as u64) {
        return Ok(Triviality::NonTrivial);
    }
    let m = laps.trailing_zeros();
    let iterate = if m == 0 {
        PlMap::identity()
    } else {
        g.map().iterate(m)?
    };
    Ok(if psi == &iterate {
        Triviality::IterateOf(m)
    } else {
        Triviality::NonTrivial
    })
}

/// Laps of a commutator: `endpoints` are where `psi` alternates between 0
/// and 1, `splits[k]` is the point of lap `k` where `psi` equals the turning
/// point `v` of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LapDecomposition {
    pub endpoints: Vec<Rational>,
    pub splits: Vec<Rational>,
    pub lapcount: usize,
}

impl LapDecomposition {
    pub fn lap(&self, k: usize) -> (&Rational, &Rational) {
        (&self.endpoints[k], &self.endpoints[k + 1])
    }

    /// `I_{k,0}` for `s = 0`, `I_{k,1}` for `s = 1`.
    pub fn half_lap(&self, k: usize, s: u8) -> (&Rational, &Rational) {
        if s == 0 {
            (&self.endpoints[k], &self.splits[k])
        } else {
            (&self.splits[k], &self.endpoints[k + 1])
        }
    }
}

fn decompose(g: &UnimodalMap, psi: &PlMap) -> Result<LapDecomposition> {
    if psi.is_constant() {
        return Err(Error::LapStructure("psi is constant".into()));
    }
    let laps = psi.monotone_laps()?;
    let mut endpoints = vec![Rational::zero()];
    endpoints.extend(laps.iter().map(|(_, hi)| hi.clone()));
    for (k, e) in endpoints.iter().enumerate() {
        let want = if k % 2 == 0 {
            Rational::zero()
        } else {
            Rational::one()
        };
        let got = psi.eval(e)?;
        if got != want {
            return Err(Error::LapStructure(format!(
                "psi({e}) = {got} at lap endpoint {k}, expected {want}"
            )));
        }
    }
    let splits = laps
        .iter()
        .map(|(lo, hi)| psi.inverse_branch(lo, hi)?.eval(g.turning_point()))
        .collect::<Result<Vec<_>>>()?;
    Ok(LapDecomposition {
        lapcount: laps.len(),
        endpoints,
        splits,
    })
}

pub fn lap_decomposition(g: &UnimodalMap, psi: &PlMap) -> Result<LapDecomposition> {
    if !commutes(g, psi)? {
        return Err(Error::NotCommuting);
    }
    decompose(g, psi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryCheck {
    pub label: &'static str,
    pub identity: String,
    pub pass: bool,
    #[serde(serialize_with = "crate::format::ser_opt_rational")]
    pub witness: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryReport {
    pub laps: usize,
    pub checks: Vec<BoundaryCheck>,
    pub notes: Vec<String>,
}

impl BoundaryReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, label: &str) -> Option<&BoundaryCheck> {
        self.checks.iter().find(|c| c.label == label)
    }
}

/// Boundary behaviour every non-constant PL commutator of `g` must show.
/// A failed check points at a bug, not at a counterexample.
pub fn boundary_checks(g: &UnimodalMap, psi: &PlMap) -> Result<BoundaryReport> {
    if !commutes(g, psi)? {
        return Err(Error::NotCommuting);
    }
    if psi.is_constant() {
        return Err(Error::LapStructure("psi is constant".into()));
    }
    let zero = Rational::zero();
    let one = Rational::one();
    let v = g.turning_point();
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    let at0 = psi.eval(&zero)?;
    checks.push(BoundaryCheck {
        label: "origin-fixed",
        identity: "psi(0) = 0".into(),
        pass: at0.is_zero(),
        witness: (!at0.is_zero()).then(|| zero.clone()),
    });

    let at1 = psi.eval(&one)?;
    let binary = at1.is_zero() || at1.is_one();
    checks.push(BoundaryCheck {
        label: "endpoint-binary",
        identity: "psi(1) in {0, 1}".into(),
        pass: binary,
        witness: (!binary).then(|| one.clone()),
    });

    let laps = psi.monotone_laps()?;
    let mut surjective_fail = None;
    for (lo, hi) in &laps {
        let (a, b) = (psi.eval(lo)?, psi.eval(hi)?);
        let onto = (a.is_zero() && b.is_one()) || (a.is_one() && b.is_zero());
        if !onto {
            surjective_fail = Some(lo.clone());
            break;
        }
    }
    checks.push(BoundaryCheck {
        label: "lap-surjective",
        identity: "psi maps every maximal monotone interval onto [0, 1]".into(),
        pass: surjective_fail.is_none(),
        witness: surjective_fail,
    });

    let n = laps.len();
    let mut endpoints = vec![zero.clone()];
    endpoints.extend(laps.iter().map(|(_, hi)| hi.clone()));
    let mut symmetry_fail = None;
    for k in 0..=n {
        if g.eval(&endpoints[k])? != g.eval(&endpoints[n - k])? {
            symmetry_fail = Some(endpoints[k].clone());
            break;
        }
    }
    checks.push(BoundaryCheck {
        label: "endpoint-symmetry",
        identity: format!("g(e_k) = g(e_(n-k)) over the lap endpoints, n = {n}"),
        pass: symmetry_fail.is_none(),
        witness: symmetry_fail,
    });

    let psi_v = psi.eval(v)?;
    let (identity, pass) = if n % 2 == 1 {
        ("odd lap count: psi(v) = v".to_string(), &psi_v == v)
    } else {
        let t = n / 2;
        let want = if t % 2 == 0 {
            zero.clone()
        } else {
            one.clone()
        };
        if t % 2 == 1 {
            notes.push(format!(
                "lap count {n} = 2 (mod 4): psi(v) = 1 here; the value 0 holds only when 4 divides the lap count"
            ));
        }
        (
            format!("even lap count {n}: e_{t} = v and psi(v) = {want}"),
            endpoints[t] == *v && psi_v == want,
        )
    };
    checks.push(BoundaryCheck {
        label: "turning-point-image",
        identity,
        pass,
        witness: (!pass).then(|| v.clone()),
    });

    Ok(BoundaryReport {
        laps: n,
        checks,
        notes,
    })
}

/// The lap of `psi` that `g` should carry the half-lap `I_{k,s}` onto.
fn expected_image_lap(k: usize, s: usize, t: usize) -> usize {
    if k < t {
        2 * k + s
    } else {
        4 * t - 1 - 2 * k - s
    }
}

fn check_half_lap_images(g: &UnimodalMap, laps: &LapDecomposition) -> Result<()> {
    let t = laps.lapcount / 2;
    let v = g.turning_point();
    for k in 0..laps.lapcount {
        for s in 0..2u8 {
            let (a, b) = laps.half_lap(k, s);
            if a < v && v < b {
                return Err(Error::LapStructure(format!(
                    "turning point lies inside half-lap ({a}, {b})"
                )));
            }
            let j = expected_image_lap(k, s as usize, t);
            let (ga, gb) = (g.eval(a)?, g.eval(b)?);
            let (lo, hi) = if ga < gb { (ga, gb) } else { (gb, ga) };
            if (&lo, &hi) != laps.lap(j) {
                return Err(Error::LapStructure(format!(
                    "g maps half-lap ({a}, {b}) to ({lo}, {hi}), expected lap {j}"
                )));
            }
        }
    }
    Ok(())
}

/// Given a commutator `psi` of `g` with `2t` laps, build a commutator with
/// `t` laps satisfying `g ∘ halve(g, psi) = psi`.
///
/// Lap `k` of the result is an inverse branch of `g` applied to lap `k` of
/// `psi`: the increasing branch when `k ≡ 0, 3 (mod 4)`, the decreasing one
/// when `k ≡ 1, 2 (mod 4)`.
pub fn halve(g: &UnimodalMap, psi: &PlMap) -> Result<PlMap> {
    if !commutes(g, psi)? {
        return Err(Error::NotCommuting);
    }
    let laps = decompose(g, psi)?;
    if laps.lapcount % 2 == 1 {
        return Err(Error::OddLapCount(laps.lapcount));
    }
    check_half_lap_images(g, &laps)?;

    let mut points: Vec<Point> = Vec::new();
    for k in 0..laps.lapcount {
        let branch: &Branch = match k % 4 {
            0 | 3 => g.left_inverse(),
            _ => g.right_inverse(),
        };
        let (lo, hi) = laps.lap(k);
        let piece = branch.compose(&psi.restrict(lo, hi)?)?;
        let mut it = piece.points().iter();
        if let Some(first) = it.next() {
            match points.last() {
                Some(prev) if prev != first => {
                    return Err(Error::Discontinuity {
                        at: first.0.clone(),
                    });
                }
                Some(_) => {}
                None => points.push(first.clone()),
            }
        }
        points.extend(it.cloned());
    }
    let half = PlMap::new(points)?;
    debug_assert_eq!(&g.map().compose(&half)?, psi);
    Ok(half)
}

/// Halve while the lap count is even; the result has an odd lap count.
pub fn reduce_fully(g: &UnimodalMap, psi: &PlMap) -> Result<PlMap> {
    if !commutes(g, psi)? {
        return Err(Error::NotCommuting);
    }
    let mut current = psi.clone();
    while current.laps()? % 2 == 0 {
        current = halve(g, &current)?;
    }
    Ok(current)
}

/// `a · g'(0) / psi'(0)` with `a` the first kink of `g`; for a commutator
/// with `psi'(0) > g'(0)` this is the first kink of `psi`.
pub fn predicted_first_kink(g: &UnimodalMap, psi: &PlMap) -> Result<Rational> {
    let a = g.map().first_kink()?;
    let g_slope = g.map().slope_at_zero();
    let psi_slope = psi.slope_at_zero();
    if psi_slope <= g_slope {
        return Err(Error::SlopeHypothesis {
            psi_slope: psi_slope.into(),
            g_slope: g_slope.into(),
        });
    }
    Ok(a * g_slope / psi_slope)
}
