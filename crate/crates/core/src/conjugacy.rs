//! Conjugates of the tent map, the commutators they inherit from the sawtooth
//! family, and recovering a conjugacy from pre-image grids.

use std::collections::{BTreeMap, BTreeSet};

use dashu_float::FBig;
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::plmap::PlMap;
use crate::rational::{
    big_to_f64, exact_log2, int, is_power_of_two, ln_2_big, ln_big, to_f64, Rational,
    LOG_PRECISION_BITS,
};
use crate::unimodal::{mu_grid, mu_grids, tent, xi, UnimodalMap};

/// Default relative tolerance for floating-point comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Check that `h` is an increasing PL homeomorphism of `[0, 1]`.
pub fn validate_homeomorphism(h: &PlMap) -> Result<()> {
    let pts = h.points();
    if !pts[0].1.is_zero() {
        return Err(Error::NotHomeomorphism(format!("h(0) = {}", pts[0].1)));
    }
    if !pts[pts.len() - 1].1.is_one() {
        return Err(Error::NotHomeomorphism(format!(
            "h(1) = {}",
            pts[pts.len() - 1].1
        )));
    }
    if let Some(w) = pts.windows(2).find(|w| w[1].1 <= w[0].1) {
        return Err(Error::NotHomeomorphism(format!(
            "not strictly increasing on [{}, {}]",
            w[0].0, w[1].0
        )));
    }
    Ok(())
}

/// Inverse of an increasing PL homeomorphism.
pub fn invert_homeomorphism(h: &PlMap) -> Result<PlMap> {
    validate_homeomorphism(h)?;
    PlMap::new(
        h.points()
            .iter()
            .map(|(x, y)| (y.clone(), x.clone()))
            .collect(),
    )
}

/// `h ∘ g ∘ h⁻¹`, with turning point `h(v)`.
pub fn conjugate_map(g: &UnimodalMap, h: &PlMap) -> Result<UnimodalMap> {
    let h_inv = invert_homeomorphism(h)?;
    let map = h.compose(&g.map().compose(&h_inv)?)?;
    UnimodalMap::new(map, Some(h.eval(g.turning_point())?))
}

/// `ψ_t = h ∘ ξ_t ∘ h⁻¹`, the `t`-lap commutator of `g = h ∘ f ∘ h⁻¹`.
pub fn build_commutator(g: &UnimodalMap, h: &PlMap, t: u64) -> Result<PlMap> {
    if conjugate_map(&tent(), h)?.map() != g.map() {
        return Err(Error::ConjugacyMismatch);
    }
    let h_inv = invert_homeomorphism(h)?;
    h.compose(&xi(t)?.compose(&h_inv)?)
}

/// `μ_{n,k}(f) = k / 2^{n-1}` for the tent map `f`.
pub fn tent_grid_point(n: u32, k: usize) -> Rational {
    Rational::new(BigInt::from(k), BigInt::one() << (n - 1))
}

/// Interpolant through `(μ_{n,k}(f), μ_{n,k}(g))` at a fitted depth.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyFit {
    pub depth: u32,
    pub interpolant: PlMap,
    /// Canonical interpolants at `depth - 1` and `depth` coincide.
    pub stabilized: bool,
    /// Mean of `h(x) / x^alpha` over the window near 0, when it is non-empty.
    pub omega: Option<f64>,
    /// `log₂ g'(0)`.
    pub alpha: f64,
}

fn interpolant(grid: &[Rational], n: u32) -> Result<PlMap> {
    PlMap::new(
        grid.iter()
            .enumerate()
            .map(|(k, y)| (tent_grid_point(n, k), y.clone()))
            .collect(),
    )
}

fn alpha_big(g: &UnimodalMap) -> FBig {
    ln_big(&g.map().slope_at_zero()) / ln_2_big()
}

/// Sample `h(x_k) / x_k^alpha` over tent-grid points `x_k` whose image
/// `h(x_k) = μ_{N,k}(g)` lies in `(0, a/2]`, `a` the first kink of `g`.
fn omega_samples(g: &UnimodalMap, grid: &[Rational], n: u32) -> Result<Vec<f64>> {
    let limit = g.map().first_kink()? / int(2);
    let slope = g.map().slope_at_zero();
    let exact_alpha = exact_log2(&slope);
    let alpha = alpha_big(g);
    let mut out = Vec::new();
    for (k, mu) in grid.iter().enumerate().skip(1) {
        if mu > &limit {
            break;
        }
        let x = tent_grid_point(n, k);
        let w = match exact_alpha {
            Some(e) => to_f64(&(mu / Pow::pow(&x, e as i32))),
            None => {
                let ln_w = ln_big(mu) - &alpha * ln_big(&x);
                big_to_f64(&ln_w.exp())
            }
        };
        out.push(w);
    }
    if out.is_empty() {
        return Err(Error::EmptyWindow(limit));
    }
    Ok(out)
}

/// Fit a PL conjugacy `h` with `h ∘ f = g ∘ h` by interpolating the depth-`depth`
/// pre-image grids of the tent map and of `g`.
pub fn fit_conjugacy(g: &UnimodalMap, depth: u32) -> Result<ConjugacyFit> {
    if depth < 2 {
        return Err(Error::Parameter("fit depth must be at least 2".into()));
    }
    let grids = mu_grids(g, depth)?;
    let fine = interpolant(grids[depth as usize - 1].points(), depth)?;
    let coarse = interpolant(grids[depth as usize - 2].points(), depth - 1)?;
    validate_homeomorphism(&fine)?;
    let omega = omega_samples(g, grids[depth as usize - 1].points(), depth)
        .ok()
        .map(|s| s.iter().sum::<f64>() / s.len() as f64);
    Ok(ConjugacyFit {
        depth,
        stabilized: fine == coarse,
        interpolant: fine,
        omega,
        alpha: big_to_f64(&alpha_big(g)),
    })
}

/// `|ln ψ'(0) − log₂(t) · ln g'(0)|`, zero exactly when the two slopes are
/// related by the power law in a case decidable over the rationals.
pub fn slope_law_residual(g: &UnimodalMap, psi: &PlMap, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::Parameter("t must be at least 1".into()));
    }
    let laps = psi.laps()?;
    if laps as u64 != t {
        return Err(Error::Parameter(format!(
            "psi has {laps} laps, expected t = {t}"
        )));
    }
    let g_slope = g.map().slope_at_zero();
    let psi_slope = psi.slope_at_zero();
    if !g_slope.is_positive() || !psi_slope.is_positive() {
        return Err(Error::Parameter("slopes at 0 must be positive".into()));
    }
    if g_slope == int(2) && psi_slope == int(t as i64) {
        return Ok(0.0);
    }
    if is_power_of_two(t) {
        let m = t.trailing_zeros() as i32;
        if psi_slope == Pow::pow(&g_slope, m) {
            return Ok(0.0);
        }
    }
    let t_big = FBig::from(t).with_precision(LOG_PRECISION_BITS).value();
    let log2_t = t_big.ln() / ln_2_big();
    let residual = ln_big(&psi_slope) - log2_t * ln_big(&g_slope);
    Ok(big_to_f64(&residual).abs())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawReport {
    pub depth: u32,
    pub applicable: bool,
    pub reason: Option<String>,
    pub alpha: f64,
    pub omega: Option<f64>,
    pub samples: usize,
    pub max_omega_spread: Option<f64>,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

/// Check that the fitted conjugacy behaves like `ω · x^alpha` near 0 by
/// measuring the relative spread of `h(x_k) / x_k^alpha` on the window.
///
/// Only meaningful when the fit has stabilized; otherwise the report is
/// marked not applicable.
pub fn power_law_check(g: &UnimodalMap, depth: u32, tolerance: f64) -> Result<PowerLawReport> {
    if depth < 3 {
        return Err(Error::Parameter("power-law check needs depth >= 3".into()));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    let fit = fit_conjugacy(g, depth)?;
    if !fit.stabilized {
        return Ok(PowerLawReport {
            depth,
            applicable: false,
            reason: Some("conjugacy fit did not stabilize".into()),
            alpha: fit.alpha,
            omega: None,
            samples: 0,
            max_omega_spread: None,
            tolerance,
            within_tolerance: false,
        });
    }
    let grid = mu_grid(g, depth)?;
    let samples = omega_samples(g, grid.points(), depth)?;
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| {
            (lo.min(w), hi.max(w))
        });
    let spread = (hi - lo) / mean.abs();
    Ok(PowerLawReport {
        depth,
        applicable: true,
        reason: None,
        alpha: fit.alpha,
        omega: Some(mean),
        samples: samples.len(),
        max_omega_spread: Some(spread),
        tolerance,
        within_tolerance: spread <= tolerance,
    })
}

/// `ψ(μ_{n,k}(g)) = μ_{n,kt}(g)` for every `k` with `kt ≤ 2^{n-1}`.
pub fn grid_transport_holds(g: &UnimodalMap, psi: &PlMap, t: u64, n: u32) -> Result<bool> {
    let grid = mu_grid(g, n)?;
    let pts = grid.points();
    let top = pts.len() - 1;
    for k in 0..=top / t as usize {
        if psi.eval(&pts[k])? != pts[k * t as usize] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `μ_{n,2k}(g) = g'(0) · μ_{n,k}(g)` whenever `μ_{n,k}(g)` is below the first
/// kink of `g`. Returns how many grid points were checked, or `None` on a
/// violation.
pub fn doubling_law_holds(g: &UnimodalMap, n: u32) -> Result<Option<usize>> {
    let grid = mu_grid(g, n)?;
    let pts = grid.points();
    let a = g.map().first_kink()?;
    let slope = g.map().slope_at_zero();
    let mut checked = 0;
    for k in 0..pts.len() {
        if pts[k] >= a || 2 * k >= pts.len() {
            break;
        }
        if pts[2 * k] != &slope * &pts[k] {
            return Ok(None);
        }
        checked += 1;
    }
    Ok(Some(checked))
}

/// `μ_{n,tk}(g) = ψ'(0) · μ_{n,k}(g)` whenever `μ_{n,k}(g)` does not exceed
/// the first kink of `ψ`. Returns the number of points checked, or `None`.
pub fn t_scaling_law_holds(g: &UnimodalMap, psi: &PlMap, t: u64, n: u32) -> Result<Option<usize>> {
    let grid = mu_grid(g, n)?;
    let pts = grid.points();
    let p = psi.first_kink()?;
    let slope = psi.slope_at_zero();
    let t = t as usize;
    let mut checked = 0;
    for k in 0..pts.len() {
        if pts[k] > p || k * t >= pts.len() {
            break;
        }
        if pts[k * t] != &slope * &pts[k] {
            return Ok(None);
        }
        checked += 1;
    }
    Ok(Some(checked))
}

/// Check `h(2x) = g'(0) h(x)` and `h(tx) = ψ'(0) h(x)` at depth-`n` dyadics
/// `x` up to `min(h⁻¹(a), h⁻¹(p))`, with `a`, `p` the first kinks of `g`
/// and `ψ`. Returns the number of points checked, or `None` on a violation.
pub fn scaling_relations_hold(
    h: &PlMap,
    g: &UnimodalMap,
    psi: &PlMap,
    t: u64,
    n: u32,
) -> Result<Option<usize>> {
    let h_inv = invert_homeomorphism(h)?;
    let a = h_inv.eval(&g.map().first_kink()?)?;
    let p = h_inv.eval(&psi.first_kink()?)?;
    let window = a.min(p);
    let (g_slope, psi_slope) = (g.map().slope_at_zero(), psi.slope_at_zero());
    let two = int(2);
    let t_r = int(t as i64);
    let mut checked = 0;
    for k in 0..=(1usize << (n - 1)) {
        let x = tent_grid_point(n, k);
        if x > window {
            break;
        }
        let hx = h.eval(&x)?;
        if h.eval(&(&two * &x))? != &g_slope * &hx || h.eval(&(&t_r * &x))? != &psi_slope * &hx {
            return Ok(None);
        }
        checked += 1;
    }
    Ok(Some(checked))
}

/// Max circular gap of `{k · t^p / 2^{n+m_p} : 1 ≤ p ≤ P}` folded into
/// `[1/2^n, 1/2^{n-1})`, for `P = 1, …, pmax`. The window ends are identified,
/// so a single point leaves a gap of the full window length.
pub fn dyadic_density_demo(k: u64, n: u32, t: u64, pmax: u32) -> Result<Vec<Rational>> {
    if k == 0 || n == 0 || t == 0 || pmax == 0 {
        return Err(Error::Parameter("k, n, t and pmax must be positive".into()));
    }
    if is_power_of_two(t) {
        return Err(Error::Parameter(format!(
            "t = {t} is a power of 2; its base-2 logarithm is rational"
        )));
    }
    let lo = Rational::new(BigInt::one(), BigInt::one() << n);
    let width = lo.clone();
    // gap from a to b going up around the circle [lo, hi)
    let circular = |a: &Rational, b: &Rational| if b > a { b - a } else { b - a + &width };
    let mut seen: BTreeSet<Rational> = BTreeSet::new();
    let mut gap_counts: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut gaps = Vec::with_capacity(pmax as usize);
    let mut numer = BigInt::from(k);
    for _ in 0..pmax {
        numer *= t;
        // k t^p / 2^(n + m_p) lands in [1/2^n, 1/2^(n-1)) exactly when
        // 2^(n + m_p) has one bit fewer than 2^n k t^p
        let x = Rational::new(
            numer.clone(),
            BigInt::one() << (n as u64 + numer.bits() - 1),
        );
        if !seen.contains(&x) {
            if seen.is_empty() {
                gap_counts.insert(width.clone(), 1);
            } else {
                let pred = seen
                    .range(..&x)
                    .next_back()
                    .or_else(|| seen.last())
                    .expect("non-empty");
                let succ = seen
                    .range(&x..)
                    .next()
                    .or_else(|| seen.first())
                    .expect("non-empty");
                let old = circular(pred, succ);
                let entry = gap_counts.get_mut(&old).expect("gap is tracked");
                *entry -= 1;
                if *entry == 0 {
                    gap_counts.remove(&old);
                }
                *gap_counts.entry(circular(pred, &x)).or_default() += 1;
                *gap_counts.entry(circular(&x, succ)).or_default() += 1;
            }
            seen.insert(x);
        }
        gaps.push(gap_counts.keys().next_back().expect("non-empty").clone());
    }
    Ok(gaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn h_third() -> PlMap {
        PlMap::new(vec![
            (int(0), int(0)),
            (rat(1, 3), rat(1, 2)),
            (int(1), int(1)),
        ])
        .unwrap()
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_map(&tent(), &PlMap::identity()).unwrap(), tent());
        let g = conjugate_map(&tent(), &h_third()).unwrap();
        // v moves to h(1/2) = 5/8
        assert_eq!(g.turning_point(), &rat(5, 8));
        assert_eq!(g.map().slope_at_zero(), int(2));
        let back = conjugate_map(&g, &invert_homeomorphism(&h_third()).unwrap()).unwrap();
        assert_eq!(back, tent());
        assert!(matches!(
            conjugate_map(&tent(), tent().map()),
            Err(Error::NotHomeomorphism(_))
        ));
    }

    #[test]
    fn commutators_from_conjugacy() {
        for t in 1..6 {
            assert_eq!(
                build_commutator(&tent(), &PlMap::identity(), t).unwrap(),
                xi(t).unwrap()
            );
        }
        let g = conjugate_map(&tent(), &h_third()).unwrap();
        assert_eq!(&build_commutator(&g, &h_third(), 2).unwrap(), g.map());
        assert_eq!(
            build_commutator(&tent(), &h_third(), 3),
            Err(Error::ConjugacyMismatch)
        );
    }

    #[test]
    fn fit_identity() {
        let fit = fit_conjugacy(&tent(), 5).unwrap();
        assert_eq!(fit.interpolant, PlMap::identity());
        assert!(fit.stabilized);
        assert_eq!(fit.alpha, 1.0);
        assert_eq!(fit.omega, Some(1.0));
        assert!(fit_conjugacy(&tent(), 1).is_err());
    }

    #[test]
    fn residual_exact_cases() {
        assert_eq!(
            slope_law_residual(&tent(), &xi(6).unwrap(), 6).unwrap(),
            0.0
        );
        assert_eq!(
            slope_law_residual(&tent(), &PlMap::identity(), 1).unwrap(),
            0.0
        );
        assert!(slope_law_residual(&tent(), &xi(6).unwrap(), 5).is_err());
    }

    #[test]
    fn density_demo_parameters() {
        assert!(dyadic_density_demo(1, 1, 2, 10).is_err());
        assert!(dyadic_density_demo(1, 1, 8, 10).is_err());
        assert_eq!(dyadic_density_demo(1, 1, 3, 1).unwrap(), vec![rat(1, 2)]);
        assert_eq!(dyadic_density_demo(3, 2, 5, 1).unwrap(), vec![rat(1, 4)]);
    }
}
