//! The bundled fixture files and the non-conjugate example.

mod common;

use common::trapped_gap_bound;
use plcommute_core::format::{parse_map, parse_unimodal, write_map, write_unimodal};
use plcommute_core::rational::{int, rat};
use plcommute_core::*;

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn fixture_files_match_constructors() {
    assert_eq!(parse_unimodal(&fixture("tent.map")).unwrap(), tent());
    assert_eq!(parse_map(&fixture("xi5.map")).unwrap(), xi(5).unwrap());
    assert_eq!(parse_map(&fixture("xi6.map")).unwrap(), xi(6).unwrap());
    assert_eq!(
        parse_unimodal(&fixture("attracting.map")).unwrap(),
        attracting_fixture()
    );
}

#[test]
fn written_maps_reparse() {
    for t in 1..=9 {
        let m = xi(t).unwrap();
        assert_eq!(parse_map(&write_map(&m)).unwrap(), m);
    }
    let g = attracting_fixture();
    assert_eq!(parse_unimodal(&write_unimodal(&g)).unwrap(), g);
}

#[test]
fn attracting_fixture_gaps_stay_open() {
    let g = attracting_fixture();
    let bound =
        trapped_gap_bound(g.map().points(), &rat(1, 2), &rat(5, 8)).expect("interval is trapped");
    assert_eq!(bound, rat(1, 8));
    assert_eq!(g.eval(&rat(7, 12)).unwrap(), rat(7, 12));
    for (level, gap) in density_report(&g, 12).unwrap().iter().enumerate() {
        assert!(gap >= &bound, "level {}: {gap}", level + 1);
    }
    for n in [4, 9, 12] {
        let grid = mu_grid(&g, n).unwrap();
        assert!(grid
            .points()
            .iter()
            .all(|x| x < &rat(1, 2) || x > &rat(5, 8)));
    }
}

#[test]
fn tent_gaps_halve() {
    let gaps = density_report(&tent(), 12).unwrap();
    for (n, gap) in (1..).zip(&gaps) {
        assert_eq!(gap, &rational::dyadic(1, n - 1));
    }
}

#[test]
fn attracting_fixture_has_no_stable_fit() {
    let g = attracting_fixture();
    for depth in 2..=10 {
        assert!(
            !fit_conjugacy(&g, depth).unwrap().stabilized,
            "depth {depth}"
        );
    }
    let report = power_law_check(&g, 8, 1e-9).unwrap();
    assert!(!report.applicable);
    assert!(report.omega.is_none());
}

#[test]
fn power_law_on_tent() {
    let report = power_law_check(&tent(), 6, 1e-12).unwrap();
    assert!(report.applicable && report.within_tolerance);
    assert_eq!(report.alpha, 1.0);
    assert_eq!(report.omega, Some(1.0));
    assert_eq!(report.max_omega_spread, Some(0.0));
}

#[test]
fn power_law_with_steep_conjugacy() {
    let h = PlMap::new(vec![
        (int(0), int(0)),
        (rat(1, 4), rat(3, 8)),
        (int(1), int(1)),
    ])
    .unwrap();
    assert_eq!(h.slope_at_zero(), rat(3, 2));
    let g = conjugate_map(&tent(), &h).unwrap();
    for depth in 8..=11 {
        let report = power_law_check(&g, depth, 1e-9).unwrap();
        assert!(report.applicable && report.within_tolerance, "{report:?}");
        assert!(report.max_omega_spread.unwrap() < 1e-9);
        assert!((report.omega.unwrap() - 1.5).abs() < 1e-12);
        assert!(report.samples > 0);
    }
}

#[test]
fn slope_law_on_xi_and_conjugates() {
    for t in 1..=12 {
        assert_eq!(
            slope_law_residual(&tent(), &xi(t).unwrap(), t).unwrap(),
            0.0
        );
    }
    let h = PlMap::new(vec![
        (int(0), int(0)),
        (rat(2, 7), rat(1, 5)),
        (int(1), int(1)),
    ])
    .unwrap();
    let g = conjugate_map(&tent(), &h).unwrap();
    let psi = build_commutator(&g, &h, 5).unwrap();
    assert_eq!(psi.slope_at_zero(), int(5));
    assert_eq!(slope_law_residual(&g, &psi, 5).unwrap(), 0.0);
    assert_eq!(build_commutator(&g, &h, 2).unwrap(), *g.map());
}
