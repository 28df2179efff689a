mod common;

use common::normal_form_area;
use flatsing::area::{
    annulus_area, annulus_area_with, default_r_grid, fit_model, growth_scan, growth_scan_with,
    invariance_check, log_grid, select_model, GrowthModel, Quadrature, DEFAULT_OUTER_RADIUS,
};
use flatsing::classify::{classify, NormalForm};
use flatsing::devmap::density_of;
use flatsing::sampling::{Branch, Sampler};
use flatsing::Error;
use proptest::prelude::*;

fn forms() -> Vec<NormalForm> {
    vec![
        NormalForm::Conical { beta: 1.0 },
        NormalForm::Conical { beta: 0.0 },
        NormalForm::Conical { beta: -0.5 },
        NormalForm::Conical { beta: -2.5 },
        NormalForm::Cylindrical { c: 0.7 },
        NormalForm::Cylindrical { c: 2.0 },
        NormalForm::LogPole { nu: 1.0, n: 1 },
        NormalForm::LogPole { nu: 0.4, n: 2 },
        NormalForm::LogPole { nu: 0.9, n: 3 },
    ]
}

#[test]
fn annulus_areas_match_closed_forms() {
    for form in forms() {
        let d = form.density(32);
        for (ri, ro) in [(1e-3, 0.5), (0.01, 0.2), (0.1, 0.45), (1e-4, 1e-3)] {
            let got = annulus_area(&d, ri, ro).unwrap();
            let want = normal_form_area(&form, ri, ro);
            assert!((got - want).abs() <= 1e-7 * want, "{form} on ({ri}, {ro}): {got} vs {want}");
        }
    }
}

#[test]
fn quadrature_converges_under_refinement() {
    let mut s = Sampler::new(21);
    let quad = Quadrature::default();
    for branch in Branch::ALL {
        let d = density_of(&s.map(branch, 32, 0.1)).unwrap();
        let area = |q: &Quadrature| annulus_area_with(&d, 1e-3, 0.5, q).unwrap();
        let (coarse, base, fine) = (area(&quad.scaled(0.5)), area(&quad), area(&quad.scaled(2.0)));
        assert!((base - fine).abs() <= 1e-6 * fine, "{branch}: {base} vs {fine}");
        assert!((base - fine).abs() <= (coarse - fine).abs() + 1e-14 * fine, "{branch}");
    }
}

#[test]
fn nested_scan_matches_single_annuli() {
    let form = NormalForm::LogPole { nu: 0.6, n: 2 };
    let d = form.density(32);
    let scan = growth_scan(&d, DEFAULT_OUTER_RADIUS, &default_r_grid()).unwrap();
    for &(r, a) in scan.samples.iter().step_by(7) {
        let want = normal_form_area(&form, 1.0 / r, DEFAULT_OUTER_RADIUS);
        assert!((a - want).abs() <= 1e-7 * want);
    }
}

#[test]
fn growth_table() {
    let r = default_r_grid();
    let cases = [
        (NormalForm::Conical { beta: 1.0 }, GrowthModel::Constant, None),
        (NormalForm::Conical { beta: -0.5 }, GrowthModel::Constant, None),
        (NormalForm::Conical { beta: -2.5 }, GrowthModel::Power, Some(3.0)),
        (NormalForm::Cylindrical { c: 1.0 }, GrowthModel::Logarithmic, None),
        (NormalForm::LogPole { nu: 1.0, n: 1 }, GrowthModel::Power, Some(2.0)),
        (NormalForm::LogPole { nu: 1.0, n: 2 }, GrowthModel::Power, Some(4.0)),
        (NormalForm::LogPole { nu: 1.0, n: 3 }, GrowthModel::Power, Some(6.0)),
    ];
    for (form, model, exponent) in cases {
        let scan = growth_scan(&form.density(32), DEFAULT_OUTER_RADIUS, &r).unwrap();
        assert_eq!(scan.fitted_model, model, "{form}");
        if let Some(e) = exponent {
            assert!((scan.exponent - e).abs() < 0.05, "{form}: {}", scan.exponent);
        }
        assert!(!scan.truncated);
        assert_eq!(scan.fits.len(), 3);
    }
}

#[test]
fn steep_cone_exponent_tracks_beta() {
    let r = default_r_grid();
    for beta in [-1.5, -2.0, -3.2, -4.0] {
        let scan = growth_scan(&NormalForm::Conical { beta }.density(32), DEFAULT_OUTER_RADIUS, &r).unwrap();
        assert_eq!(scan.fitted_model, GrowthModel::Power);
        assert!((scan.exponent + 2.0 * (beta + 1.0)).abs() < 0.05, "beta {beta}: {}", scan.exponent);
    }
}

#[test]
fn scan_at_finer_quadrature_agrees() {
    let d = NormalForm::LogPole { nu: 0.5, n: 1 }.density(32);
    let r = default_r_grid();
    let a = growth_scan(&d, DEFAULT_OUTER_RADIUS, &r).unwrap();
    let b = growth_scan_with(&d, DEFAULT_OUTER_RADIUS, &r, &Quadrature::default().scaled(2.0)).unwrap();
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert!((x.1 - y.1).abs() <= 1e-7 * x.1);
    }
}

#[test]
fn fits_recover_synthetic_laws() {
    let r = log_grid(10.0, 1e4, 30).unwrap();
    type Law = fn(f64) -> f64;
    let laws: [(GrowthModel, Law); 3] = [
        (GrowthModel::Constant, |r| 3.0 - 2.0 * r.powf(-1.5)),
        (GrowthModel::Logarithmic, |r| 0.5 + 1.25 * r.ln()),
        (GrowthModel::Power, |r| 1.0 + 0.2 * r.powf(2.5)),
    ];
    for (model, law) in laws {
        let area: Vec<f64> = r.iter().map(|&x| law(x)).collect();
        let (chosen, _) = select_model(&r, &area);
        assert_eq!(chosen.model, model);
        assert!(chosen.residual < 1e-8);
        let fit = fit_model(model, &r, &area);
        for (&x, &a) in r.iter().zip(&area) {
            assert!((fit.predict(x) - a).abs() <= 1e-7 * a);
        }
    }
}

#[test]
fn csv_lists_every_sample() {
    let d = NormalForm::Cylindrical { c: 1.0 }.density(16);
    let scan = growth_scan(&d, 0.5, &log_grid(10.0, 1000.0, 8).unwrap()).unwrap();
    let csv = scan.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,area"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows, scan.samples);
    assert_eq!(scan.summary().sample_count, 8);
}

#[test]
fn invalid_scans_are_rejected() {
    let d = NormalForm::Conical { beta: 0.0 }.density(8);
    let r = default_r_grid();
    let bad = |res: flatsing::Result<_>| matches!(res, Err(Error::InvalidScan(_)));
    assert!(bad(growth_scan(&d, 1.0, &r)));
    assert!(bad(growth_scan(&d, 0.5, &r[..5])));
    assert!(bad(growth_scan(&d, 0.5, &log_grid(1.5, 1e4, 20).unwrap())));
    assert!(bad(growth_scan(&d, 0.5, &log_grid(10.0, 500.0, 20).unwrap())));
    let mut shuffled = r.clone();
    shuffled.swap(3, 4);
    assert!(bad(growth_scan(&d, 0.5, &shuffled)));
    assert!(log_grid(10.0, 5.0, 10).is_err());
}

#[test]
fn growth_law_survives_coordinate_changes() {
    let mut s = Sampler::new(22);
    let r = default_r_grid();
    for branch in Branch::ALL {
        for _ in 0..3 {
            let d = density_of(&s.map(branch, 32, 0.02)).unwrap();
            let ch = s.change(32, 0.5);
            let report = invariance_check(&d, &ch, DEFAULT_OUTER_RADIUS, &r, 32).unwrap();
            assert!(report.holds(0.05), "{branch}: {report:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bounded_area_only_for_mild_cones(seed in any::<u64>(), k in 0..6usize) {
        let mut s = Sampler::new(seed);
        let map = s.map(Branch::ALL[k], 32, 0.02);
        let scan = growth_scan(&density_of(&map).unwrap(), DEFAULT_OUTER_RADIUS, &default_r_grid()).unwrap();
        let (form, _) = classify(&map, 32).unwrap();
        if scan.fitted_model == GrowthModel::Constant {
            prop_assert!(matches!(form, NormalForm::Conical { beta } if beta > -1.0), "{}", form);
        }
    }
}
