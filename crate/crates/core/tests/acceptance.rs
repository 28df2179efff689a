//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! ```bash
//! cargo test --release --test acceptance
//! ```

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{m1_integer_closed_form, normal_form_area};
use flatsing::area::{
    annulus_area, default_r_grid, growth_scan, invariance_check, GrowthModel, DEFAULT_OUTER_RADIUS,
};
use flatsing::classify::{classify, roundtrip_residual, third_form_change, third_form_residual, FormTag, NormalForm};
use flatsing::devmap::{density_of, flatness_residual, AnnulusGrid};
use flatsing::sampling::{Branch, Sampler};
use flatsing::symmetry::{
    compose_elements, element_to_change, m3_residual, m3_series, root_of_unity, verify_composition,
    verify_invariance, Family, SymmetryElement,
};
use flatsing::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

const SUITE_ORDER: i32 = 16;
const AREA_ORDER: i32 = 32;
/// Tail size of the random maps used by the area and curvature suites.
const SMOOTH_TAIL: f64 = 0.02;

fn expected_tag(branch: Branch) -> FormTag {
    match branch {
        Branch::ConicalGeneric | Branch::ConicalInteger => FormTag::Conical,
        Branch::Cylindrical => FormTag::Cylindrical,
        Branch::LogPole(_) => FormTag::LogPole,
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn roundtrip() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(101);
    let mut worst: f64 = 0.0;
    for branch in Branch::ALL {
        for _ in 0..200 {
            let map = s.map(branch, SUITE_ORDER, 0.5);
            let (form, change) = classify(&map, SUITE_ORDER).map_err(|e| format!("{branch}: {e}"))?;
            if form.tag() != expected_tag(branch) {
                return Err(format!("{branch} classified as {form}"));
            }
            worst = worst.max(roundtrip_residual(&map, &form, &change, SUITE_ORDER).map_err(|e| e.to_string())?);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst < 1e-8 && secs < 30.0,
        format!("1200 maps, max residual {worst:.2e} (< 1e-8), {secs:.2} s (< 30 s)"),
    )
}

fn invariant_gap(a: &NormalForm, b: &NormalForm) -> Option<f64> {
    match (*a, *b) {
        (NormalForm::Conical { beta: x }, NormalForm::Conical { beta: y }) => Some((x - y).abs()),
        (NormalForm::Cylindrical { c: x }, NormalForm::Cylindrical { c: y }) => Some((x - y).abs()),
        (NormalForm::LogPole { nu: x, n }, NormalForm::LogPole { nu: y, n: m }) if n == m => Some((x - y).abs()),
        _ => None,
    }
}

fn uniqueness() -> Outcome {
    let mut s = Sampler::new(102);
    let mut worst: f64 = 0.0;
    for branch in Branch::ALL {
        for _ in 0..100 {
            let map = s.map(branch, SUITE_ORDER, 0.5);
            let k = s.unit_series(SUITE_ORDER, 0.5);
            let rotation = s.phase();
            let translation = if map.has_holonomy() { Complex64::new(0.0, 0.0) } else { s.in_disk(2.0) };
            let moved = map
                .reparametrize(&k)
                .and_then(|m| m.rigid_motion(rotation, translation))
                .map_err(|e| e.to_string())?;
            let (a, _) = classify(&map, SUITE_ORDER).map_err(|e| e.to_string())?;
            let (b, _) = classify(&moved, SUITE_ORDER).map_err(|e| e.to_string())?;
            worst = worst.max(invariant_gap(&a, &b).ok_or(format!("{a} became {b}"))?);
        }
    }
    check(worst < 1e-8, format!("600 perturbed maps, same tag and n, max invariant gap {worst:.2e} (< 1e-8)"))
}

fn growth_table() -> Outcome {
    let mut quad_err: f64 = 0.0;
    let table = [
        (NormalForm::Conical { beta: 1.0 }, GrowthModel::Constant, None),
        (NormalForm::Conical { beta: -0.5 }, GrowthModel::Constant, None),
        (NormalForm::Conical { beta: -2.5 }, GrowthModel::Power, Some(3.0)),
        (NormalForm::Cylindrical { c: 1.0 }, GrowthModel::Logarithmic, None),
        (NormalForm::LogPole { nu: 1.0, n: 1 }, GrowthModel::Power, Some(2.0)),
        (NormalForm::LogPole { nu: 1.0, n: 2 }, GrowthModel::Power, Some(4.0)),
        (NormalForm::LogPole { nu: 1.0, n: 3 }, GrowthModel::Power, Some(6.0)),
    ];
    for (form, _, _) in &table {
        let d = form.density(AREA_ORDER);
        for r in [10.0, 100.0, 1e3, 1e4] {
            let got = annulus_area(&d, 1.0 / r, DEFAULT_OUTER_RADIUS).map_err(|e| e.to_string())?;
            let want = normal_form_area(form, 1.0 / r, DEFAULT_OUTER_RADIUS);
            quad_err = quad_err.max((got - want).abs() / want);
        }
    }
    if quad_err > 1e-6 {
        return Err(format!("quadrature relative error {quad_err:.2e} exceeds 1e-6"));
    }
    let r = default_r_grid();
    let mut rows = Vec::new();
    for (form, model, exponent) in table {
        let scan = growth_scan(&form.density(AREA_ORDER), DEFAULT_OUTER_RADIUS, &r).map_err(|e| e.to_string())?;
        let exponent_ok = exponent.is_none_or(|e| (scan.exponent - e).abs() <= 0.05);
        if scan.fitted_model != model || !exponent_ok {
            return Err(format!("{form}: fitted {} with exponent {:.4}", scan.fitted_model, scan.exponent));
        }
        if exponent.is_some() {
            rows.push(format!("{:.3}", scan.exponent));
        }
    }
    Ok(format!(
        "7 forms match, power exponents [{}], quadrature error {quad_err:.1e} (<= 1e-6)",
        rows.join(", ")
    ))
}

fn bounded_area_witness() -> Outcome {
    let mut s = Sampler::new(104);
    let r = default_r_grid();
    let mut constant = 0;
    for branch in Branch::ALL {
        for _ in 0..50 {
            let map = s.map(branch, AREA_ORDER, SMOOTH_TAIL);
            let d = density_of(&map).map_err(|e| e.to_string())?;
            let scan = growth_scan(&d, DEFAULT_OUTER_RADIUS, &r).map_err(|e| e.to_string())?;
            if scan.fitted_model == GrowthModel::Constant {
                constant += 1;
                let (form, _) = classify(&map, AREA_ORDER).map_err(|e| e.to_string())?;
                if !matches!(form, NormalForm::Conical { beta } if beta > -1.0) {
                    return Err(format!("{branch}: bounded area but {form}"));
                }
            }
        }
    }
    check(constant > 0, format!("{constant} of 300 scans bounded, all cones with beta > -1"))
}

fn growth_invariance() -> Outcome {
    let mut s = Sampler::new(105);
    let r = default_r_grid();
    let mut worst: f64 = 0.0;
    for branch in Branch::ALL {
        for _ in 0..50 {
            let d = density_of(&s.map(branch, AREA_ORDER, SMOOTH_TAIL)).map_err(|e| e.to_string())?;
            let change = s.change(AREA_ORDER, 0.5);
            let report = invariance_check(&d, &change, DEFAULT_OUTER_RADIUS, &r, AREA_ORDER).map_err(|e| e.to_string())?;
            if report.model_before != report.model_after {
                return Err(format!("{branch}: {} became {}", report.model_before, report.model_after));
            }
            worst = worst.max((report.exponent_before - report.exponent_after).abs());
        }
    }
    check(worst < 0.05, format!("300 changes, same model, max exponent shift {worst:.2e} (< 0.05)"))
}

fn flatness() -> Outcome {
    let grid = AnnulusGrid::default();
    let mut worst_form: f64 = 0.0;
    for form in [
        NormalForm::Conical { beta: -0.5 },
        NormalForm::Conical { beta: 1.0 },
        NormalForm::Conical { beta: -2.5 },
        NormalForm::Cylindrical { c: 1.0 },
        NormalForm::Cylindrical { c: 2.5 },
        NormalForm::LogPole { nu: 1.0, n: 1 },
        NormalForm::LogPole { nu: 0.5, n: 2 },
        NormalForm::LogPole { nu: 0.8, n: 3 },
    ] {
        worst_form = worst_form.max(flatness_residual(&form.density(AREA_ORDER), &grid).map_err(|e| format!("{form}: {e}"))?);
    }
    let mut s = Sampler::new(106);
    let mut worst_map: f64 = 0.0;
    for branch in Branch::ALL {
        for _ in 0..50 {
            let d = density_of(&s.map(branch, AREA_ORDER, SMOOTH_TAIL)).map_err(|e| e.to_string())?;
            worst_map = worst_map.max(flatness_residual(&d, &grid).map_err(|e| format!("{branch}: {e}"))?);
        }
    }
    check(
        worst_form < 1e-6 && worst_map < 1e-6,
        format!("normal forms {worst_form:.2e}, 300 random maps {worst_map:.2e} (< 1e-6)"),
    )
}

fn distance(x: &SymmetryElement, y: &SymmetryElement) -> f64 {
    use SymmetryElement::*;
    match (*x, *y) {
        (M1Generic { lambda: a }, M1Generic { lambda: b }) => (a - b).norm(),
        (M1Integer { lambda: a, zeta: p }, M1Integer { lambda: b, zeta: q }) => (a - b).norm().max((p - q).norm()),
        (M2 { p: a }, M2 { p: b }) => (a - b).norm(),
        (M3 { ek_index: i, a }, M3 { ek_index: j, a: b }) if i == j => (a - b).norm(),
        _ => f64::INFINITY,
    }
}

fn symmetry() -> Outcome {
    let mut s = Sampler::new(107);
    let (mut axioms, mut invariance, mut closed, mut law, mut equation): (f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0);
    let err = |e: flatsing::Error| e.to_string();
    for family in Family::ALL {
        for _ in 0..100 {
            let form = s.form_for(family);
            let (a, b, c) = (s.element(family, &form), s.element(family, &form), s.element(family, &form));
            let ab_c = compose_elements(&compose_elements(&a, &b, &form).map_err(err)?, &c, &form).map_err(err)?;
            let a_bc = compose_elements(&a, &compose_elements(&b, &c, &form).map_err(err)?, &form).map_err(err)?;
            let e = SymmetryElement::identity(family);
            let inv = a.inverse(&form).map_err(err)?;
            axioms = axioms
                .max(distance(&ab_c, &a_bc))
                .max(distance(&compose_elements(&a, &e, &form).map_err(err)?, &a))
                .max(distance(&compose_elements(&e, &a, &form).map_err(err)?, &a))
                .max(distance(&compose_elements(&a, &inv, &form).map_err(err)?, &e))
                .max(distance(&compose_elements(&inv, &a, &form).map_err(err)?, &e));

            invariance = invariance.max(verify_invariance(&form, &a, SUITE_ORDER).map_err(err)?);

            match (a, form) {
                (SymmetryElement::M1Integer { lambda, zeta }, NormalForm::Conical { beta }) => {
                    let m = -(beta + 1.0) as i32;
                    let h = element_to_change(&a, &form, SUITE_ORDER).map_err(err)?;
                    let want = m1_integer_closed_form(lambda, zeta, m, SUITE_ORDER);
                    for (k, w) in want.iter().enumerate() {
                        closed = closed.max((h.h().coeff(k as i32) - w).norm());
                    }
                }
                (SymmetryElement::M3 { ek_index, a: coeff }, NormalForm::LogPole { nu, n }) => {
                    law = law.max(verify_composition(&a, &b, &form, SUITE_ORDER).map_err(err)?.residual);
                    let m = m3_series(nu, n, ek_index, coeff, SUITE_ORDER).map_err(err)?;
                    equation = equation.max(m3_residual(nu, n, ek_index, &m.h, m.zeta0).map_err(err)?);
                }
                _ => {}
            }
        }
    }
    check(
        axioms < 1e-12 && invariance < 1e-9 && closed < 1e-12 && law < 1e-9 && equation < 1e-10,
        format!(
            "axioms {axioms:.1e} (< 1e-12), invariance {invariance:.1e} (< 1e-9), M1_integer closed form {closed:.1e} (< 1e-12), M3 law {law:.1e} (< 1e-9), M3 equation {equation:.1e} (< 1e-10)"
        ),
    )
}

fn log_pole_gauge() -> Outcome {
    let mut s = Sampler::new(108);
    let mut residual: f64 = 0.0;
    let mut cycle: f64 = 0.0;
    for n in 1..=3u32 {
        for _ in 0..100 {
            let map = s.map(Branch::LogPole(n), SUITE_ORDER, 0.5);
            let base = third_form_change(&map, SUITE_ORDER, 0).map_err(|e| e.to_string())?;
            for k in -(n as i64)..=(2 * n as i64) {
                let tf = third_form_change(&map, SUITE_ORDER, k).map_err(|e| e.to_string())?;
                if tf.phi.coeff(n as i32) != Complex64::new(0.0, 0.0) {
                    return Err(format!("phi_n = {} for n = {n}", tf.phi.coeff(n as i32)));
                }
                residual = residual.max(third_form_residual(&map, &tf).map_err(|e| e.to_string())?);
                let want = root_of_unity(k, n) * base.h.coeff(0);
                cycle = cycle.max((tf.h.coeff(0) - want).norm());
            }
        }
    }
    check(
        residual < 1e-10 && cycle < 1e-12,
        format!("300 maps, phi_n = 0, equation residual {residual:.1e} (< 1e-10), root cycle {cycle:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1", "classification round trip", roundtrip),
        ("AC2", "invariant uniqueness", uniqueness),
        ("AC3", "growth table", growth_table),
        ("AC4", "bounded area implies a mild cone", bounded_area_witness),
        ("AC5", "growth law invariance", growth_invariance),
        ("AC6", "flatness", flatness),
        ("AC7", "symmetry groups", symmetry),
        ("AC8", "log-pole gauge", log_pole_gauge),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
