// Area of `{1/r < |z| < R}` as `r` grows, for each normal form, with the
// fitted growth law: bounded for cones with `beta > -1`, `r^(-2(beta+1))` for
// steeper cones, `ln r` for the cylinder and `r^(2n)` for a log pole.
//
// ```bash
// cargo run --release --example area_growth
// ```

use flatsing::area::{annulus_area, default_r_grid, growth_scan, DEFAULT_OUTER_RADIUS};
use flatsing::classify::NormalForm;

pub fn run_example() -> flatsing::Result<()> {
    let euclid = NormalForm::Conical { beta: 0.0 }.density(8);
    let a = annulus_area(&euclid, 0.1, 0.5)?;
    println!("Euclidean annulus 0.1..0.5: {a:.10} (pi * 0.24 = {:.10})", std::f64::consts::PI * 0.24);

    let r = default_r_grid();
    let forms = [
        NormalForm::Conical { beta: 1.0 },
        NormalForm::Conical { beta: -0.5 },
        NormalForm::Conical { beta: -2.5 },
        NormalForm::Cylindrical { c: 1.0 },
        NormalForm::LogPole { nu: 1.0, n: 1 },
        NormalForm::LogPole { nu: 0.5, n: 2 },
        NormalForm::LogPole { nu: 0.8, n: 3 },
    ];
    println!("{:<32} {:<12} {:>9} {:>10}", "form", "model", "exponent", "residual");
    for form in forms {
        let scan = growth_scan(&form.density(32), DEFAULT_OUTER_RADIUS, &r)?;
        println!(
            "{:<32} {:<12} {:>9.4} {:>10.2e}",
            form.to_string(),
            scan.fitted_model.to_string(),
            scan.exponent,
            scan.fit_residual
        );
    }
    Ok(())
}

fn main() -> flatsing::Result<()> {
    run_example()
}
