// One element of each symmetry family: its series, the group law checked on
// series, and the invariance of the model density.
//
// ```bash
// cargo run --example symmetry_groups
// ```

use flatsing::classify::NormalForm;
use flatsing::symmetry::{
    compose_elements, element_to_change, m3_residual, m3_series, verify_composition,
    verify_invariance, SymmetryElement,
};
use flatsing::Complex64;

pub fn run_example() -> flatsing::Result<()> {
    let order = 16;
    let c = Complex64::new;
    let cases = [
        (
            NormalForm::Conical { beta: 0.5 },
            SymmetryElement::M1Generic { lambda: c(0.0, 1.0) },
            SymmetryElement::M1Generic { lambda: c(0.6, 0.8) },
        ),
        (
            NormalForm::Conical { beta: -2.0 },
            SymmetryElement::M1Integer { lambda: c(1.0, 0.0), zeta: c(1.0, 0.0) },
            SymmetryElement::M1Integer { lambda: c(1.0, 0.0), zeta: c(2.0, 0.0) },
        ),
        (
            NormalForm::Cylindrical { c: 1.5 },
            SymmetryElement::M2 { p: c(3.0, 4.0) },
            SymmetryElement::M2 { p: c(0.5, 0.0) },
        ),
        (
            NormalForm::LogPole { nu: 0.7, n: 2 },
            SymmetryElement::M3 { ek_index: 1, a: c(0.3, -0.2) },
            SymmetryElement::M3 { ek_index: 1, a: c(-0.1, 0.4) },
        ),
    ];
    for (form, g1, g2) in &cases {
        let h = element_to_change(g1, form, order)?;
        let product = compose_elements(g1, g2, form)?;
        let law = verify_composition(g1, g2, form, order)?;
        println!("{form}: {g1:?}");
        println!("    h = {}", h.h().truncate(4));
        println!("    g1 then g2 = {product:?}");
        println!("    law residual {:.1e}, invariance residual {:.1e}", law.residual, verify_invariance(form, g1, order)?);
    }

    let s = m3_series(1.0, 1, 0, c(0.0, 0.0), order)?;
    println!("M3 n = 1, a = 0: zeta0 = {:.3}, equation residual {:.1e}", s.zeta0, m3_residual(1.0, 1, 0, &s.h, s.zeta0)?);
    Ok(())
}

fn main() -> flatsing::Result<()> {
    run_example()
}
