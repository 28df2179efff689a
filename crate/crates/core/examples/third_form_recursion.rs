// The log-pole reduction solves `g = e^(i theta) e^(-n phi) + w^n (c phi + eta)`
// coefficient by coefficient. This example prints the solution, the residual of
// that equation computed with plain series arithmetic, and how the root index
// moves `h(0)` through the `n` admissible values.
//
// ```bash
// cargo run --example third_form_recursion
// ```

use flatsing::classify::{third_form_change, third_form_residual};
use flatsing::devmap::DevelopingMap;
use flatsing::{Complex64, LaurentSeries};

pub fn run_example() -> flatsing::Result<()> {
    let order = 16;
    // f = (0.6 + 0.3i) log w + w^-3 (1.5 - 0.2 w + 0.1 w^2 + 0.05 w^3)
    let c = Complex64::new(0.6, 0.3);
    let psi = LaurentSeries::from_real(-3, &[1.5, -0.2, 0.1, 0.05], order)?;
    let map = DevelopingMap::logarithmic(c, psi)?;

    for k in 0..3 {
        let tf = third_form_change(&map, order, k)?;
        let residual = third_form_residual(&map, &tf)?;
        println!("root index {k}: nu = {:.6}, n = {}", tf.nu, tf.n);
        println!("    phi_n = {:.1e} (gauge), eta = {:.6}", tf.phi.coeff(3).norm(), tf.eta);
        println!("    h(0) = {:.6}, equation residual {residual:.2e}", tf.h.coeff(0));
        if k > 0 {
            let base = third_form_change(&map, order, 0)?.h.coeff(0);
            println!("    h(0) / h(0)[k=0] = {:.6}", tf.h.coeff(0) / base);
        }
    }
    Ok(())
}

fn main() -> flatsing::Result<()> {
    run_example()
}
