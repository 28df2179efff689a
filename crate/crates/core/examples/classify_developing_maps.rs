// Classifies a handful of developing maps and checks each normalizing change
// by pulling the model density back to the input coordinate.
//
// ```bash
// cargo run --example classify_developing_maps
// ```

use flatsing::classify::{classify, roundtrip_residual};
use flatsing::devmap::DevelopingMap;
use flatsing::{Complex64, LaurentSeries};

pub fn run_example() -> flatsing::Result<()> {
    let order = 16;
    let re = |x: f64| Complex64::new(x, 0.0);
    let maps = [
        ("w^(1/2)", DevelopingMap::with_holonomy(0.5, LaurentSeries::one(order))?),
        (
            "w^(1/4) (1 + w)",
            DevelopingMap::with_holonomy(0.25, LaurentSeries::from_real(0, &[1.0, 1.0], order)?)?,
        ),
        (
            "3 + w^2",
            DevelopingMap::with_holonomy(0.0, LaurentSeries::from_real(0, &[3.0, 0.0, 1.0], order)?)?,
        ),
        ("log w + w", DevelopingMap::logarithmic(re(1.0), LaurentSeries::variable(order))?),
        (
            "2i log w + 1/w",
            DevelopingMap::logarithmic(Complex64::new(0.0, 2.0), LaurentSeries::monomial(re(1.0), -1, order))?,
        ),
        (
            "2 log w + 1/w^2 + 1",
            DevelopingMap::logarithmic(re(2.0), LaurentSeries::from_real(-2, &[1.0, 0.0, 1.0], order)?)?,
        ),
    ];
    for (name, map) in &maps {
        let (form, change) = classify(map, order)?;
        let residual = roundtrip_residual(map, &form, &change, order)?;
        println!("f = {name:<22} -> {form}");
        println!("    h = {}", change.h().truncate(4));
        if let Some(eta) = change.eta() {
            println!("    eta = {eta}");
        }
        println!("    round-trip residual {residual:.2e}");
    }
    Ok(())
}

fn main() -> flatsing::Result<()> {
    run_example()
}
