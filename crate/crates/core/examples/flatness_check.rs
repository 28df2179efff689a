// Curvature check: `Laplacian(log lambda)` on an annulus grid for the three
// model densities and for a few random developing maps.
//
// ```bash
// cargo run --example flatness_check
// ```

use flatsing::classify::NormalForm;
use flatsing::devmap::{density_of, flatness_residual, AnnulusGrid};
use flatsing::sampling::{Branch, Sampler};

pub fn run_example() -> flatsing::Result<()> {
    let grid = AnnulusGrid::default();
    for form in [
        NormalForm::Conical { beta: -0.5 },
        NormalForm::Cylindrical { c: 2.0 },
        NormalForm::LogPole { nu: 1.0, n: 1 },
    ] {
        println!("{form:<28} {:.2e}", flatness_residual(&form.density(32), &grid)?);
    }
    let mut sampler = Sampler::new(3);
    for branch in Branch::ALL {
        let map = sampler.map(branch, 32, 0.02);
        println!("random {branch:<22} {:.2e}", flatness_residual(&density_of(&map)?, &grid)?);
    }
    Ok(())
}

fn main() -> flatsing::Result<()> {
    run_example()
}
