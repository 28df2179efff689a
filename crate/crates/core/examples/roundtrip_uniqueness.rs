// The invariants do not depend on the coordinate: a random map, rewritten in
// a random coordinate and moved by a Euclidean motion, classifies the same.
//
// ```bash
// cargo run --example roundtrip_uniqueness
// ```

use flatsing::classify::{classify, roundtrip_residual};
use flatsing::sampling::{Branch, Sampler};
use flatsing::Complex64;

pub fn run_example() -> flatsing::Result<()> {
    let order = 16;
    let mut sampler = Sampler::new(11);
    for branch in Branch::ALL {
        let map = sampler.map(branch, order, 0.5);
        let (form, change) = classify(&map, order)?;
        let residual = roundtrip_residual(&map, &form, &change, order)?;

        let k = sampler.unit_series(order, 0.5);
        let rotation = sampler.phase();
        let translation = if map.has_holonomy() {
            Complex64::new(0.0, 0.0)
        } else {
            sampler.in_disk(2.0)
        };
        let moved = map.reparametrize(&k)?.rigid_motion(rotation, translation)?;
        let (again, _) = classify(&moved, order)?;
        println!("{branch:<24} {form}  |  after change: {again}  (round trip {residual:.1e})");
    }
    Ok(())
}

fn main() -> flatsing::Result<()> {
    run_example()
}
