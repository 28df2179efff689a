use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::devmap::MetricDensity;
use crate::error::{Error, Result};

const GAUSS_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_8,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_8,
];

/// Product rule on an annulus: Gauss-Legendre panels in `log rho`, uniform
/// trapezoid nodes in the angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub angular: usize,
    /// Radial panels per unit of `log rho`.
    pub panels_per_unit: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            angular: 512,
            panels_per_unit: 4.0,
        }
    }
}

impl Quadrature {
    /// Doubles or halves both resolutions (`factor` 2.0 or 0.5).
    pub fn scaled(&self, factor: f64) -> Quadrature {
        Quadrature {
            angular: ((self.angular as f64 * factor).round() as usize).max(8),
            panels_per_unit: self.panels_per_unit * factor,
        }
    }

    fn panels(&self, width: f64) -> usize {
        ((width * self.panels_per_unit).ceil() as usize).max(1)
    }

    /// Integral of `rho^2 * density` over the circle of radius `rho` times `dtheta`.
    fn ring(&self, d: &MetricDensity, rho: f64) -> Result<f64> {
        let dtheta = 2.0 * PI / self.angular as f64;
        let radial = rho.powf(2.0 * d.a() + 2.0);
        let mut sum = 0.0;
        for j in 0..self.angular {
            let w = Complex64::from_polar(rho, j as f64 * dtheta);
            sum += d.g().eval(w).norm_sqr();
        }
        let value = sum * dtheta * radial;
        if !value.is_finite() {
            return Err(Error::AnnulusSingular { radius: rho });
        }
        Ok(value)
    }

    fn integrate(&self, d: &MetricDensity, r_inner: f64, r_outer: f64) -> Result<f64> {
        let (t0, t1) = (r_inner.ln(), r_outer.ln());
        let panels = self.panels(t1 - t0);
        let width = (t1 - t0) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = t0 + (p as f64 + 0.5) * width;
            for (x, wt) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS) {
                let rho = (mid + 0.5 * width * x).exp();
                total += wt * 0.5 * width * self.ring(d, rho)?;
            }
        }
        Ok(total)
    }
}

fn check_radii(r_inner: f64, r_outer: f64) -> Result<()> {
    if !(r_inner > 0.0 && r_outer > r_inner && r_outer.is_finite()) {
        return Err(Error::InvalidScan(format!(
            "annulus needs 0 < r_inner < r_outer, got {r_inner}, {r_outer}"
        )));
    }
    Ok(())
}

/// Area of `{r_inner < |w| < r_outer}` in the metric `d`.
pub fn annulus_area(d: &MetricDensity, r_inner: f64, r_outer: f64) -> Result<f64> {
    annulus_area_with(d, r_inner, r_outer, &Quadrature::default())
}

pub fn annulus_area_with(
    d: &MetricDensity,
    r_inner: f64,
    r_outer: f64,
    quad: &Quadrature,
) -> Result<f64> {
    check_radii(r_inner, r_outer)?;
    quad.integrate(&d.normalized(), r_inner, r_outer)
}

/// Areas of the nested annuli `{radii[i] < |w| < r_outer}` for decreasing
/// `radii`, accumulated ring by ring. Stops at the first ring that cannot be
/// integrated and returns the areas computed so far together with the error.
pub(crate) fn nested_areas(
    d: &MetricDensity,
    radii: &[f64],
    r_outer: f64,
    quad: &Quadrature,
) -> (Vec<f64>, Option<Error>) {
    let d = d.normalized();
    let bounds: Vec<(f64, f64)> = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, if i == 0 { r_outer } else { radii[i - 1] }))
        .collect();
    let pieces: Vec<Result<f64>> = bounds
        .par_iter()
        .map(|&(lo, hi)| {
            check_radii(lo, hi)?;
            quad.integrate(&d, lo, hi)
        })
        .collect();
    let mut areas = Vec::with_capacity(radii.len());
    let mut total = 0.0;
    for piece in pieces {
        match piece {
            Ok(a) => {
                total += a;
                areas.push(total);
            }
            Err(e) => return (areas, Some(e)),
        }
    }
    (areas, None)
}
