//! Area growth of punctured disks: quadrature over annuli, scans over the
//! inner radius and fitting of the growth law.

mod fit;
mod quadrature;

use serde::{Deserialize, Serialize};

pub use fit::{fit_model, select_model, GrowthModel, ModelFit, PREFERENCE_MARGIN};
pub use quadrature::{annulus_area, annulus_area_with, Quadrature};

use crate::classify::{apply_change, CoordinateChange};
use crate::devmap::MetricDensity;
use crate::error::{Error, Result};

pub const DEFAULT_OUTER_RADIUS: f64 = 0.5;
pub const DEFAULT_R_MIN: f64 = 10.0;
pub const DEFAULT_R_MAX: f64 = 1e4;
pub const DEFAULT_R_COUNT: usize = 40;
/// Fewest samples a (possibly truncated) scan may keep.
pub const MIN_SAMPLES: usize = 8;

/// `count` log-spaced values from `r_min` to `r_max` inclusive.
pub fn log_grid(r_min: f64, r_max: f64, count: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_max > r_min && count >= 2) {
        return Err(Error::InvalidScan(format!(
            "log grid needs 0 < r_min < r_max and count >= 2, got {r_min}, {r_max}, {count}"
        )));
    }
    let (a, b) = (r_min.ln(), r_max.ln());
    Ok((0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

pub fn default_r_grid() -> Vec<f64> {
    log_grid(DEFAULT_R_MIN, DEFAULT_R_MAX, DEFAULT_R_COUNT).expect("default grid is valid")
}

/// Areas of `Delta(0, 1/r, R)` over a range of `r` and the fitted growth law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaScan {
    #[serde(rename = "R")]
    pub outer_radius: f64,
    pub samples: Vec<(f64, f64)>,
    pub fitted_model: GrowthModel,
    /// `N` for the power law, `0` otherwise.
    pub exponent: f64,
    pub fit_residual: f64,
    /// Set when the scan stopped before the last requested `r`.
    pub truncated: bool,
    pub fits: Vec<ModelFit>,
}

/// Everything in [`AreaScan`] except the samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    #[serde(rename = "R")]
    pub outer_radius: f64,
    pub sample_count: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub fitted_model: GrowthModel,
    pub exponent: f64,
    pub fit_residual: f64,
    pub truncated: bool,
    pub fits: Vec<ModelFit>,
}

impl AreaScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,area\n");
        for (r, a) in &self.samples {
            out.push_str(&format!("{r:e},{a:e}\n"));
        }
        out
    }

    pub fn summary(&self) -> ScanSummary {
        ScanSummary {
            outer_radius: self.outer_radius,
            sample_count: self.samples.len(),
            r_min: self.samples.first().map_or(f64::NAN, |s| s.0),
            r_max: self.samples.last().map_or(f64::NAN, |s| s.0),
            fitted_model: self.fitted_model,
            exponent: self.exponent,
            fit_residual: self.fit_residual,
            truncated: self.truncated,
            fits: self.fits.clone(),
        }
    }
}

/// Checks scan settings: `R` in `(0, 1)`, at least [`MIN_SAMPLES`] increasing
/// values of `r`, all above `1/R`, spanning two decades.
pub fn validate_scan(outer_radius: f64, r_values: &[f64]) -> Result<()> {
    if !(outer_radius > 0.0 && outer_radius < 1.0) {
        return Err(Error::InvalidScan(format!(
            "outer radius must lie in (0, 1), got {outer_radius}"
        )));
    }
    if r_values.len() < MIN_SAMPLES {
        return Err(Error::InvalidScan(format!(
            "need at least {MIN_SAMPLES} values of r, got {}",
            r_values.len()
        )));
    }
    if r_values.iter().any(|r| !r.is_finite()) {
        return Err(Error::InvalidScan("r values must be finite".into()));
    }
    if r_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidScan("r values must be strictly increasing".into()));
    }
    if r_values[0] * outer_radius <= 1.0 {
        return Err(Error::InvalidScan(format!(
            "every r must exceed 1/R = {}",
            1.0 / outer_radius
        )));
    }
    let span = r_values[r_values.len() - 1] / r_values[0];
    if span < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidScan(format!(
            "r values must span two decades, got a ratio of {span}"
        )));
    }
    Ok(())
}

pub fn growth_scan(d: &MetricDensity, outer_radius: f64, r_values: &[f64]) -> Result<AreaScan> {
    growth_scan_with(d, outer_radius, r_values, &Quadrature::default())
}

pub fn growth_scan_with(
    d: &MetricDensity,
    outer_radius: f64,
    r_values: &[f64],
    quad: &Quadrature,
) -> Result<AreaScan> {
    validate_scan(outer_radius, r_values)?;
    let radii: Vec<f64> = r_values.iter().map(|r| 1.0 / r).collect();
    let (areas, failure) = quadrature::nested_areas(d, &radii, outer_radius, quad);
    if areas.len() < MIN_SAMPLES {
        return Err(failure.unwrap_or_else(|| {
            Error::InvalidScan("too few evaluable samples".into())
        }));
    }
    let r = &r_values[..areas.len()];
    let (chosen, fits) = select_model(r, &areas);
    Ok(AreaScan {
        outer_radius,
        samples: r.iter().cloned().zip(areas.iter().cloned()).collect(),
        fitted_model: chosen.model,
        exponent: if chosen.model == GrowthModel::Power {
            chosen.exponent
        } else {
            0.0
        },
        fit_residual: chosen.residual,
        truncated: failure.is_some(),
        fits,
    })
}

/// Growth law before and after a change of coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub model_before: GrowthModel,
    pub model_after: GrowthModel,
    pub exponent_before: f64,
    pub exponent_after: f64,
}

impl InvarianceReport {
    pub fn holds(&self, exponent_tol: f64) -> bool {
        self.model_before == self.model_after
            && (self.exponent_before - self.exponent_after).abs() < exponent_tol
    }
}

/// Scans `d` and its pullback along `ch` with the same settings.
pub fn invariance_check(
    d: &MetricDensity,
    ch: &CoordinateChange,
    outer_radius: f64,
    r_values: &[f64],
    order: i32,
) -> Result<InvarianceReport> {
    let before = growth_scan(d, outer_radius, r_values)?;
    let moved = apply_change(d, ch, order)?;
    let after = growth_scan(&moved, outer_radius, r_values)?;
    Ok(InvarianceReport {
        model_before: before.fitted_model,
        model_after: after.fitted_model,
        exponent_before: before.exponent,
        exponent_after: after.exponent,
    })
}
