use num_complex::Complex64;

use crate::devmap::MetricDensity;
use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// Origin-preserving coordinate change `z~ = z h(z)` with `h(0) != 0`.
///
/// `eta` carries the free additive constant of the log-pole developing map
/// when the change came out of the third-form reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateChange {
    h: LaurentSeries,
    eta: Option<Complex64>,
}

impl CoordinateChange {
    pub fn new(h: LaurentSeries) -> Result<Self> {
        if !h.is_unit() {
            return Err(Error::InvalidChange(format!(
                "h must be a unit series (valuation {})",
                h.valuation()
            )));
        }
        Ok(CoordinateChange { h, eta: None })
    }

    pub fn identity(order: i32) -> Self {
        CoordinateChange {
            h: LaurentSeries::one(order),
            eta: None,
        }
    }

    /// `z -> p z`.
    pub fn scalar(p: Complex64, order: i32) -> Result<Self> {
        Self::new(LaurentSeries::constant(p, order))
    }

    pub fn with_eta(mut self, eta: Complex64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn h(&self) -> &LaurentSeries {
        &self.h
    }

    pub fn eta(&self) -> Option<Complex64> {
        self.eta
    }

    /// The map `z -> z h(z)` as a series.
    pub fn map_series(&self) -> LaurentSeries {
        self.h.shift(1)
    }

    /// The inverse change `z = z~ k(z~)`.
    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.map_series().revert()?.shift(-1))
    }

    /// Applies `self` first and `next` second: `z^ = z~ h2(z~)` with
    /// `z~ = z h1(z)`, so `h^ = h1 * h2(z h1)`.
    pub fn then(&self, next: &CoordinateChange) -> Result<Self> {
        let pulled = next.h.compose(&self.map_series())?;
        Self::new(&self.h * &pulled)
    }
}

/// Pulls a density back along `z~ = z h(z)`.
///
/// Given `|z~|^(2a) |G(z~)|^2 |dz~|^2`, returns the same metric in `z`:
/// `|z|^(2e) |h^e U(z h) (h + z h')|^2 |dz|^2` where `G = z~^v U` and `e = a + v`.
pub fn apply_change(
    d: &MetricDensity,
    ch: &CoordinateChange,
    order: i32,
) -> Result<MetricDensity> {
    let dn = d.normalized();
    let e = dn.a();
    let h = ch.h().truncate(order);
    let pulled = dn.g().compose(&h.shift(1))?;
    let jacobian = &h + &h.derive().shift(1);
    let weight = h.pow_real(e, 0)?;
    let g = (&(&weight * &pulled) * &jacobian).truncate(order);
    MetricDensity::new(e, g)
}
