//! Developing maps of flat metrics on the punctured disk and the densities
//! they induce.
//!
//! A developing map is stored as `(alpha, c, psi)`:
//! `f(w) = w^alpha psi(w)` when `alpha != 0`, and `f(w) = c log w + psi(w)`
//! when `alpha == 0`. The induced metric is `|f'(w)|^2 |dw|^2`, which we keep
//! as a [`MetricDensity`] `|w|^(2a) |G(w)|^2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{LaurentSeries, LEADING_ZERO_THRESHOLD};

/// Radius inside which truncated series are trusted for evaluation.
pub const RELIABLE_RADIUS: f64 = 0.5;

/// Values of `alpha` and `|c|` below this count as zero.
pub const ZERO_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct DevelopingMap {
    alpha: f64,
    c: Complex64,
    psi: LaurentSeries,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    alpha: f64,
    c: Complex64,
    psi: LaurentSeries,
}

impl TryFrom<MapRepr> for DevelopingMap {
    type Error = Error;
    fn try_from(r: MapRepr) -> Result<Self> {
        DevelopingMap::new(r.alpha, r.c, r.psi)
    }
}

impl From<DevelopingMap> for MapRepr {
    fn from(m: DevelopingMap) -> Self {
        MapRepr {
            alpha: m.alpha,
            c: m.c,
            psi: m.psi,
        }
    }
}

impl DevelopingMap {
    pub fn new(alpha: f64, c: Complex64, psi: LaurentSeries) -> Result<Self> {
        if !alpha.is_finite() || !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidMap(format!("alpha = {alpha} is outside [0, 1)")));
        }
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidMap("non-finite log coefficient".into()));
        }
        let alpha = if alpha < ZERO_TOL { 0.0 } else { alpha };
        let c = if c.norm() < ZERO_TOL {
            Complex64::new(0.0, 0.0)
        } else {
            c
        };
        if alpha != 0.0 && c.norm() != 0.0 {
            // the translation normalizing away the log term is not applied here
            return Err(Error::InvalidMap(
                "nontrivial holonomy (alpha != 0) requires c = 0".into(),
            ));
        }
        Ok(DevelopingMap { alpha, c, psi })
    }

    /// `f(w) = w^alpha psi(w)`.
    pub fn with_holonomy(alpha: f64, psi: LaurentSeries) -> Result<Self> {
        Self::new(alpha, Complex64::new(0.0, 0.0), psi)
    }

    /// `f(w) = c log w + psi(w)`.
    pub fn logarithmic(c: Complex64, psi: LaurentSeries) -> Result<Self> {
        Self::new(0.0, c, psi)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Translation part of the monodromy, `y0 = 2 pi i c`.
    pub fn y0(&self) -> Complex64 {
        self.c * Complex64::new(0.0, 2.0 * PI)
    }

    pub fn psi(&self) -> &LaurentSeries {
        &self.psi
    }

    pub fn has_holonomy(&self) -> bool {
        self.alpha != 0.0
    }

    pub fn density(&self) -> Result<MetricDensity> {
        density_of(self)
    }

    /// The same metric written in a new coordinate `u` with `w = u k(u)`.
    pub fn reparametrize(&self, k: &LaurentSeries) -> Result<Self> {
        if !k.is_unit() {
            return Err(Error::InvalidChange(
                "reparametrization factor must be a unit series".into(),
            ));
        }
        let inner = k.shift(1);
        let pulled = self.psi.substitute(&inner)?;
        let psi = if self.has_holonomy() {
            &k.pow_real(self.alpha, 0)? * &pulled
        } else if self.c.norm() != 0.0 {
            &k.log_unit(0)?.scale(self.c) + &pulled
        } else {
            pulled
        };
        Self::new(self.alpha, self.c, psi)
    }

    /// Post-composes the developing map with the Euclidean motion
    /// `x -> rotation * x + translation`; the metric is unchanged.
    pub fn rigid_motion(&self, rotation: Complex64, translation: Complex64) -> Result<Self> {
        if (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMap("rotation must have unit modulus".into()));
        }
        if self.has_holonomy() && translation.norm() > ZERO_TOL {
            return Err(Error::InvalidMap(
                "a translation would reintroduce the log term of a map with holonomy".into(),
            ));
        }
        let order = self.psi.order().max(1);
        let psi = &self.psi.scale(rotation) + &LaurentSeries::constant(translation, order);
        Self::new(self.alpha, self.c * rotation, psi)
    }
}

/// Density `|w|^(2a) |G(w)|^2` of a flat conformal metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct MetricDensity {
    a: f64,
    g: LaurentSeries,
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    a: f64,
    #[serde(rename = "G")]
    g: LaurentSeries,
}

impl TryFrom<DensityRepr> for MetricDensity {
    type Error = Error;
    fn try_from(r: DensityRepr) -> Result<Self> {
        MetricDensity::new(r.a, r.g)
    }
}

impl From<MetricDensity> for DensityRepr {
    fn from(d: MetricDensity) -> Self {
        DensityRepr { a: d.a, g: d.g }
    }
}

impl MetricDensity {
    pub fn new(a: f64, g: LaurentSeries) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidMap("non-finite radial exponent".into()));
        }
        if g.is_zero() {
            return Err(Error::DegenerateMap);
        }
        Ok(MetricDensity { a, g })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn g(&self) -> &LaurentSeries {
        &self.g
    }

    /// Moves the valuation of `G` into the exponent so `G(0) != 0`.
    pub fn normalized(&self) -> MetricDensity {
        let v = self.g.valuation();
        MetricDensity {
            a: self.a + v as f64,
            g: self.g.shift(-v),
        }
    }

    pub fn eval(&self, w: Complex64) -> Result<f64> {
        eval_density(self, w)
    }

    /// `log lambda = a log|w| + log|G(w)|`.
    pub fn log_lambda(&self, w: Complex64) -> f64 {
        self.a * w.norm().ln() + self.g.eval(w).norm().ln()
    }

    /// Coefficientwise distance to `other` as metrics.
    ///
    /// Both densities are normalized; the exponents must agree, and the unit
    /// parts may differ by a unimodular constant, which is divided out. The
    /// result is the largest coefficient deviation, scaled by
    /// `max(1, max |coefficient of other|)`. Returns infinity when the radial
    /// exponents differ.
    pub fn residual_against(&self, other: &MetricDensity) -> f64 {
        let (x, y) = (self.normalized(), other.normalized());
        if (x.a - y.a).abs() > 1e-9 {
            return f64::INFINITY;
        }
        let ratio = y.g.leading() / x.g.leading();
        let phase = ratio / ratio.norm();
        let aligned = x.g.scale(phase);
        let scale = y
            .g
            .coeffs()
            .iter()
            .map(|z| z.norm())
            .fold(1.0, f64::max);
        aligned.max_abs_diff(&y.g) / scale
    }
}

/// Density induced by a developing map.
///
/// With holonomy: `a = alpha - 1`, `G = alpha psi + w psi'`.
/// Without: `a = -1`, `G = c + w psi'`.
pub fn density_of(map: &DevelopingMap) -> Result<MetricDensity> {
    let psi = map.psi();
    let w_dpsi = psi.derive().shift(1);
    let (a, g) = if map.has_holonomy() {
        (map.alpha - 1.0, &psi.scale(Complex64::new(map.alpha, 0.0)) + &w_dpsi)
    } else {
        let order = w_dpsi.order().max(1);
        (-1.0, &LaurentSeries::constant(map.c, order) + &w_dpsi)
    };
    if g.is_zero() || g.coeffs().iter().all(|z| z.norm() < LEADING_ZERO_THRESHOLD) {
        return Err(Error::DegenerateMap);
    }
    MetricDensity::new(a, g)
}

/// `|w|^(2a) |G(w)|^2`.
pub fn eval_density(d: &MetricDensity, w: Complex64) -> Result<f64> {
    if w.norm() == 0.0 {
        return Err(Error::EvaluationAtPuncture);
    }
    Ok(w.norm().powf(2.0 * d.a) * d.g.eval(w).norm_sqr())
}

/// Polar sampling of an annulus for the flatness check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGrid {
    pub r_inner: f64,
    pub r_outer: f64,
    pub radial: usize,
    pub angular: usize,
    /// Finite-difference step.
    pub step: f64,
}

impl Default for AnnulusGrid {
    fn default() -> Self {
        AnnulusGrid {
            r_inner: 0.2,
            r_outer: 0.8,
            radial: 13,
            angular: 24,
            step: 1e-3,
        }
    }
}

impl AnnulusGrid {
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.radial * self.angular);
        for i in 0..self.radial {
            let r = if self.radial == 1 {
                self.r_inner
            } else {
                self.r_inner + (self.r_outer - self.r_inner) * i as f64 / (self.radial - 1) as f64
            };
            for j in 0..self.angular {
                let theta = 2.0 * PI * (j as f64 + 0.5) / self.angular as f64;
                pts.push(Complex64::from_polar(r, theta));
            }
        }
        pts
    }
}

/// Largest `|Laplacian(log lambda)|` over the grid.
///
/// The Laplacian uses the fourth-order five-point central stencil along each
/// axis, so a harmonic `log lambda` leaves only `O(h^4)` and rounding error.
pub fn flatness_residual(d: &MetricDensity, grid: &AnnulusGrid) -> Result<f64> {
    if !(grid.r_inner > 0.0 && grid.r_outer >= grid.r_inner && grid.step > 0.0) {
        return Err(Error::InvalidScan("flatness grid must avoid the origin".into()));
    }
    if grid.r_inner <= 2.0 * grid.step {
        return Err(Error::EvaluationAtPuncture);
    }
    let h = grid.step;
    let weights = [(-2.0, -1.0), (-1.0, 16.0), (1.0, 16.0), (2.0, -1.0)];
    let residuals: Vec<Result<f64>> = grid
        .points()
        .par_iter()
        .map(|&w| {
            let log_at = |p: Complex64| -> Result<f64> {
                let gv = d.g.eval(p).norm();
                let v = d.a * p.norm().ln() + gv.ln();
                if gv <= 1e-12 || !v.is_finite() {
                    return Err(Error::LogSingularityOnGrid { re: p.re, im: p.im });
                }
                Ok(v)
            };
            let center = log_at(w)?;
            let mut lap = -60.0 * center;
            for (offset, weight) in weights {
                lap += weight * log_at(w + Complex64::new(offset * h, 0.0))?;
                lap += weight * log_at(w + Complex64::new(0.0, offset * h))?;
            }
            Ok((lap / (12.0 * h * h)).abs())
        })
        .collect();
    residuals
        .into_iter()
        .try_fold(0.0, |acc, r| r.map(|v| f64::max(acc, v)))
}
