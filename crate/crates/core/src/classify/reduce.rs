//! Reductions of a developing map to its normal form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::devmap::DevelopingMap;
use crate::error::{Error, Result};
use crate::series::{LaurentSeries, LEADING_ZERO_THRESHOLD};

/// Conical reduction.
///
/// Writes `psi = w^m e^g` and returns `beta = alpha + m - 1` together with
/// `h = exp(g / (beta + 1))`, so `z = w h(w)` satisfies `z^(beta+1) = f`.
/// Without holonomy and log term, a `psi` regular and nonzero at the origin is
/// first translated by `-psi(0)`.
pub fn conical_change(map: &DevelopingMap, order: i32) -> Result<(f64, LaurentSeries)> {
    if !map.has_holonomy() && map.c().norm() != 0.0 {
        return Err(Error::InvalidMap(
            "conical reduction needs alpha != 0 or a vanishing log coefficient".into(),
        ));
    }
    let mut psi = map.psi().clone();
    if !map.has_holonomy() && !psi.is_zero() && psi.valuation() == 0 {
        psi = &psi - &LaurentSeries::constant(psi.coeff(0), psi.order());
    }
    if psi.is_zero() {
        return Err(Error::DegenerateMap);
    }
    let m = psi.valuation();
    let beta = map.alpha() + m as f64 - 1.0;
    if (beta + 1.0).abs() < 1e-12 {
        return Err(Error::Internal(format!(
            "conical reduction produced beta = -1 (alpha = {}, m = {m})",
            map.alpha()
        )));
    }
    let g = psi.shift(-m).log_unit(0)?;
    let h = g.scale(Complex64::new(1.0 / (beta + 1.0), 0.0)).exp()?;
    Ok((beta, h.truncate(order)))
}

/// Cylindrical reduction: `h = exp(psi / c)`; the invariant is `|c|`.
pub fn cylinder_change(map: &DevelopingMap, order: i32) -> Result<(f64, LaurentSeries)> {
    let c = map.c();
    if map.has_holonomy() || c.norm() == 0.0 {
        return Err(Error::InvalidMap(
            "cylindrical reduction needs alpha = 0 and c != 0".into(),
        ));
    }
    let psi = map.psi();
    if !psi.is_zero() && psi.valuation() < 0 {
        return Err(Error::InvalidMap(
            "cylindrical reduction needs psi without a pole".into(),
        ));
    }
    let h = psi.scale(c.inv()).exp()?;
    Ok((c.norm(), h.truncate(order)))
}

/// Output of the third-form reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct ThirdFormChange {
    pub nu: f64,
    pub n: u32,
    /// `z = w exp(phi(w))`.
    pub phi: LaurentSeries,
    pub h: LaurentSeries,
    pub eta: Complex64,
    pub root_index: i64,
}

/// Solves `g = rot e^(-n phi) + w^n (c phi + eta)` for a power series `phi`
/// and a constant `eta` by matching coefficients up to `len`.
///
/// `phi(0)` is `(2 pi i k - Log(g(0)/rot)) / n` for `k = root_index`. Orders
/// below `n` are forced; at order `n` the pair `(phi_n, eta)` has one degree
/// of freedom, fixed here by the given `phi_n`; higher orders are forced again.
pub fn solve_log_pole_gauge(
    g: &LaurentSeries,
    rot: Complex64,
    c: Complex64,
    n: u32,
    root_index: i64,
    phi_n: Complex64,
    len: i32,
) -> Result<(LaurentSeries, Complex64)> {
    let nn = n as usize;
    if n == 0 {
        return Err(Error::Internal("log-pole gauge with n = 0".into()));
    }
    if len <= n as i32 {
        return Err(Error::InsufficientOrder {
            order: len,
            required: n as i32 + 1,
        });
    }
    if g.is_zero() || g.valuation() != 0 || g.leading().norm() < LEADING_ZERO_THRESHOLD {
        return Err(Error::PoleOrderMisdetection);
    }
    let len = len as usize;
    let gd: Vec<Complex64> = (0..len as i32).map(|k| g.coeff(k)).collect();
    let g0 = gd[0];
    let nf = n as f64;
    let divisor = g0 * nf;

    let mut phi = vec![Complex64::new(0.0, 0.0); len];
    // e = exp(-n phi), maintained alongside phi
    let mut e = vec![Complex64::new(0.0, 0.0); len];
    phi[0] = (Complex64::new(0.0, 2.0 * PI * root_index as f64) - (g0 / rot).ln()) / nf;
    e[0] = (-phi[0] * nf).exp();
    let mut eta = Complex64::new(0.0, 0.0);
    for m in 1..len {
        let rest: Complex64 = (1..m)
            .map(|k| -phi[k] * nf * e[m - k] * k as f64)
            .sum::<Complex64>()
            / m as f64;
        phi[m] = if m < nn {
            (rot * rest - gd[m]) / divisor
        } else if m == nn {
            eta = gd[m] + divisor * phi_n - rot * rest - c * phi[0];
            phi_n
        } else {
            (rot * rest + c * phi[m - nn] - gd[m]) / divisor
        };
        e[m] = -phi[m] * nf * e[0] + rest;
    }
    let phi = LaurentSeries::new(0, phi, len as i32)?;
    Ok((phi, eta))
}

/// Coefficients of `rot e^(-n phi) + w^n (c phi + eta) - g`, computed with
/// plain series arithmetic (independent of the recursion that produced `phi`).
pub fn log_pole_equation_residual(
    g: &LaurentSeries,
    rot: Complex64,
    c: Complex64,
    n: u32,
    phi: &LaurentSeries,
    eta: Complex64,
) -> Result<f64> {
    let n = n as i32;
    let exp_part = phi.scale(Complex64::new(-(n as f64), 0.0)).exp()?.scale(rot);
    let linear = (&phi.scale(c) + &LaurentSeries::constant(eta, phi.order())).shift(n);
    let lhs = &exp_part + &linear;
    let diff = &lhs - g;
    Ok(diff.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Third-form reduction for `f = c log w + w^-n (c0 + c1 w + ...)`.
pub fn third_form_change(
    map: &DevelopingMap,
    order: i32,
    root_index: i64,
) -> Result<ThirdFormChange> {
    let c = map.c();
    if map.has_holonomy() || c.norm() == 0.0 {
        return Err(Error::InvalidMap(
            "third-form reduction needs alpha = 0 and c != 0".into(),
        ));
    }
    let psi = map.psi();
    if psi.is_zero() || psi.valuation() >= 0 {
        return Err(Error::InvalidMap("third-form reduction needs psi with a pole".into()));
    }
    let n = (-psi.valuation()) as u32;
    let required = 2 * n as i32 + 2;
    if order < required {
        return Err(Error::InsufficientOrder { order, required });
    }
    let g = psi.shift(n as i32);
    let rot = c / c.norm();
    let len = order.min(g.order());
    let (phi, eta) = solve_log_pole_gauge(&g, rot, c, n, root_index, Complex64::new(0.0, 0.0), len)?;
    let h = phi.exp()?;
    Ok(ThirdFormChange {
        nu: c.norm(),
        n,
        phi,
        h,
        eta,
        root_index,
    })
}

/// Residual of the defining equation for a third-form reduction of `map`.
pub fn third_form_residual(map: &DevelopingMap, tf: &ThirdFormChange) -> Result<f64> {
    let c = map.c();
    let g = map.psi().shift(tf.n as i32);
    log_pole_equation_residual(&g, c / c.norm(), c, tf.n, &tf.phi, tf.eta)
}
