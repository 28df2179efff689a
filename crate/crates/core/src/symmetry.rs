//! Symmetry groups of the normal forms: origin-preserving coordinate changes
//! that leave each model density invariant.
//!
//! | family       | form                       | parameters      | law                                  |
//! |--------------|----------------------------|-----------------|--------------------------------------|
//! | `M1_generic` | any cone                   | `lambda`        | `lambda1 lambda2`                    |
//! | `M1_integer` | cone, integer `beta < -1`  | `lambda, zeta`  | `(lambda1 lambda2, lambda2 zeta1 + zeta2)` |
//! | `M2`         | cylinder                   | `p`             | `p1 p2`                              |
//! | `M3`         | log pole                   | `ek_index, a`   | `(e_k e_j, e_k a~ + e_j a)`          |
//!
//! In every law the first element acts first: `z~ = z h1(z)`, `z^ = z~ h2(z~)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::{apply_change, solve_log_pole_gauge, CoordinateChange, NormalForm};
use crate::error::{Error, Result};
use crate::series::LaurentSeries;

const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum SymmetryElement {
    /// Rotation `z -> lambda z`.
    #[serde(rename = "M1_generic")]
    M1Generic { lambda: Complex64 },
    /// `z~^-m = lambda z^-m + zeta` with `m = -(beta + 1)`.
    #[serde(rename = "M1_integer")]
    M1Integer { lambda: Complex64, zeta: Complex64 },
    /// Scaling `z -> p z`.
    M2 { p: Complex64 },
    /// `h = e_k + a z^n + ...` with `e_k = exp(2 pi i k / n)`.
    M3 { ek_index: u32, a: Complex64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "M1_generic")]
    M1Generic,
    #[serde(rename = "M1_integer")]
    M1Integer,
    M2,
    M3,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::M1Generic, Family::M1Integer, Family::M2, Family::M3];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::M1Generic => "M1_generic",
            Family::M1Integer => "M1_integer",
            Family::M2 => "M2",
            Family::M3 => "M3",
        })
    }
}

/// `exp(2 pi i k / n)`.
pub fn root_of_unity(k: i64, n: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

fn pole_order(form: &NormalForm) -> Option<u32> {
    match *form {
        NormalForm::LogPole { n, .. } => Some(n),
        _ => None,
    }
}

/// `m = -(beta + 1)` for an integer cone.
fn integer_cone_power(form: &NormalForm) -> Option<i32> {
    match *form {
        NormalForm::Conical { beta } if form.is_integer_cone() => Some(-(beta + 1.0) as i32),
        _ => None,
    }
}

impl SymmetryElement {
    pub fn family(&self) -> Family {
        match self {
            SymmetryElement::M1Generic { .. } => Family::M1Generic,
            SymmetryElement::M1Integer { .. } => Family::M1Integer,
            SymmetryElement::M2 { .. } => Family::M2,
            SymmetryElement::M3 { .. } => Family::M3,
        }
    }

    /// Whether the family acts on `form`. Rotations act on every cone.
    pub fn fits(family: Family, form: &NormalForm) -> bool {
        match family {
            Family::M1Generic => matches!(form, NormalForm::Conical { .. }),
            Family::M1Integer => form.is_integer_cone(),
            Family::M2 => matches!(form, NormalForm::Cylindrical { .. }),
            Family::M3 => matches!(form, NormalForm::LogPole { .. }),
        }
    }

    fn check_family(&self, form: &NormalForm) -> Result<()> {
        if Self::fits(self.family(), form) {
            Ok(())
        } else {
            Err(Error::FamilyMismatch {
                family: self.family().to_string(),
                form: form.to_string(),
            })
        }
    }

    /// Checks the parameter constraints and the family against `form`.
    pub fn validate(&self, form: &NormalForm) -> Result<()> {
        self.check_family(form)?;
        let unit = |z: Complex64, name: &str| {
            if z.is_finite() && (z.norm() - 1.0).abs() <= UNIT_TOL {
                Ok(())
            } else {
                Err(Error::InvalidElement(format!("|{name}| must be 1, got {}", z.norm())))
            }
        };
        match *self {
            SymmetryElement::M1Generic { lambda } => unit(lambda, "lambda"),
            SymmetryElement::M1Integer { lambda, zeta } => {
                unit(lambda, "lambda")?;
                if !zeta.is_finite() {
                    return Err(Error::InvalidElement("zeta must be finite".into()));
                }
                Ok(())
            }
            SymmetryElement::M2 { p } => {
                if p.is_finite() && p.norm() > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidElement("p must be nonzero".into()))
                }
            }
            SymmetryElement::M3 { ek_index, a } => {
                let n = pole_order(form).expect("family checked");
                if ek_index >= n {
                    return Err(Error::InvalidElement(format!(
                        "ek_index must lie in [0, {n}), got {ek_index}"
                    )));
                }
                if !a.is_finite() {
                    return Err(Error::InvalidElement("a must be finite".into()));
                }
                Ok(())
            }
        }
    }

    pub fn identity(family: Family) -> SymmetryElement {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match family {
            Family::M1Generic => SymmetryElement::M1Generic { lambda: one },
            Family::M1Integer => SymmetryElement::M1Integer { lambda: one, zeta: zero },
            Family::M2 => SymmetryElement::M2 { p: one },
            Family::M3 => SymmetryElement::M3 { ek_index: 0, a: zero },
        }
    }

    pub fn inverse(&self, form: &NormalForm) -> Result<SymmetryElement> {
        self.validate(form)?;
        Ok(match *self {
            SymmetryElement::M1Generic { lambda } => SymmetryElement::M1Generic {
                lambda: lambda.conj(),
            },
            SymmetryElement::M1Integer { lambda, zeta } => SymmetryElement::M1Integer {
                lambda: lambda.conj(),
                zeta: -zeta * lambda.conj(),
            },
            SymmetryElement::M2 { p } => SymmetryElement::M2 { p: p.inv() },
            SymmetryElement::M3 { ek_index, a } => {
                let n = pole_order(form).expect("family checked");
                let k = ek_index as i64;
                SymmetryElement::M3 {
                    ek_index: ((n as i64 - k) % n as i64) as u32,
                    a: -a * root_of_unity(-2 * k, n),
                }
            }
        })
    }

    /// `(h(0), coefficient of z^n in h)` for an M3 element.
    pub fn m3_coordinates(&self, form: &NormalForm) -> Option<(Complex64, Complex64)> {
        match (*self, pole_order(form)) {
            (SymmetryElement::M3 { ek_index, a }, Some(n)) => {
                Some((root_of_unity(ek_index as i64, n), a))
            }
            _ => None,
        }
    }
}

/// The group law; `g1` acts first.
pub fn compose_elements(
    g1: &SymmetryElement,
    g2: &SymmetryElement,
    form: &NormalForm,
) -> Result<SymmetryElement> {
    g1.validate(form)?;
    g2.validate(form)?;
    use SymmetryElement::*;
    match (*g1, *g2) {
        (M1Generic { lambda: l1 }, M1Generic { lambda: l2 }) => Ok(M1Generic { lambda: l1 * l2 }),
        (M1Integer { lambda: l1, zeta: z1 }, M1Integer { lambda: l2, zeta: z2 }) => Ok(M1Integer {
            lambda: l1 * l2,
            zeta: l2 * z1 + z2,
        }),
        (M2 { p: p1 }, M2 { p: p2 }) => Ok(M2 { p: p1 * p2 }),
        (M3 { ek_index: k, a }, M3 { ek_index: j, a: at }) => {
            let n = pole_order(form).expect("family checked");
            Ok(M3 {
                ek_index: (k + j) % n,
                a: root_of_unity(k as i64, n) * at + root_of_unity(j as i64, n) * a,
            })
        }
        _ => Err(Error::FamilyMismatch {
            family: format!("{} with {}", g1.family(), g2.family()),
            form: form.to_string(),
        }),
    }
}

/// M3 element as a series, together with the translation `zeta0` it
/// induces on the developing map `nu log z + z^-n`.
#[derive(Clone, Debug, PartialEq)]
pub struct M3Series {
    pub phi: LaurentSeries,
    pub h: LaurentSeries,
    pub zeta0: Complex64,
}

/// Solves `nu log h + (z h)^-n = z^-n + zeta0` for `h` with `h(0) = e_k` and
/// the coefficient of `z^n` equal to `a`.
pub fn m3_series(nu: f64, n: u32, ek_index: u32, a: Complex64, order: i32) -> Result<M3Series> {
    if ek_index >= n {
        return Err(Error::InvalidElement(format!(
            "ek_index must lie in [0, {n}), got {ek_index}"
        )));
    }
    let required = n as i32 + 1;
    if order < required {
        return Err(Error::InsufficientOrder { order, required });
    }
    let one = Complex64::new(1.0, 0.0);
    let ek = root_of_unity(ek_index as i64, n);
    // log h = phi, and h = e_k (1 + (a / e_k) z^n + ...)
    let (phi, eta) = solve_log_pole_gauge(
        &LaurentSeries::one(order),
        one,
        Complex64::new(nu, 0.0),
        n,
        ek_index as i64,
        a / ek,
        order,
    )?;
    let h = phi.exp()?;
    Ok(M3Series {
        phi,
        h,
        zeta0: -eta,
    })
}

/// The change realizing `g` for `form`.
pub fn element_to_change(
    g: &SymmetryElement,
    form: &NormalForm,
    order: i32,
) -> Result<CoordinateChange> {
    g.validate(form)?;
    match *g {
        SymmetryElement::M1Generic { lambda } => CoordinateChange::scalar(lambda, order),
        SymmetryElement::M1Integer { lambda, zeta } => {
            let m = integer_cone_power(form).expect("family checked");
            let base = &LaurentSeries::constant(lambda, order)
                + &LaurentSeries::monomial(zeta, m, order);
            CoordinateChange::new(base.pow_real(-1.0 / m as f64, 0)?)
        }
        SymmetryElement::M2 { p } => CoordinateChange::scalar(p, order),
        SymmetryElement::M3 { ek_index, a } => {
            let NormalForm::LogPole { nu, n } = *form else {
                unreachable!("family checked")
            };
            CoordinateChange::new(m3_series(nu, n, ek_index, a, order)?.h)
        }
    }
}

/// Coefficients of `nu z^n log h + h^-n - 1 - zeta0 z^n`, with the branch of
/// `log h` fixed by `log h(0) = 2 pi i k / n`. Zero exactly when `h` solves
/// the defining equation of M3.
pub fn m3_residual(nu: f64, n: u32, ek_index: u32, h: &LaurentSeries, zeta0: Complex64) -> Result<f64> {
    let target = 2.0 * PI * ek_index as f64 / n as f64;
    let principal = h.coeff(0).arg();
    let branch = ((target - principal) / (2.0 * PI)).round() as i64;
    let log_h = h.log_unit(branch)?;
    let order = h.order();
    let lhs = &log_h.scale(Complex64::new(nu, 0.0)).shift(n as i32) + &h.powi(-(n as i32))?;
    let rhs = &LaurentSeries::one(order) + &LaurentSeries::monomial(zeta0, n as i32, order);
    let diff = &lhs - &rhs;
    Ok(diff.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Coefficients of `z h' (nu z^n h^n - n) - n h (1 - h^n)`.
pub fn m3_ode_residual(nu: f64, n: u32, h: &LaurentSeries) -> Result<f64> {
    let n_i = n as i32;
    let order = h.order();
    let hn = h.powi(n_i)?;
    let nf = Complex64::new(n as f64, 0.0);
    let denom = &hn.scale(Complex64::new(nu, 0.0)).shift(n_i) - &LaurentSeries::constant(nf, order);
    let lhs = &h.derive().shift(1) * &denom;
    let rhs = (h * &(&LaurentSeries::one(order) - &hn)).scale(nf);
    let diff = &lhs - &rhs;
    Ok(diff.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// `F(z, h~) = n (h~ + e_k)(1 - (h~ + e_k)^n) / (nu z^n (h~ + e_k)^n - n)`, the
/// right side of `z h~' = F` for `h = e_k + h~`.
pub fn m3_vector_field(nu: f64, n: u32, ek_index: u32, z: Complex64, h_tilde: Complex64) -> Complex64 {
    let h = h_tilde + root_of_unity(ek_index as i64, n);
    let hn = h.powu(n);
    let nf = n as f64;
    h * (1.0 - hn) * nf / (z.powu(n) * hn * nu - nf)
}

/// Result of comparing a composed change with the group law. Deviations are
/// divided by `max(1, largest coefficient of the composed series)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompositionReport {
    /// Deviation on the coefficients where the law is asserted.
    pub residual: f64,
    /// Deviation over all coefficients up to the truncation order.
    pub full_residual: f64,
}

fn coefficient_scale(s: &LaurentSeries) -> f64 {
    s.coeffs().iter().map(|z| z.norm()).fold(1.0, f64::max)
}

/// Composes the two changes as series and compares with the change of the
/// composed element.
///
/// `M1_integer` is compared through `h^-m`, which removes the choice of
/// `m`-th root. For `M3` only `h(0)` and the coefficient of `z^n` enter the
/// asserted residual.
pub fn verify_composition(
    g1: &SymmetryElement,
    g2: &SymmetryElement,
    form: &NormalForm,
    order: i32,
) -> Result<CompositionReport> {
    let product = compose_elements(g1, g2, form)?;
    let composed = element_to_change(g1, form, order)?.then(&element_to_change(g2, form, order)?)?;
    let expected = element_to_change(&product, form, order)?;
    let scale = coefficient_scale(composed.h());
    match product {
        SymmetryElement::M1Integer { lambda, zeta } => {
            let m = integer_cone_power(form).expect("family checked");
            let lhs = composed.h().powi(-m)?;
            let order = lhs.order();
            let rhs = &LaurentSeries::constant(lambda, order) + &LaurentSeries::monomial(zeta, m, order);
            let residual = lhs.max_abs_diff(&rhs) / scale.powi(m);
            Ok(CompositionReport {
                residual,
                full_residual: residual,
            })
        }
        SymmetryElement::M3 { .. } => {
            let n = pole_order(form).expect("family checked") as i32;
            let (x, y) = (composed.h(), expected.h());
            let residual = (x.coeff(0) - y.coeff(0))
                .norm()
                .max((x.coeff(n) - y.coeff(n)).norm())
                / scale;
            Ok(CompositionReport {
                residual,
                full_residual: x.max_abs_diff(y) / scale,
            })
        }
        _ => {
            let residual = composed.h().max_abs_diff(expected.h()) / scale;
            Ok(CompositionReport {
                residual,
                full_residual: residual,
            })
        }
    }
}

/// Residual of the normal-form density against its pullback along `g`.
pub fn verify_invariance(form: &NormalForm, g: &SymmetryElement, order: i32) -> Result<f64> {
    let ch = element_to_change(g, form, order)?;
    let d = form.density(order);
    Ok(apply_change(&d, &ch, order)?.residual_against(&d))
}
