//! Classification of developing maps into the three normal forms, with the
//! normalizing coordinate change as a truncated series.

mod change;
mod normal_form;
mod reduce;

use num_complex::Complex64;
use serde::Serialize;

pub use change::{apply_change, CoordinateChange};
pub use normal_form::{FormTag, NormalForm};
pub use reduce::{
    conical_change, cylinder_change, log_pole_equation_residual, solve_log_pole_gauge,
    third_form_change, third_form_residual, ThirdFormChange,
};

use crate::devmap::{density_of, DevelopingMap};
use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// Smallest working order accepted by [`classify`].
pub const MIN_ORDER: i32 = 4;

/// Classifies with the principal root for the third form.
pub fn classify(map: &DevelopingMap, order: i32) -> Result<(NormalForm, CoordinateChange)> {
    classify_with_root(map, order, 0)
}

/// Returns the normal form of `map` and `h` with `z = w h(w)` the normalizing
/// coordinate. `root_index` selects `h(0)` among the `n` admissible values in
/// the log-pole case and is ignored otherwise.
pub fn classify_with_root(
    map: &DevelopingMap,
    order: i32,
    root_index: i64,
) -> Result<(NormalForm, CoordinateChange)> {
    if order < MIN_ORDER {
        return Err(Error::InsufficientOrder {
            order,
            required: MIN_ORDER,
        });
    }
    // rejects degenerate maps before any reduction
    density_of(map)?;
    let psi = map.psi();
    if map.has_holonomy() || map.c().norm() == 0.0 {
        let (beta, h) = conical_change(map, order)?;
        let form = NormalForm::Conical { beta };
        form.validate()
            .map_err(|e| Error::Internal(format!("conical branch: {e}")))?;
        return Ok((form, CoordinateChange::new(h)?));
    }
    if psi.is_zero() || psi.valuation() >= 0 {
        let (c, h) = cylinder_change(map, order)?;
        return Ok((NormalForm::Cylindrical { c }, CoordinateChange::new(h)?));
    }
    let tf = third_form_change(map, order, root_index)?;
    let change = CoordinateChange::new(tf.h)?.with_eta(tf.eta);
    Ok((NormalForm::LogPole { nu: tf.nu, n: tf.n }, change))
}

/// Largest coefficient residual of the classification round trip: the
/// normal-form density pulled back along `z = w h(w)` must reproduce the
/// density of `map`.
pub fn roundtrip_residual(
    map: &DevelopingMap,
    form: &NormalForm,
    change: &CoordinateChange,
    order: i32,
) -> Result<f64> {
    let input = density_of(map)?;
    let pulled = apply_change(&form.density(order), change, order)?;
    Ok(pulled.residual_against(&input))
}

/// Residual of the reverse direction: the input density pulled back along the
/// inverse change against the normal form. Coefficients of the inverse grow
/// like `|h(0)|^-k`, so this is only meaningful when `|h(0)|` is not small.
pub fn inverse_roundtrip_residual(
    map: &DevelopingMap,
    form: &NormalForm,
    change: &CoordinateChange,
    order: i32,
) -> Result<f64> {
    let normal = form.density(order);
    let pushed = apply_change(&density_of(map)?, &change.inverse()?, order)?;
    Ok(pushed.residual_against(&normal))
}

/// JSON shape of a classification result.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyOutput {
    #[serde(flatten)]
    pub form: NormalForm,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Complex64>,
    pub change: LaurentSeries,
}

impl ClassifyOutput {
    pub fn new(form: NormalForm, change: &CoordinateChange) -> Self {
        ClassifyOutput {
            form,
            eta: change.eta(),
            change: change.h().clone(),
        }
    }
}
