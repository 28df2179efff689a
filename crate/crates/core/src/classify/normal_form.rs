use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::devmap::{DevelopingMap, MetricDensity};
use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// The three local models of a flat metric near an isolated singularity with
/// polynomial area growth.
///
/// - `Conical`: `(beta+1)^2 |z|^(2 beta) |dz|^2`, `beta != -1`
/// - `Cylindrical`: `c^2 |z|^-2 |dz|^2`, `c > 0`
/// - `LogPole`: `|nu/z - n/z^(n+1)|^2 |dz|^2`, `nu > 0`, `n >= 1`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub enum NormalForm {
    Conical { beta: f64 },
    Cylindrical { c: f64 },
    LogPole { nu: f64, n: u32 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
enum FormRepr {
    Conical { beta: f64 },
    Cylindrical { c: f64 },
    LogPole { nu: f64, n: u32 },
}

impl TryFrom<FormRepr> for NormalForm {
    type Error = Error;
    fn try_from(r: FormRepr) -> Result<Self> {
        let form = match r {
            FormRepr::Conical { beta } => NormalForm::Conical { beta },
            FormRepr::Cylindrical { c } => NormalForm::Cylindrical { c },
            FormRepr::LogPole { nu, n } => NormalForm::LogPole { nu, n },
        };
        form.validate()?;
        Ok(form)
    }
}

impl From<NormalForm> for FormRepr {
    fn from(f: NormalForm) -> Self {
        match f {
            NormalForm::Conical { beta } => FormRepr::Conical { beta },
            NormalForm::Cylindrical { c } => FormRepr::Cylindrical { c },
            NormalForm::LogPole { nu, n } => FormRepr::LogPole { nu, n },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormTag {
    Conical,
    Cylindrical,
    LogPole,
}

impl fmt::Display for FormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormTag::Conical => "conical",
            FormTag::Cylindrical => "cylindrical",
            FormTag::LogPole => "log_pole",
        })
    }
}

impl NormalForm {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NormalForm::Conical { beta } if !beta.is_finite() || (beta + 1.0).abs() < 1e-12 => {
                Err(Error::InvalidNormalForm(format!("cone exponent beta = {beta}")))
            }
            NormalForm::Cylindrical { c } if !(c.is_finite() && c > 0.0) => {
                Err(Error::InvalidNormalForm(format!("cylinder constant c = {c}")))
            }
            NormalForm::LogPole { nu, n } if !(nu.is_finite() && nu > 0.0) || n == 0 => Err(
                Error::InvalidNormalForm(format!("log-pole constants nu = {nu}, n = {n}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn tag(&self) -> FormTag {
        match self {
            NormalForm::Conical { .. } => FormTag::Conical,
            NormalForm::Cylindrical { .. } => FormTag::Cylindrical,
            NormalForm::LogPole { .. } => FormTag::LogPole,
        }
    }

    /// Conical with an integer `beta < -1`: the only cone whose symmetry group
    /// is larger than the rotations.
    pub fn is_integer_cone(&self) -> bool {
        matches!(*self, NormalForm::Conical { beta } if beta < -1.0 && beta.fract() == 0.0)
    }

    pub fn density(&self, order: i32) -> MetricDensity {
        let re = |x: f64| Complex64::new(x, 0.0);
        let (a, g) = match *self {
            NormalForm::Conical { beta } => (beta, LaurentSeries::constant(re(beta + 1.0), order)),
            NormalForm::Cylindrical { c } => (-1.0, LaurentSeries::constant(re(c), order)),
            NormalForm::LogPole { nu, n } => {
                let n = n as i32;
                let pole = LaurentSeries::monomial(re(-(n as f64)), -n, order);
                (-1.0, &pole + &LaurentSeries::constant(re(nu), order))
            }
        };
        MetricDensity::new(a, g).expect("normal-form densities are nonzero")
    }

    /// A developing map whose metric is exactly this normal form.
    pub fn developing_map(&self, order: i32) -> DevelopingMap {
        let one = Complex64::new(1.0, 0.0);
        let map = match *self {
            NormalForm::Conical { beta } => {
                let s = beta + 1.0;
                let m = s.floor();
                DevelopingMap::with_holonomy(s - m, LaurentSeries::monomial(one, m as i32, order))
            }
            NormalForm::Cylindrical { c } => {
                DevelopingMap::logarithmic(Complex64::new(c, 0.0), LaurentSeries::zero(order))
            }
            NormalForm::LogPole { nu, n } => DevelopingMap::logarithmic(
                Complex64::new(nu, 0.0),
                LaurentSeries::monomial(one, -(n as i32), order),
            ),
        };
        map.expect("normal-form developing maps are valid")
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormalForm::Conical { beta } => write!(f, "conical(beta = {beta})"),
            NormalForm::Cylindrical { c } => write!(f, "cylindrical(c = {c})"),
            NormalForm::LogPole { nu, n } => write!(f, "log_pole(nu = {nu}, n = {n})"),
        }
    }
}
