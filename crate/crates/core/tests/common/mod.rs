//! Reference values computed without the library's series machinery.
#![allow(dead_code)]

use std::f64::consts::PI;

use flatsing::classify::NormalForm;
use flatsing::devmap::DevelopingMap;
use flatsing::Complex64;

/// Exact area of `{r_inner < |z| < r_outer}` under a normal-form density.
pub fn normal_form_area(form: &NormalForm, r_inner: f64, r_outer: f64) -> f64 {
    match *form {
        NormalForm::Conical { beta } => {
            let p = 2.0 * beta + 2.0;
            PI * (beta + 1.0) * (r_outer.powf(p) - r_inner.powf(p))
        }
        NormalForm::Cylindrical { c } => 2.0 * PI * c * c * (r_outer / r_inner).ln(),
        NormalForm::LogPole { nu, n } => {
            let p = -2.0 * n as f64;
            PI * n as f64 * (r_inner.powf(p) - r_outer.powf(p))
                + 2.0 * PI * nu * nu * (r_outer / r_inner).ln()
        }
    }
}

/// `|f'(w)|^2` from the raw coefficients of `psi`, term by term.
pub fn direct_density(map: &DevelopingMap, w: Complex64) -> f64 {
    let psi = map.psi();
    let v = psi.valuation();
    let mut value = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(0.0, 0.0);
    for (i, &a) in psi.coeffs().iter().enumerate() {
        let k = v + i as i32;
        value += a * w.powi(k);
        slope += a * k as f64 * w.powi(k - 1);
    }
    let alpha = map.alpha();
    let fp = if alpha != 0.0 {
        // d/dw (w^alpha psi), principal branch of w^alpha
        let wa = w.powf(alpha);
        wa * (value * alpha / w + slope)
    } else {
        map.c() / w + slope
    };
    fp.norm_sqr()
}

/// Coefficients of `(lambda + zeta z^m)^(-1/m)` up to `z^(order-1)` by the
/// binomial series, principal branch of `lambda^(-1/m)`.
pub fn m1_integer_closed_form(lambda: Complex64, zeta: Complex64, m: i32, order: i32) -> Vec<Complex64> {
    let gamma = -1.0 / m as f64;
    let lead = lambda.powf(gamma);
    let ratio = zeta / lambda;
    let mut out = vec![Complex64::new(0.0, 0.0); order as usize];
    let mut binom = 1.0;
    let mut k = 0;
    while m * k < order {
        out[(m * k) as usize] = lead * binom * ratio.powi(k);
        binom *= (gamma - k as f64) / (k as f64 + 1.0);
        k += 1;
    }
    out
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
