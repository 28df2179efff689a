use serde::{Deserialize, Serialize};

/// Growth laws for `A(r) = Area(1/r < |w| < R)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthModel {
    /// `A -> b`, fitted as `b + K r^s` with `s < 0`.
    Constant,
    /// `A = b + M ln r`.
    Logarithmic,
    /// `A = b + M r^N` with `N > 0`.
    Power,
}

impl GrowthModel {
    pub const ALL: [GrowthModel; 3] = [
        GrowthModel::Constant,
        GrowthModel::Logarithmic,
        GrowthModel::Power,
    ];
}

impl std::fmt::Display for GrowthModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GrowthModel::Constant => "constant",
            GrowthModel::Logarithmic => "logarithmic",
            GrowthModel::Power => "power",
        })
    }
}

/// Exponent ranges searched for the decaying and growing terms.
pub const DECAY_RANGE: (f64, f64) = (-12.0, -0.05);
pub const GROWTH_RANGE: (f64, f64) = (0.05, 20.0);
/// A simpler model is kept if its residual is within this factor of the best.
pub const PREFERENCE_MARGIN: f64 = 1.05;
const ABSOLUTE_SLACK: f64 = 1e-10;
const GRID_POINTS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub model: GrowthModel,
    pub offset: f64,
    pub coefficient: f64,
    /// `s`, `0` or `N` depending on the model.
    pub exponent: f64,
    /// Largest relative deviation over the samples.
    pub residual: f64,
}

impl ModelFit {
    pub fn predict(&self, r: f64) -> f64 {
        let t = r.ln();
        match self.model {
            GrowthModel::Logarithmic => self.offset + self.coefficient * t,
            _ => self.offset + self.coefficient * (self.exponent * t).exp(),
        }
    }
}

/// Relative weighted least squares for `A = b + K phi`.
/// Returns `(b, K, weighted sum of squares)`.
fn linear_fit(phi: &[f64], area: &[f64]) -> (f64, f64, f64) {
    let w2: Vec<f64> = area
        .iter()
        .map(|a| if *a > 0.0 { 1.0 / (a * a) } else { 1.0 })
        .collect();
    let sw: f64 = w2.iter().sum();
    let mean = |v: &[f64]| v.iter().zip(&w2).map(|(x, w)| x * w).sum::<f64>() / sw;
    let (pm, am) = (mean(phi), mean(area));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for i in 0..phi.len() {
        sxy += w2[i] * (phi[i] - pm) * (area[i] - am);
        sxx += w2[i] * (phi[i] - pm) * (phi[i] - pm);
    }
    let k = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let b = am - k * pm;
    let sse = (0..phi.len())
        .map(|i| w2[i] * (b + k * phi[i] - area[i]).powi(2))
        .sum();
    (b, k, sse)
}

fn max_relative(phi: &[f64], area: &[f64], b: f64, k: f64) -> f64 {
    phi.iter()
        .zip(area)
        .map(|(p, a)| ((b + k * p - a) / a.abs().max(f64::MIN_POSITIVE)).abs())
        .fold(0.0, f64::max)
}

/// Fits `b + K e^(s t)` with `s` profiled over `range`.
fn exponential_fit(t: &[f64], area: &[f64], range: (f64, f64), model: GrowthModel) -> ModelFit {
    let t_ref = if range.0 > 0.0 {
        t.iter().cloned().fold(f64::MIN, f64::max)
    } else {
        t.iter().cloned().fold(f64::MAX, f64::min)
    };
    let basis = |s: f64| -> Vec<f64> { t.iter().map(|x| (s * (x - t_ref)).exp()).collect() };
    let sse = |s: f64| linear_fit(&basis(s), area).2;

    let step = (range.1 - range.0) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| range.0 + i as f64 * step).collect();
    let values: Vec<f64> = grid.iter().map(|&s| sse(s)).collect();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, v)| if *v < values[b] { i } else { b });
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(GRID_POINTS - 1)];
    let s = golden_min(&sse, lo, hi, 80);
    let s = if sse(s) <= values[best] { s } else { grid[best] };

    let phi = basis(s);
    let (b, k, _) = linear_fit(&phi, area);
    ModelFit {
        model,
        offset: b,
        // undo the reference shift
        coefficient: k * (-s * t_ref).exp(),
        exponent: s,
        residual: max_relative(&phi, area, b, k),
    }
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Fits one growth law to `(r, area)` samples.
pub fn fit_model(model: GrowthModel, r: &[f64], area: &[f64]) -> ModelFit {
    let t: Vec<f64> = r.iter().map(|x| x.ln()).collect();
    match model {
        GrowthModel::Constant => exponential_fit(&t, area, DECAY_RANGE, model),
        GrowthModel::Power => exponential_fit(&t, area, GROWTH_RANGE, model),
        GrowthModel::Logarithmic => {
            let (b, m, _) = linear_fit(&t, area);
            ModelFit {
                model,
                offset: b,
                coefficient: m,
                exponent: 0.0,
                residual: max_relative(&t, area, b, m),
            }
        }
    }
}

/// Fits all three laws and keeps the simplest one whose residual is within
/// the preference margin of the best.
pub fn select_model(r: &[f64], area: &[f64]) -> (ModelFit, Vec<ModelFit>) {
    let fits: Vec<ModelFit> = GrowthModel::ALL
        .iter()
        .map(|&m| fit_model(m, r, area))
        .collect();
    let best = fits.iter().map(|f| f.residual).fold(f64::INFINITY, f64::min);
    let chosen = *fits
        .iter()
        .find(|f| f.residual <= PREFERENCE_MARGIN * best + ABSOLUTE_SLACK)
        .unwrap_or(&fits[2]);
    (chosen, fits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        (0..40).map(|i| 10f64.powf(1.0 + 3.0 * i as f64 / 39.0)).collect()
    }

    #[test]
    fn exact_laws_are_recognized() {
        let r = grid();
        let constant: Vec<f64> = r.iter().map(|x| 2.0 - 3.0 / x).collect();
        let log: Vec<f64> = r.iter().map(|x| 1.0 + 0.5 * x.ln()).collect();
        let power: Vec<f64> = r.iter().map(|x| 4.0 * x.powf(2.5) - 7.0).collect();
        assert_eq!(select_model(&r, &constant).0.model, GrowthModel::Constant);
        assert_eq!(select_model(&r, &log).0.model, GrowthModel::Logarithmic);
        let fit = select_model(&r, &power).0;
        assert_eq!(fit.model, GrowthModel::Power);
        assert!((fit.exponent - 2.5).abs() < 1e-6);
        assert!((fit.predict(100.0) - (4e5 - 7.0)).abs() < 1e-3);
    }
}
