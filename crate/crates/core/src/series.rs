//! Truncated Laurent series with complex double-precision coefficients.
//!
//! A [`LaurentSeries`] stores every coefficient from its valuation up to (but
//! excluding) its truncation order. Exponents at or above the order are
//! *unknown*, not zero, and every operation propagates the order it can
//! actually vouch for. Leading coefficients below [`LEADING_ZERO_THRESHOLD`]
//! are stripped so that floating-point noise never creates a spurious pole.
//!
//! The JSON form is `{"valuation": int, "order": int, "coeffs": [[re, im], ...]}`.
//! On input the coefficient list may be shorter than `order - valuation`; the
//! missing trailing coefficients are known zeros.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Leading coefficients with modulus below this are treated as zero.
pub const LEADING_ZERO_THRESHOLD: f64 = 1e-14;

/// Working truncation order used when callers do not pick one.
pub const DEFAULT_ORDER: i32 = 32;

/// Coefficientwise comparison tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Truncated Laurent series `sum_{k = valuation}^{order - 1} c_k z^k + O(z^order)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct LaurentSeries {
    valuation: i32,
    coeffs: Vec<Complex64>,
    order: i32,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    valuation: i32,
    order: i32,
    coeffs: Vec<Complex64>,
}

impl TryFrom<SeriesRepr> for LaurentSeries {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        LaurentSeries::new(r.valuation, r.coeffs, r.order)
    }
}

impl From<LaurentSeries> for SeriesRepr {
    fn from(s: LaurentSeries) -> Self {
        SeriesRepr {
            valuation: s.valuation,
            order: s.order,
            coeffs: s.coeffs,
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// First `len` coefficients of the product of two dense power series.
fn conv(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

impl LaurentSeries {
    /// Builds a series from coefficients of `z^valuation, z^(valuation+1), ...`.
    ///
    /// Missing coefficients below `order` are zero. An empty coefficient list
    /// gives the zero series `O(z^order)`.
    pub fn new(valuation: i32, coeffs: Vec<Complex64>, order: i32) -> Result<Self> {
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidSeries("non-finite coefficient".into()));
        }
        if coeffs.is_empty() {
            return Ok(Self::zero(order));
        }
        let span = order as i64 - valuation as i64;
        if span < coeffs.len() as i64 {
            return Err(Error::InvalidSeries(format!(
                "{} coefficients starting at z^{} exceed truncation order {}",
                coeffs.len(),
                valuation,
                order
            )));
        }
        let mut coeffs = coeffs;
        coeffs.resize(span as usize, c(0.0));
        Ok(Self::from_dense(valuation, coeffs, order))
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real(valuation: i32, coeffs: &[f64], order: i32) -> Result<Self> {
        Self::new(valuation, coeffs.iter().map(|&x| c(x)).collect(), order)
    }

    /// Trusted constructor: `coeffs.len() == order - valuation`.
    fn from_dense(valuation: i32, mut coeffs: Vec<Complex64>, order: i32) -> Self {
        debug_assert_eq!(coeffs.len() as i64, (order as i64 - valuation as i64).max(0));
        let skip = coeffs
            .iter()
            .take_while(|z| z.norm() < LEADING_ZERO_THRESHOLD)
            .count();
        if skip == coeffs.len() {
            return Self::zero(order);
        }
        coeffs.drain(..skip);
        LaurentSeries {
            valuation: valuation + skip as i32,
            coeffs,
            order,
        }
    }

    pub fn zero(order: i32) -> Self {
        LaurentSeries {
            valuation: order,
            coeffs: Vec::new(),
            order,
        }
    }

    pub fn constant(value: Complex64, order: i32) -> Self {
        Self::monomial(value, 0, order)
    }

    pub fn one(order: i32) -> Self {
        Self::constant(c(1.0), order)
    }

    /// The coordinate function `z`.
    pub fn variable(order: i32) -> Self {
        Self::monomial(c(1.0), 1, order)
    }

    pub fn monomial(value: Complex64, exponent: i32, order: i32) -> Self {
        if exponent >= order {
            return Self::zero(order);
        }
        let mut coeffs = vec![c(0.0); (order - exponent) as usize];
        coeffs[0] = value;
        Self::from_dense(exponent, coeffs, order)
    }

    /// Lowest exponent with a retained nonzero coefficient (equals the order
    /// for the zero series).
    pub fn valuation(&self) -> i32 {
        self.valuation
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    /// Number of known coefficients past the valuation.
    pub fn precision(&self) -> i32 {
        self.order - self.valuation
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero with valuation 0, i.e. invertible as a power series.
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.valuation == 0
    }

    /// Coefficient of `z^exponent`; zero outside the stored range.
    pub fn coeff(&self, exponent: i32) -> Complex64 {
        if exponent < self.valuation || exponent >= self.order {
            return c(0.0);
        }
        self.coeffs[(exponent - self.valuation) as usize]
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.first().copied().unwrap_or(c(0.0))
    }

    /// Lowers the truncation order to `order` (never raises it).
    pub fn truncate(&self, order: i32) -> Self {
        if order >= self.order {
            return self.clone();
        }
        if order <= self.valuation {
            return Self::zero(order);
        }
        let keep = (order - self.valuation) as usize;
        Self::from_dense(self.valuation, self.coeffs[..keep].to_vec(), order)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentSeries {
            valuation: self.valuation + k,
            coeffs: self.coeffs.clone(),
            order: self.order + k,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_dense(
            self.valuation,
            self.coeffs.iter().map(|&z| z * factor).collect(),
            self.order,
        )
    }

    /// Sum of the retained terms at `w` (Horner).
    pub fn eval(&self, w: Complex64) -> Complex64 {
        let acc = self
            .coeffs
            .iter()
            .rev()
            .fold(c(0.0), |acc, &coef| acc * w + coef);
        if self.valuation == 0 {
            acc
        } else {
            acc * w.powi(self.valuation)
        }
    }

    /// Largest coefficient difference over the exponents both series know.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let lo = self.valuation.min(other.valuation);
        let hi = self.order.min(other.order);
        (lo..hi)
            .map(|e| (self.coeff(e) - other.coeff(e)).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        let lo = self.valuation.min(other.valuation);
        let hi = self.order.min(other.order);
        (lo..hi).all(|e| {
            let (x, y) = (self.coeff(e), other.coeff(e));
            (x - y).norm() <= tol.abs + tol.rel * x.norm().max(y.norm())
        })
    }

    fn add_signed(&self, other: &Self, sign: f64) -> Self {
        let order = self.order.min(other.order);
        let val = self.valuation.min(other.valuation);
        if val >= order {
            return Self::zero(order);
        }
        let coeffs = (val..order)
            .map(|e| self.coeff(e) + other.coeff(e) * sign)
            .collect();
        Self::from_dense(val, coeffs, order)
    }

    fn mul_series(&self, other: &Self) -> Self {
        let order = (self.order + other.valuation).min(other.order + self.valuation);
        let val = self.valuation + other.valuation;
        if order <= val {
            return Self::zero(order);
        }
        let len = (order - val) as usize;
        Self::from_dense(val, conv(&self.coeffs, &other.coeffs, len), order)
    }

    /// Multiplicative inverse; the series must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let len = self.coeffs.len();
        let b0inv = self.coeffs[0].inv();
        let mut q = vec![c(0.0); len];
        q[0] = b0inv;
        for n in 1..len {
            let s: Complex64 = (1..=n).map(|k| self.coeffs[k] * q[n - k]).sum();
            q[n] = -s * b0inv;
        }
        let val = -self.valuation;
        Ok(Self::from_dense(val, q, val + len as i32))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_series(&other.inverse()?))
    }

    /// Termwise derivative; the order drops by one.
    pub fn derive(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.order - 1);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &z)| z * (self.valuation + i as i32) as f64)
            .collect();
        Self::from_dense(self.valuation - 1, coeffs, self.order - 1)
    }

    /// `self(inner(z))` for an outer series without poles and an inner series
    /// vanishing at the origin.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let vi = inner.valuation;
        if vi < 1 {
            return Err(Error::CompositionValuation(vi));
        }
        if !self.is_zero() && self.valuation < 0 {
            return Err(Error::OuterPole(self.valuation));
        }
        let oo = self.order;
        let mut target = vi as i64 * oo as i64;
        let lowest_nonconstant = (1..oo).find(|&e| self.coeff(e).norm() > 0.0);
        if let Some(d) = lowest_nonconstant {
            target = target.min(inner.order as i64 + (d as i64 - 1) * vi as i64);
        }
        let target = target as i32;
        if target <= 0 {
            return Ok(Self::zero(target));
        }
        let len = target as usize;
        let inner_dense: Vec<Complex64> = (0..target).map(|e| inner.coeff(e)).collect();
        let jmax = (oo - 1).min((target - 1) / vi);
        let mut acc = vec![c(0.0); len];
        for j in (0..=jmax.max(0)).rev() {
            acc = conv(&acc, &inner_dense, len);
            acc[0] += self.coeff(j);
        }
        Ok(Self::from_dense(0, acc, target))
    }

    /// Composition that also accepts an outer series with a pole, by factoring
    /// `outer = w^m U(w)` and using `inner^m * U(inner)`.
    pub fn substitute(&self, inner: &Self) -> Result<Self> {
        if self.is_zero() || self.valuation >= 0 {
            return self.compose(inner);
        }
        if inner.is_zero() || inner.valuation < 1 {
            return Err(Error::CompositionValuation(inner.valuation));
        }
        let m = self.valuation;
        let unit = self.shift(-m).compose(inner)?;
        Ok(unit.mul_series(&inner.powi(m)?))
    }

    /// Integer power; negative exponents need a nonzero series.
    pub fn powi(&self, m: i32) -> Result<Self> {
        if m < 0 {
            return self.inverse()?.powi(-m);
        }
        let mut result = Self::one(self.precision().max(0));
        let mut base = self.clone();
        let mut e = m as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_series(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_series(&base);
            }
        }
        Ok(result)
    }

    /// `exp` via `E' = s' E`, `E(0) = exp(s(0))`.
    pub fn exp(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::one(self.order));
        }
        if self.valuation < 0 {
            return Err(Error::EssentialExponential(self.valuation));
        }
        let len = self.order as usize;
        let s: Vec<Complex64> = (0..self.order).map(|e| self.coeff(e)).collect();
        let mut out = vec![c(0.0); len];
        out[0] = s[0].exp();
        for n in 1..len {
            let acc: Complex64 = (1..=n).map(|k| s[k] * out[n - k] * k as f64).sum();
            out[n] = acc / n as f64;
        }
        Ok(Self::from_dense(0, out, self.order))
    }

    /// Logarithm of a unit series: `Log s(0) + 2 pi i branch` plus the integral
    /// of `s'/s`.
    pub fn log_unit(&self, branch: i64) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::LogOfNonUnit(self.valuation));
        }
        let len = self.coeffs.len();
        let s0 = self.coeffs[0];
        let u: Vec<Complex64> = self.coeffs.iter().map(|&z| z / s0).collect();
        let mut out = vec![c(0.0); len];
        out[0] = s0.ln() + Complex64::new(0.0, 2.0 * PI * branch as f64);
        for n in 1..len {
            let acc: Complex64 = (1..n).map(|k| out[k] * u[n - k] * k as f64).sum();
            out[n] = u[n] - acc / n as f64;
        }
        Ok(Self::from_dense(0, out, self.order))
    }

    /// `s^gamma` on the branch `exp(gamma (Log s(0) + 2 pi i branch))`.
    ///
    /// Integer exponents go through repeated multiplication and ignore the branch.
    pub fn pow_real(&self, gamma: f64, branch: i64) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::LogOfNonUnit(self.valuation));
        }
        if gamma.fract() == 0.0 && gamma.abs() < i32::MAX as f64 {
            return self.powi(gamma as i32);
        }
        let len = self.coeffs.len();
        let s0 = self.coeffs[0];
        let u: Vec<Complex64> = self.coeffs.iter().map(|&z| z / s0).collect();
        let mut p = vec![c(0.0); len];
        p[0] = c(1.0);
        for n in 1..len {
            let acc: Complex64 = (1..=n)
                .map(|k| u[k] * p[n - k] * (gamma * k as f64 - (n - k) as f64))
                .sum();
            p[n] = acc / n as f64;
        }
        let lead = ((s0.ln() + Complex64::new(0.0, 2.0 * PI * branch as f64)) * gamma).exp();
        Ok(Self::from_dense(0, p, self.order).scale(lead))
    }

    /// Compositional inverse of `y = x h(x)`, `h(0) != 0`, by Lagrange inversion:
    /// `[y^m] x = (1/m) [x^(m-1)] h(x)^(-m)`.
    pub fn revert(&self) -> Result<Self> {
        if self.is_zero() || self.valuation != 1 {
            return Err(Error::Reversion(self.valuation));
        }
        let q = self.shift(-1).inverse()?;
        let len = q.coeffs.len();
        let mut qm = q.coeffs.clone();
        let mut out = vec![c(0.0); len];
        for m in 1..=len {
            out[m - 1] = qm[m - 1] / m as f64;
            if m < len {
                qm = conv(&qm, &q.coeffs, len);
            }
        }
        Ok(Self::from_dense(1, out, 1 + len as i32))
    }
}

/// Ring operation dispatcher.
pub fn arith(a: &LaurentSeries, b: &LaurentSeries, op: ArithOp) -> Result<LaurentSeries> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add_signed(rhs, 1.0)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add_signed(rhs, -1.0)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(c(-1.0))
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: &LaurentSeries) -> LaurentSeries {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, z) in self.coeffs.iter().enumerate() {
            if z.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.valuation + i as i32;
            match e {
                0 => write!(f, "({z})")?,
                1 => write!(f, "({z})z")?,
                _ => write!(f, "({z})z^{e}")?,
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(z^{})", self.order)
    }
}
