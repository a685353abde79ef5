//! Log-domain scalar arithmetic.
//!
//! Every probability and density in this crate is carried as its natural
//! logarithm. Linear values only appear when a report is rendered.

mod quadrature;

pub use quadrature::{integrate_log_1d, integrate_log_1d_with, locate_log_peak, QuadratureOptions};

use std::cmp::Ordering;
use std::f64::consts::{LN_10, PI};
use std::fmt;
use std::ops::{Div, Mul};

use crate::error::{Error, Result};

/// Natural logarithm of a nonnegative quantity. `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    /// Wraps a log-domain number. NaN is rejected.
    pub fn new(log: f64) -> Result<Self> {
        if log.is_nan() {
            return Err(Error::domain("log value is NaN"));
        }
        Ok(LogValue(log))
    }

    /// Takes the logarithm of a linear-domain value.
    pub fn from_linear(x: f64) -> Result<Self> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain(format!(
                "cannot take the log of {x}: value must be nonnegative"
            )));
        }
        Ok(LogValue(x.ln()))
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn log10(self) -> f64 {
        self.0 / LN_10
    }

    /// Back to the linear domain. Underflows to zero below ~1e-308.
    pub fn exp(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }

    /// Renders the linear value without ever exponentiating outside the
    /// range of a double. See [`render_linear`].
    pub fn render_linear(self) -> String {
        render_linear(self.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: Self) -> Self::Output {
        // -inf + +inf cannot occur: LogValue is never +inf for a probability
        // product of finite densities, but guard against it anyway.
        let sum = self.0 + rhs.0;
        LogValue(if sum.is_nan() { f64::NEG_INFINITY } else { sum })
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for LogValue {
    type Output = LogValue;

    fn div(self, rhs: Self) -> Self::Output {
        let diff = self.0 - rhs.0;
        LogValue(if diff.is_nan() { f64::NEG_INFINITY } else { diff })
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Log of the normal density `N(x | mean, variance)`.
pub fn log_gaussian_density(x: f64, mean: f64, variance: f64) -> Result<LogValue> {
    if !x.is_finite() || !mean.is_finite() || !variance.is_finite() {
        return Err(Error::domain(format!(
            "non-finite input to gaussian density (x={x}, mean={mean}, variance={variance})"
        )));
    }
    if variance <= 0.0 {
        return Err(Error::domain(format!("variance must be positive, got {variance}")));
    }
    let r = x - mean;
    Ok(LogValue(-0.5 * (2.0 * PI * variance).ln() - r * r / (2.0 * variance)))
}

/// `log(sum(exp(terms)))` with a max shift.
pub fn log_sum_exp(terms: &[LogValue]) -> Result<LogValue> {
    if terms.is_empty() {
        return Err(Error::usage("log_sum_exp of an empty list"));
    }
    Ok(log_sum_exp_raw(terms.iter().map(|t| t.0)))
}

pub(crate) fn log_sum_exp_raw<I>(terms: I) -> LogValue
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = terms.into_iter();
    let max = iter.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return LogValue::ZERO;
    }
    let sum: f64 = iter.map(|t| (t - max).exp()).sum();
    LogValue(max + sum.ln())
}

/// Formats `exp(log)` for display.
///
/// Values with `|log10| <= 15` are printed as plain six-significant-digit
/// numbers; anything further out is printed as `<mantissa>e<exponent>`
/// derived from the log directly.
pub fn render_linear(log: f64) -> String {
    if log == f64::NEG_INFINITY {
        return "0".to_string();
    }
    if log.is_nan() {
        return "NaN".to_string();
    }
    if log == f64::INFINITY {
        return "inf".to_string();
    }
    let log10 = log / LN_10;
    if log10.abs() <= 15.0 {
        return format_sig(log.exp(), 6);
    }
    let mut exponent = log10.floor();
    let mut mantissa = 10f64.powf(log10 - exponent);
    // rounding to 6 digits can carry the mantissa to 10
    if (mantissa * 1e5).round() >= 1e6 {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    let m = format!("{mantissa:.5}");
    let m = m.trim_end_matches('0').trim_end_matches('.');
    format!("{m}e{}", exponent as i64)
}

/// Six-significant-digit style formatting used by tables.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&magnitude) {
        let s = format!("{:.*e}", digits.saturating_sub(1), x);
        return trim_exponent_mantissa(&s);
    }
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn trim_exponent_mantissa(s: &str) -> String {
    match s.split_once('e') {
        Some((m, e)) if m.contains('.') => {
            format!("{}e{e}", m.trim_end_matches('0').trim_end_matches('.'))
        }
        _ => s.to_string(),
    }
}
