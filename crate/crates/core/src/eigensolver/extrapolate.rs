use serde::{Deserialize, Serialize};

/// Extrapolated value with error bar and the per-level values it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error_bar: f64,
    pub per_level: Vec<f64>,
    /// `p` in `lambda_l = lambda + C 4^(-p l)`; `None` when it cannot be fitted.
    pub observed_order: Option<f64>,
    /// Set when the sequence was non-monotone or non-contracting.
    pub flagged: bool,
}

impl Estimate {
    /// An exactly known quantity (formula values, thresholds).
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_bar: 0.0,
            per_level: Vec::new(),
            observed_order: None,
            flagged: false,
        }
    }

    /// True when per-level values never increase (up to rounding).
    pub fn is_monotone(&self) -> bool {
        is_nonincreasing(&self.per_level)
    }
}

fn is_nonincreasing(values: &[f64]) -> bool {
    values
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-9 * w[0].abs().max(1.0))
}

/// Smallest contraction ratio `4^p` taken as asymptotic (order `p = 1/2`).
const MIN_RATIO: f64 = 2.0;

pub fn extrapolate(values: &[f64]) -> Estimate {
    extrapolate_with_residual(values, 0.0)
}

/// Fits `lambda + C 4^(-p l)` to the last three levels.
///
/// An observed order below `1/2` is treated as pre-asymptotic: the value is
/// extrapolated with order `1/2`, the error bar covers the fitted limit and
/// the estimate is flagged.
///
/// `residual_error` is added to the error bar (solver residual scaled by the
/// eigenvalue on the finest level).
pub fn extrapolate_with_residual(values: &[f64], residual_error: f64) -> Estimate {
    let per_level = values.to_vec();
    let n = values.len();
    let Some(&last) = values.last() else {
        return Estimate {
            value: f64::NAN,
            error_bar: f64::INFINITY,
            per_level,
            observed_order: None,
            flagged: true,
        };
    };
    if n < 3 {
        let diff = if n == 2 { (values[0] - values[1]).abs() } else { 0.0 };
        return Estimate {
            value: last,
            error_bar: diff + residual_error,
            per_level,
            observed_order: None,
            flagged: true,
        };
    }
    let (a, b, c) = (values[n - 3], values[n - 2], values[n - 1]);
    let (d1, d2) = (a - b, b - c);
    let noise = 4.0 * f64::EPSILON * c.abs().max(f64::MIN_POSITIVE);
    let monotone = is_nonincreasing(values);
    if d1.abs() <= noise && d2.abs() <= noise {
        return Estimate {
            value: c,
            error_bar: d2.abs() + residual_error,
            per_level,
            observed_order: None,
            flagged: false,
        };
    }
    if monotone && d1 * d2 > 0.0 && d2.abs() < d1.abs() {
        let ratio = d1 / d2;
        if ratio < MIN_RATIO {
            // slower than any corner singularity allows: not yet asymptotic
            let full = d2 / (ratio - 1.0);
            return Estimate {
                value: c - d2 / (MIN_RATIO - 1.0),
                error_bar: full.abs() + residual_error,
                per_level,
                observed_order: Some(ratio.ln() / 4f64.ln()),
                flagged: true,
            };
        }
        let correction = d2 / (ratio - 1.0);
        return Estimate {
            value: c - correction,
            error_bar: correction.abs() + residual_error,
            per_level,
            observed_order: Some(ratio.ln() / 4f64.ln()),
            flagged: false,
        };
    }
    Estimate {
        value: c,
        error_bar: d2.abs() + residual_error,
        per_level,
        observed_order: None,
        flagged: true,
    }
}
