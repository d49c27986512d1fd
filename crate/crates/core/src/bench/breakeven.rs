use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Costs of a surrogate against a baseline run at equal accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakEvenInputs {
    /// Time to generate training data, seconds.
    pub c_data: f64,
    /// Training time, seconds.
    pub c_train: f64,
    /// Baseline time per evaluation, seconds.
    pub t_b: f64,
    /// Surrogate speedup per evaluation.
    pub s: f64,
}

impl BreakEvenInputs {
    /// `|C_data + C_train + N t_B / s − N t_B| / (N t_B)`.
    pub fn balance_residual(&self, n: f64) -> f64 {
        let total = n * self.t_b;
        let lhs = self.c_data + self.c_train + total / self.s;
        if total == 0.0 {
            lhs.abs()
        } else {
            (lhs - total).abs() / total
        }
    }
}

/// Number of evaluations `N` at which `C_data + C_train + N t_B / s = N t_B`.
pub fn breakeven_n(inputs: &BreakEvenInputs) -> Result<f64> {
    let BreakEvenInputs { c_data, c_train, t_b, s } = *inputs;
    for (name, v) in [("c_data", c_data), ("c_train", c_train), ("t_b", t_b), ("s", s)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidInput(format!("{name} must be finite and nonnegative, got {v}")));
        }
    }
    if s <= 1.0 {
        return Err(Error::NotFaster(s));
    }
    if t_b == 0.0 {
        return Err(Error::ZeroBaselineTime);
    }
    // t_B (1 − 1/s) written as t_B (s − 1) / s to avoid cancellation for s near 1
    Ok((c_data + c_train) * s / (t_b * (s - 1.0)))
}
