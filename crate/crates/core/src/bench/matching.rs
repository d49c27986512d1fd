//! Equal-accuracy and equal-runtime comparison of two fronts, interpolating
//! linearly in (log cost, log error) between neighbouring front points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::pareto::{FrontPoint, ParetoFront};

/// Relative slack for targets that coincide with a front endpoint up to round-off.
const ENDPOINT_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interpolated {
    pub value: f64,
    /// Front points bracketing the target (equal when it hits a point exactly).
    pub bracket: (FrontPoint, FrontPoint),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedupReport {
    pub target_error: f64,
    pub cost_a: Interpolated,
    pub cost_b: Interpolated,
    /// `cost_a / cost_b`; above one means B is cheaper at equal accuracy.
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub target_cost_s: f64,
    pub error_a: Interpolated,
    pub error_b: Interpolated,
    /// `error_a / error_b`; above one means B is more accurate at equal cost.
    pub accuracy_ratio: f64,
}

fn within(target: f64, lo: f64, hi: f64) -> Option<f64> {
    if target >= lo && target <= hi {
        Some(target)
    } else if (target - lo).abs() <= ENDPOINT_RTOL * lo.abs() {
        Some(lo)
    } else if (target - hi).abs() <= ENDPOINT_RTOL * hi.abs() {
        Some(hi)
    } else {
        None
    }
}

/// `key` picks the coordinate the target lives in, `val` the other one.
fn interpolate(
    front: &ParetoFront,
    target: f64,
    key: fn(&FrontPoint) -> f64,
    val: fn(&FrontPoint) -> f64,
) -> Result<Interpolated> {
    let (lo, hi) = front
        .points
        .iter()
        .map(key)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), k| (a.min(k), b.max(k)));
    let t = within(target, lo, hi).ok_or_else(|| Error::Extrapolation {
        front: front.solver_id.clone(),
        target,
        lo,
        hi,
    })?;
    if let Some(p) = front.points.iter().find(|p| key(p) == t) {
        return Ok(Interpolated {
            value: val(p),
            bracket: (*p, *p),
        });
    }
    let (p, q) = front
        .points
        .windows(2)
        .map(|w| (w[0], w[1]))
        .find(|(p, q)| (key(p) - t) * (key(q) - t) < 0.0)
        .expect("target lies strictly between two neighbouring points");
    let s = (t.ln() - key(&p).ln()) / (key(&q).ln() - key(&p).ln());
    let value = (val(&p).ln() + s * (val(&q).ln() - val(&p).ln())).exp();
    Ok(Interpolated { value, bracket: (p, q) })
}

pub fn cost_at_error(front: &ParetoFront, error: f64) -> Result<Interpolated> {
    interpolate(front, error, |p| p.error, |p| p.cost_s)
}

pub fn error_at_cost(front: &ParetoFront, cost_s: f64) -> Result<Interpolated> {
    interpolate(front, cost_s, |p| p.cost_s, |p| p.error)
}

pub fn match_equal_accuracy(a: &ParetoFront, b: &ParetoFront, target_error: f64) -> Result<SpeedupReport> {
    let cost_a = cost_at_error(a, target_error)?;
    let cost_b = cost_at_error(b, target_error)?;
    Ok(SpeedupReport {
        target_error,
        speedup: cost_a.value / cost_b.value,
        cost_a,
        cost_b,
    })
}

pub fn match_equal_runtime(a: &ParetoFront, b: &ParetoFront, target_cost_s: f64) -> Result<AccuracyReport> {
    let error_a = error_at_cost(a, target_cost_s)?;
    let error_b = error_at_cost(b, target_cost_s)?;
    Ok(AccuracyReport {
        target_cost_s,
        accuracy_ratio: error_a.value / error_b.value,
        error_a,
        error_b,
    })
}
