use std::hint::black_box;
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serializes timed regions so that concurrent sweeps never overlap a measurement.
static TIMING_LOCK: Mutex<()> = Mutex::new(());

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeStats {
    pub median_s: f64,
    pub iqr_s: f64,
    pub repeats: usize,
    pub warmups: usize,
    pub hardware: String,
    pub threads: usize,
}

/// Worker cap from `PBB_THREADS`, defaulting to 1.
pub fn thread_count() -> usize {
    std::env::var("PBB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

pub fn hardware_descriptor() -> String {
    let cpu = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| {
            s.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|m| m.trim().to_owned())
        })
        .unwrap_or_else(|| "unknown cpu".to_owned());
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    format!("{cpu}; {cores} logical cores; {}-{}", std::env::consts::ARCH, std::env::consts::OS)
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Times `op` and also returns the output of the last recorded run.
pub fn time_with_output<T>(
    mut op: impl FnMut() -> Result<T>,
    repeats: usize,
    warmups: usize,
) -> Result<(RuntimeStats, T)> {
    if repeats == 0 {
        return Err(Error::InvalidInput("repeats must be at least 1".into()));
    }
    let _guard = TIMING_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    for _ in 0..warmups {
        black_box(op()?);
    }
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats {
        let start = Instant::now();
        let out = black_box(op()?);
        times.push(start.elapsed().as_secs_f64());
        last = Some(out);
    }
    drop(_guard);
    times.sort_by(f64::total_cmp);
    let median_s = quantile(&times, 0.5);
    if !(median_s > 0.0) {
        return Err(Error::NonPositiveDuration);
    }
    let stats = RuntimeStats {
        median_s,
        iqr_s: quantile(&times, 0.75) - quantile(&times, 0.25),
        repeats,
        warmups,
        hardware: hardware_descriptor(),
        threads: thread_count(),
    };
    Ok((stats, last.expect("at least one repeat")))
}

/// Runs `warmups` unrecorded calls, then records `repeats` wall times.
pub fn time_operation<T>(mut op: impl FnMut() -> T, repeats: usize, warmups: usize) -> Result<RuntimeStats> {
    time_with_output(|| Ok(op()), repeats, warmups).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn busy(ms: f64) {
        let start = Instant::now();
        while start.elapsed().as_secs_f64() < ms * 1e-3 {
            std::hint::spin_loop();
        }
    }

    #[test]
    fn noop_is_fast() {
        let s = time_operation(|| (), 11, 2).unwrap();
        assert!(s.median_s < 1e-5 && s.median_s > 0.0);
        assert_eq!(s.repeats, 11);
    }

    #[test]
    fn busy_loop_median() {
        let s = time_operation(|| busy(10.0), 9, 1).unwrap();
        assert!((9e-3..=15e-3).contains(&s.median_s), "{}", s.median_s);
    }

    #[test]
    fn repeated_measurements_agree() {
        let a = time_operation(|| busy(1.0), 7, 1).unwrap().median_s;
        let b = time_operation(|| busy(1.0), 7, 1).unwrap().median_s;
        assert!(a / b < 3.0 && b / a < 3.0);
    }

    #[test]
    fn quartiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&v, 0.5), 3.0);
        assert_eq!(quantile(&v, 0.75) - quantile(&v, 0.25), 2.0);
        assert_eq!(quantile(&[1.0, 2.0], 0.5), 1.5);
    }

    #[test]
    fn zero_repeats_rejected() {
        assert!(time_operation(|| (), 0, 0).is_err());
    }
}
