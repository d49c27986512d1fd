use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::norms::ErrorMetrics;

use super::timing::RuntimeStats;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One measured (solver, resolution) cell: cost, accuracy and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub solver_id: String,
    pub pde_id: String,
    pub resolution: usize,
    pub dof: usize,
    pub config_digest: String,
    pub runtime_median_s: f64,
    pub runtime_iqr_s: f64,
    pub repeats: usize,
    pub warmups: usize,
    pub hardware: String,
    pub threads: usize,
    pub error_l2: f64,
    pub error_linf: f64,
    pub error_mae: f64,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub tool_version: String,
}

impl BenchRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        solver_id: &str,
        pde_id: &str,
        resolution: usize,
        dof: usize,
        config_digest: &str,
        stats: &RuntimeStats,
        errors: ErrorMetrics,
        seed: u64,
    ) -> Self {
        Self {
            solver_id: solver_id.to_owned(),
            pde_id: pde_id.to_owned(),
            resolution,
            dof,
            config_digest: config_digest.to_owned(),
            runtime_median_s: stats.median_s,
            runtime_iqr_s: stats.iqr_s,
            repeats: stats.repeats,
            warmups: stats.warmups,
            hardware: stats.hardware.clone(),
            threads: stats.threads,
            error_l2: errors.rel_l2,
            error_linf: errors.linf,
            error_mae: errors.mae,
            seed,
            timestamp: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tool_version: TOOL_VERSION.to_owned(),
        }
    }

    /// Copy with wall-clock dependent fields zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        Self {
            runtime_median_s: 0.0,
            runtime_iqr_s: 0.0,
            timestamp: 0,
            ..self.clone()
        }
    }
}

/// Content hash of a JSON document: SHA-256 of its canonical form (object
/// keys sorted, no whitespace), truncated to 16 hex digits.
pub fn config_digest(config: &serde_json::Value) -> String {
    fn canonical(v: &serde_json::Value) -> serde_json::Value {
        match v {
            serde_json::Value::Object(m) => {
                let mut keys: Vec<&String> = m.keys().collect();
                keys.sort();
                let mut out = serde_json::Map::new();
                for k in keys {
                    out.insert(k.clone(), canonical(&m[k]));
                }
                serde_json::Value::Object(out)
            }
            serde_json::Value::Array(a) => serde_json::Value::Array(a.iter().map(canonical).collect()),
            other => other.clone(),
        }
    }
    let text = serde_json::to_string(&canonical(config)).expect("JSON values always serialize");
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn digest_ignores_key_order() {
        let a = json!({"pde": "advection", "n": 100, "ic": {"seed": 7, "modes": 3}});
        let b = json!({"ic": {"modes": 3, "seed": 7}, "n": 100, "pde": "advection"});
        assert_eq!(config_digest(&a), config_digest(&b));
        assert_eq!(config_digest(&a).len(), 16);
        assert_ne!(config_digest(&a), config_digest(&json!({"pde": "advection", "n": 101})));
    }

    #[test]
    fn stable_field_names() {
        let stats = RuntimeStats {
            median_s: 1.0,
            iqr_s: 0.1,
            repeats: 5,
            warmups: 1,
            hardware: "test".into(),
            threads: 1,
        };
        let errors = ErrorMetrics {
            rel_l2: 0.1,
            linf: 0.2,
            mae: 0.05,
        };
        let r = BenchRecord::new("fd2", "advection", 100, 100, "abc", &stats, errors, 7);
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "solver_id",
            "pde_id",
            "dof",
            "runtime_median_s",
            "runtime_iqr_s",
            "repeats",
            "error_l2",
            "error_linf",
            "error_mae",
            "hardware",
            "threads",
            "seed",
            "config_digest",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back: BenchRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
