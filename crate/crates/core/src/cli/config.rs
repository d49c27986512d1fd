//! Flat JSON run configuration. Values are layered defaults < file < flags.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::bench::config_digest;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// advection, burgers, wave, poisson or navier_stokes_2d.
    pub pde: String,
    /// fd2, dg, fv_godunov, weno5, fv_wave, lu, jacobi, cg or ps.
    pub solver: String,
    /// Polynomial order of the DG solver.
    pub order: usize,
    pub n: usize,
    /// Sweep resolutions; empty means `[n]`.
    pub resolutions: Vec<usize>,
    pub x_min: f64,
    pub x_max: f64,
    /// sum_of_sines, gaussian_bump, single_mode or taylor_green.
    pub ic: String,
    pub seed: u64,
    pub modes: usize,
    pub amplitude_min: f64,
    pub amplitude_max: f64,
    pub k_min: u32,
    pub k_max: u32,
    pub offset: f64,
    pub width: f64,
    pub t_final: f64,
    pub cfl: f64,
    pub speed: f64,
    pub viscosity: f64,
    /// TVB constant of the DG limiter; no limiter when absent.
    pub limiter_m: Option<f64>,
    /// periodic or dirichlet.
    pub boundary: String,
    pub tol: f64,
    pub max_iter: usize,
    pub forcing_amplitude: f64,
    pub forcing_wavenumber: u32,
    pub drag: f64,
    /// Refinement of discrete references over the finest swept grid.
    pub reference_factor: usize,
    pub repeats: usize,
    pub warmups: usize,
    pub snapshot_interval: Option<f64>,
    /// Field dump format: csv or pbf.
    pub format: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            pde: "advection".into(),
            solver: "fd2".into(),
            order: 2,
            n: 100,
            resolutions: Vec::new(),
            x_min: 0.0,
            x_max: 1.0,
            ic: "sum_of_sines".into(),
            seed: 7,
            modes: 3,
            amplitude_min: 0.5,
            amplitude_max: 1.0,
            k_min: 1,
            k_max: 3,
            offset: 0.0,
            width: 0.1,
            t_final: 1.0,
            cfl: 0.5,
            speed: 1.0,
            viscosity: 0.01,
            limiter_m: None,
            boundary: "periodic".into(),
            tol: 1e-10,
            max_iter: 1_000_000,
            forcing_amplitude: 0.0,
            forcing_wavenumber: 4,
            drag: 0.0,
            reference_factor: 8,
            repeats: 5,
            warmups: 1,
            snapshot_interval: None,
            format: "csv".into(),
        }
    }
}

impl RunConfig {
    pub fn resolutions(&self) -> Vec<usize> {
        if self.resolutions.is_empty() {
            vec![self.n]
        } else {
            self.resolutions.clone()
        }
    }

    /// Layers `file` and then `overrides` (both flat JSON objects) over the defaults.
    pub fn layered(file: Option<&Value>, overrides: &Map<String, Value>) -> Result<Self> {
        let Value::Object(mut merged) = serde_json::to_value(Self::default())? else {
            unreachable!("a struct serializes to an object")
        };
        if let Some(file) = file {
            let obj = file
                .as_object()
                .ok_or_else(|| Error::InvalidInput("config file must hold a flat JSON object".into()))?;
            merged.extend(obj.clone());
        }
        merged.extend(overrides.clone());
        serde_json::from_value(Value::Object(merged)).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    /// Digest of the effective configuration, independent of key order.
    pub fn digest(&self) -> String {
        config_digest(&serde_json::to_value(self).expect("config serializes"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn precedence() {
        let file = json!({"n": 50, "solver": "dg", "seed": 3});
        let mut flags = Map::new();
        flags.insert("n".into(), json!(25));
        let c = RunConfig::layered(Some(&file), &flags).unwrap();
        assert_eq!(c.n, 25);
        assert_eq!(c.solver, "dg");
        assert_eq!(c.seed, 3);
        assert_eq!(c.cfl, 0.5);
    }

    #[test]
    fn unknown_keys_rejected() {
        let file = json!({"nn": 50});
        assert!(RunConfig::layered(Some(&file), &Map::new()).is_err());
    }

    #[test]
    fn digest_is_order_independent() {
        let a = RunConfig::layered(Some(&json!({"n": 50, "seed": 3})), &Map::new()).unwrap();
        let b = RunConfig::layered(Some(&json!({"seed": 3, "n": 50})), &Map::new()).unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_ne!(a.digest(), RunConfig::default().digest());
    }
}
