//! Fifth-order WENO (Jiang–Shu weights) with the Godunov flux for Burgers.

use crate::error::{Error, Result};
use crate::field::{Field, Layout};
use crate::grid::Grid1D;
use crate::norms::cell_averages;

use super::fv::godunov_flux;
use super::time::{compute_dt, SpatialOperator};
use super::{max_abs_sampled, Run, Scheme, SolverConfig1D};

const EPS: f64 = 1e-6;

/// Reconstructs the value at the right face of the middle cell of `v`.
#[inline]
pub fn weno5_reconstruct(v: [f64; 5]) -> f64 {
    let [a, b, c, d, e] = v;
    let q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
    let q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
    let q2 = (2.0 * c + 5.0 * d - e) / 6.0;
    let b0 = 13.0 / 12.0 * (a - 2.0 * b + c).powi(2) + 0.25 * (a - 4.0 * b + 3.0 * c).powi(2);
    let b1 = 13.0 / 12.0 * (b - 2.0 * c + d).powi(2) + 0.25 * (b - d).powi(2);
    let b2 = 13.0 / 12.0 * (c - 2.0 * d + e).powi(2) + 0.25 * (3.0 * c - 4.0 * d + e).powi(2);
    let w0 = 0.1 / (EPS + b0).powi(2);
    let w1 = 0.6 / (EPS + b1).powi(2);
    let w2 = 0.3 / (EPS + b2).powi(2);
    (w0 * q0 + w1 * q1 + w2 * q2) / (w0 + w1 + w2)
}

struct Weno5Burgers {
    inv_h: f64,
    padded: Vec<f64>,
    flux: Vec<f64>,
}

impl SpatialOperator for Weno5Burgers {
    fn rhs(&mut self, u: &[f64], out: &mut [f64]) {
        let n = u.len();
        let p = &mut self.padded;
        p[3..n + 3].copy_from_slice(u);
        for g in 0..3 {
            p[g] = u[n - 3 + g];
            p[n + 3 + g] = u[g];
        }
        // face j + 1/2 between cells j and j+1, cell j at p[j + 3]
        for j in 0..n {
            let k = j + 3;
            let ul = weno5_reconstruct([p[k - 2], p[k - 1], p[k], p[k + 1], p[k + 2]]);
            let ur = weno5_reconstruct([p[k + 3], p[k + 2], p[k + 1], p[k], p[k - 1]]);
            self.flux[j] = godunov_flux(ul, ur);
        }
        out[0] = -(self.flux[0] - self.flux[n - 1]) * self.inv_h;
        for j in 1..n {
            out[j] = -(self.flux[j] - self.flux[j - 1]) * self.inv_h;
        }
    }
}

pub(crate) fn prepare<'a>(grid: &Grid1D, ic: &dyn Fn(f64) -> f64, config: &SolverConfig1D) -> Result<Run<'a>> {
    config.validate()?;
    config.require_periodic("weno5")?;
    let n = grid.n_cells();
    if !grid.is_uniform() {
        return Err(Error::InvalidConfig("weno5 needs a uniform grid".into()));
    }
    if n < 6 {
        return Err(Error::InvalidConfig(format!("weno5 needs at least 6 cells, got {n}")));
    }
    let u = cell_averages(grid, ic);
    let a = max_abs_sampled(grid, ic);
    let plan = if a == 0.0 {
        None
    } else {
        Some(compute_dt(grid, a, config.cfl_factor, Scheme::Weno5, config.t_final)?)
    };
    Ok(Run {
        grid: grid.clone(),
        layout: Layout::CellAverage,
        components: 1,
        u,
        plan,
        op: Box::new(Weno5Burgers {
            inv_h: 1.0 / grid.spacing(),
            padded: vec![0.0; n + 6],
            flux: vec![0.0; n],
        }),
        check: None,
    })
}

/// Solves periodic inviscid Burgers with WENO5 reconstruction; returns cell averages.
pub fn weno5_burgers_solve(grid: &Grid1D, ic: impl Fn(f64) -> f64, config: &SolverConfig1D) -> Result<Field> {
    prepare(grid, &ic, config)?.finish()
}
