//! First-order finite volumes for inviscid Burgers with the Godunov flux.

use crate::error::Result;
use crate::field::{Field, Layout};
use crate::grid::Grid1D;
use crate::norms::cell_averages;

use super::time::{compute_dt, SpatialOperator};
use super::{max_abs_sampled, Run, Scheme, SolverConfig1D};

/// Exact Riemann flux for `f(u) = u²/2`.
#[inline]
pub fn godunov_flux(ul: f64, ur: f64) -> f64 {
    let a = ul.max(0.0);
    let b = ur.min(0.0);
    0.5 * (a * a).max(b * b)
}

struct GodunovBurgers {
    inv_h: Vec<f64>,
    flux: Vec<f64>,
}

impl SpatialOperator for GodunovBurgers {
    fn rhs(&mut self, u: &[f64], out: &mut [f64]) {
        let n = u.len();
        // flux[j] sits on the right face of cell j
        for j in 0..n {
            self.flux[j] = godunov_flux(u[j], u[(j + 1) % n]);
        }
        out[0] = -(self.flux[0] - self.flux[n - 1]) * self.inv_h[0];
        for j in 1..n {
            out[j] = -(self.flux[j] - self.flux[j - 1]) * self.inv_h[j];
        }
    }
}

pub(crate) fn prepare<'a>(grid: &Grid1D, ic: &dyn Fn(f64) -> f64, config: &SolverConfig1D) -> Result<Run<'a>> {
    config.validate()?;
    config.require_periodic("fv_godunov")?;
    let n = grid.n_cells();
    let u = cell_averages(grid, ic);
    let a = max_abs_sampled(grid, ic);
    let plan = if a == 0.0 {
        None
    } else {
        Some(compute_dt(grid, a, config.cfl_factor, Scheme::FvGodunov, config.t_final)?)
    };
    Ok(Run {
        grid: grid.clone(),
        layout: Layout::CellAverage,
        components: 1,
        u,
        plan,
        op: Box::new(GodunovBurgers {
            inv_h: grid.widths().iter().map(|h| 1.0 / h).collect(),
            flux: vec![0.0; n],
        }),
        check: None,
    })
}

/// Solves `u_t + (u²/2)_x = 0` on a periodic grid; returns cell averages.
pub fn fv_godunov_burgers_solve(
    grid: &Grid1D,
    ic: impl Fn(f64) -> f64,
    config: &SolverConfig1D,
) -> Result<Field> {
    prepare(grid, &ic, config)?.finish()
}
