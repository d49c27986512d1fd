//! Second-order central differences for periodic linear advection.

use crate::error::{Error, Result};
use crate::field::{Field, Layout};
use crate::grid::Grid1D;

use super::time::{compute_dt, SpatialOperator};
use super::{Run, Scheme, SolverConfig1D};

struct CentralAdvection {
    speed: f64,
    inv_2h: f64,
}

impl SpatialOperator for CentralAdvection {
    fn rhs(&mut self, u: &[f64], out: &mut [f64]) {
        let n = u.len();
        let a = -self.speed * self.inv_2h;
        out[0] = a * (u[1] - u[n - 1]);
        for i in 1..n - 1 {
            out[i] = a * (u[i + 1] - u[i - 1]);
        }
        out[n - 1] = a * (u[0] - u[n - 2]);
    }
}

pub(crate) fn prepare<'a>(
    grid: &Grid1D,
    ic: &dyn Fn(f64) -> f64,
    speed: f64,
    config: &SolverConfig1D,
) -> Result<Run<'a>> {
    config.validate()?;
    config.require_periodic("fd2")?;
    if !grid.is_uniform() {
        return Err(Error::InvalidConfig("fd2 needs a uniform grid".into()));
    }
    if grid.n_cells() < 3 {
        return Err(Error::InvalidConfig("fd2 needs at least 3 nodes".into()));
    }
    let u: Vec<f64> = grid.nodes().iter().map(|&x| ic(x)).collect();
    let plan = if speed == 0.0 {
        None
    } else {
        Some(compute_dt(grid, speed.abs(), config.cfl_factor, Scheme::Fd2, config.t_final)?)
    };
    Ok(Run {
        grid: grid.clone(),
        layout: Layout::Nodal,
        components: 1,
        u,
        plan,
        op: Box::new(CentralAdvection {
            speed,
            inv_2h: 0.5 / grid.spacing(),
        }),
        check: None,
    })
}

/// Advects `ic` with constant `speed` to `config.t_final`; returns nodal values.
pub fn fd2_advection_solve(
    grid: &Grid1D,
    ic: impl Fn(f64) -> f64,
    speed: f64,
    config: &SolverConfig1D,
) -> Result<Field> {
    prepare(grid, &ic, speed, config)?.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::advect_exact;
    use crate::norms::{compute_error, Metric, Reference};
    use std::f64::consts::PI;

    fn s(x: f64) -> f64 {
        (2.0 * PI * x).sin()
    }

    fn err(n: usize) -> f64 {
        let g = Grid1D::uniform(0.0, 1.0, n).unwrap();
        let cfg = SolverConfig1D::new(Scheme::Fd2, 0.5, 1.0);
        let f = fd2_advection_solve(&g, s, 1.0, &cfg).unwrap();
        let exact = advect_exact(s, 1.0, 1.0, (0.0, 1.0));
        compute_error(&f, Reference::Analytic1D(&exact), Metric::RelL2).unwrap()
    }

    #[test]
    fn second_order() {
        let (e50, e100, e200) = (err(50), err(100), err(200));
        let order = 0.5 * ((e50 / e100).log2() + (e100 / e200).log2());
        assert!((order - 2.0).abs() <= 0.2, "order {order}");
        assert!((1e-3..1e-2).contains(&e100), "error {e100}");
    }

    #[test]
    fn zero_speed_is_identity() {
        let g = Grid1D::uniform(0.0, 1.0, 40).unwrap();
        let cfg = SolverConfig1D::new(Scheme::Fd2, 0.5, 1.0);
        let f = fd2_advection_solve(&g, s, 0.0, &cfg).unwrap();
        for (v, x) in f.values().unwrap().iter().zip(g.nodes()) {
            assert!((v - s(*x)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_irregular_grid() {
        let g = Grid1D::from_edges(vec![0.0, 0.3, 0.5, 1.0]).unwrap();
        let cfg = SolverConfig1D::new(Scheme::Fd2, 0.5, 1.0);
        assert!(fd2_advection_solve(&g, s, 1.0, &cfg).is_err());
    }
}
