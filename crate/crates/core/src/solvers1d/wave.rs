//! Finite volumes for the wave equation as the first-order system
//! `u_t = v`, `v_t = c² u_xx`, on grids with arbitrary cell widths.

use crate::error::{Error, Result};
use crate::field::{Field, Layout};
use crate::grid::Grid1D;
use crate::norms::cell_averages;

use super::time::{compute_dt, SpatialOperator};
use super::{Boundary, Run, Scheme, SolverConfig1D};

struct FvWave {
    c2: f64,
    boundary: Boundary,
    inv_h: Vec<f64>,
    /// Distance between neighbouring cell centres; entry j is face j (left face of cell j), `n + 1` faces.
    dist: Vec<f64>,
    grad: Vec<f64>,
}

impl FvWave {
    fn gradients(&mut self, u: &[f64]) {
        let n = u.len();
        for j in 1..n {
            self.grad[j] = (u[j] - u[j - 1]) / self.dist[j];
        }
        match self.boundary {
            Boundary::Periodic => {
                self.grad[0] = (u[0] - u[n - 1]) / self.dist[0];
                self.grad[n] = self.grad[0];
            }
            Boundary::Dirichlet { left, right } => {
                self.grad[0] = (u[0] - left) / self.dist[0];
                self.grad[n] = (right - u[n - 1]) / self.dist[n];
            }
        }
    }
}

impl SpatialOperator for FvWave {
    fn rhs(&mut self, state: &[f64], out: &mut [f64]) {
        let n = state.len() / 2;
        let (u, v) = state.split_at(n);
        let (du, dv) = out.split_at_mut(n);
        du.copy_from_slice(v);
        self.gradients(u);
        for j in 0..n {
            dv[j] = self.c2 * (self.grad[j + 1] - self.grad[j]) * self.inv_h[j];
        }
    }
}

fn face_distances(grid: &Grid1D, boundary: Boundary) -> Vec<f64> {
    let n = grid.n_cells();
    let h = grid.widths();
    let mut d = vec![0.0; n + 1];
    for j in 1..n {
        d[j] = 0.5 * (h[j - 1] + h[j]);
    }
    match boundary {
        Boundary::Periodic => {
            d[0] = 0.5 * (h[n - 1] + h[0]);
            d[n] = d[0];
        }
        // the boundary value lives on the face, half a cell from the centre
        Boundary::Dirichlet { .. } => {
            d[0] = 0.5 * h[0];
            d[n] = 0.5 * h[n - 1];
        }
    }
    d
}

/// Discrete energy `Σ h v² + c² Σ_faces d (Δu/d)²`, conserved by the
/// semi-discrete scheme.
pub fn wave_energy(field: &Field, speed: f64, boundary: Boundary) -> Result<f64> {
    let grid = field
        .grid_1d()
        .ok_or_else(|| Error::InvalidField("wave energy needs a 1D field".into()))?;
    let vals = field
        .values()
        .filter(|v| v.len() == 2 * grid.n_cells())
        .ok_or_else(|| Error::InvalidField("wave energy needs a two-component field".into()))?;
    let n = grid.n_cells();
    let mut op = FvWave {
        c2: speed * speed,
        boundary,
        inv_h: vec![0.0; n],
        dist: face_distances(grid, boundary),
        grad: vec![0.0; n + 1],
    };
    op.gradients(&vals[..n]);
    let kinetic: f64 = (0..n).map(|j| grid.width(j) * vals[n + j].powi(2)).sum();
    let faces = match boundary {
        Boundary::Periodic => n,
        Boundary::Dirichlet { .. } => n + 1,
    };
    let potential: f64 = (0..faces).map(|f| op.dist[f] * op.grad[f].powi(2)).sum();
    Ok(kinetic + op.c2 * potential)
}

pub(crate) fn prepare<'a>(
    grid: &Grid1D,
    ic: &dyn Fn(f64) -> (f64, f64),
    speed: f64,
    config: &SolverConfig1D,
) -> Result<Run<'a>> {
    let config = SolverConfig1D {
        scheme: Scheme::FvWave,
        ..*config
    };
    config.validate()?;
    let n = grid.n_cells();
    let mut u = cell_averages(grid, |x| ic(x).0);
    u.extend(cell_averages(grid, |x| ic(x).1));
    let plan = Some(compute_dt(grid, speed.abs(), config.cfl_factor, Scheme::FvWave, config.t_final)?);
    Ok(Run {
        grid: grid.clone(),
        layout: Layout::CellAverage,
        components: 2,
        u,
        plan,
        op: Box::new(FvWave {
            c2: speed * speed,
            boundary: config.boundary,
            inv_h: grid.widths().iter().map(|h| 1.0 / h).collect(),
            dist: face_distances(grid, config.boundary),
            grad: vec![0.0; n + 1],
        }),
        check: None,
    })
}

/// Solves the wave equation; `ic` returns `(u, u_t)`. The result has two
/// components, displacement then velocity.
pub fn fv_wave_solve(
    grid: &Grid1D,
    ic: impl Fn(f64) -> (f64, f64),
    speed: f64,
    config: &SolverConfig1D,
) -> Result<Field> {
    prepare(grid, &ic, speed, config)?.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{compute_error, Metric, Reference};
    use std::f64::consts::PI;

    fn dirichlet() -> SolverConfig1D {
        SolverConfig1D::new(Scheme::FvWave, 0.5, 1.0).with_boundary(Boundary::Dirichlet { left: 0.0, right: 0.0 })
    }

    #[test]
    fn standing_wave() {
        let g = Grid1D::uniform(0.0, 1.0, 128).unwrap();
        let c = 1.0;
        let t = 1.0;
        let f = fv_wave_solve(&g, |x| ((PI * x).sin(), 0.0), c, &dirichlet()).unwrap();
        let exact = move |x: f64| (PI * x).sin() * (PI * c * t).cos();
        let e = compute_error(&f.component(0).unwrap(), Reference::Analytic1D(&exact), Metric::RelL2).unwrap();
        assert!(e < 1e-2, "error {e}");
    }

    #[test]
    fn zero_stays_zero() {
        let g = Grid1D::from_edges(vec![0.0, 0.1, 0.15, 0.5, 0.7, 1.0]).unwrap();
        let f = fv_wave_solve(&g, |_| (0.0, 0.0), 2.0, &dirichlet()).unwrap();
        assert!(f.values().unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn energy_drift_over_a_period() {
        let g = Grid1D::uniform(0.0, 1.0, 256).unwrap();
        let cfg = dirichlet().with_boundary(Boundary::Dirichlet { left: 0.0, right: 0.0 });
        let ic = |x: f64| ((PI * x).sin(), 0.0);
        let run = prepare(&g, &ic, 1.0, &SolverConfig1D { t_final: 2.0, ..cfg }).unwrap();
        let f0 = Field::real(Layout::CellAverage, g.clone(), 2, run.u.clone()).unwrap();
        let f1 = run.finish().unwrap();
        let b = cfg.boundary;
        let (e0, e1) = (wave_energy(&f0, 1.0, b).unwrap(), wave_energy(&f1, 1.0, b).unwrap());
        assert!(((e1 - e0) / e0).abs() < 1e-2, "{e0} -> {e1}");
    }

    #[test]
    fn irregular_grid_converges() {
        // alternate narrow and wide cells
        let err = |n: usize| {
            let mut edges = vec![0.0];
            for k in 0..n {
                let w = if k % 2 == 0 { 0.5 } else { 1.5 };
                edges.push(edges[k] + w);
            }
            let len = *edges.last().unwrap();
            let g = Grid1D::from_edges(edges.iter().map(|e| e / len).collect()).unwrap();
            let f = fv_wave_solve(&g, |x| ((PI * x).sin(), 0.0), 1.0, &dirichlet()).unwrap();
            let exact = |x: f64| -(PI * x).sin();
            compute_error(&f.component(0).unwrap(), Reference::Analytic1D(&exact), Metric::RelL2).unwrap()
        };
        let (a, b) = (err(64), err(128));
        assert!(b < a && b < 1e-2, "{a} {b}");
    }
}
