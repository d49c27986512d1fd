//! Standing wave on a stretched, non-uniform grid with Dirichlet ends.
//! The discrete energy should stay nearly flat while the solution converges.

use std::f64::consts::PI;

use pbb::solvers1d::{fv_wave_solve, wave_energy, Boundary, Scheme, SolverConfig1D};
use pbb::{compute_error, Grid1D, Metric, Reference};

fn stretched(n: usize) -> pbb::Result<Grid1D> {
    // cells cluster towards x = 0
    let edges = (0..=n).map(|i| (i as f64 / n as f64).powf(1.3)).collect();
    Grid1D::from_edges(edges)
}

fn main() -> pbb::Result<()> {
    let boundary = Boundary::Dirichlet { left: 0.0, right: 0.0 };
    let t_final = 1.0;
    let exact = |x: f64| (PI * x).sin() * (PI * t_final).cos();
    for n in [32, 64, 128, 256] {
        let grid = stretched(n)?;
        let ic = |x: f64| ((PI * x).sin(), 0.0);
        let start = fv_wave_solve(&grid, ic, 1.0, &SolverConfig1D::new(Scheme::FvWave, 0.5, 0.0).with_boundary(boundary))?;
        let end = fv_wave_solve(&grid, ic, 1.0, &SolverConfig1D::new(Scheme::FvWave, 0.5, t_final).with_boundary(boundary))?;
        let e0 = wave_energy(&start, 1.0, boundary)?;
        let e1 = wave_energy(&end, 1.0, boundary)?;
        let err = compute_error(&end.component(0)?, Reference::Analytic1D(&exact), Metric::RelL2)?;
        println!(
            "n {n:>4}  h_min {:.2e}  RelL2 {err:.3e}  energy drift {:.2e}",
            grid.min_width(),
            (e1 - e0).abs() / e0
        );
    }
    Ok(())
}
