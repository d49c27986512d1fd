//! Q1 Poisson problem with homogeneous Dirichlet data solved three ways.

use std::f64::consts::PI;
use std::time::Instant;

use pbb::solvers2d::{assemble_poisson, cg_solve, jacobi_solve, lu_solve, poisson_field, PoissonBoundary};
use pbb::{compute_error, Grid2D, Metric, Reference};

fn main() -> pbb::Result<()> {
    let cells = 64;
    let grid = Grid2D::new((0.0, 1.0), (0.0, 1.0), cells, cells, (false, false))?;
    // manufactured u = x (1 - x) sin(pi y)
    let exact = |x: f64, y: f64| x * (1.0 - x) * (PI * y).sin();
    let system = assemble_poisson(&grid, PoissonBoundary::Dirichlet, |x, y| {
        (2.0 + PI * PI * x * (1.0 - x)) * (PI * y).sin()
    })?;
    println!("{} unknowns, {} nonzeros", system.dimension(), system.nnz());

    let t = Instant::now();
    let (x_lu, factor) = lu_solve(&system)?;
    println!("lu ({})    {:.3e} s", factor.kind(), t.elapsed().as_secs_f64());

    let (x_cg, cg) = cg_solve(&system, 1e-10, 10_000)?;
    println!("cg        {:.3e} s, {} iterations", cg.wall_time_s, cg.iterations);

    let (x_j, jac) = jacobi_solve(&system, 1e-8, 1_000_000)?;
    println!("jacobi    {:.3e} s, {} iterations", jac.wall_time_s, jac.iterations);

    for (name, x) in [("lu", &x_lu), ("cg", &x_cg), ("jacobi", &x_j)] {
        let field = poisson_field(&grid, PoissonBoundary::Dirichlet, x)?;
        let e = compute_error(&field, Reference::Analytic2D(&exact), Metric::RelL2)?;
        println!("{name:<7} RelL2: {e:.3e}");
    }
    Ok(())
}
