//! Linear advection of a seeded sum of sines: DG(2) on 13 cells against
//! second-order finite differences on 100 points.

use pbb::bench::time_operation;
use pbb::exact::advect_exact;
use pbb::ic::IcParams;
use pbb::solvers1d::{dg_solve, fd2_advection_solve, DgFlux, Scheme, SolverConfig1D};
use pbb::{compute_error, sample_ic, Grid1D, InitialCondition, Metric, Reference};

fn main() -> pbb::Result<()> {
    let ic = sample_ic(&InitialCondition::sum_of_sines(7, IcParams::default()))?;
    let u0 = |x: f64| ic.eval(x);
    let exact = advect_exact(u0, 1.0, 1.0, (0.0, 1.0));

    let fd_grid = Grid1D::uniform(0.0, 1.0, 100)?;
    let dg_grid = Grid1D::uniform(0.0, 1.0, 13)?;
    let fd_cfg = SolverConfig1D::new(Scheme::Fd2, 0.5, 1.0);
    let dg_cfg = SolverConfig1D::new(Scheme::Dg(2), 0.5, 1.0);

    let fd = fd2_advection_solve(&fd_grid, u0, 1.0, &fd_cfg)?;
    let dg = dg_solve(&dg_grid, u0, DgFlux::LinearAdvection(1.0), 2, &dg_cfg)?;
    let t_fd = time_operation(|| fd2_advection_solve(&fd_grid, u0, 1.0, &fd_cfg), 11, 2)?;
    let t_dg = time_operation(|| dg_solve(&dg_grid, u0, DgFlux::LinearAdvection(1.0), 2, &dg_cfg), 11, 2)?;

    for (name, field, stats) in [("fd2 n=100", &fd, &t_fd), ("dg2 n=13", &dg, &t_dg)] {
        let e = compute_error(field, Reference::Analytic1D(&exact), Metric::RelL2)?;
        println!(
            "{name:<10} dof {:>4}  RelL2 {e:.3e}  median {:.3e} s (IQR {:.1e})",
            field.dof_count(),
            stats.median_s,
            stats.iqr_s
        );
    }
    println!("runtime ratio fd2/dg2: {:.2}", t_fd.median_s / t_dg.median_s);
    Ok(())
}
