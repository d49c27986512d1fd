//! Cost-accuracy sweeps of FD2 and DG(2) on advection, their Pareto fronts,
//! and the speedup of DG(2) at a shared accuracy.

use pbb::bench::{build_pareto_front, match_equal_accuracy, sweep_cost_accuracy, SweepReference, SweepSpec};
use pbb::exact::advect_exact;
use pbb::ic::IcParams;
use pbb::solvers1d::{dg_solve, fd2_advection_solve, DgFlux, Scheme, SolverConfig1D};
use pbb::{sample_ic, Grid1D, InitialCondition};

fn spec(solver: &str, resolutions: Vec<usize>) -> SweepSpec {
    SweepSpec {
        solver_id: solver.into(),
        pde_id: "advection".into(),
        resolutions,
        repeats: 5,
        warmups: 1,
        seed: 7,
        config_digest: "example".into(),
    }
}

fn main() -> pbb::Result<()> {
    let ic = sample_ic(&InitialCondition::sum_of_sines(7, IcParams::default()))?;
    let u0 = |x: f64| ic.eval(x);
    let exact = advect_exact(u0, 1.0, 1.0, (0.0, 1.0));

    let fd = |n: usize| {
        let g = Grid1D::uniform(0.0, 1.0, n)?;
        fd2_advection_solve(&g, u0, 1.0, &SolverConfig1D::new(Scheme::Fd2, 0.5, 1.0))
    };
    let dg = |n: usize| {
        let g = Grid1D::uniform(0.0, 1.0, n)?;
        dg_solve(&g, u0, DgFlux::LinearAdvection(1.0), 2, &SolverConfig1D::new(Scheme::Dg(2), 0.5, 1.0))
    };
    let reference = SweepReference::Analytic1D(&exact);
    let fd_records = sweep_cost_accuracy(&spec("fd2", vec![64, 128, 256, 512, 1024, 2048]), &fd, reference)?;
    let dg_records = sweep_cost_accuracy(&spec("dg2", vec![8, 16, 32, 64, 128]), &dg, reference)?;

    let fd_front = build_pareto_front(&fd_records)?;
    let dg_front = build_pareto_front(&dg_records)?;
    for front in [&fd_front, &dg_front] {
        println!("{} front:", front.solver_id);
        for p in &front.points {
            println!("  cost {:.3e} s  error {:.3e}", p.cost_s, p.error);
        }
    }

    // tightest accuracy both fronts reach
    let target = fd_front.error_range().0.max(dg_front.error_range().0);
    let report = match_equal_accuracy(&fd_front, &dg_front, target)?;
    println!(
        "at RelL2 {:.3e}: fd2 {:.3e} s, dg2 {:.3e} s, speedup {:.2}x",
        report.target_error, report.cost_a.value, report.cost_b.value, report.speedup
    );
    Ok(())
}
