//! Burgers shock formation: Godunov, WENO5 and limited DG(2) at equal cell
//! count, scored against a fine WENO5 reference.

use pbb::ic::IcParams;
use pbb::solvers1d::{
    dg_solve, fv_godunov_burgers_solve, total_variation, weno5_burgers_solve, DgFlux, Limiter, Scheme,
    SolverConfig1D,
};
use pbb::{compute_error, sample_ic, Grid1D, InitialCondition, Metric, Reference};

fn main() -> pbb::Result<()> {
    let params = IcParams { wavenumber: (1, 1), offset: 0.5, ..IcParams::default() };
    let ic = sample_ic(&InitialCondition::sum_of_sines(3, params))?;
    let u0 = |x: f64| ic.eval(x);
    let t_final = 0.5;

    let fine = Grid1D::uniform(0.0, 1.0, 4096)?;
    let reference = weno5_burgers_solve(&fine, u0, &SolverConfig1D::new(Scheme::Weno5, 0.5, t_final))?;

    let n = 64;
    let grid = Grid1D::uniform(0.0, 1.0, n)?;
    let godunov = fv_godunov_burgers_solve(&grid, u0, &SolverConfig1D::new(Scheme::FvGodunov, 0.5, t_final))?;
    let weno = weno5_burgers_solve(&grid, u0, &SolverConfig1D::new(Scheme::Weno5, 0.5, t_final))?;
    let dg_cfg =
        SolverConfig1D::new(Scheme::Dg(2), 0.5, t_final).with_limiter(Limiter::TvbMinmod { m: 50.0 });
    let dg = dg_solve(&grid, u0, DgFlux::Burgers, 2, &dg_cfg)?;

    println!("t = {t_final}, {n} cells, reference WENO5 on {} cells", fine.n_cells());
    for (name, f) in [("fv_godunov", &godunov), ("weno5", &weno), ("dg2+tvb", &dg)] {
        let e = compute_error(f, Reference::Field(&reference), Metric::RelL2)?;
        let tv = total_variation(&f.cell_means()?);
        println!("{name:<11} RelL2 {e:.3e}  TV {tv:.4}");
    }
    Ok(())
}
