//! Decaying Taylor-Green vortex with the pseudo-spectral solver, compared with
//! the closed-form vorticity at several resolutions.

use pbb::exact::taylor_green_oracle;
use pbb::solvers2d::{ps_ns_solve, to_physical};
use pbb::{compute_error, Grid2D, Metric, Reference};

fn main() -> pbb::Result<()> {
    let nu = 0.01;
    let t_final = 1.0;
    let exact = taylor_green_oracle(nu, t_final);
    for n in [16, 32, 64] {
        let grid = Grid2D::periodic_2pi(n)?;
        let initial = pbb::solvers2d::SpectralState::from_fn(n, nu, taylor_green_oracle(nu, 0.0))?.to_field();
        let state = ps_ns_solve(&initial, nu, &grid, t_final, None)?;
        let omega = to_physical(&state.to_field())?;
        let e = compute_error(&omega, Reference::Analytic2D(&exact), Metric::RelL2)?;
        println!(
            "n {n:>3}  steps {:>4}  RelL2 {e:.2e}  energy {:.6}  enstrophy {:.6}",
            state.steps,
            state.energy(),
            state.enstrophy()
        );
    }
    Ok(())
}
