//! Turns a [`RunConfig`] into a solver callable and an error reference.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::bench::SweepReference;
use crate::error::{Error, Result};
use crate::exact::{advect_exact, taylor_green_oracle};
use crate::field::{Field, Layout};
use crate::grid::{Grid1D, Grid2D};
use crate::ic::{sample_ic, IcKind, IcParams, InitialCondition, SampledIc};
use crate::solvers1d::{solve_1d, Boundary, Limiter, Pde1D, Scheme, SolverConfig1D};
use crate::solvers2d::spectral::advance;
use crate::solvers2d::{
    assemble_poisson, cg_solve, jacobi_solve, lu_solve, poisson_field, ps_ns_solve, Forcing, PoissonBoundary,
};

use super::config::RunConfig;

type Frames = Vec<(f64, Field)>;
type SolveFn = dyn Fn(usize, Option<f64>) -> Result<(Field, Frames)> + Send + Sync;
type Fn1 = dyn Fn(f64) -> f64 + Send + Sync;
type Fn2 = dyn Fn(f64, f64) -> f64 + Send + Sync;

enum ReferenceKind {
    Analytic1D(Arc<Fn1>),
    Analytic2D(Arc<Fn2>),
    /// The named solver at a finer resolution.
    Fine(Box<dyn Fn(usize) -> Result<Field> + Send + Sync>),
}

/// Reference materialized for a given sweep.
pub enum OwnedReference {
    Analytic1D(Arc<Fn1>),
    Analytic2D(Arc<Fn2>),
    Field(Field),
}

impl OwnedReference {
    pub fn as_sweep(&self) -> SweepReference<'_> {
        match self {
            OwnedReference::Analytic1D(f) => SweepReference::Analytic1D(f.as_ref()),
            OwnedReference::Analytic2D(f) => SweepReference::Analytic2D(f.as_ref()),
            OwnedReference::Field(f) => SweepReference::Field(f),
        }
    }
}

pub struct Problem {
    pub solver_id: String,
    pub pde_id: String,
    solve: Box<SolveFn>,
    reference: ReferenceKind,
    reference_factor: usize,
}

impl Problem {
    /// Full solution (all components) plus snapshots every `interval`.
    pub fn solve_with_snapshots(&self, n: usize, interval: Option<f64>) -> Result<(Field, Frames)> {
        (self.solve)(n, interval)
    }

    /// The scored quantity: the first component of the solution.
    pub fn solve(&self, n: usize) -> Result<Field> {
        let (f, _) = (self.solve)(n, None)?;
        if f.components() > 1 {
            f.component(0)
        } else {
            Ok(f)
        }
    }

    pub fn reference_for(&self, largest: usize) -> Result<OwnedReference> {
        Ok(match &self.reference {
            ReferenceKind::Analytic1D(f) => OwnedReference::Analytic1D(f.clone()),
            ReferenceKind::Analytic2D(f) => OwnedReference::Analytic2D(f.clone()),
            ReferenceKind::Fine(solve) => OwnedReference::Field(solve(self.reference_factor * largest)?),
        })
    }
}

fn initial_condition(cfg: &RunConfig, period: f64) -> Result<SampledIc> {
    let params = IcParams {
        modes: cfg.modes,
        amplitude: (cfg.amplitude_min, cfg.amplitude_max),
        wavenumber: (cfg.k_min, cfg.k_max),
        offset: cfg.offset,
        period,
        width: cfg.width,
        explicit_modes: Vec::new(),
    };
    let spec = match cfg.ic.as_str() {
        "sum_of_sines" => InitialCondition::sum_of_sines(cfg.seed, params),
        "gaussian_bump" => InitialCondition {
            kind: IcKind::GaussianBump,
            seed: cfg.seed,
            params,
        },
        "single_mode" => {
            let mut s = InitialCondition::single_mode(cfg.amplitude_max, cfg.k_min as i32, 0.0);
            s.params.offset = cfg.offset;
            s.params.period = period;
            s
        }
        "taylor_green" => InitialCondition::taylor_green(),
        other => return Err(Error::InvalidInput(format!("unknown initial condition '{other}'"))),
    };
    sample_ic(&spec)
}

fn scheme(cfg: &RunConfig) -> Result<Scheme> {
    Ok(match cfg.solver.as_str() {
        "fd2" => Scheme::Fd2,
        "dg" => Scheme::Dg(cfg.order),
        "fv_godunov" => Scheme::FvGodunov,
        "weno5" => Scheme::Weno5,
        "fv_wave" => Scheme::FvWave,
        other => return Err(Error::InvalidInput(format!("solver '{other}' does not apply to pde '{}'", cfg.pde))),
    })
}

fn boundary_1d(cfg: &RunConfig, ic: &SampledIc) -> Result<Boundary> {
    match cfg.boundary.as_str() {
        "periodic" => Ok(Boundary::Periodic),
        "dirichlet" => Ok(Boundary::Dirichlet {
            left: ic.eval(cfg.x_min),
            right: ic.eval(cfg.x_max),
        }),
        other => Err(Error::InvalidInput(format!("unknown boundary '{other}'"))),
    }
}

fn one_d(cfg: &RunConfig) -> Result<Problem> {
    let scheme = scheme(cfg)?;
    let length = cfg.x_max - cfg.x_min;
    let ic = Arc::new(initial_condition(cfg, length)?);
    let mut solver_cfg = SolverConfig1D::new(scheme, cfg.cfl, cfg.t_final).with_boundary(boundary_1d(cfg, &ic)?);
    if let Some(m) = cfg.limiter_m {
        solver_cfg = solver_cfg.with_limiter(Limiter::TvbMinmod { m });
    }
    let pde = match cfg.pde.as_str() {
        "advection" => Pde1D::Advection { speed: cfg.speed },
        "burgers" => Pde1D::Burgers,
        "wave" => Pde1D::Wave { speed: cfg.speed },
        _ => unreachable!("dispatched on pde"),
    };
    solver_cfg.validate()?;
    let (x_min, x_max) = (cfg.x_min, cfg.x_max);
    let run = {
        let ic = ic.clone();
        move |n: usize, scfg: SolverConfig1D, interval: Option<f64>| -> Result<(Field, Frames)> {
            let grid = Grid1D::uniform(x_min, x_max, n)?;
            solve_1d(&grid, pde, &|x| ic.eval(x), None, &scfg, interval)
        }
    };
    let (t, c) = (cfg.t_final, cfg.speed);
    let reference = match pde {
        Pde1D::Advection { .. } => {
            let ic = ic.clone();
            ReferenceKind::Analytic1D(Arc::new(advect_exact(move |x| ic.eval(x), c, t, (x_min, length))))
        }
        Pde1D::Wave { .. } => {
            // d'Alembert with zero initial velocity; Dirichlet data use the odd extension
            let periodic = solver_cfg.boundary == Boundary::Periodic;
            let ic = ic.clone();
            let ext = move |x: f64| {
                if periodic {
                    ic.eval(x_min + (x - x_min).rem_euclid(length))
                } else {
                    let s = (x - x_min).rem_euclid(2.0 * length);
                    if s <= length {
                        ic.eval(x_min + s)
                    } else {
                        -ic.eval(x_min + 2.0 * length - s)
                    }
                }
            };
            ReferenceKind::Analytic1D(Arc::new(move |x| 0.5 * (ext(x - c * t) + ext(x + c * t))))
        }
        Pde1D::Burgers => {
            let fine_cfg = SolverConfig1D::new(Scheme::Weno5, cfg.cfl, cfg.t_final);
            let run = run.clone();
            ReferenceKind::Fine(Box::new(move |n| run(n, fine_cfg, None).map(|(f, _)| f)))
        }
    };
    let solver_id = scheme.id();
    Ok(Problem {
        solver_id,
        pde_id: cfg.pde.clone(),
        solve: Box::new(move |n, interval| run(n, solver_cfg, interval)),
        reference,
        reference_factor: cfg.reference_factor,
    })
}

fn poisson(cfg: &RunConfig) -> Result<Problem> {
    let boundary = match cfg.boundary.as_str() {
        "periodic" => PoissonBoundary::Periodic,
        "dirichlet" => PoissonBoundary::Dirichlet,
        other => return Err(Error::InvalidInput(format!("unknown boundary '{other}'"))),
    };
    let method = cfg.solver.clone();
    if !["lu", "jacobi", "cg"].contains(&method.as_str()) {
        return Err(Error::InvalidInput(format!("solver '{method}' does not apply to pde 'poisson'")));
    }
    let (x_min, x_max, tol, max_iter) = (cfg.x_min, cfg.x_max, cfg.tol, cfg.max_iter);
    let k = 2.0 * PI / (x_max - x_min);
    let periodic = boundary == PoissonBoundary::Periodic;
    let solve = move |n: usize, _: Option<f64>| -> Result<(Field, Frames)> {
        let grid = Grid2D::new((x_min, x_max), (x_min, x_max), n, n, (periodic, periodic))?;
        let system = assemble_poisson(&grid, boundary, |x, y| {
            2.0 * k * k * (k * (x - x_min)).sin() * (k * (y - x_min)).sin()
        })?;
        let x = match method.as_str() {
            "lu" => lu_solve(&system)?.0,
            "jacobi" => jacobi_solve(&system, tol, max_iter)?.0,
            _ => cg_solve(&system, tol, max_iter)?.0,
        };
        Ok((poisson_field(&grid, boundary, &x)?, Vec::new()))
    };
    let exact = move |x: f64, y: f64| (k * (x - x_min)).sin() * (k * (y - x_min)).sin();
    Ok(Problem {
        solver_id: cfg.solver.clone(),
        pde_id: cfg.pde.clone(),
        solve: Box::new(solve),
        reference: ReferenceKind::Analytic2D(Arc::new(exact)),
        reference_factor: cfg.reference_factor,
    })
}

fn navier_stokes(cfg: &RunConfig) -> Result<Problem> {
    if cfg.solver != "ps" {
        return Err(Error::InvalidInput(format!("solver '{}' does not apply to pde 'navier_stokes_2d'", cfg.solver)));
    }
    let ic = Arc::new(initial_condition(cfg, 2.0 * PI)?);
    let forcing = (cfg.forcing_amplitude != 0.0 || cfg.drag != 0.0).then_some(Forcing {
        amplitude: cfg.forcing_amplitude,
        wavenumber: cfg.forcing_wavenumber,
        drag: cfg.drag,
    });
    let (nu, t_final, cfl) = (cfg.viscosity, cfg.t_final, cfg.cfl);
    let run = {
        let ic = ic.clone();
        move |n: usize, interval: Option<f64>| -> Result<(Field, Frames)> {
            let grid = Grid2D::periodic_2pi(n)?;
            let values = (0..n * n)
                .map(|k| {
                    let (x, y) = grid.node(k % n, k / n);
                    ic.eval2(x, y)
                })
                .collect();
            let initial = Field::real(Layout::Nodal, grid.clone(), 1, values)?;
            let Some(dt) = interval.filter(|&dt| dt > 0.0) else {
                return Ok((ps_ns_solve(&initial, nu, &grid, t_final, forcing)?.vorticity(), Vec::new()));
            };
            let mut state = ps_ns_solve(&initial, nu, &grid, 0.0, forcing)?;
            let mut frames = Vec::new();
            while state.time < t_final * (1.0 - 1e-12) {
                let step = dt.min(t_final - state.time);
                state = advance(state, step, cfl)?;
                frames.push((state.time, state.vorticity()));
            }
            Ok((state.vorticity(), frames))
        }
    };
    let reference = if *ic == SampledIc::TaylorGreen && forcing.is_none() {
        ReferenceKind::Analytic2D(Arc::new(taylor_green_oracle(nu, t_final)))
    } else {
        let run = run.clone();
        ReferenceKind::Fine(Box::new(move |n| run(n, None).map(|(f, _)| f)))
    };
    Ok(Problem {
        solver_id: "ps".into(),
        pde_id: cfg.pde.clone(),
        solve: Box::new(run),
        reference,
        reference_factor: cfg.reference_factor,
    })
}

pub fn build_problem(cfg: &RunConfig) -> Result<Problem> {
    match cfg.pde.as_str() {
        "advection" | "burgers" | "wave" => one_d(cfg),
        "poisson" => poisson(cfg),
        "navier_stokes_2d" => navier_stokes(cfg),
        other => Err(Error::InvalidInput(format!("unknown pde '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{compute_error, Metric, Reference};

    fn cfg(pde: &str, solver: &str) -> RunConfig {
        RunConfig {
            pde: pde.into(),
            solver: solver.into(),
            ..RunConfig::default()
        }
    }

    #[test]
    fn advection_fd2_against_exact() {
        let p = build_problem(&cfg("advection", "fd2")).unwrap();
        assert_eq!(p.solver_id, "fd2");
        let f = p.solve(100).unwrap();
        let OwnedReference::Analytic1D(exact) = p.reference_for(100).unwrap() else { panic!() };
        let e = compute_error(&f, Reference::Analytic1D(exact.as_ref()), Metric::RelL2).unwrap();
        assert!(e < 0.1, "{e}");
    }

    #[test]
    fn wave_reference_matches_standing_wave() {
        let mut c = cfg("wave", "fv_wave");
        c.ic = "single_mode".into();
        c.boundary = "dirichlet".into();
        c.k_min = 1;
        c.amplitude_max = 1.0;
        c.t_final = 0.3;
        let p = build_problem(&c).unwrap();
        let OwnedReference::Analytic1D(exact) = p.reference_for(64).unwrap() else { panic!() };
        // sin(2πx) standing wave: cos(2π t) sin(2π x)
        let want = (2.0 * PI * 0.3).cos() * (2.0 * PI * 0.2).sin();
        assert!((exact(0.2) - want).abs() < 1e-12);
        let f = p.solve(128).unwrap();
        assert_eq!(f.components(), 1);
        assert!(compute_error(&f, Reference::Analytic1D(exact.as_ref()), Metric::RelL2).unwrap() < 1e-2);
    }

    #[test]
    fn mismatched_solver_rejected() {
        assert!(build_problem(&cfg("advection", "lu")).is_err());
        assert!(build_problem(&cfg("poisson", "fd2")).is_err());
        assert!(build_problem(&cfg("heat", "fd2")).is_err());
    }

    #[test]
    fn navier_stokes_snapshots() {
        let mut c = cfg("navier_stokes_2d", "ps");
        c.ic = "taylor_green".into();
        c.t_final = 0.2;
        let p = build_problem(&c).unwrap();
        let (f, frames) = p.solve_with_snapshots(16, Some(0.1)).unwrap();
        assert_eq!(frames.len(), 2);
        assert!((frames[1].0 - 0.2).abs() < 1e-12);
        let OwnedReference::Analytic2D(exact) = p.reference_for(16).unwrap() else { panic!() };
        assert!(compute_error(&f, Reference::Analytic2D(exact.as_ref()), Metric::RelL2).unwrap() < 1e-8);
    }
}
