//! One-dimensional baselines driven by SSPRK3.
//!
//! Each scheme builds a [`SpatialOperator`] over a flat dof vector and hands it
//! to a shared driver, so every solver steps, checks for blow-up and reports
//! snapshots the same way.

pub mod dg;
pub mod fd2;
pub mod fv;
pub mod time;
pub mod wave;
pub mod weno;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Layout};
use crate::grid::Grid1D;

pub use dg::{dg_solve, DgFlux};
pub use fd2::fd2_advection_solve;
pub use fv::{fv_godunov_burgers_solve, godunov_flux};
pub use time::{compute_dt, ssprk3_step, Ssprk3, SpatialOperator, TimeStepPlan};
pub use wave::{fv_wave_solve, wave_energy};
pub use weno::weno5_burgers_solve;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Fd2,
    Dg(usize),
    FvGodunov,
    Weno5,
    FvWave,
}

impl Scheme {
    /// Short identifier used in benchmark records and file names.
    pub fn id(&self) -> String {
        match self {
            Scheme::Fd2 => "fd2".into(),
            Scheme::Dg(p) => format!("dg{p}"),
            Scheme::FvGodunov => "fv_godunov".into(),
            Scheme::Weno5 => "weno5".into(),
            Scheme::FvWave => "fv_wave".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Dirichlet { left: f64, right: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limiter {
    None,
    /// TVB-modified minmod with constant `m` (slopes below `m h²` are left alone).
    TvbMinmod { m: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig1D {
    pub scheme: Scheme,
    pub cfl_factor: f64,
    pub t_final: f64,
    pub boundary: Boundary,
    pub limiter: Limiter,
}

impl SolverConfig1D {
    pub fn new(scheme: Scheme, cfl_factor: f64, t_final: f64) -> Self {
        Self {
            scheme,
            cfl_factor,
            t_final,
            boundary: Boundary::Periodic,
            limiter: Limiter::None,
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_limiter(mut self, limiter: Limiter) -> Self {
        self.limiter = limiter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_factor > 0.0 && self.cfl_factor <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "cfl_factor {} outside (0, 1]",
                self.cfl_factor
            )));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidConfig(format!("t_final {} must be >= 0", self.t_final)));
        }
        if let Scheme::Dg(p) = self.scheme {
            if p > 3 {
                return Err(Error::InvalidConfig(format!("DG order {p} not in 0..=3")));
            }
        }
        if let Limiter::TvbMinmod { m } = self.limiter {
            if !(m >= 0.0) {
                return Err(Error::InvalidConfig(format!("TVB constant {m} must be >= 0")));
            }
        }
        if let Boundary::Dirichlet { left, right } = self.boundary {
            if !matches!(self.scheme, Scheme::FvWave | Scheme::Dg(_)) {
                return Err(Error::UnsupportedBoundary(format!(
                    "Dirichlet boundaries are not available for {}",
                    self.scheme.id()
                )));
            }
            if !left.is_finite() || !right.is_finite() {
                return Err(Error::InvalidConfig("Dirichlet values must be finite".into()));
            }
        }
        Ok(())
    }

    fn require_periodic(&self, what: &str) -> Result<()> {
        match self.boundary {
            Boundary::Periodic => Ok(()),
            Boundary::Dirichlet { .. } => Err(Error::UnsupportedBoundary(format!(
                "{what} needs periodic boundaries"
            ))),
        }
    }
}

/// Total variation `Σ |u_{j+1} - u_j|` of a periodic sequence.
pub fn total_variation(u: &[f64]) -> f64 {
    let n = u.len();
    (0..n).map(|j| (u[(j + 1) % n] - u[j]).abs()).sum()
}

/// A prepared run: initial dof, operator and step plan.
pub(crate) struct Run<'a> {
    pub grid: Grid1D,
    pub layout: Layout,
    pub components: usize,
    pub u: Vec<f64>,
    /// `None` when the state is stationary and no stepping is needed.
    pub plan: Option<TimeStepPlan>,
    pub op: Box<dyn SpatialOperator + 'a>,
    /// Check of the final state against the initial one.
    pub check: Option<Box<dyn Fn(&[f64], &[f64]) -> Result<()> + 'a>>,
}

impl Run<'_> {
    pub fn execute(self, observer: &mut dyn FnMut(f64, &[f64])) -> Result<Field> {
        let Run {
            grid,
            layout,
            components,
            mut u,
            plan,
            mut op,
            check,
        } = self;
        let initial = check.as_ref().map(|_| u.clone());
        if let Some(plan) = plan {
            time::integrate(&mut u, &plan, op.as_mut(), observer)?;
        }
        if let (Some(check), Some(initial)) = (check, initial) {
            check(&initial, &u)?;
        }
        Field::real(layout, grid, components, u)
    }

    pub fn finish(self) -> Result<Field> {
        self.execute(&mut |_, _| {})
    }
}

/// Collects copies of the state at multiples of `interval`, plus the final time.
pub struct Snapshots {
    interval: f64,
    next: f64,
    pub frames: Vec<(f64, Vec<f64>)>,
}

impl Snapshots {
    pub fn every(interval: f64) -> Self {
        Self {
            interval,
            next: interval,
            frames: Vec::new(),
        }
    }

    pub fn observe(&mut self, t: f64, u: &[f64]) {
        if self.interval > 0.0 && t >= self.next * (1.0 - 1e-12) {
            self.frames.push((t, u.to_vec()));
            while self.next <= t * (1.0 + 1e-12) {
                self.next += self.interval;
            }
        }
    }
}

/// The PDE a 1D solve targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pde", rename_all = "snake_case")]
pub enum Pde1D {
    Advection { speed: f64 },
    Burgers,
    Wave { speed: f64 },
}

/// Dispatches on `config.scheme`. For the wave equation `v0` is the initial
/// velocity (zero if absent). Every snapshot is taken as a field.
pub fn solve_1d(
    grid: &Grid1D,
    pde: Pde1D,
    u0: &dyn Fn(f64) -> f64,
    v0: Option<&dyn Fn(f64) -> f64>,
    config: &SolverConfig1D,
    snapshot_interval: Option<f64>,
) -> Result<(Field, Vec<(f64, Field)>)> {
    let run = prepare(grid, pde, u0, v0, config)?;
    let (layout, components) = (run.layout, run.components);
    let mut snaps = Snapshots::every(snapshot_interval.unwrap_or(0.0));
    let out = run.execute(&mut |t, u| snaps.observe(t, u))?;
    let frames = snaps
        .frames
        .into_iter()
        .map(|(t, u)| Field::real(layout, grid.clone(), components, u).map(|f| (t, f)))
        .collect::<Result<Vec<_>>>()?;
    Ok((out, frames))
}

fn prepare<'a>(
    grid: &Grid1D,
    pde: Pde1D,
    u0: &'a dyn Fn(f64) -> f64,
    v0: Option<&'a dyn Fn(f64) -> f64>,
    config: &SolverConfig1D,
) -> Result<Run<'a>> {
    let mismatch = || {
        Err(Error::InvalidConfig(format!(
            "scheme {} does not apply to {pde:?}",
            config.scheme.id()
        )))
    };
    match (config.scheme, pde) {
        (Scheme::Fd2, Pde1D::Advection { speed }) => fd2::prepare(grid, u0, speed, config),
        (Scheme::Dg(p), Pde1D::Advection { speed }) => {
            dg::prepare(grid, u0, DgFlux::LinearAdvection(speed), p, config)
        }
        (Scheme::Dg(p), Pde1D::Burgers) => dg::prepare(grid, u0, DgFlux::Burgers, p, config),
        (Scheme::FvGodunov, Pde1D::Burgers) => fv::prepare(grid, u0, config),
        (Scheme::Weno5, Pde1D::Burgers) => weno::prepare(grid, u0, config),
        (Scheme::FvWave, Pde1D::Wave { speed }) => {
            let zero = |_: f64| 0.0;
            match v0 {
                Some(v0) => wave::prepare(grid, &|x| (u0(x), v0(x)), speed, config),
                None => wave::prepare(grid, &|x| (u0(x), zero(x)), speed, config),
            }
        }
        _ => mismatch(),
    }
}

/// Largest `|u0|` sampled at Gauss points of every cell.
pub(crate) fn max_abs_sampled(grid: &Grid1D, u0: &dyn Fn(f64) -> f64) -> f64 {
    let (xs, _) = crate::quadrature::gauss_legendre(6);
    let mut m: f64 = 0.0;
    for j in 0..grid.n_cells() {
        let (a, h) = (grid.edges()[j], grid.width(j));
        m = m.max(u0(a).abs());
        for &x in &xs {
            m = m.max(u0(a + 0.5 * h * (x + 1.0)).abs());
        }
    }
    m
}
