//! SSPRK3 time integration and CFL time-step planning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid1D;

use super::Scheme;

/// A semi-discrete operator `du/dt = L(u)` with an optional projection
/// (limiter) applied after every Runge–Kutta stage.
pub trait SpatialOperator {
    fn rhs(&mut self, u: &[f64], out: &mut [f64]);

    fn post_stage(&mut self, _u: &mut [f64]) {}
}

impl<F: FnMut(&[f64], &mut [f64])> SpatialOperator for F {
    fn rhs(&mut self, u: &[f64], out: &mut [f64]) {
        self(u, out)
    }
}

/// Reusable stage storage for the Shu–Osher SSPRK3 scheme.
#[derive(Debug, Default, Clone)]
pub struct Ssprk3 {
    k: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
}

impl Ssprk3 {
    pub fn new(n: usize) -> Self {
        Self {
            k: vec![0.0; n],
            u1: vec![0.0; n],
            u2: vec![0.0; n],
        }
    }

    /// Advances `u` by one step of size `dt` in place.
    pub fn step<O: SpatialOperator + ?Sized>(&mut self, u: &mut [f64], dt: f64, op: &mut O) {
        let n = u.len();
        if self.k.len() != n {
            *self = Self::new(n);
        }
        let Self { k, u1, u2 } = self;

        op.rhs(u, k);
        for i in 0..n {
            u1[i] = u[i] + dt * k[i];
        }
        op.post_stage(u1);

        op.rhs(u1, k);
        for i in 0..n {
            u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * k[i]);
        }
        op.post_stage(u2);

        op.rhs(u2, k);
        for i in 0..n {
            u[i] = (u[i] + 2.0 * (u2[i] + dt * k[i])) / 3.0;
        }
        op.post_stage(u);
    }
}

/// One SSPRK3 step on a field's degrees of freedom.
pub fn ssprk3_step(state: &Field, mut rhs: impl FnMut(&[f64], &mut [f64]), dt: f64) -> Result<Field> {
    let mut u = state
        .values()
        .ok_or_else(|| Error::UnsupportedLayout(state.layout().to_string()))?
        .to_vec();
    Ssprk3::new(u.len()).step(&mut u, dt, &mut rhs);
    if !u.iter().all(|v| v.is_finite()) {
        return Err(Error::UnstableStep { step: 1, time: dt });
    }
    Field::real(state.layout(), state.grid().clone(), state.components(), u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeStepPlan {
    pub dt: f64,
    pub n_steps: usize,
    /// Length of one final shortened step (zero if the full steps land on `t_final`).
    pub partial: f64,
}

impl TimeStepPlan {
    /// Plans full steps of at most `dt_max` covering `t_final` exactly.
    pub fn covering(t_final: f64, dt_max: f64) -> Self {
        if t_final <= 0.0 {
            return Self {
                dt: dt_max,
                n_steps: 0,
                partial: 0.0,
            };
        }
        let ratio = t_final / dt_max;
        let nearest = ratio.round();
        if nearest >= 1.0 && (ratio - nearest).abs() <= 1e-9 * nearest {
            // land exactly on t_final instead of taking a round-off sized step
            return Self {
                dt: t_final / nearest,
                n_steps: nearest as usize,
                partial: 0.0,
            };
        }
        let n_steps = ratio.floor() as usize;
        Self {
            dt: dt_max,
            n_steps,
            partial: t_final - n_steps as f64 * dt_max,
        }
    }

    pub fn total_steps(&self) -> usize {
        self.n_steps + usize::from(self.partial > 0.0)
    }

    pub fn t_final(&self) -> f64 {
        self.n_steps as f64 * self.dt + self.partial
    }
}

/// CFL time step: `cfl · Δx_min / (a (2p+1))` for DG(p), `cfl · Δx_min / a` otherwise.
pub fn compute_dt(
    grid: &Grid1D,
    max_wavespeed: f64,
    cfl_factor: f64,
    scheme: Scheme,
    t_final: f64,
) -> Result<TimeStepPlan> {
    if !(max_wavespeed > 0.0) || !max_wavespeed.is_finite() {
        return Err(Error::ZeroWaveSpeed);
    }
    if !(cfl_factor > 0.0) {
        return Err(Error::InvalidConfig(format!("cfl factor {cfl_factor} must be positive")));
    }
    let divisor = match scheme {
        Scheme::Dg(p) => (2 * p + 1) as f64,
        _ => 1.0,
    };
    let dt = cfl_factor * grid.min_width() / (max_wavespeed * divisor);
    Ok(TimeStepPlan::covering(t_final, dt))
}

/// Runs `op` over the plan. `observer` is called after every step with the
/// current time and state.
pub(crate) fn integrate<O: SpatialOperator + ?Sized>(
    u: &mut [f64],
    plan: &TimeStepPlan,
    op: &mut O,
    observer: &mut dyn FnMut(f64, &[f64]),
) -> Result<()> {
    let mut stepper = Ssprk3::new(u.len());
    let mut t = 0.0;
    let steps = (0..plan.n_steps)
        .map(|_| plan.dt)
        .chain((plan.partial > 0.0).then_some(plan.partial));
    for (i, dt) in steps.enumerate() {
        stepper.step(u, dt, op);
        t = if i < plan.n_steps {
            (i + 1) as f64 * plan.dt
        } else {
            plan.t_final()
        };
        if !u.iter().all(|v| v.is_finite()) {
            return Err(Error::UnstableStep { step: i + 1, time: t });
        }
        observer(t, u);
    }
    let _ = t;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Layout;

    fn decay(u: &[f64], out: &mut [f64]) {
        out[0] = -u[0];
    }

    #[test]
    fn zero_operator_is_identity() {
        let g = Grid1D::uniform(0.0, 1.0, 4).unwrap();
        let f = Field::real(Layout::CellAverage, g, 1, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let out = ssprk3_step(&f, |_u: &[f64], k: &mut [f64]| k.fill(0.0), 0.3).unwrap();
        assert_eq!(out, f);
    }

    #[test]
    fn one_step_of_decay() {
        // u1 = 0.9, u2 = 0.75 + 0.25 (0.9 - 0.09) = 0.9525,
        // u3 = 1/3 + 2/3 (0.9525 - 0.09525) = 0.9048333...
        let mut u = [1.0];
        Ssprk3::new(1).step(&mut u, 0.1, &mut decay);
        let hand = 1.0 / 3.0 + 2.0 / 3.0 * (0.9525 - 0.09525);
        assert!((u[0] - hand).abs() < 1e-15);
        // agrees with exp(-0.1) to O(dt^4)
        assert!((u[0] - (-0.1f64).exp()).abs() < 1e-5);
    }

    #[test]
    fn nan_is_reported() {
        let g = Grid1D::uniform(0.0, 1.0, 2).unwrap();
        let f = Field::real(Layout::CellAverage, g, 1, vec![1.0, 1.0]).unwrap();
        let r = ssprk3_step(&f, |_u: &[f64], k: &mut [f64]| k.fill(f64::NAN), 0.1);
        assert!(matches!(r, Err(Error::UnstableStep { .. })));
    }

    #[test]
    fn plan_examples() {
        let g = Grid1D::uniform(0.0, 1.0, 100).unwrap();
        let p = compute_dt(&g, 1.0, 0.5, Scheme::FvGodunov, 1.0).unwrap();
        assert!((p.dt - 0.005).abs() < 1e-15);
        let p = compute_dt(&g, 1.0, 0.5, Scheme::Dg(2), 1.0).unwrap();
        assert!((p.dt - 0.001).abs() < 1e-15);
        let p = compute_dt(&g, 1.0, 0.5, Scheme::FvGodunov, 0.0101).unwrap();
        assert_eq!(p.n_steps, 2);
        assert!((p.partial - 0.0001).abs() < 1e-15);
        assert!((p.t_final() - 0.0101).abs() <= 1e-12 * 0.0101);
        assert_eq!(
            compute_dt(&g, 0.0, 0.5, Scheme::Fd2, 1.0),
            Err(Error::ZeroWaveSpeed)
        );
    }

    #[test]
    fn plan_lands_on_final_time() {
        for (t, dt) in [(1.0, 0.1), (1.0, 1.0 / 3.0), (0.7, 0.005), (2.0, 0.3)] {
            let p = TimeStepPlan::covering(t, dt);
            assert!((p.t_final() - t).abs() <= 1e-12 * t, "{p:?}");
            assert!(p.dt <= dt * (1.0 + 1e-9));
        }
    }
}
