//! Pseudo-spectral vorticity–streamfunction Navier–Stokes on `[0, 2π]²`.
//!
//! `ω_t + u·∇ω = ν∇²ω + F - μω`, with `∇²ψ = -ω`, `u = ψ_y`, `v = -ψ_x`.
//! The viscous term is integrated exactly through an integrating factor and
//! the rest by SSPRK3; products are formed on the grid with 2/3-rule
//! truncation.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{hermitian_defect, Dof, Field, Layout};
use crate::grid::Grid2D;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Kolmogorov-type forcing `F = amplitude · cos(wavenumber · y)` with linear drag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Forcing {
    pub amplitude: f64,
    pub wavenumber: u32,
    #[serde(default)]
    pub drag: f64,
}

/// Two-dimensional FFT on an `n × n` row-major array.
pub struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
}

impl Fft2 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        Self {
            n,
            fwd,
            inv,
            scratch: vec![ZERO; len],
            transposed: vec![ZERO; n * n],
        }
    }

    fn both_axes(&mut self, data: &mut [Complex64], forward: bool) {
        let n = self.n;
        let plan = if forward { &self.fwd } else { &self.inv };
        plan.process_with_scratch(data, &mut self.scratch);
        for j in 0..n {
            for i in 0..n {
                self.transposed[i * n + j] = data[j * n + i];
            }
        }
        plan.process_with_scratch(&mut self.transposed, &mut self.scratch);
        for j in 0..n {
            for i in 0..n {
                data[j * n + i] = self.transposed[i * n + j];
            }
        }
    }

    /// Unnormalised forward transform.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.both_axes(data, true);
    }

    /// Inverse transform including the `1/n²` factor.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.both_axes(data, false);
        let s = 1.0 / (self.n * self.n) as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }
}

/// Signed wavenumber of FFT index `i` on a `2π`-periodic axis of `n` points.
pub fn wavenumber(i: usize, n: usize) -> f64 {
    if i <= n / 2 {
        i as f64
    } else {
        i as f64 - n as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralState {
    pub n: usize,
    /// Unnormalised forward-FFT coefficients of the vorticity, row-major in `ky`.
    pub omega_hat: Vec<Complex64>,
    pub viscosity: f64,
    pub forcing: Option<Forcing>,
    pub time: f64,
    pub steps: usize,
}

impl SpectralState {
    /// Samples `omega(x, y)` on the `n × n` grid of `[0, 2π)²`.
    pub fn from_fn(n: usize, viscosity: f64, omega: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_size(n)?;
        let h = 2.0 * PI / n as f64;
        let mut data: Vec<Complex64> = (0..n * n)
            .map(|k| Complex64::new(omega((k % n) as f64 * h, (k / n) as f64 * h), 0.0))
            .collect();
        Fft2::new(n).forward(&mut data);
        Ok(Self {
            n,
            omega_hat: data,
            viscosity,
            forcing: None,
            time: 0.0,
            steps: 0,
        })
    }

    pub fn grid(&self) -> Grid2D {
        Grid2D::periodic_2pi(self.n).expect("state size was validated")
    }

    pub fn to_field(&self) -> Field {
        Field::new(
            Layout::SpectralComplex,
            self.grid(),
            1,
            Dof::Complex(self.omega_hat.clone()),
        )
        .expect("spectral state is a valid field")
    }

    /// Physical-space vorticity as a nodal field.
    pub fn vorticity(&self) -> Field {
        to_physical(&self.to_field()).expect("spectral state is a valid field")
    }

    /// Mean kinetic energy `½ ⟨u² + v²⟩`.
    pub fn energy(&self) -> f64 {
        let n = self.n;
        let norm = ((n * n) as f64).powi(2);
        let mut e = 0.0;
        for j in 0..n {
            for i in 0..n {
                let k2 = wavenumber(i, n).powi(2) + wavenumber(j, n).powi(2);
                if k2 > 0.0 {
                    e += self.omega_hat[j * n + i].norm_sqr() / k2;
                }
            }
        }
        0.5 * e / norm
    }

    /// Mean enstrophy `½ ⟨ω²⟩`.
    pub fn enstrophy(&self) -> f64 {
        let norm = ((self.n * self.n) as f64).powi(2);
        0.5 * self.omega_hat.iter().map(|z| z.norm_sqr()).sum::<f64>() / norm
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.omega_hat, self.n, self.n)
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::NonPowerOfTwo(n));
    }
    Ok(())
}

/// Inverse-transforms a spectral field to nodal values (real parts).
pub fn to_physical(field: &Field) -> Result<Field> {
    let (Some(c), Some(g)) = (field.coefficients(), field.grid_2d()) else {
        return Err(Error::UnsupportedLayout(format!(
            "{} is not a 2D spectral field",
            field.layout()
        )));
    };
    let (nx, ny) = (g.nx(), g.ny());
    if nx != ny || !nx.is_power_of_two() {
        return Err(Error::NonPowerOfTwo(if nx.is_power_of_two() { ny } else { nx }));
    }
    let mut fft = Fft2::new(nx);
    let mut out = Vec::with_capacity(c.len());
    for block in c.chunks(nx * ny) {
        let mut data = block.to_vec();
        fft.inverse(&mut data);
        out.extend(data.iter().map(|z| z.re));
    }
    Field::real(Layout::Nodal, g.clone(), field.components(), out)
}

/// Forward-transforms a nodal 2D field.
pub fn to_spectral(field: &Field) -> Result<Field> {
    let (Some(v), Some(g), Layout::Nodal) = (field.values(), field.grid_2d(), field.layout()) else {
        return Err(Error::UnsupportedLayout(format!(
            "{} is not a 2D nodal field",
            field.layout()
        )));
    };
    let (nx, ny) = (g.nx(), g.ny());
    if nx != ny || !nx.is_power_of_two() {
        return Err(Error::NonPowerOfTwo(if nx.is_power_of_two() { ny } else { nx }));
    }
    let mut fft = Fft2::new(nx);
    let mut out = Vec::with_capacity(v.len());
    for block in v.chunks(nx * ny) {
        let mut data: Vec<Complex64> = block.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft.forward(&mut data);
        out.extend(data);
    }
    Field::new(Layout::SpectralComplex, g.clone(), field.components(), Dof::Complex(out))
}

/// Workspace for the nonlinear term and time stepping.
struct Workspace {
    fft: Fft2,
    kx: Vec<f64>,
    ky: Vec<f64>,
    k2: Vec<f64>,
    mask: Vec<bool>,
    forcing_hat: Vec<Complex64>,
    drag: f64,
    viscosity: f64,
    u: Vec<Complex64>,
    v: Vec<Complex64>,
    wx: Vec<Complex64>,
    wy: Vec<Complex64>,
    max_speed: f64,
}

impl Workspace {
    fn new(n: usize, viscosity: f64, forcing: Option<Forcing>) -> Self {
        let mut kx = vec![0.0; n * n];
        let mut ky = vec![0.0; n * n];
        let mut k2 = vec![0.0; n * n];
        let mut mask = vec![false; n * n];
        let kmax = (n / 3) as f64;
        for j in 0..n {
            for i in 0..n {
                let (a, b) = (wavenumber(i, n), wavenumber(j, n));
                let idx = j * n + i;
                kx[idx] = a;
                ky[idx] = b;
                k2[idx] = a * a + b * b;
                mask[idx] = a.abs() <= kmax && b.abs() <= kmax;
            }
        }
        let mut fft = Fft2::new(n);
        let mut forcing_hat = vec![ZERO; n * n];
        let mut drag = 0.0;
        if let Some(f) = forcing {
            let h = 2.0 * PI / n as f64;
            for (k, z) in forcing_hat.iter_mut().enumerate() {
                let y = (k / n) as f64 * h;
                *z = Complex64::new(f.amplitude * (f.wavenumber as f64 * y).cos(), 0.0);
            }
            fft.forward(&mut forcing_hat);
            for (z, &keep) in forcing_hat.iter_mut().zip(&mask) {
                if !keep {
                    *z = ZERO;
                }
            }
            drag = f.drag;
        }
        Self {
            fft,
            kx,
            ky,
            k2,
            mask,
            forcing_hat,
            drag,
            viscosity,
            u: vec![ZERO; n * n],
            v: vec![ZERO; n * n],
            wx: vec![ZERO; n * n],
            wy: vec![ZERO; n * n],
            max_speed: 0.0,
        }
    }

    /// Spectral velocity into `u`, `v` and back to the grid.
    fn velocity(&mut self, w: &[Complex64]) {
        let i = Complex64::i();
        for k in 0..w.len() {
            let psi = if self.k2[k] > 0.0 && self.mask[k] {
                w[k] / self.k2[k]
            } else {
                ZERO
            };
            self.u[k] = i * self.ky[k] * psi;
            self.v[k] = -i * self.kx[k] * psi;
        }
        self.fft.inverse(&mut self.u);
        self.fft.inverse(&mut self.v);
    }

    /// `N(ω̂) = -(u·∇ω)^ + F̂ - μ ω̂`, truncated.
    fn nonlinear(&mut self, w: &[Complex64], out: &mut [Complex64]) {
        let i = Complex64::i();
        self.velocity(w);
        for k in 0..w.len() {
            let wk = if self.mask[k] { w[k] } else { ZERO };
            self.wx[k] = i * self.kx[k] * wk;
            self.wy[k] = i * self.ky[k] * wk;
        }
        self.fft.inverse(&mut self.wx);
        self.fft.inverse(&mut self.wy);
        let mut speed: f64 = 0.0;
        for k in 0..w.len() {
            let (u, v) = (self.u[k].re, self.v[k].re);
            speed = speed.max(u.abs() + v.abs());
            out[k] = Complex64::new(u * self.wx[k].re + v * self.wy[k].re, 0.0);
        }
        self.max_speed = speed;
        self.fft.forward(out);
        for k in 0..w.len() {
            out[k] = if self.mask[k] && k != 0 {
                -out[k] + self.forcing_hat[k] - self.drag * w[k]
            } else {
                self.forcing_hat[k] - self.drag * w[k]
            };
        }
    }

    fn decay(&self, tau: f64, out: &mut [f64]) {
        for (o, k2) in out.iter_mut().zip(&self.k2) {
            *o = (-self.viscosity * k2 * tau).exp();
        }
    }
}

/// Integrates the vorticity to `t_final` with advective CFL 0.5.
pub fn ps_ns_solve(
    initial: &Field,
    viscosity: f64,
    grid: &Grid2D,
    t_final: f64,
    forcing: Option<Forcing>,
) -> Result<SpectralState> {
    let n = grid.nx();
    if grid.ny() != n {
        return Err(Error::NonPowerOfTwo(grid.ny()));
    }
    check_size(n)?;
    let (x, y) = (grid.x_range(), grid.y_range());
    let two_pi = 2.0 * PI;
    let off = |r: (f64, f64)| r.0.abs() > 1e-12 || (r.1 - two_pi).abs() > 1e-12;
    if off(x) || off(y) || grid.periodic() != (true, true) {
        return Err(Error::IncompatibleGrids("spectral solver needs the periodic [0, 2π]² square".into()));
    }
    if !(viscosity >= 0.0) || !(t_final >= 0.0) {
        return Err(Error::InvalidConfig("viscosity and t_final must be >= 0".into()));
    }
    let spectral = match initial.layout() {
        Layout::SpectralComplex => initial.clone(),
        Layout::Nodal => to_spectral(initial)?,
        other => return Err(Error::UnsupportedLayout(other.to_string())),
    };
    if spectral.grid_2d().map(|g| g.nx()) != Some(n) {
        return Err(Error::IncompatibleGrids("initial vorticity lives on another grid".into()));
    }
    let state = SpectralState {
        n,
        omega_hat: spectral.coefficients().expect("spectral").to_vec(),
        viscosity,
        forcing,
        time: 0.0,
        steps: 0,
    };
    advance(state, t_final, 0.5)
}

/// Advances `state` by `duration` with SSPRK3 under an integrating factor.
pub fn advance(mut state: SpectralState, duration: f64, cfl: f64) -> Result<SpectralState> {
    let n = state.n;
    check_size(n)?;
    let mut ws = Workspace::new(n, state.viscosity, state.forcing);
    for (z, &keep) in state.omega_hat.iter_mut().zip(&ws.mask) {
        if !keep {
            *z = ZERO;
        }
    }
    let len = n * n;
    let mut w = state.omega_hat;
    let mut k = vec![ZERO; len];
    let mut w1 = vec![ZERO; len];
    let mut w2 = vec![ZERO; len];
    let mut e_full = vec![0.0; len];
    let mut e_half = vec![0.0; len];
    let mut e_back = vec![0.0; len];
    let h = 2.0 * PI / n as f64;
    let t_end = state.time + duration;
    let mut t = state.time;
    let mut steps = state.steps;

    while t < t_end * (1.0 - 1e-14) - 1e-300 {
        ws.nonlinear(&w, &mut k);
        let dt_cfl = if ws.max_speed > 0.0 {
            cfl * h / ws.max_speed
        } else {
            cfl * h
        };
        let dt = dt_cfl.min(t_end - t);
        ws.decay(dt, &mut e_full);
        ws.decay(0.5 * dt, &mut e_half);
        ws.decay(-0.5 * dt, &mut e_back);

        for i in 0..len {
            w1[i] = e_full[i] * (w[i] + dt * k[i]);
        }
        ws.nonlinear(&w1, &mut k);
        for i in 0..len {
            w2[i] = 0.75 * e_half[i] * w[i] + 0.25 * e_back[i] * (w1[i] + dt * k[i]);
        }
        ws.nonlinear(&w2, &mut k);
        for i in 0..len {
            w[i] = (e_full[i] * w[i] + 2.0 * e_half[i] * (w2[i] + dt * k[i])) / 3.0;
        }
        t += dt;
        steps += 1;
        if !w.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::UnstableStep { step: steps, time: t });
        }
    }
    state.omega_hat = w;
    state.time = t;
    state.steps = steps;
    Ok(state)
}
