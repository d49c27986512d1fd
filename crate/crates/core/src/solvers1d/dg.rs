//! Runge–Kutta discontinuous Galerkin with a modal Legendre basis.
//!
//! On cell `j` the solution is `Σ_l c_l P_l(ξ)` with `ξ ∈ [-1, 1]`. The mass
//! matrix is diagonal (`h / (2l+1)`), so the semi-discrete update is
//!
//! ```text
//! dc_l/dt = (2l+1)/h [ ∫ f(u) P_l'(ξ) dξ - (F_{j+1/2} - (-1)^l F_{j-1/2}) ]
//! ```
//!
//! with an upwind flux for linear advection and the Godunov flux for Burgers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Layout};
use crate::grid::Grid1D;
use crate::quadrature::{gauss_legendre, legendre, legendre_with_derivative};

use super::fv::godunov_flux;
use super::time::{compute_dt, SpatialOperator};
use super::{max_abs_sampled, Boundary, Limiter, Run, Scheme, SolverConfig1D};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DgFlux {
    LinearAdvection(f64),
    Burgers,
}

/// Basis tables on the reference cell.
struct Tables {
    nb: usize,
    /// `P_l(ξ_q)`, row per quadrature point.
    phi: Vec<f64>,
    /// `w_q P_l'(ξ_q)`, row per mode.
    dphi_w: Vec<f64>,
    /// `∫ P_m P_l' dξ`, row per mode.
    stiff: Vec<f64>,
}

impl Tables {
    fn new(p: usize) -> Self {
        let nb = p + 1;
        let nq = p + 2;
        let (xs, ws) = gauss_legendre(nq);
        let mut phi = vec![0.0; nq * nb];
        let mut dphi_w = vec![0.0; nb * nq];
        for q in 0..nq {
            for l in 0..nb {
                let (v, d) = legendre_with_derivative(l, xs[q]);
                phi[q * nb + l] = v;
                dphi_w[l * nq + q] = ws[q] * d;
            }
        }
        let mut stiff = vec![0.0; nb * nb];
        for l in 0..nb {
            for m in 0..nb {
                stiff[l * nb + m] = (0..nq).map(|q| dphi_w[l * nq + q] * phi[q * nb + m]).sum();
            }
        }
        Self {
            nb,
            phi,
            dphi_w,
            stiff,
        }
    }
}

/// Projects `f` onto the Legendre basis of every cell with (p+2)-point Gauss quadrature.
pub fn project(grid: &Grid1D, f: &dyn Fn(f64) -> f64, p: usize) -> Vec<f64> {
    let nb = p + 1;
    let (xs, ws) = gauss_legendre(p + 2);
    let mut c = vec![0.0; grid.n_cells() * nb];
    for j in 0..grid.n_cells() {
        let (a, h) = (grid.edges()[j], grid.width(j));
        for (x, w) in xs.iter().zip(&ws) {
            let v = f(a + 0.5 * h * (x + 1.0));
            for l in 0..nb {
                c[j * nb + l] += (2 * l + 1) as f64 * 0.5 * w * v * legendre(l, *x);
            }
        }
    }
    c
}

struct DgOperator {
    t: Tables,
    flux: DgFlux,
    boundary: Boundary,
    limiter: Limiter,
    widths: Vec<f64>,
    inv_h: Vec<f64>,
    /// Right and left traces per cell.
    right: Vec<f64>,
    left: Vec<f64>,
    /// Interface fluxes, `n + 1` entries (face j is the left face of cell j).
    face: Vec<f64>,
    means: Vec<f64>,
}

impl DgOperator {
    fn numerical_flux(&self, ul: f64, ur: f64) -> f64 {
        match self.flux {
            DgFlux::LinearAdvection(c) => {
                if c >= 0.0 {
                    c * ul
                } else {
                    c * ur
                }
            }
            DgFlux::Burgers => godunov_flux(ul, ur),
        }
    }

    fn traces(&mut self, u: &[f64]) {
        let nb = self.t.nb;
        for (j, c) in u.chunks_exact(nb).enumerate() {
            let mut r = 0.0;
            let mut l = 0.0;
            let mut sign = 1.0;
            for &cl in c {
                r += cl;
                l += sign * cl;
                sign = -sign;
            }
            self.right[j] = r;
            self.left[j] = l;
        }
    }
}

impl DgOperator {
    /// Residual with the basis size fixed at compile time so the per-cell
    /// loops unroll.
    fn rhs_fixed<const NB: usize, const NQ: usize>(&mut self, u: &[f64], out: &mut [f64]) {
        let n = self.widths.len();
        let mut stiff = [[0.0; NB]; NB];
        let mut phi = [[0.0; NB]; NQ];
        let mut dphi_w = [[0.0; NQ]; NB];
        for l in 0..NB {
            for m in 0..NB {
                stiff[l][m] = self.t.stiff[l * NB + m];
            }
            for q in 0..NQ {
                dphi_w[l][q] = self.t.dphi_w[l * NQ + q];
                phi[q][l] = self.t.phi[q * NB + l];
            }
        }

        self.traces(u);
        let (gl, gr) = match self.boundary {
            Boundary::Periodic => (self.right[n - 1], self.left[0]),
            Boundary::Dirichlet { left, right } => (left, right),
        };
        self.face[0] = self.numerical_flux(gl, self.left[0]);
        for j in 1..n {
            self.face[j] = self.numerical_flux(self.right[j - 1], self.left[j]);
        }
        self.face[n] = match self.boundary {
            Boundary::Periodic => self.face[0],
            Boundary::Dirichlet { .. } => self.numerical_flux(self.right[n - 1], gr),
        };

        let cells = u.chunks_exact(NB).zip(out.chunks_exact_mut(NB));
        for (j, (c, o)) in cells.enumerate() {
            let c: &[f64; NB] = c.try_into().expect("chunk of NB");
            let mut vol = [0.0; NB];
            match self.flux {
                DgFlux::LinearAdvection(speed) => {
                    for l in 0..NB {
                        let mut acc = 0.0;
                        for m in 0..NB {
                            acc += stiff[l][m] * c[m];
                        }
                        vol[l] = speed * acc;
                    }
                }
                DgFlux::Burgers => {
                    let mut fq = [0.0; NQ];
                    for q in 0..NQ {
                        let mut v = 0.0;
                        for l in 0..NB {
                            v += phi[q][l] * c[l];
                        }
                        fq[q] = 0.5 * v * v;
                    }
                    for l in 0..NB {
                        let mut acc = 0.0;
                        for q in 0..NQ {
                            acc += dphi_w[l][q] * fq[q];
                        }
                        vol[l] = acc;
                    }
                }
            }
            let (fr, fl) = (self.face[j + 1], self.face[j]);
            let ih = self.inv_h[j];
            for l in 0..NB {
                let jump = if l % 2 == 0 { fr - fl } else { fr + fl };
                o[l] = (2 * l + 1) as f64 * ih * (vol[l] - jump);
            }
        }
    }
}

impl SpatialOperator for DgOperator {
    fn rhs(&mut self, u: &[f64], out: &mut [f64]) {
        match self.t.nb {
            1 => self.rhs_fixed::<1, 2>(u, out),
            2 => self.rhs_fixed::<2, 3>(u, out),
            3 => self.rhs_fixed::<3, 4>(u, out),
            4 => self.rhs_fixed::<4, 5>(u, out),
            nb => unreachable!("DG basis size {nb} was validated"),
        }
    }

    fn post_stage(&mut self, u: &mut [f64]) {
        let Limiter::TvbMinmod { m } = self.limiter else {
            return;
        };
        let nb = self.t.nb;
        if nb < 2 {
            return;
        }
        let n = self.widths.len();
        for j in 0..n {
            self.means[j] = u[j * nb];
        }
        for j in 0..n {
            let mean = self.means[j];
            let (prev, next) = match self.boundary {
                Boundary::Periodic => (self.means[(j + n - 1) % n], self.means[(j + 1) % n]),
                Boundary::Dirichlet { left, right } => (
                    if j == 0 { left } else { self.means[j - 1] },
                    if j == n - 1 { right } else { self.means[j + 1] },
                ),
            };
            let (dp, dm) = (next - mean, mean - prev);
            let c = &mut u[j * nb..(j + 1) * nb];
            // deviations of the face values from the mean
            let mut ar = 0.0;
            let mut al = 0.0;
            let mut sign = 1.0;
            for &cl in &c[1..] {
                ar += cl;
                al += sign * cl;
                sign = -sign;
            }
            let bound = m * self.widths[j] * self.widths[j];
            let unchanged = |a: f64| a.abs() <= bound || minmod3(a, dp, dm) == a;
            if unchanged(ar) && unchanged(al) {
                continue;
            }
            c[1] = minmod3(c[1], dp, dm);
            c[2..].iter_mut().for_each(|v| *v = 0.0);
        }
    }
}

#[inline]
fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

/// Flags Burgers runs whose face values leave the initial range or whose
/// cell means gain total variation: the signature of unlimited post-shock
/// oscillations (the entropy solution obeys a maximum principle).
fn oscillation_check(nb: usize, boundary: Boundary) -> impl Fn(&[f64], &[f64]) -> Result<()> {
    move |initial, last| {
        let range = |u: &[f64]| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for c in u.chunks_exact(nb) {
                let right: f64 = c.iter().sum();
                let left: f64 = c.iter().enumerate().map(|(l, v)| if l % 2 == 0 { *v } else { -v }).sum();
                for v in [c[0], left, right] {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            if let Boundary::Dirichlet { left, right } = boundary {
                lo = lo.min(left).min(right);
                hi = hi.max(left).max(right);
            }
            (lo, hi)
        };
        let means = |u: &[f64]| -> Vec<f64> {
            let mut m: Vec<f64> = u.iter().step_by(nb).copied().collect();
            if let Boundary::Dirichlet { left, right } = boundary {
                m.insert(0, left);
                m.push(right);
            }
            m
        };
        let tv = |m: &[f64]| -> f64 {
            let open: f64 = m.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
            match boundary {
                Boundary::Periodic => open + (m[0] - m[m.len() - 1]).abs(),
                Boundary::Dirichlet { .. } => open,
            }
        };
        let (lo0, hi0) = range(initial);
        let (lo1, hi1) = range(last);
        let slack = 1e-2 * (hi0 - lo0).max(f64::MIN_POSITIVE);
        let (tv0, tv1) = (tv(&means(initial)), tv(&means(last)));
        if hi1 > hi0 + slack || lo1 < lo0 - slack || tv1 > tv0 * (1.0 + 1e-3) + 1e-12 {
            return Err(Error::LimiterRequired {
                tv_initial: tv0,
                tv_final: tv1,
            });
        }
        Ok(())
    }
}

pub(crate) fn prepare<'a>(
    grid: &Grid1D,
    ic: &dyn Fn(f64) -> f64,
    flux: DgFlux,
    p: usize,
    config: &SolverConfig1D,
) -> Result<Run<'a>> {
    let config = SolverConfig1D {
        scheme: Scheme::Dg(p),
        ..*config
    };
    config.validate()?;
    if let (DgFlux::LinearAdvection(_), Boundary::Dirichlet { .. }) = (flux, config.boundary) {
        return Err(Error::UnsupportedBoundary(
            "Dirichlet DG is available for Burgers only".into(),
        ));
    }
    let n = grid.n_cells();
    let nb = p + 1;
    let t = Tables::new(p);
    let mut op = DgOperator {
        t,
        flux,
        boundary: config.boundary,
        limiter: config.limiter,
        widths: grid.widths(),
        inv_h: grid.widths().iter().map(|h| 1.0 / h).collect(),
        right: vec![0.0; n],
        left: vec![0.0; n],
        face: vec![0.0; n + 1],
        means: vec![0.0; n],
    };
    let mut u = project(grid, ic, p);
    op.post_stage(&mut u);

    let speed = match flux {
        DgFlux::LinearAdvection(c) => c.abs(),
        DgFlux::Burgers => {
            let mut a = max_abs_sampled(grid, ic);
            if let Boundary::Dirichlet { left, right } = config.boundary {
                a = a.max(left.abs()).max(right.abs());
            }
            a
        }
    };
    let plan = if speed == 0.0 {
        None
    } else {
        Some(compute_dt(grid, speed, config.cfl_factor, config.scheme, config.t_final)?)
    };
    let check: Option<Box<dyn Fn(&[f64], &[f64]) -> Result<()>>> =
        match (flux, config.limiter) {
            (DgFlux::Burgers, Limiter::None) => Some(Box::new(oscillation_check(nb, config.boundary))),
            _ => None,
        };
    Ok(Run {
        grid: grid.clone(),
        layout: Layout::ModalDg(p),
        components: 1,
        u,
        plan,
        op: Box::new(op),
        check,
    })
}

/// RKDG solve of order `p` (0..=3). `config.scheme` is ignored in favour of `p`.
pub fn dg_solve(
    grid: &Grid1D,
    ic: impl Fn(f64) -> f64,
    flux: DgFlux,
    p: usize,
    config: &SolverConfig1D,
) -> Result<Field> {
    prepare(grid, &ic, flux, p, config)?.finish()
}
