//! Stationary and Krylov iterations on a `SparseSystem`.
//!
//! Convergence is measured by `‖b − A x‖₂ / ‖b‖₂`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sparse::{norm, SparseSystem};

const DIVERGENCE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterativeReport {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub wall_time_s: f64,
}

fn check_args(system: &SparseSystem, tol: f64, x0: &[f64]) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!("tolerance must be positive, got {tol}")));
    }
    if x0.len() != system.dimension() {
        return Err(Error::InvalidSystem("initial guess has the wrong length".into()));
    }
    let b = norm(system.rhs());
    Ok(if b > 0.0 { b } else { 1.0 })
}

pub fn jacobi_solve(system: &SparseSystem, tol: f64, max_iter: usize) -> Result<(Vec<f64>, IterativeReport)> {
    jacobi_solve_from(system, vec![0.0; system.dimension()], tol, max_iter)
}

/// Jacobi sweeps `x ← x + D⁻¹ (b − A x)` starting from `x0`.
pub fn jacobi_solve_from(
    system: &SparseSystem,
    mut x: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, IterativeReport)> {
    let start = Instant::now();
    let b_norm = check_args(system, tol, &x)?;
    let diag = system.diagonal();
    if let Some(i) = diag.iter().position(|&d| d == 0.0) {
        return Err(Error::InvalidSystem(format!("zero diagonal in row {i}")));
    }
    let inv_d: Vec<f64> = diag.iter().map(|d| 1.0 / d).collect();
    let mut r = vec![0.0; x.len()];
    system.residual(&x, &mut r);
    let initial = norm(&r) / b_norm;
    let mut residual = initial;
    let mut iterations = 0;
    while residual > tol && iterations < max_iter {
        for ((xi, ri), di) in x.iter_mut().zip(&r).zip(&inv_d) {
            *xi += ri * di;
        }
        iterations += 1;
        system.residual(&x, &mut r);
        residual = norm(&r) / b_norm;
        if !residual.is_finite() || residual > DIVERGENCE_FACTOR * initial {
            return Err(Error::Diverged { iteration: iterations, residual });
        }
    }
    let report = IterativeReport {
        iterations,
        residual,
        converged: residual <= tol,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok((x, report))
}

pub fn cg_solve(system: &SparseSystem, tol: f64, max_iter: usize) -> Result<(Vec<f64>, IterativeReport)> {
    cg_solve_from(system, vec![0.0; system.dimension()], tol, max_iter)
}

/// Unpreconditioned conjugate gradients starting from `x0`.
pub fn cg_solve_from(
    system: &SparseSystem,
    mut x: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, IterativeReport)> {
    let start = Instant::now();
    let b_norm = check_args(system, tol, &x)?;
    let n = x.len();
    let mut r = vec![0.0; n];
    system.residual(&x, &mut r);
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr: f64 = r.iter().map(|v| v * v).sum();
    let initial = rr.sqrt() / b_norm;
    let mut residual = initial;
    let mut iterations = 0;
    while residual > tol && iterations < max_iter {
        system.matvec(&p, &mut ap);
        let curvature: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if curvature <= 0.0 {
            return Err(Error::NotSpd { iteration: iterations, curvature });
        }
        let alpha = rr / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        iterations += 1;
        let rr_new: f64 = r.iter().map(|v| v * v).sum();
        residual = rr_new.sqrt() / b_norm;
        if !residual.is_finite() || residual > DIVERGENCE_FACTOR * initial {
            return Err(Error::Diverged { iteration: iterations, residual });
        }
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    // the recursive residual drifts from the true one; report the true one
    residual = system.relative_residual(&x);
    let report = IterativeReport {
        iterations,
        residual,
        converged: residual <= tol,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok((x, report))
}
