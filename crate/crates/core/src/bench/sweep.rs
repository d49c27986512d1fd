use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::norms::{compute_all, Reference};

use super::record::BenchRecord;
use super::timing::time_with_output;

/// Minimum refinement of a discrete reference over the finest swept grid.
pub const REFERENCE_REFINEMENT: usize = 8;

#[derive(Clone, Copy)]
pub enum SweepReference<'a> {
    Analytic1D(&'a (dyn Fn(f64) -> f64 + Sync)),
    Analytic2D(&'a (dyn Fn(f64, f64) -> f64 + Sync)),
    /// A fine-grid solution; swept fields are compared after restriction onto their grid.
    Field(&'a Field),
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub solver_id: String,
    pub pde_id: String,
    pub resolutions: Vec<usize>,
    pub repeats: usize,
    pub warmups: usize,
    pub seed: u64,
    pub config_digest: String,
}

fn grid_resolution(grid: &Grid) -> usize {
    match grid {
        Grid::One(g) => g.n_cells(),
        Grid::Two(g) => g.nx().max(g.ny()),
    }
}

fn check_reference(spec: &SweepSpec, reference: SweepReference<'_>) -> Result<()> {
    if spec.resolutions.is_empty() {
        return Err(Error::InvalidInput("empty resolution list".into()));
    }
    if let SweepReference::Field(f) = reference {
        let largest = *spec.resolutions.iter().max().expect("non-empty");
        let res = grid_resolution(f.grid());
        if res < REFERENCE_REFINEMENT * largest {
            return Err(Error::ReferenceTooCoarse { reference: res, largest });
        }
    }
    Ok(())
}

fn measure(
    spec: &SweepSpec,
    n: usize,
    solve: &(dyn Fn(usize) -> Result<Field> + Sync),
    reference: SweepReference<'_>,
) -> Result<BenchRecord> {
    let (stats, field) = time_with_output(|| solve(n), spec.repeats, spec.warmups)?;
    let reference = match reference {
        SweepReference::Analytic1D(f) => Reference::Analytic1D(f),
        SweepReference::Analytic2D(f) => Reference::Analytic2D(f),
        SweepReference::Field(f) => Reference::Field(f),
    };
    let errors = compute_all(&field, reference)?;
    Ok(BenchRecord::new(
        &spec.solver_id,
        &spec.pde_id,
        n,
        field.dof_count(),
        &spec.config_digest,
        &stats,
        errors,
        spec.seed,
    ))
}

/// Times `solve(n)` for every resolution and scores the last timed output.
/// Reference evaluation and error computation are outside the timed region.
pub fn sweep_cost_accuracy(
    spec: &SweepSpec,
    solve: &(dyn Fn(usize) -> Result<Field> + Sync),
    reference: SweepReference<'_>,
) -> Result<Vec<BenchRecord>> {
    sweep_cost_accuracy_parallel(spec, solve, reference, 1)
}

/// As [`sweep_cost_accuracy`] with up to `jobs` workers. Timed regions are
/// still executed one at a time; only untimed work overlaps.
pub fn sweep_cost_accuracy_parallel(
    spec: &SweepSpec,
    solve: &(dyn Fn(usize) -> Result<Field> + Sync),
    reference: SweepReference<'_>,
    jobs: usize,
) -> Result<Vec<BenchRecord>> {
    check_reference(spec, reference)?;
    let jobs = jobs.clamp(1, spec.resolutions.len());
    if jobs == 1 {
        return spec.resolutions.iter().map(|&n| measure(spec, n, solve, reference)).collect();
    }
    let queue = Mutex::new(spec.resolutions.iter().copied().enumerate());
    let results: Mutex<Vec<Option<Result<BenchRecord>>>> = Mutex::new(vec![None; spec.resolutions.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let Some((i, n)) = queue.lock().expect("queue lock").next() else { break };
                let r = measure(spec, n, solve, reference);
                results.lock().expect("results lock")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|r| r.expect("every resolution measured"))
        .collect()
}
