//! Sparse direct solves backed by faer.
//!
//! Symmetric systems go through a supernodal Cholesky factorization using the
//! system's elimination order when one is attached (AMD otherwise). Systems
//! that are unsymmetric or not positive definite use a sparse LU.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::solvers::SolveCore;
use faer::perm::PermRef;
use faer::sparse::linalg::cholesky::supernodal::SymbolicSupernodalCholesky;
use faer::sparse::linalg::cholesky::{
    factorize_symbolic_cholesky, CholeskySymbolicParams, LltRef, SymbolicCholesky, SymbolicCholeskyRaw,
    SymmetricOrdering,
};
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::linalg::SupernodalThreshold;
use faer::sparse::{SparseColMat, SparseRowMat, SymbolicSparseColMat, SymbolicSparseRowMat};
use faer::{Conj, Mat, Par, Side};

use crate::error::{Error, Result};

use super::sparse::{norm, SparseSystem};

const TARGET_RESIDUAL: f64 = 1e-12;
const REFINEMENT_STEPS: usize = 2;

enum Factorization {
    Cholesky {
        symbolic: SymbolicCholesky<usize>,
        l_values: Vec<f64>,
    },
    Lu(Lu<usize, f64>),
}

/// Reusable factorization; each further solve costs one back-substitution
/// (plus iterative refinement only when round-off demands it).
pub struct LuFactor {
    system: SparseSystem,
    factorization: Factorization,
}

impl std::fmt::Debug for LuFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LuFactor")
            .field("n", &self.system.dimension())
            .field("kind", &self.kind())
            .finish()
    }
}

impl LuFactor {
    pub fn kind(&self) -> &'static str {
        match self.factorization {
            Factorization::Cholesky { .. } => "cholesky",
            Factorization::Lu(_) => "lu",
        }
    }

    pub fn dimension(&self) -> usize {
        self.system.dimension()
    }

    fn apply(&self, x: &mut [f64]) {
        match &self.factorization {
            Factorization::Cholesky { symbolic, l_values } => match symbolic.raw() {
                SymbolicCholeskyRaw::Supernodal(sn) => {
                    let mut y: Vec<f64> = match symbolic.perm() {
                        Some(p) => p.arrays().0.iter().map(|&k| x[k]).collect(),
                        None => x.to_vec(),
                    };
                    supernodal_solve(sn, l_values, &mut y);
                    match symbolic.perm() {
                        Some(p) => {
                            for (&k, v) in p.arrays().0.iter().zip(y) {
                                x[k] = v;
                            }
                        }
                        None => x.copy_from_slice(&y),
                    }
                }
                SymbolicCholeskyRaw::Simplicial(_) => {
                    let n = x.len();
                    let mut m = Mat::<f64>::from_fn(n, 1, |i, _| x[i]);
                    let llt = LltRef::new(symbolic, l_values);
                    let mut mem = MemBuffer::new(symbolic.solve_in_place_scratch::<f64>(1, Par::Seq));
                    llt.solve_in_place_with_conj(Conj::No, m.as_mut(), Par::Seq, MemStack::new(&mut mem));
                    for (i, xi) in x.iter_mut().enumerate() {
                        *xi = m[(i, 0)];
                    }
                }
            },
            Factorization::Lu(lu) => {
                let n = x.len();
                let mut m = Mat::<f64>::from_fn(n, 1, |i, _| x[i]);
                lu.solve_in_place_with_conj(Conj::No, m.as_mut());
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi = m[(i, 0)];
                }
            }
        }
    }

    /// Solves `A x = b` with the cached factorization.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dimension();
        if b.len() != n {
            return Err(Error::InvalidSystem(format!("right-hand side has length {}, expected {n}", b.len())));
        }
        let mut x = b.to_vec();
        self.apply(&mut x);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularMatrix("factorization produced non-finite values".into()));
        }
        let b_norm = norm(b);
        let scale = if b_norm > 0.0 { b_norm } else { 1.0 };
        let mut r = vec![0.0; n];
        for _ in 0..REFINEMENT_STEPS {
            self.system.residual_against(b, &x, &mut r);
            if norm(&r) <= TARGET_RESIDUAL * scale {
                break;
            }
            self.apply(&mut r);
            for (xi, di) in x.iter_mut().zip(&r) {
                *xi += di;
            }
        }
        Ok(x)
    }
}

/// Forward and backward substitution with a supernodal `L`, one right-hand side.
/// Each supernode stores a dense column-major block: the diagonal triangle on
/// top of the rows listed in its pattern.
fn supernodal_solve(sn: &SymbolicSupernodalCholesky<usize>, values: &[f64], x: &mut [f64]) {
    let (begin, end) = (sn.supernode_begin(), sn.supernode_end());
    let val_ptr = sn.col_ptr_for_val();
    let block = |s: usize| {
        let width = end[s] - begin[s];
        let pattern = sn.supernode(s).pattern();
        let rows = width + pattern.len();
        (begin[s], width, pattern, rows, &values[val_ptr[s]..val_ptr[s + 1]])
    };
    for s in 0..sn.n_supernodes() {
        let (start, width, pattern, rows, l) = block(s);
        for j in 0..width {
            let col = &l[j * rows..(j + 1) * rows];
            let xj = x[start + j] / col[j];
            x[start + j] = xj;
            for i in j + 1..width {
                x[start + i] -= col[i] * xj;
            }
            for (&r, &lv) in pattern.iter().zip(&col[width..]) {
                x[r] -= lv * xj;
            }
        }
    }
    for s in (0..sn.n_supernodes()).rev() {
        let (start, width, pattern, rows, l) = block(s);
        for j in (0..width).rev() {
            let col = &l[j * rows..(j + 1) * rows];
            let mut acc = x[start + j];
            for i in j + 1..width {
                acc -= col[i] * x[start + i];
            }
            for (&r, &lv) in pattern.iter().zip(&col[width..]) {
                acc -= lv * x[r];
            }
            x[start + j] = acc / col[j];
        }
    }
}

fn cholesky(system: &SparseSystem) -> Option<Factorization> {
    let n = system.dimension();
    // compressed rows of a symmetric matrix are its compressed columns
    let structure =
        SymbolicSparseColMat::new_checked(n, n, system.row_ptr().to_vec(), None, system.col_idx().to_vec());
    let a = SparseColMat::new(structure, system.values().to_vec());
    let inverse: Option<Vec<usize>> = system.ordering().map(|fwd| {
        let mut inv = vec![0; n];
        for (k, &p) in fwd.iter().enumerate() {
            inv[p] = k;
        }
        inv
    });
    let ordering = match (system.ordering(), &inverse) {
        (Some(fwd), Some(inv)) => SymmetricOrdering::Custom(PermRef::new_checked(fwd, inv, n)),
        _ => SymmetricOrdering::Amd,
    };
    let params = CholeskySymbolicParams {
        supernodal_flop_ratio_threshold: SupernodalThreshold::FORCE_SUPERNODAL,
        ..Default::default()
    };
    let symbolic = factorize_symbolic_cholesky(a.symbolic(), Side::Lower, ordering, params).ok()?;
    let mut l_values = vec![0.0; symbolic.len_val()];
    let mut mem = MemBuffer::new(symbolic.factorize_numeric_llt_scratch::<f64>(Par::Seq, Default::default()));
    symbolic
        .factorize_numeric_llt(
            &mut l_values,
            a.as_ref(),
            Side::Lower,
            Default::default(),
            Par::Seq,
            MemStack::new(&mut mem),
            Default::default(),
        )
        .ok()?;
    Some(Factorization::Cholesky { symbolic, l_values })
}

fn general_lu(system: &SparseSystem) -> Result<Factorization> {
    let n = system.dimension();
    let structure =
        SymbolicSparseRowMat::new_checked(n, n, system.row_ptr().to_vec(), None, system.col_idx().to_vec());
    let a = SparseRowMat::new(structure, system.values().to_vec());
    a.sp_lu()
        .map(Factorization::Lu)
        .map_err(|e| Error::SingularMatrix(format!("sparse LU failed: {e:?}")))
}

/// Factors and solves `system`; returns the solution and a reusable factor.
pub fn lu_solve(system: &SparseSystem) -> Result<(Vec<f64>, LuFactor)> {
    if system.annihilates_constants() {
        return Err(Error::SingularMatrix(
            "every row sums to zero, so constants lie in the kernel (pin one unknown)".into(),
        ));
    }
    let factorization = match system.is_symmetric().then(|| cholesky(system)).flatten() {
        Some(f) => f,
        None => general_lu(system)?,
    };
    let factor = LuFactor {
        system: system.clone(),
        factorization,
    };
    let x = factor.solve(system.rhs())?;
    let residual = system.relative_residual(&x);
    if residual > 1e-6 {
        return Err(Error::SingularMatrix(format!("residual {residual:.3e} after refinement")));
    }
    Ok((x, factor))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let b = vec![3.0, -1.0, 0.5];
        let (x, f) = lu_solve(&SparseSystem::identity(b.clone()).unwrap()).unwrap();
        assert_eq!(x, b);
        assert_eq!(f.kind(), "cholesky");
    }

    #[test]
    fn unsymmetric_uses_lu() {
        // [[2, 1], [0, 3]] x = [3, 3]
        let s = SparseSystem::from_triplets(2, vec![(0, 0, 2.0), (0, 1, 1.0), (1, 1, 3.0)], vec![3.0, 3.0]).unwrap();
        let (x, f) = lu_solve(&s).unwrap();
        assert_eq!(f.kind(), "lu");
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn indefinite_symmetric_falls_back() {
        let s = SparseSystem::from_triplets(2, vec![(0, 1, 1.0), (1, 0, 1.0)], vec![2.0, 5.0]).unwrap();
        let (x, f) = lu_solve(&s).unwrap();
        assert_eq!(f.kind(), "lu");
        assert!((x[0] - 5.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn constant_kernel_is_singular() {
        let t = vec![(0, 0, 1.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 1.0)];
        let s = SparseSystem::from_triplets(2, t, vec![1.0, -1.0]).unwrap();
        assert!(matches!(lu_solve(&s), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn structurally_singular() {
        let s = SparseSystem::from_triplets(2, vec![(0, 0, 1.0), (1, 0, 1.0)], vec![1.0, 1.0]).unwrap();
        assert!(matches!(lu_solve(&s), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn factor_reuse() {
        let t = vec![(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0)];
        let s = SparseSystem::from_triplets(2, t, vec![1.0, 2.0]).unwrap();
        let (_, f) = lu_solve(&s).unwrap();
        let x = f.solve(&[5.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
        assert!(f.solve(&[1.0]).is_err());
    }
}
