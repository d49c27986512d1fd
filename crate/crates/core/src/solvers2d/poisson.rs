//! Bilinear continuous-Galerkin assembly of `-∇²u = f` on uniform 2D grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Layout};
use crate::grid::Grid2D;

use super::sparse::SparseSystem;

/// Below this size the elimination order is left to the factorization.
const LEAF: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoissonBoundary {
    Periodic,
    /// Homogeneous Dirichlet on all four sides.
    Dirichlet,
}

/// Maps grid nodes to unknowns.
#[derive(Debug, Clone, Copy)]
struct Numbering {
    nx: usize,
    ny: usize,
    boundary: PoissonBoundary,
}

impl Numbering {
    fn unknowns(&self) -> usize {
        match self.boundary {
            PoissonBoundary::Periodic => self.nx * self.ny,
            PoissonBoundary::Dirichlet => (self.nx - 1) * (self.ny - 1),
        }
    }

    /// Unknown at node `(i, j)` with `0 <= i <= nx`, `0 <= j <= ny`; `None` on a Dirichlet boundary.
    fn index(&self, i: usize, j: usize) -> Option<usize> {
        match self.boundary {
            PoissonBoundary::Periodic => Some((j % self.ny) * self.nx + i % self.nx),
            PoissonBoundary::Dirichlet => {
                (i > 0 && j > 0 && i < self.nx && j < self.ny).then(|| (j - 1) * (self.nx - 1) + i - 1)
            }
        }
    }
}

/// Element stiffness and mass of a bilinear `hx × hy` rectangle. Local node
/// `a = ax + 2 ay` sits at corner `(ax, ay)`.
fn element_matrices(hx: f64, hy: f64) -> ([[f64; 4]; 4], [[f64; 4]; 4]) {
    let k1 = |h: f64, a: usize, b: usize| if a == b { 1.0 / h } else { -1.0 / h };
    let m1 = |h: f64, a: usize, b: usize| if a == b { h / 3.0 } else { h / 6.0 };
    let mut k = [[0.0; 4]; 4];
    let mut m = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let (ax, ay, bx, by) = (a % 2, a / 2, b % 2, b / 2);
            k[a][b] = k1(hx, ax, bx) * m1(hy, ay, by) + m1(hx, ax, bx) * k1(hy, ay, by);
            m[a][b] = m1(hx, ax, bx) * m1(hy, ay, by);
        }
    }
    (k, m)
}

fn numbering(grid: &Grid2D, boundary: PoissonBoundary) -> Result<Numbering> {
    let periodic = grid.periodic();
    let ok = match boundary {
        PoissonBoundary::Periodic => periodic == (true, true),
        PoissonBoundary::Dirichlet => periodic == (false, false),
    };
    if !ok {
        return Err(Error::UnsupportedBoundary(format!(
            "{boundary:?} Poisson on a grid with periodicity {periodic:?}"
        )));
    }
    Ok(Numbering {
        nx: grid.nx(),
        ny: grid.ny(),
        boundary,
    })
}

/// Assembles `K u = M f` with homogeneous Dirichlet data or periodic
/// wrap-around; `f` is interpolated at the nodes and integrated exactly.
///
/// In the periodic case the load is shifted to zero mean and unknown 0 is
/// pinned to zero, which leaves the rest of the system symmetric positive
/// definite. A nested-dissection elimination order is attached.
pub fn assemble_poisson(
    grid: &Grid2D,
    boundary: PoissonBoundary,
    source: impl Fn(f64, f64) -> f64,
) -> Result<SparseSystem> {
    let num = numbering(grid, boundary)?;
    let (nx, ny) = (grid.nx(), grid.ny());
    let n = num.unknowns();
    let (k, m) = element_matrices(grid.dx(), grid.dy());
    let mut f_nodes = vec![0.0; (nx + 1) * (ny + 1)];
    for j in 0..=ny {
        for i in 0..=nx {
            let (x, y) = grid.node(i, j);
            f_nodes[j * (nx + 1) + i] = source(x, y);
        }
    }
    let mut triplets = Vec::with_capacity(16 * nx * ny);
    let mut rhs = vec![0.0; n];
    for ey in 0..ny {
        for ex in 0..nx {
            let corners = [(ex, ey), (ex + 1, ey), (ex, ey + 1), (ex + 1, ey + 1)];
            for (a, &(ia, ja)) in corners.iter().enumerate() {
                let Some(row) = num.index(ia, ja) else { continue };
                for (b, &(ib, jb)) in corners.iter().enumerate() {
                    rhs[row] += m[a][b] * f_nodes[jb * (nx + 1) + ib];
                    if let Some(col) = num.index(ib, jb) {
                        triplets.push((row, col, k[a][b]));
                    }
                }
            }
        }
    }
    if boundary == PoissonBoundary::Periodic {
        let mean = rhs.iter().sum::<f64>() / n as f64;
        rhs.iter_mut().for_each(|r| *r -= mean);
        triplets.retain(|&(r, c, _)| r != 0 && c != 0);
        triplets.push((0, 0, 1.0));
        rhs[0] = 0.0;
    }
    SparseSystem::from_triplets(n, triplets, rhs)?.with_ordering(nested_dissection(num))
}

/// Geometric nested dissection on the lattice of unknowns.
fn nested_dissection(num: Numbering) -> Vec<usize> {
    let mut order = Vec::with_capacity(num.unknowns());
    match num.boundary {
        PoissonBoundary::Dirichlet => {
            let (w, h) = (num.nx - 1, num.ny - 1);
            dissect((0, w), (0, h), w, &mut order);
        }
        PoissonBoundary::Periodic => {
            // cutting row 0 and column 0 leaves an open rectangle
            let (w, h) = (num.nx, num.ny);
            dissect((1, w), (1, h), w, &mut order);
            order.extend((0..w).map(|i| i));
            order.extend((1..h).map(|j| j * w));
        }
    }
    order
}

fn dissect((x0, x1): (usize, usize), (y0, y1): (usize, usize), stride: usize, out: &mut Vec<usize>) {
    let (w, h) = (x1 - x0, y1 - y0);
    if w == 0 || h == 0 {
        return;
    }
    if w * h <= LEAF {
        for y in y0..y1 {
            out.extend((x0..x1).map(|x| y * stride + x));
        }
    } else if w >= h {
        let mid = x0 + w / 2;
        dissect((x0, mid), (y0, y1), stride, out);
        dissect((mid + 1, x1), (y0, y1), stride, out);
        out.extend((y0..y1).map(|y| y * stride + mid));
    } else {
        let mid = y0 + h / 2;
        dissect((x0, x1), (y0, mid), stride, out);
        dissect((x0, x1), (mid + 1, y1), stride, out);
        out.extend((x0..x1).map(|x| mid * stride + x));
    }
}

/// Spreads a solution vector back onto the grid nodes as a nodal field
/// (Dirichlet boundary nodes take the value zero).
pub fn poisson_field(grid: &Grid2D, boundary: PoissonBoundary, solution: &[f64]) -> Result<Field> {
    let num = numbering(grid, boundary)?;
    if solution.len() != num.unknowns() {
        return Err(Error::InvalidField(format!(
            "expected {} unknowns, got {}",
            num.unknowns(),
            solution.len()
        )));
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut values = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            if let Some(k) = num.index(i, j) {
                values[j * nx + i] = solution[k];
            }
        }
    }
    Field::real(Layout::Nodal, grid.clone(), 1, values)
}
