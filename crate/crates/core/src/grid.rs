//! One- and two-dimensional structured grids.
//!
//! A [`Grid1D`] stores its cell edges explicitly so that irregular spacing is
//! handled by the same code paths as uniform spacing. [`Grid2D`] is always
//! uniform in each direction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const UNIFORM_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    edges: Vec<f64>,
    uniform: bool,
}

impl Grid1D {
    pub fn uniform(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::DegenerateDomain(format!(
                "need at least 2 cells, got {n_cells}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::DegenerateDomain(format!(
                "empty interval [{x_min}, {x_max}]"
            )));
        }
        let h = (x_max - x_min) / n_cells as f64;
        let mut edges: Vec<f64> = (0..=n_cells).map(|i| x_min + i as f64 * h).collect();
        // pin the right end exactly
        edges[n_cells] = x_max;
        Ok(Self {
            x_min,
            x_max,
            edges,
            uniform: true,
        })
    }

    /// Builds a grid from an explicit, strictly increasing edge list.
    pub fn from_edges(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 3 {
            return Err(Error::DegenerateDomain(format!(
                "need at least 2 cells (3 edges), got {} edges",
                edges.len()
            )));
        }
        for (i, w) in edges.windows(2).enumerate() {
            if !w[1].is_finite() || !w[0].is_finite() || w[1] <= w[0] {
                return Err(Error::NonMonotoneEdges {
                    index: i + 1,
                    value: w[1],
                });
            }
        }
        let x_min = edges[0];
        let x_max = *edges.last().unwrap();
        let n = edges.len() - 1;
        let h = (x_max - x_min) / n as f64;
        let uniform = edges
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= UNIFORM_RTOL * h);
        Ok(Self {
            x_min,
            x_max,
            edges,
            uniform,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn n_cells(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn width(&self, cell: usize) -> f64 {
        self.edges[cell + 1] - self.edges[cell]
    }

    pub fn widths(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn min_width(&self) -> f64 {
        self.edges
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn center(&self, cell: usize) -> f64 {
        0.5 * (self.edges[cell] + self.edges[cell + 1])
    }

    /// Uniform spacing; only meaningful when [`Self::is_uniform`] holds.
    pub fn spacing(&self) -> f64 {
        self.length() / self.n_cells() as f64
    }

    /// Node positions for the nodal layout: the left edge of every cell.
    pub fn nodes(&self) -> &[f64] {
        &self.edges[..self.n_cells()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
    periodic_x: bool,
    periodic_y: bool,
}

impl Grid2D {
    pub fn new(
        (x_min, x_max): (f64, f64),
        (y_min, y_max): (f64, f64),
        nx: usize,
        ny: usize,
        periodic: (bool, bool),
    ) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::DegenerateDomain(format!(
                "need at least 2x2 cells, got {nx}x{ny}"
            )));
        }
        for (lo, hi) in [(x_min, x_max), (y_min, y_max)] {
            if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
                return Err(Error::DegenerateDomain(format!("empty interval [{lo}, {hi}]")));
            }
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
            periodic_x: periodic.0,
            periodic_y: periodic.1,
        })
    }

    /// Square periodic `[0, 2π]²` grid used by the spectral solver.
    pub fn periodic_2pi(n: usize) -> Result<Self> {
        let l = 2.0 * std::f64::consts::PI;
        Self::new((0.0, l), (0.0, l), n, n, (true, true))
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y_min, self.y_max)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    pub fn periodic(&self) -> (bool, bool) {
        (self.periodic_x, self.periodic_y)
    }

    /// Coordinates of node `(i, j)`; node `(0, 0)` sits at the lower-left corner.
    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.x_min + i as f64 * self.dx(),
            self.y_min + j as f64 * self.dy(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Grid {
    One(Grid1D),
    Two(Grid2D),
}

impl Grid {
    pub fn n_cells(&self) -> usize {
        match self {
            Grid::One(g) => g.n_cells(),
            Grid::Two(g) => g.n_cells(),
        }
    }

    pub fn as_1d(&self) -> Option<&Grid1D> {
        match self {
            Grid::One(g) => Some(g),
            Grid::Two(_) => None,
        }
    }

    pub fn as_2d(&self) -> Option<&Grid2D> {
        match self {
            Grid::Two(g) => Some(g),
            Grid::One(_) => None,
        }
    }
}

impl From<Grid1D> for Grid {
    fn from(g: Grid1D) -> Self {
        Grid::One(g)
    }
}

impl From<Grid2D> for Grid {
    fn from(g: Grid2D) -> Self {
        Grid::Two(g)
    }
}

/// Declarative grid description, as found in run configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    Uniform1D {
        x_min: f64,
        x_max: f64,
        n: usize,
    },
    Edges1D {
        edges: Vec<f64>,
    },
    Uniform2D {
        x: (f64, f64),
        y: (f64, f64),
        nx: usize,
        ny: usize,
        periodic: (bool, bool),
    },
}

pub fn build_grid(spec: &GridSpec) -> Result<Grid> {
    match spec {
        GridSpec::Uniform1D { x_min, x_max, n } => Grid1D::uniform(*x_min, *x_max, *n).map(Grid::One),
        GridSpec::Edges1D { edges } => Grid1D::from_edges(edges.clone()).map(Grid::One),
        GridSpec::Uniform2D {
            x,
            y,
            nx,
            ny,
            periodic,
        } => Grid2D::new(*x, *y, *nx, *ny, *periodic).map(Grid::Two),
    }
}
