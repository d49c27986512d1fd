//! Degrees of freedom attached to a grid under a named layout.
//!
//! Storage is component-major: `dof[(c * n_cells + cell) * basis + l]`.
//! Two-dimensional fields are stored row by row in `x` (index `j * nx + i`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, Grid1D, Grid2D};
use crate::quadrature::legendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    CellAverage,
    /// Modal Legendre coefficients of order `p` in every cell.
    ModalDg(usize),
    /// Point values at the left edge of every cell (1D) or at grid nodes (2D).
    Nodal,
    SpectralComplex,
}

impl Layout {
    pub fn basis_size(&self) -> usize {
        match self {
            Layout::ModalDg(p) => p + 1,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Layout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Layout::CellAverage => write!(f, "cell_average"),
            Layout::ModalDg(p) => write!(f, "modal_dg({p})"),
            Layout::Nodal => write!(f, "nodal"),
            Layout::SpectralComplex => write!(f, "spectral_complex"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Dof {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Dof {
    pub fn len(&self) -> usize {
        match self {
            Dof::Real(v) => v.len(),
            Dof::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    layout: Layout,
    grid: Grid,
    components: usize,
    dof: Dof,
}

impl Field {
    pub fn new(layout: Layout, grid: impl Into<Grid>, components: usize, dof: Dof) -> Result<Self> {
        let grid = grid.into();
        if components == 0 {
            return Err(Error::InvalidField("components must be positive".into()));
        }
        match (&layout, &dof) {
            (Layout::SpectralComplex, Dof::Real(_)) => {
                return Err(Error::InvalidField("spectral layout needs complex dof".into()))
            }
            (Layout::SpectralComplex, Dof::Complex(_)) => {}
            (_, Dof::Complex(_)) => {
                return Err(Error::InvalidField(format!("layout {layout} needs real dof")))
            }
            _ => {}
        }
        if let Layout::ModalDg(p) = layout {
            if grid.as_1d().is_none() {
                return Err(Error::InvalidField("modal DG fields are one-dimensional".into()));
            }
            if p > 8 {
                return Err(Error::InvalidField(format!("DG order {p} is too large")));
            }
        }
        if layout == Layout::SpectralComplex && grid.as_2d().is_none() {
            return Err(Error::InvalidField("spectral fields are two-dimensional".into()));
        }
        let expected = components * grid.n_cells() * layout.basis_size();
        if dof.len() != expected {
            return Err(Error::InvalidField(format!(
                "expected {expected} dof for {components} component(s) of {layout} on {} cells, got {}",
                grid.n_cells(),
                dof.len()
            )));
        }
        Ok(Self {
            layout,
            grid,
            components,
            dof,
        })
    }

    pub fn real(layout: Layout, grid: impl Into<Grid>, components: usize, dof: Vec<f64>) -> Result<Self> {
        Self::new(layout, grid, components, Dof::Real(dof))
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn grid_1d(&self) -> Option<&Grid1D> {
        self.grid.as_1d()
    }

    pub fn grid_2d(&self) -> Option<&Grid2D> {
        self.grid.as_2d()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn dof(&self) -> &Dof {
        &self.dof
    }

    pub fn dof_count(&self) -> usize {
        self.dof.len()
    }

    /// Real degrees of freedom; `None` for spectral fields.
    pub fn values(&self) -> Option<&[f64]> {
        match &self.dof {
            Dof::Real(v) => Some(v),
            Dof::Complex(_) => None,
        }
    }

    pub fn coefficients(&self) -> Option<&[Complex64]> {
        match &self.dof {
            Dof::Complex(v) => Some(v),
            Dof::Real(_) => None,
        }
    }

    pub fn into_values(self) -> Option<Vec<f64>> {
        match self.dof {
            Dof::Real(v) => Some(v),
            Dof::Complex(_) => None,
        }
    }

    /// Extracts one component as a scalar field.
    pub fn component(&self, c: usize) -> Result<Field> {
        if c >= self.components {
            return Err(Error::InvalidField(format!(
                "component {c} out of range ({} components)",
                self.components
            )));
        }
        let block = self.grid.n_cells() * self.layout.basis_size();
        let dof = match &self.dof {
            Dof::Real(v) => Dof::Real(v[c * block..(c + 1) * block].to_vec()),
            Dof::Complex(v) => Dof::Complex(v[c * block..(c + 1) * block].to_vec()),
        };
        Field::new(self.layout, self.grid.clone(), 1, dof)
    }

    /// Cell means of a 1D field. For nodal fields this is the nodal value itself.
    pub fn cell_means(&self) -> Result<Vec<f64>> {
        let v = self
            .values()
            .ok_or_else(|| Error::UnsupportedLayout(self.layout.to_string()))?;
        match self.layout {
            Layout::CellAverage | Layout::Nodal => Ok(v.to_vec()),
            Layout::ModalDg(p) => Ok(v.chunks(p + 1).map(|c| c[0]).collect()),
            Layout::SpectralComplex => Err(Error::UnsupportedLayout(self.layout.to_string())),
        }
    }

    /// Converts a 1D field to its cell averages.
    pub fn to_cell_averages(&self) -> Result<Field> {
        match self.layout {
            Layout::CellAverage => Ok(self.clone()),
            Layout::ModalDg(_) => Field::real(
                Layout::CellAverage,
                self.grid.clone(),
                self.components,
                self.cell_means()?,
            ),
            _ => Err(Error::UnsupportedLayout(format!(
                "{} cannot be converted to cell averages",
                self.layout
            ))),
        }
    }

    /// Evaluates a scalar 1D modal-DG or cell-average field at `x`.
    pub fn eval_1d(&self, x: f64) -> Result<f64> {
        let grid = self
            .grid_1d()
            .ok_or_else(|| Error::UnsupportedLayout("eval_1d needs a 1D grid".into()))?;
        let v = self
            .values()
            .ok_or_else(|| Error::UnsupportedLayout(self.layout.to_string()))?;
        let edges = grid.edges();
        let n = grid.n_cells();
        let cell = match edges.partition_point(|&e| e <= x) {
            0 => 0,
            k => (k - 1).min(n - 1),
        };
        match self.layout {
            Layout::CellAverage => Ok(v[cell]),
            Layout::ModalDg(p) => {
                let xi = 2.0 * (x - edges[cell]) / grid.width(cell) - 1.0;
                let c = &v[cell * (p + 1)..(cell + 1) * (p + 1)];
                Ok(c.iter().enumerate().map(|(l, cl)| cl * legendre(l, xi)).sum())
            }
            _ => Err(Error::UnsupportedLayout(self.layout.to_string())),
        }
    }

    /// Largest violation of `c(k) = conj(c(-k))`, relative to the largest
    /// coefficient magnitude. Zero for non-spectral fields.
    pub fn hermitian_defect(&self) -> f64 {
        let (Some(c), Some(g)) = (self.coefficients(), self.grid_2d()) else {
            return 0.0;
        };
        hermitian_defect(c, g.nx(), g.ny())
    }
}

pub(crate) fn hermitian_defect(c: &[Complex64], nx: usize, ny: usize) -> f64 {
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for j in 0..ny {
        let jm = (ny - j) % ny;
        for i in 0..nx {
            let im = (nx - i) % nx;
            let d = (c[j * nx + i] - c[jm * nx + im].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dof_length_invariant() {
        let g = Grid1D::uniform(0.0, 1.0, 4).unwrap();
        assert!(Field::real(Layout::ModalDg(2), g.clone(), 1, vec![0.0; 12]).is_ok());
        assert!(Field::real(Layout::ModalDg(2), g.clone(), 1, vec![0.0; 11]).is_err());
        assert!(Field::real(Layout::CellAverage, g.clone(), 2, vec![0.0; 8]).is_ok());
        assert!(Field::new(Layout::SpectralComplex, g, 1, Dof::Complex(vec![])).is_err());
    }

    #[test]
    fn eval_modal() {
        let g = Grid1D::uniform(0.0, 2.0, 2).unwrap();
        // cell 1 holds u = 1 + 2 xi on [1, 2]
        let f = Field::real(Layout::ModalDg(1), g, 1, vec![0.0, 0.0, 1.0, 2.0]).unwrap();
        assert!((f.eval_1d(1.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((f.eval_1d(2.0).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(f.cell_means().unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn hermitian_check() {
        let g = Grid2D::periodic_2pi(4).unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); 16];
        c[1] = Complex64::new(1.0, 2.0);
        c[3] = Complex64::new(1.0, -2.0);
        let f = Field::new(Layout::SpectralComplex, g.clone(), 1, Dof::Complex(c.clone())).unwrap();
        assert!(f.hermitian_defect() < 1e-15);
        c[3] = Complex64::new(1.0, 2.0);
        let f = Field::new(Layout::SpectralComplex, g, 1, Dof::Complex(c)).unwrap();
        assert!(f.hermitian_defect() > 0.5);
    }
}
