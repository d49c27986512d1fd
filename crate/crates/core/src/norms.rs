//! Error norms between fields and references, and fine-to-coarse restriction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Layout};
use crate::grid::{Grid, Grid1D, Grid2D};
use crate::quadrature::{gauss_legendre, legendre};
use crate::solvers2d::spectral;

/// Points used to integrate an analytic reference over a cell.
const CELL_AVERAGE_POINTS: usize = 6;
const NESTING_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    RelL2,
    LInf,
    Mae,
}

/// What an approximation is compared against.
#[derive(Clone, Copy)]
pub enum Reference<'a> {
    Field(&'a Field),
    Analytic1D(&'a dyn Fn(f64) -> f64),
    Analytic2D(&'a dyn Fn(f64, f64) -> f64),
}

/// All three metrics at once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    pub rel_l2: f64,
    pub linf: f64,
    pub mae: f64,
}

impl ErrorMetrics {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::RelL2 => self.rel_l2,
            Metric::LInf => self.linf,
            Metric::Mae => self.mae,
        }
    }
}

/// Paired samples with quadrature weights.
#[derive(Default)]
struct Samples {
    approx: Vec<f64>,
    reference: Vec<f64>,
    weight: Vec<f64>,
}

impl Samples {
    fn push(&mut self, a: f64, r: f64, w: f64) {
        self.approx.push(a);
        self.reference.push(r);
        self.weight.push(w);
    }

    fn metric(&self, metric: Metric) -> Result<f64> {
        let it = || {
            self.approx
                .iter()
                .zip(&self.reference)
                .zip(&self.weight)
                .map(|((a, r), w)| (a - r, *r, *w))
        };
        match metric {
            Metric::RelL2 => {
                let num: f64 = it().map(|(d, _, w)| w * d * d).sum();
                let den: f64 = it().map(|(_, r, w)| w * r * r).sum();
                if den == 0.0 {
                    return Err(Error::ZeroReferenceNorm);
                }
                Ok((num / den).sqrt())
            }
            Metric::LInf => Ok(it().map(|(d, _, _)| d.abs()).fold(0.0, f64::max)),
            Metric::Mae => {
                let total: f64 = self.weight.iter().sum();
                Ok(it().map(|(d, _, w)| w * d.abs()).sum::<f64>() / total)
            }
        }
    }
}

pub fn compute_error(approx: &Field, reference: Reference<'_>, metric: Metric) -> Result<f64> {
    samples(approx, reference)?.metric(metric)
}

pub fn compute_all(approx: &Field, reference: Reference<'_>) -> Result<ErrorMetrics> {
    let s = samples(approx, reference)?;
    Ok(ErrorMetrics {
        rel_l2: s.metric(Metric::RelL2)?,
        linf: s.metric(Metric::LInf)?,
        mae: s.metric(Metric::Mae)?,
    })
}

fn samples(approx: &Field, reference: Reference<'_>) -> Result<Samples> {
    match reference {
        Reference::Analytic1D(f) => analytic_1d(approx, f),
        Reference::Analytic2D(f) => analytic_2d(approx, f),
        Reference::Field(r) => field_pair(approx, r),
    }
}

fn analytic_1d(approx: &Field, f: &dyn Fn(f64) -> f64) -> Result<Samples> {
    let grid = approx
        .grid_1d()
        .ok_or_else(|| Error::IncompatibleGrids("1D reference for a 2D field".into()))?;
    if approx.components() != 1 {
        return Err(Error::IncompatibleGrids(
            "scalar reference for a multi-component field; compare per component".into(),
        ));
    }
    let v = approx
        .values()
        .ok_or_else(|| Error::UnsupportedLayout(approx.layout().to_string()))?;
    let mut s = Samples::default();
    match approx.layout() {
        Layout::CellAverage => {
            for (i, a) in v.iter().enumerate() {
                let (lo, hi) = (grid.edges()[i], grid.edges()[i + 1]);
                let r = crate::quadrature::integrate(f, lo, hi, CELL_AVERAGE_POINTS) / (hi - lo);
                s.push(*a, r, hi - lo);
            }
        }
        Layout::Nodal => {
            for (i, a) in v.iter().enumerate() {
                s.push(*a, f(grid.edges()[i]), grid.width(i));
            }
        }
        Layout::ModalDg(p) => {
            let (xs, ws) = gauss_legendre(p + 2);
            let table: Vec<Vec<f64>> = xs
                .iter()
                .map(|&x| (0..=p).map(|l| legendre(l, x)).collect())
                .collect();
            for (cell, c) in v.chunks(p + 1).enumerate() {
                let (lo, h) = (grid.edges()[cell], grid.width(cell));
                for (q, (&xi, &w)) in xs.iter().zip(&ws).enumerate() {
                    let a: f64 = c.iter().zip(&table[q]).map(|(cl, pl)| cl * pl).sum();
                    let x = lo + 0.5 * (xi + 1.0) * h;
                    s.push(a, f(x), 0.5 * h * w);
                }
            }
        }
        Layout::SpectralComplex => unreachable!("spectral fields are 2D"),
    }
    Ok(s)
}

fn analytic_2d(approx: &Field, f: &dyn Fn(f64, f64) -> f64) -> Result<Samples> {
    let physical;
    let approx = if approx.layout() == Layout::SpectralComplex {
        physical = spectral::to_physical(approx)?;
        &physical
    } else {
        approx
    };
    let grid = approx
        .grid_2d()
        .ok_or_else(|| Error::IncompatibleGrids("2D reference for a 1D field".into()))?;
    if approx.layout() != Layout::Nodal || approx.components() != 1 {
        return Err(Error::UnsupportedLayout(format!(
            "2D comparison needs a scalar nodal field, got {}",
            approx.layout()
        )));
    }
    let v = approx.values().unwrap();
    let w = grid.dx() * grid.dy();
    let mut s = Samples::default();
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let (x, y) = grid.node(i, j);
            s.push(v[j * grid.nx() + i], f(x, y), w);
        }
    }
    Ok(s)
}

fn field_pair(approx: &Field, reference: &Field) -> Result<Samples> {
    if approx.components() != reference.components() {
        return Err(Error::IncompatibleGrids(format!(
            "{} vs {} components",
            approx.components(),
            reference.components()
        )));
    }
    match (approx.grid(), reference.grid()) {
        (Grid::One(ga), Grid::One(_)) => {
            // compare same-layout DG fields directly at Gauss points
            if approx.grid() == reference.grid() && approx.layout() == reference.layout() {
                if let Layout::ModalDg(p) = approx.layout() {
                    return Ok(dg_pair(ga, p, approx.values().unwrap(), reference.values().unwrap()));
                }
            }
            let a = match approx.layout() {
                Layout::Nodal => approx.clone(),
                _ => approx.to_cell_averages()?,
            };
            let r = restrict_field(reference, approx.grid())?;
            if r.layout() != a.layout() {
                return Err(Error::IncompatibleGrids(format!(
                    "cannot compare {} against {}",
                    a.layout(),
                    reference.layout()
                )));
            }
            let widths = ga.widths();
            let mut s = Samples::default();
            let n = ga.n_cells();
            for (k, (x, y)) in a.values().unwrap().iter().zip(r.values().unwrap()).enumerate() {
                s.push(*x, *y, widths[k % n]);
            }
            Ok(s)
        }
        (Grid::Two(ga), Grid::Two(_)) => {
            let a = if approx.layout() == Layout::SpectralComplex {
                spectral::to_physical(approx)?
            } else {
                approx.clone()
            };
            let r = restrict_field(reference, approx.grid())?;
            if a.layout() != r.layout() {
                return Err(Error::IncompatibleGrids(format!(
                    "cannot compare {} against {}",
                    a.layout(),
                    r.layout()
                )));
            }
            let w = ga.dx() * ga.dy();
            let mut s = Samples::default();
            for (x, y) in a.values().unwrap().iter().zip(r.values().unwrap()) {
                s.push(*x, *y, w);
            }
            Ok(s)
        }
        _ => Err(Error::IncompatibleGrids("1D field against 2D reference".into())),
    }
}

fn dg_pair(grid: &Grid1D, p: usize, a: &[f64], r: &[f64]) -> Samples {
    let (xs, ws) = gauss_legendre(p + 2);
    let n = grid.n_cells();
    let mut s = Samples::default();
    for (k, (ca, cr)) in a.chunks(p + 1).zip(r.chunks(p + 1)).enumerate() {
        let h = grid.width(k % n);
        for (&xi, &w) in xs.iter().zip(&ws) {
            let pl: Vec<f64> = (0..=p).map(|l| legendre(l, xi)).collect();
            let va: f64 = ca.iter().zip(&pl).map(|(c, p)| c * p).sum();
            let vr: f64 = cr.iter().zip(&pl).map(|(c, p)| c * p).sum();
            s.push(va, vr, 0.5 * h * w);
        }
    }
    s
}

/// Restricts a field to a coarser nested grid.
///
/// Cell averages are combined by width-weighted means (modal DG fields are
/// first reduced to their cell means); nodal fields are subsampled. Spectral
/// fields are transformed to physical nodal values before subsampling.
pub fn restrict_field(fine: &Field, coarse: &Grid) -> Result<Field> {
    match (fine.grid(), coarse) {
        (Grid::One(gf), Grid::One(gc)) => restrict_1d(fine, gf, gc),
        (Grid::Two(gf), Grid::Two(gc)) => restrict_2d(fine, gf, gc),
        _ => Err(Error::NonNestedGrids("dimension mismatch".into())),
    }
}

/// For every coarse edge, the index of the coinciding fine edge.
fn edge_map(gf: &Grid1D, gc: &Grid1D) -> Result<Vec<usize>> {
    let tol = NESTING_RTOL * gf.length().max(1.0);
    let fe = gf.edges();
    let mut map = Vec::with_capacity(gc.n_cells() + 1);
    for &x in gc.edges() {
        let k = fe.partition_point(|&e| e < x - tol);
        if k >= fe.len() || (fe[k] - x).abs() > tol {
            return Err(Error::NonNestedGrids(format!("coarse edge {x} is not a fine edge")));
        }
        map.push(k);
    }
    if map[0] != 0 || map[map.len() - 1] != fe.len() - 1 {
        return Err(Error::NonNestedGrids("domains differ".into()));
    }
    Ok(map)
}

fn restrict_1d(fine: &Field, gf: &Grid1D, gc: &Grid1D) -> Result<Field> {
    let map = edge_map(gf, gc)?;
    let nf = gf.n_cells();
    let nc = gc.n_cells();
    let comps = fine.components();
    match fine.layout() {
        Layout::CellAverage | Layout::ModalDg(_) => {
            let means = fine.cell_means()?;
            let widths = gf.widths();
            let mut out = Vec::with_capacity(comps * nc);
            for c in 0..comps {
                let u = &means[c * nf..(c + 1) * nf];
                for k in 0..nc {
                    let (a, b) = (map[k], map[k + 1]);
                    out.push(weighted_mean(&u[a..b], &widths[a..b]));
                }
            }
            Field::real(Layout::CellAverage, gc.clone(), comps, out)
        }
        Layout::Nodal => {
            let v = fine.values().unwrap();
            let mut out = Vec::with_capacity(comps * nc);
            for c in 0..comps {
                out.extend(map[..nc].iter().map(|&k| v[c * nf + k]));
            }
            Field::real(Layout::Nodal, gc.clone(), comps, out)
        }
        Layout::SpectralComplex => Err(Error::UnsupportedLayout("1D spectral field".into())),
    }
}

fn restrict_2d(fine: &Field, gf: &Grid2D, gc: &Grid2D) -> Result<Field> {
    let tol = NESTING_RTOL * (gf.x_range().1 - gf.x_range().0).abs().max(1.0);
    let same = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol;
    if !same(gf.x_range(), gc.x_range()) || !same(gf.y_range(), gc.y_range()) {
        return Err(Error::NonNestedGrids("domains differ".into()));
    }
    if gf.nx() % gc.nx() != 0 || gf.ny() % gc.ny() != 0 {
        return Err(Error::NonNestedGrids(format!(
            "{}x{} is not a multiple of {}x{}",
            gf.nx(),
            gf.ny(),
            gc.nx(),
            gc.ny()
        )));
    }
    let (rx, ry) = (gf.nx() / gc.nx(), gf.ny() / gc.ny());
    let physical;
    let fine = if fine.layout() == Layout::SpectralComplex {
        physical = spectral::to_physical(fine)?;
        &physical
    } else {
        fine
    };
    let v = fine.values().unwrap();
    let comps = fine.components();
    let (nfx, nfy) = (gf.nx(), gf.ny());
    let mut out = Vec::with_capacity(comps * gc.n_cells());
    for c in 0..comps {
        let u = &v[c * nfx * nfy..(c + 1) * nfx * nfy];
        for j in 0..gc.ny() {
            for i in 0..gc.nx() {
                let val = match fine.layout() {
                    Layout::Nodal => u[(j * ry) * nfx + i * rx],
                    Layout::CellAverage => {
                        let mut acc = 0.0;
                        for jj in 0..ry {
                            for ii in 0..rx {
                                acc += u[(j * ry + jj) * nfx + i * rx + ii];
                            }
                        }
                        acc / (rx * ry) as f64
                    }
                    other => return Err(Error::UnsupportedLayout(other.to_string())),
                };
                out.push(val);
            }
        }
    }
    Field::real(fine.layout(), gc.clone(), comps, out)
}

/// Weighted mean, written as an offset from the first value so that
/// constant data is reproduced bit for bit.
fn weighted_mean(values: &[f64], weights: &[f64]) -> f64 {
    let base = values[0];
    let total: f64 = weights.iter().sum();
    base + values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (v - base))
        .sum::<f64>()
        / total
}

/// Cell averages of `f` on `grid`, integrated with a 6-point Gauss rule.
pub fn cell_averages(grid: &Grid1D, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let (xs, ws) = crate::quadrature::gauss_legendre(CELL_AVERAGE_POINTS);
    let mut samples = vec![0.0; CELL_AVERAGE_POINTS];
    (0..grid.n_cells())
        .map(|i| {
            let (lo, h) = (grid.edges()[i], grid.width(i));
            for (s, x) in samples.iter_mut().zip(&xs) {
                *s = f(lo + 0.5 * h * (x + 1.0));
            }
            weighted_mean(&samples, &ws)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ca(n: usize, vals: Vec<f64>) -> Field {
        Field::real(Layout::CellAverage, Grid1D::uniform(0.0, 1.0, n).unwrap(), 1, vals).unwrap()
    }

    #[test]
    fn identical_fields_have_zero_error() {
        let f = ca(4, vec![1.0, 2.0, 3.0, 4.0]);
        for m in [Metric::RelL2, Metric::LInf, Metric::Mae] {
            assert_eq!(compute_error(&f, Reference::Field(&f), m).unwrap(), 0.0);
        }
    }

    #[test]
    fn constant_offset_by_hand() {
        // 4 cells of width 1/4, reference values r, approx r + c.
        // RelL2 = sqrt(sum h c^2) / sqrt(sum h r^2) = c * sqrt(L) / R
        let r = vec![1.0, -2.0, 3.0, 0.5];
        let c = 0.1;
        let reference = ca(4, r.clone());
        let approx = ca(4, r.iter().map(|v| v + c).collect());
        let big_r = (0.25 * (1.0 + 4.0 + 9.0 + 0.25_f64)).sqrt();
        let expected = c * 1.0_f64.sqrt() / big_r;
        let got = compute_error(&approx, Reference::Field(&reference), Metric::RelL2).unwrap();
        assert!((got - expected).abs() < 1e-15, "{got} vs {expected}");
        let linf = compute_error(&approx, Reference::Field(&reference), Metric::LInf).unwrap();
        assert!((linf - c).abs() < 1e-15);
        let mae = compute_error(&approx, Reference::Field(&reference), Metric::Mae).unwrap();
        assert!((mae - c).abs() < 1e-15);
    }

    #[test]
    fn zero_reference_norm() {
        let z = ca(4, vec![0.0; 4]);
        let a = ca(4, vec![1.0; 4]);
        assert_eq!(
            compute_error(&a, Reference::Field(&z), Metric::RelL2),
            Err(Error::ZeroReferenceNorm)
        );
        assert!(compute_error(&a, Reference::Field(&z), Metric::LInf).is_ok());
    }

    #[test]
    fn restrict_arithmetic_mean() {
        let fine = ca(4, vec![1.0, 3.0, 5.0, 7.0]);
        let coarse = Grid1D::uniform(0.0, 1.0, 2).unwrap();
        let r = restrict_field(&fine, &coarse.into()).unwrap();
        assert_eq!(r.values().unwrap(), &[2.0, 6.0]);
    }

    #[test]
    fn restrict_constant() {
        let fine = ca(12, vec![3.25; 12]);
        for n in [2, 3, 4, 6] {
            let r = restrict_field(&fine, &Grid1D::uniform(0.0, 1.0, n).unwrap().into()).unwrap();
            assert!(r.values().unwrap().iter().all(|v| *v == 3.25));
        }
    }

    #[test]
    fn restrict_rejects_non_nested() {
        let fine = ca(4, vec![0.0; 4]);
        let coarse = Grid1D::uniform(0.0, 1.0, 3).unwrap();
        assert!(matches!(
            restrict_field(&fine, &coarse.into()),
            Err(Error::NonNestedGrids(_))
        ));
    }

    #[test]
    fn restricted_sine_matches_exact_averages() {
        let s = |x: f64| (2.0 * PI * x).sin();
        let fine_grid = Grid1D::uniform(0.0, 1.0, 256).unwrap();
        let fine = Field::real(Layout::CellAverage, fine_grid.clone(), 1, cell_averages(&fine_grid, s)).unwrap();
        let coarse = Grid1D::uniform(0.0, 1.0, 16).unwrap();
        let r = restrict_field(&fine, &coarse.clone().into()).unwrap();
        // exact cell averages: (cos(2πa) - cos(2πb)) / (2π h)
        let h = 1.0 / 16.0;
        let exact: Vec<f64> = (0..16)
            .map(|i| {
                let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
                ((2.0 * PI * a).cos() - (2.0 * PI * b).cos()) / (2.0 * PI * h)
            })
            .collect();
        let ex = Field::real(Layout::CellAverage, coarse, 1, exact).unwrap();
        let e = compute_error(&r, Reference::Field(&ex), Metric::RelL2).unwrap();
        assert!(e < 1e-3, "{e}");
    }

    #[test]
    fn restriction_preserves_integral_on_irregular_grid() {
        let gf = Grid1D::from_edges(vec![0.0, 0.1, 0.3, 0.35, 0.6, 0.9, 1.0]).unwrap();
        let gc = Grid1D::from_edges(vec![0.0, 0.35, 1.0]).unwrap();
        let u = vec![1.0, -2.0, 4.0, 0.5, 3.0, -1.0];
        let f = Field::real(Layout::CellAverage, gf.clone(), 1, u.clone()).unwrap();
        let r = restrict_field(&f, &gc.clone().into()).unwrap();
        let fine_int: f64 = gf.widths().iter().zip(&u).map(|(h, v)| h * v).sum();
        let coarse_int: f64 = gc.widths().iter().zip(r.values().unwrap()).map(|(h, v)| h * v).sum();
        assert!((fine_int - coarse_int).abs() <= 1e-12 * fine_int.abs());
    }

    #[test]
    fn nodal_subsampling() {
        let gf = Grid1D::uniform(0.0, 1.0, 8).unwrap();
        let f = Field::real(Layout::Nodal, gf, 1, (0..8).map(|i| i as f64).collect()).unwrap();
        let r = restrict_field(&f, &Grid1D::uniform(0.0, 1.0, 4).unwrap().into()).unwrap();
        assert_eq!(r.values().unwrap(), &[0.0, 2.0, 4.0, 6.0]);
    }

    #[test]
    fn analytic_dg_exact_polynomial() {
        // a quadratic is represented exactly by DG(2)
        let g = Grid1D::uniform(0.0, 1.0, 3).unwrap();
        let f = |x: f64| 1.0 + x * x;
        let mut dof = Vec::new();
        for i in 0..3 {
            let (a, h) = (g.edges()[i], g.width(i));
            // x = a + h (xi+1)/2 ; project onto Legendre modes exactly
            for l in 0..3 {
                let proj = crate::quadrature::integrate(
                    |xi| f(a + 0.5 * h * (xi + 1.0)) * legendre(l, xi),
                    -1.0,
                    1.0,
                    4,
                ) * (2 * l + 1) as f64
                    / 2.0;
                dof.push(proj);
            }
        }
        let field = Field::real(Layout::ModalDg(2), g, 1, dof).unwrap();
        let e = compute_error(&field, Reference::Analytic1D(&f), Metric::RelL2).unwrap();
        assert!(e < 1e-14);
    }
}
