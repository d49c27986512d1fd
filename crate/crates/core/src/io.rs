//! Field serialization: a flat CSV text format and the little-endian `PBF1`
//! binary format.
//!
//! CSV layout, one record per line:
//!
//! ```text
//! layout,modal_dg,2
//! components,1
//! grid,1d,<edge 0>,<edge 1>,...
//! dof,real,<count>
//! <value>
//! ...
//! ```
//!
//! Two-dimensional grids are written as
//! `grid,2d,x_min,x_max,y_min,y_max,nx,ny,periodic_x,periodic_y` and complex
//! dof as `re,im` pairs. Floats use the shortest representation that parses
//! back to the same bits.
//!
//! Binary layout: `PBF1`, then `u32` layout tag and order, `u32` components,
//! the grid (`u32` kind 1 with `u32` edge count and `f64` edges, or kind 2
//! with four `f64` extents, `u32` nx, ny and two `u32` periodic flags), then
//! `u32` dof kind (0 real, 1 complex), `u32` count and the `f64` payload
//! (complex values interleaved).

use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Dof, Field, Layout};
use crate::grid::{Grid, Grid1D, Grid2D};

const MAGIC: &[u8; 4] = b"PBF1";

fn layout_tag(layout: Layout) -> (u32, u32) {
    match layout {
        Layout::CellAverage => (0, 0),
        Layout::ModalDg(p) => (1, p as u32),
        Layout::Nodal => (2, 0),
        Layout::SpectralComplex => (3, 0),
    }
}

fn layout_from_tag(tag: u32, p: u32) -> Result<Layout> {
    Ok(match tag {
        0 => Layout::CellAverage,
        1 => Layout::ModalDg(p as usize),
        2 => Layout::Nodal,
        3 => Layout::SpectralComplex,
        t => return Err(Error::Parse(format!("unknown layout tag {t}"))),
    })
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

pub fn write_csv(field: &Field, mut out: impl Write) -> Result<()> {
    match field.layout() {
        Layout::ModalDg(p) => writeln!(out, "layout,modal_dg,{p}")?,
        Layout::CellAverage => writeln!(out, "layout,cell_average")?,
        Layout::Nodal => writeln!(out, "layout,nodal")?,
        Layout::SpectralComplex => writeln!(out, "layout,spectral_complex")?,
    }
    writeln!(out, "components,{}", field.components())?;
    match field.grid() {
        Grid::One(g) => {
            write!(out, "grid,1d")?;
            for e in g.edges() {
                write!(out, ",{e:?}")?;
            }
            writeln!(out)?;
        }
        Grid::Two(g) => {
            let ((x0, x1), (y0, y1), (px, py)) = (g.x_range(), g.y_range(), g.periodic());
            writeln!(out, "grid,2d,{x0:?},{x1:?},{y0:?},{y1:?},{},{},{px},{py}", g.nx(), g.ny())?;
        }
    }
    match field.dof() {
        Dof::Real(v) => {
            writeln!(out, "dof,real,{}", v.len())?;
            for x in v {
                writeln!(out, "{x:?}")?;
            }
        }
        Dof::Complex(v) => {
            writeln!(out, "dof,complex,{}", v.len())?;
            for z in v {
                writeln!(out, "{:?},{:?}", z.re, z.im)?;
            }
        }
    }
    Ok(())
}

pub fn read_csv(input: impl Read) -> Result<Field> {
    let mut lines = BufReader::new(input).lines().enumerate();
    let mut record = |want: &str| -> Result<(usize, Vec<String>)> {
        let (i, line) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing '{want}' record")))?;
        let cells: Vec<String> = line?.trim().split(',').map(str::to_owned).collect();
        if cells[0] != want {
            return Err(parse_err(i + 1, format!("expected '{want}', found '{}'", cells[0])));
        }
        Ok((i + 1, cells))
    };
    let num = |line: usize, s: &str| s.parse::<f64>().map_err(|e| parse_err(line, format!("'{s}': {e}")));
    let int = |line: usize, s: &str| s.parse::<usize>().map_err(|e| parse_err(line, format!("'{s}': {e}")));
    let flag = |line: usize, s: &str| s.parse::<bool>().map_err(|e| parse_err(line, format!("'{s}': {e}")));

    let (l, cells) = record("layout")?;
    let layout = match (cells.get(1).map(String::as_str), cells.get(2)) {
        (Some("cell_average"), None) => Layout::CellAverage,
        (Some("modal_dg"), Some(p)) => Layout::ModalDg(int(l, p)?),
        (Some("nodal"), None) => Layout::Nodal,
        (Some("spectral_complex"), None) => Layout::SpectralComplex,
        _ => return Err(parse_err(l, "unknown layout")),
    };
    let (l, cells) = record("components")?;
    let components = int(l, cells.get(1).ok_or_else(|| parse_err(l, "missing count"))?)?;
    let (l, cells) = record("grid")?;
    let grid: Grid = match cells.get(1).map(String::as_str) {
        Some("1d") => {
            let edges = cells[2..].iter().map(|s| num(l, s)).collect::<Result<Vec<_>>>()?;
            Grid1D::from_edges(edges)?.into()
        }
        Some("2d") if cells.len() == 10 => Grid2D::new(
            (num(l, &cells[2])?, num(l, &cells[3])?),
            (num(l, &cells[4])?, num(l, &cells[5])?),
            int(l, &cells[6])?,
            int(l, &cells[7])?,
            (flag(l, &cells[8])?, flag(l, &cells[9])?),
        )?
        .into(),
        _ => return Err(parse_err(l, "malformed grid descriptor")),
    };
    let (l, cells) = record("dof")?;
    if cells.len() != 3 {
        return Err(parse_err(l, "malformed dof header"));
    }
    let count = int(l, &cells[2])?;
    let complex = match cells[1].as_str() {
        "real" => false,
        "complex" => true,
        k => return Err(parse_err(l, format!("unknown dof kind '{k}'"))),
    };
    let mut real = Vec::with_capacity(if complex { 0 } else { count });
    let mut cplx = Vec::with_capacity(if complex { count } else { 0 });
    for (i, line) in lines.take(count) {
        let line = line?;
        let parts: Vec<&str> = line.trim().split(',').collect();
        match (complex, parts.as_slice()) {
            (false, [x]) => real.push(num(i + 1, x)?),
            (true, [re, im]) => cplx.push(Complex64::new(num(i + 1, re)?, num(i + 1, im)?)),
            _ => return Err(parse_err(i + 1, "malformed dof value")),
        }
    }
    let dof = if complex { Dof::Complex(cplx) } else { Dof::Real(real) };
    if dof.len() != count {
        return Err(Error::Parse(format!("expected {count} dof values, found {}", dof.len())));
    }
    Field::new(layout, grid, components, dof)
}

fn put_u32(out: &mut Vec<u8>, v: usize) -> Result<()> {
    let v = u32::try_from(v).map_err(|_| Error::InvalidField(format!("{v} does not fit in u32")))?;
    out.extend_from_slice(&v.to_le_bytes());
    Ok(())
}

fn put_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub fn write_binary(field: &Field, mut out: impl Write) -> Result<()> {
    let mut buf = Vec::with_capacity(64 + 16 * field.dof_count());
    buf.extend_from_slice(MAGIC);
    let (tag, p) = layout_tag(field.layout());
    put_u32(&mut buf, tag as usize)?;
    put_u32(&mut buf, p as usize)?;
    put_u32(&mut buf, field.components())?;
    match field.grid() {
        Grid::One(g) => {
            put_u32(&mut buf, 1)?;
            put_u32(&mut buf, g.edges().len())?;
            g.edges().iter().for_each(|&e| put_f64(&mut buf, e));
        }
        Grid::Two(g) => {
            put_u32(&mut buf, 2)?;
            let ((x0, x1), (y0, y1), (px, py)) = (g.x_range(), g.y_range(), g.periodic());
            [x0, x1, y0, y1].into_iter().for_each(|v| put_f64(&mut buf, v));
            for v in [g.nx(), g.ny(), px as usize, py as usize] {
                put_u32(&mut buf, v)?;
            }
        }
    }
    match field.dof() {
        Dof::Real(v) => {
            put_u32(&mut buf, 0)?;
            put_u32(&mut buf, v.len())?;
            v.iter().for_each(|&x| put_f64(&mut buf, x));
        }
        Dof::Complex(v) => {
            put_u32(&mut buf, 1)?;
            put_u32(&mut buf, v.len())?;
            for z in v {
                put_f64(&mut buf, z.re);
                put_f64(&mut buf, z.im);
            }
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Parse(format!("truncated input at byte {}", self.pos)))?;
        self.pos = end;
        Ok(chunk.try_into().expect("chunk length"))
    }

    fn u32(&mut self) -> Result<u32> {
        self.take::<4>().map(u32::from_le_bytes)
    }

    fn usize(&mut self) -> Result<usize> {
        self.u32().map(|v| v as usize)
    }

    fn f64(&mut self) -> Result<f64> {
        self.take::<8>().map(f64::from_le_bytes)
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        if self.bytes.len().saturating_sub(self.pos) < 8 * n {
            return Err(Error::Parse(format!("payload of {n} values is truncated")));
        }
        (0..n).map(|_| self.f64()).collect()
    }
}

pub fn read_binary(mut input: impl Read) -> Result<Field> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut c = Cursor { bytes: &bytes, pos: 0 };
    if &c.take::<4>()? != MAGIC {
        return Err(Error::Parse("missing PBF1 magic bytes".into()));
    }
    let (tag, p) = (c.u32()?, c.u32()?);
    let layout = layout_from_tag(tag, p)?;
    let components = c.usize()?;
    let grid: Grid = match c.u32()? {
        1 => {
            let n = c.usize()?;
            Grid1D::from_edges(c.f64s(n)?)?.into()
        }
        2 => {
            let (x0, x1, y0, y1) = (c.f64()?, c.f64()?, c.f64()?, c.f64()?);
            let (nx, ny, px, py) = (c.usize()?, c.usize()?, c.u32()?, c.u32()?);
            Grid2D::new((x0, x1), (y0, y1), nx, ny, (px != 0, py != 0))?.into()
        }
        k => return Err(Error::Parse(format!("unknown grid kind {k}"))),
    };
    let dof = match (c.u32()?, c.usize()?) {
        (0, n) => Dof::Real(c.f64s(n)?),
        (1, n) => Dof::Complex(c.f64s(2 * n)?.chunks(2).map(|z| Complex64::new(z[0], z[1])).collect()),
        (k, _) => return Err(Error::Parse(format!("unknown dof kind {k}"))),
    };
    if c.pos != bytes.len() {
        return Err(Error::Parse(format!("{} trailing bytes", bytes.len() - c.pos)));
    }
    Field::new(layout, grid, components, dof)
}
