use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::record::BenchRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub cost_s: f64,
    pub error: f64,
}

impl FrontPoint {
    pub fn new(cost_s: f64, error: f64) -> Self {
        Self { cost_s, error }
    }

    /// At least as good in both coordinates and strictly better in one.
    pub fn dominates(&self, other: &FrontPoint) -> bool {
        self.cost_s <= other.cost_s
            && self.error <= other.error
            && (self.cost_s < other.cost_s || self.error < other.error)
    }
}

/// Non-dominated (cost, error) points of one solver family, cost ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFront {
    pub solver_id: String,
    pub pde_id: String,
    pub points: Vec<FrontPoint>,
    /// Dominated or duplicate points, kept for reporting.
    pub dominated: Vec<FrontPoint>,
}

impl ParetoFront {
    /// Builds a front from raw points (for example a claim's published numbers).
    pub fn from_points(solver_id: &str, pde_id: &str, points: &[FrontPoint]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("a front needs at least one point".into()));
        }
        if let Some(p) = points
            .iter()
            .find(|p| !(p.cost_s.is_finite() && p.error.is_finite() && p.cost_s > 0.0 && p.error > 0.0))
        {
            return Err(Error::InvalidInput(format!(
                "front points need positive finite cost and error, got ({}, {})",
                p.cost_s, p.error
            )));
        }
        let mut sorted = points.to_vec();
        sorted.sort_by(|a, b| a.cost_s.total_cmp(&b.cost_s).then(a.error.total_cmp(&b.error)));
        let mut front: Vec<FrontPoint> = Vec::new();
        let mut dominated = Vec::new();
        for p in sorted {
            match front.last() {
                Some(best) if p.error >= best.error => dominated.push(p),
                _ => front.push(p),
            }
        }
        Ok(Self {
            solver_id: solver_id.to_owned(),
            pde_id: pde_id.to_owned(),
            points: front,
            dominated,
        })
    }

    pub fn cost_range(&self) -> (f64, f64) {
        (self.points[0].cost_s, self.points[self.points.len() - 1].cost_s)
    }

    /// `(min, max)` error along the front.
    pub fn error_range(&self) -> (f64, f64) {
        (self.points[self.points.len() - 1].error, self.points[0].error)
    }

    /// Two-column CSV `cost_s,error` of the front points.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "cost_s,error")?;
        for p in &self.points {
            writeln!(out, "{:?},{:?}", p.cost_s, p.error)?;
        }
        Ok(())
    }
}

/// Front of `records` under (runtime median, relative L2 error).
pub fn build_pareto_front(records: &[BenchRecord]) -> Result<ParetoFront> {
    let first = records
        .first()
        .ok_or_else(|| Error::InvalidInput("no records to build a front from".into()))?;
    if let Some(r) = records
        .iter()
        .find(|r| r.solver_id != first.solver_id || r.pde_id != first.pde_id)
    {
        return Err(Error::MixedSolverIds(format!(
            "{}/{} and {}/{}",
            first.solver_id, first.pde_id, r.solver_id, r.pde_id
        )));
    }
    let points: Vec<FrontPoint> = records
        .iter()
        .map(|r| FrontPoint::new(r.runtime_median_s, r.error_l2))
        .collect();
    ParetoFront::from_points(&first.solver_id, &first.pde_id, &points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn front(points: &[(f64, f64)]) -> ParetoFront {
        let p: Vec<FrontPoint> = points.iter().map(|&(c, e)| FrontPoint::new(c, e)).collect();
        ParetoFront::from_points("s", "p", &p).unwrap()
    }

    #[test]
    fn mutually_non_dominated() {
        let f = front(&[(2.0, 0.01), (1.0, 0.1)]);
        assert_eq!(f.points, vec![FrontPoint::new(1.0, 0.1), FrontPoint::new(2.0, 0.01)]);
        assert!(f.dominated.is_empty());
    }

    #[test]
    fn domination() {
        let f = front(&[(1.0, 0.1), (2.0, 0.1)]);
        assert_eq!(f.points, vec![FrontPoint::new(1.0, 0.1)]);
        assert_eq!(f.dominated, vec![FrontPoint::new(2.0, 0.1)]);
    }

    #[test]
    fn duplicates_kept_once() {
        let f = front(&[(1.0, 0.1), (1.0, 0.1)]);
        assert_eq!(f.points.len(), 1);
        assert_eq!(f.dominated.len(), 1);
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        front(&[(1.0, 0.1), (2.0, 0.01)]).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "cost_s,error\n1.0,0.1\n2.0,0.01\n");
    }

    #[test]
    fn rejects_bad_points() {
        assert!(ParetoFront::from_points("s", "p", &[]).is_err());
        assert!(ParetoFront::from_points("s", "p", &[FrontPoint::new(0.0, 0.1)]).is_err());
        assert!(ParetoFront::from_points("s", "p", &[FrontPoint::new(1.0, f64::NAN)]).is_err());
    }
}
