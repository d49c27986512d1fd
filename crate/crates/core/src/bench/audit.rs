//! Mechanized audit of a published speedup claim against measured fronts.
//!
//! Rule 1 grades the claimed speedup against the equal-accuracy matcher;
//! rule 2 looks the declared baseline up in a registry of efficient and
//! forbidden methods per PDE class. The numeric thresholds are policy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::matching::match_equal_accuracy;
use super::pareto::{FrontPoint, ParetoFront};

/// Claims within this factor of the matched speedup pass.
pub const PASS_FACTOR: f64 = 1.25;
/// Claims beyond this factor of the matched speedup fail.
pub const FAIL_FACTOR: f64 = 4.0;

const DEFAULT_REGISTRY: &str = include_str!("registry.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    Rule1,
    Rule2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Pass,
    Warn,
    Fail,
}

impl Grade {
    pub fn symbol(&self) -> &'static str {
        match self {
            Grade::Pass => "✓",
            Grade::Warn => "⚠",
            Grade::Fail => "✗",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonCode {
    /// The target accuracy lies outside one of the fronts.
    Extrapolation,
    /// Claimed and matched speedups differ by more than the fail factor.
    SpeedupDiscrepancy,
    ForbiddenBaseline,
    /// Baseline absent from the registry entry for this PDE.
    UnlistedBaseline,
    UnknownPdeClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub rule: Rule,
    pub grade: Grade,
    pub rationale: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason_code: Option<ReasonCode>,
    /// Matched speedup, when the fronts allow one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matched_speedup: Option<f64>,
}

/// "B is `claimed_speedup` times faster than baseline A".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub pde_id: String,
    pub declared_baseline_id: String,
    pub claimed_speedup: f64,
    /// Accuracy at which the claim is made; defaults to the best error of front B.
    #[serde(default)]
    pub target_error: Option<f64>,
    /// Baseline problem size, used to select size-dependent registry classes.
    #[serde(default)]
    pub baseline_dof: Option<usize>,
    /// Baseline (cost, error) points.
    pub front_a: Vec<FrontPoint>,
    /// Proposed-method (cost, error) points.
    pub front_b: Vec<FrontPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryClass {
    pub pde_id: String,
    #[serde(default)]
    pub min_dof: Option<usize>,
    #[serde(default)]
    pub max_dof: Option<usize>,
    pub efficient: Vec<String>,
    pub forbidden: Vec<String>,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    pub version: u32,
    pub classes: Vec<RegistryClass>,
}

impl Registry {
    /// The table shipped with the crate.
    pub fn builtin() -> Self {
        serde_json::from_str(DEFAULT_REGISTRY).expect("shipped registry is valid JSON")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Class for `pde_id`; size bounds are `min_dof <= dof < max_dof` and an
    /// unknown size matches the first entry.
    pub fn lookup(&self, pde_id: &str, dof: Option<usize>) -> Option<&RegistryClass> {
        let mut candidates = self.classes.iter().filter(|c| c.pde_id == pde_id);
        match dof {
            None => candidates.next(),
            Some(n) => candidates.find(|c| c.min_dof.is_none_or(|lo| n >= lo) && c.max_dof.is_none_or(|hi| n < hi)),
        }
    }
}

fn rule1(claim: &Claim, a: &ParetoFront, b: &ParetoFront) -> Verdict {
    let target = claim.target_error.unwrap_or(b.error_range().0);
    match match_equal_accuracy(a, b, target) {
        Err(Error::Extrapolation { front, target, lo, hi }) => Verdict {
            rule: Rule::Rule1,
            grade: Grade::Fail,
            rationale: format!(
                "no equal-accuracy comparison: error {target:.3e} lies outside [{lo:.3e}, {hi:.3e}] covered by '{front}'"
            ),
            reason_code: Some(ReasonCode::Extrapolation),
            matched_speedup: None,
        },
        Err(e) => Verdict {
            rule: Rule::Rule1,
            grade: Grade::Fail,
            rationale: format!("matching failed: {e}"),
            reason_code: Some(ReasonCode::Extrapolation),
            matched_speedup: None,
        },
        Ok(report) => {
            let factor = (claim.claimed_speedup / report.speedup).max(report.speedup / claim.claimed_speedup);
            let (grade, reason_code) = if factor <= PASS_FACTOR {
                (Grade::Pass, None)
            } else if factor <= FAIL_FACTOR {
                (Grade::Warn, None)
            } else {
                (Grade::Fail, Some(ReasonCode::SpeedupDiscrepancy))
            };
            Verdict {
                rule: Rule::Rule1,
                grade,
                rationale: format!(
                    "claimed {:.3}x, matched {:.3}x at error {target:.3e} (off by {factor:.2}x)",
                    claim.claimed_speedup, report.speedup
                ),
                reason_code,
                matched_speedup: Some(report.speedup),
            }
        }
    }
}

fn rule2(claim: &Claim, registry: &Registry) -> Verdict {
    let id = claim.declared_baseline_id.to_lowercase();
    let verdict = |grade, reason_code, rationale| Verdict {
        rule: Rule::Rule2,
        grade,
        rationale,
        reason_code,
        matched_speedup: None,
    };
    let Some(class) = registry.lookup(&claim.pde_id, claim.baseline_dof) else {
        return verdict(
            Grade::Warn,
            Some(ReasonCode::UnknownPdeClass),
            format!("no registry entry for PDE '{}'", claim.pde_id),
        );
    };
    let efficient = class.efficient.join(", ");
    if class.forbidden.contains(&id) {
        verdict(
            Grade::Fail,
            Some(ReasonCode::ForbiddenBaseline),
            format!("'{id}' is a weak baseline for {}: {}; use {efficient}", class.pde_id, class.rationale),
        )
    } else if class.efficient.contains(&id) {
        verdict(Grade::Pass, None, format!("'{id}' is an efficient method for {}", class.pde_id))
    } else {
        verdict(
            Grade::Warn,
            Some(ReasonCode::UnlistedBaseline),
            format!("'{id}' is not listed for {}; efficient methods are {efficient}", class.pde_id),
        )
    }
}

pub fn audit_comparison(claim: &Claim) -> Result<Vec<Verdict>> {
    audit_with_registry(claim, &Registry::builtin())
}

pub fn audit_with_registry(claim: &Claim, registry: &Registry) -> Result<Vec<Verdict>> {
    if claim.front_a.is_empty() || claim.front_b.is_empty() {
        return Err(Error::EmptyClaim("both fronts need at least one point".into()));
    }
    if !(claim.claimed_speedup.is_finite() && claim.claimed_speedup > 0.0) {
        return Err(Error::InvalidInput(format!(
            "claimed speedup must be positive, got {}",
            claim.claimed_speedup
        )));
    }
    let a = ParetoFront::from_points(&claim.declared_baseline_id, &claim.pde_id, &claim.front_a)?;
    let b = ParetoFront::from_points("proposed", &claim.pde_id, &claim.front_b)?;
    Ok(vec![rule1(claim, &a, &b), rule2(claim, registry)])
}
