//! Fair cost–accuracy comparison: timing, sweeps, Pareto fronts, matching at
//! equal accuracy or runtime, break-even counts and claim audits.

pub mod audit;
pub mod breakeven;
pub mod matching;
pub mod pareto;
pub mod record;
pub mod sweep;
pub mod timing;

pub use audit::{audit_comparison, audit_with_registry, Claim, Grade, ReasonCode, Registry, Rule, Verdict};
pub use breakeven::{breakeven_n, BreakEvenInputs};
pub use matching::{cost_at_error, error_at_cost, match_equal_accuracy, match_equal_runtime, AccuracyReport, SpeedupReport};
pub use pareto::{build_pareto_front, FrontPoint, ParetoFront};
pub use record::{config_digest, BenchRecord, TOOL_VERSION};
pub use sweep::{sweep_cost_accuracy, sweep_cost_accuracy_parallel, SweepReference, SweepSpec};
pub use timing::{time_operation, time_with_output, RuntimeStats};
