//! Scenario verifiers and their reports.

pub mod identities;
pub mod pairs;
pub mod plan;
pub mod replay;
pub mod scans;
pub mod sets;
pub mod verdict;

pub use identities::{commutator_identity_scan, inversion_identity_scan, l2q_laurent_scan, l2q_trace_identity, laurent_degree};
pub use pairs::{bf_pair_direct, conjugates, wreath_free_pair_check};
pub use replay::replay_witness;
pub use scans::{o3_reflections, reflections_o3_scan, sl2n3_scan, symmetric_bf_scan};
pub use sets::{cc_inverse_check, commutator_closed_check, DEFAULT_PAIR_CAP};
pub use plan::{PlanMode, ScanPlan};
pub use verdict::{emit_report, overall_status, ReportFormat, Status, Verdict, Witness};
