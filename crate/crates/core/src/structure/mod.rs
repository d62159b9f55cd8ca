//! Verifiers and desk-scale searches for the structures behind the
//! Erdős–Pósa argument for balls: sparse and localized center sets, Ramsey
//! colorings, interference matrices, independent pairs with their root
//! sections, escapes, jump paths, and disconnecting families.
//!
//! Nothing here instantiates the Ramsey-sized objects of the full argument;
//! each piece is either checked on a given candidate or searched for on
//! small inputs.

mod disconnect;
mod equidistant;
mod escape;
mod interference;
mod jump;
mod pairs;
mod ramsey;
mod sparse;

pub use disconnect::{
    middle_vertex_gadget, shatter_certificate, verify_disconnecting, DisconnectCheck, DisconnectViolation,
    DisconnectingFamily, PairSet, ShatterCertificate, TraceEquation,
};
pub use equidistant::{equidistant_disconnecting, EquidistantFamily};
pub use escape::{escape_analysis, EscapeAnalysis, EscapeArc, EscapeDigraph};
pub use interference::{
    bad_pair_fraction_bound, proper_submatrix, random_interference_matrix, union_bound_tries, InterferenceMatrix,
    SearchMode, SubmatrixSearch, EXACT_SUBMATRIX_NODE_BUDGET, SUBMATRIX_SEED,
};
pub use jump::{jump_paths, jump_system, JumpPath, JumpPaths, JumpSystem, PathAudit, JUMP_PATH_ENUMERATION_CAP};
pub use pairs::{
    audit_pair_context, build_pair_context, critical_interference_matrix, independence_violation, independent_subpair,
    is_independent, IndependenceViolation, IndependentSubpair, PairAudit, PairContext, PairPath,
};
pub use ramsey::{distance_coloring, ramsey_extract, EdgeColoring, RamseyOutcome, RAMSEY_VERTEX_CAP};
pub use sparse::{
    ball_loads, localized_check, localized_window, pair_localized_check, sparsity_check, LocalizedReport,
    SparsityReport,
};
