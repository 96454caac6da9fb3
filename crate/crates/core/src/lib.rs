//! Streamed planarity with a backbone graph.
//!
//! An instance is a planar backbone graph plus a stream of extra edges, each
//! alive for `omega` consecutive time steps. A drawing fixes one planar
//! embedding of the backbone; every stream edge is drawn inside a single face,
//! and edges alive at the same time must not cross.

pub mod certify;
pub mod dot;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod reduce;
pub mod solve;

pub use certify::{
    certificate_of_trivial, check_certificate, CertificateFile, CertifyError, CheckReport,
    DrawingCertificate, RejectReason,
};
pub use dot::export_dot;
pub use generate::{random_instance, random_tree_instance};
pub use instance::{
    Category, Classification, InstanceError, InstanceFile, StreamEdge, StreamedInstance,
    ValidationReport, Violation,
};
pub use reduce::{
    sefe_brute_check, star_to_sefe, theorem1_generate, GadgetReport, ReduceError, SefeGraph, SefeInstance,
};
pub use solve::{
    algocon, brute_oracle, decide, exhaustive, solve_star, split_case_r1, split_case_r2, Decision,
    Limits, Measure, Mode, Piece, Rule, SolveError, Witness, DEFAULT_BUDGET,
};
