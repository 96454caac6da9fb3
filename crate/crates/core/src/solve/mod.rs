//! Decision procedures.
//!
//! * [`solve_star`]: one 2-connected block plus isolated vertices, any window.
//! * [`algocon`]: window 1, one non-trivial backbone component, by repeatedly
//!   splitting off leaf blocks.
//! * [`exhaustive`]: any instance whose backbone has at most one non-trivial
//!   component, by complete search (the general problem is NP-hard).
//! * [`decide`]: the dispatcher; [`brute_oracle`]: naive ground truth.

mod algocon;
mod assign;
mod exhaustive;
mod star;

pub use algocon::{algocon, split_case_r1, split_case_r2};
pub use exhaustive::exhaustive;
pub use star::solve_star;

use std::fmt;

use thiserror::Error;

use crate::certify::{check_certificate, core_vertices, CertifyError, DrawingCertificate};
use crate::graph::{canonical_faces, enumerate_planar_rotations, GraphError, RotationSystem};
use crate::instance::{Category, InstanceError, StreamedInstance, Violation};

/// Default bound on enumerated rotation systems and on search nodes.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid instance: {}", list(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("wrong category: {0}")]
    WrongCategory(String),
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("operation requires omega = 1, got {0}")]
    UnsupportedOmega(usize),
    #[error("search budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("unsupported instance: {0}")]
    Unsupported(String),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl From<GraphError> for SolveError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::BudgetExceeded { budget, .. } => SolveError::BudgetExceeded { budget },
            other => SolveError::Instance(InstanceError::Graph(other)),
        }
    }
}

impl From<CertifyError> for SolveError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::UnsupportedShape(s) => SolveError::Unsupported(s),
            other => SolveError::WrongShape(other.to_string()),
        }
    }
}

/// Which procedure [`decide`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Auto,
    Algocon,
    Star,
    Exhaustive,
}

/// `(blocks, stream edges between isolated vertices)` of an instance; the
/// window-1 recursion decreases it lexicographically.
pub type Measure = (usize, usize);

/// One applied rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// The instance was split into independent parts.
    Split { parts: usize },
    /// A leaf block was split off. `star` and `rest` are the two children.
    R2 { parent: Measure, star: Measure, rest: Measure },
    /// Clusters of isolated vertices were contracted.
    R1 { parent: Measure, star: Measure, rest: Measure },
    /// Backbone without edges at window 1.
    Base1,
    /// One block, no stream edge between isolated vertices.
    Base2,
    /// Decided by the star solver.
    Star,
    /// Decided by complete search; `np_hard` marks shapes outside the
    /// polynomial cases.
    Exhaustive { np_hard: bool },
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = |x: &Measure| format!("{},{}", x.0, x.1);
        match self {
            Rule::Split { parts } => write!(f, "rule=Split parts={parts}"),
            Rule::R2 { parent, star, rest } => {
                write!(f, "rule=R2 measure={} star={} rest={}", m(parent), m(star), m(rest))
            }
            Rule::R1 { parent, star, rest } => {
                write!(f, "rule=R1 measure={} star={} rest={}", m(parent), m(star), m(rest))
            }
            Rule::Base1 => write!(f, "rule=Base1"),
            Rule::Base2 => write!(f, "rule=Base2"),
            Rule::Star => write!(f, "rule=Star"),
            Rule::Exhaustive { np_hard } => write!(f, "rule=Exhaustive np_hard={np_hard}"),
        }
    }
}

/// A decided sub-instance and its accepted certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub instance: StreamedInstance,
    pub certificate: DrawingCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A certificate for the input instance itself.
    Single(DrawingCertificate),
    /// Certificates for the pieces the input was split into.
    Composite(Vec<Piece>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub answer: bool,
    /// Present iff `answer` is yes.
    pub witness: Option<Witness>,
    pub trace: Vec<Rule>,
}

impl Decision {
    pub(crate) fn no(trace: Vec<Rule>) -> Self {
        Decision { answer: false, witness: None, trace }
    }

    pub(crate) fn yes(certificate: DrawingCertificate, trace: Vec<Rule>) -> Self {
        Decision { answer: true, witness: Some(Witness::Single(certificate)), trace }
    }

    /// The single certificate, if the witness is one.
    pub fn certificate(&self) -> Option<&DrawingCertificate> {
        match &self.witness {
            Some(Witness::Single(c)) => Some(c),
            _ => None,
        }
    }
}

/// Combines decisions of independent parts of `whole` (all must be yes).
fn combine(whole: &StreamedInstance, parts: Vec<(StreamedInstance, Decision)>) -> Decision {
    if parts.len() == 1 {
        return parts.into_iter().next().unwrap().1;
    }
    let mut trace = vec![Rule::Split { parts: parts.len() }];
    let mut pieces = Vec::new();
    let mut answer = true;
    for (instance, d) in parts {
        trace.extend(d.trace);
        if !d.answer {
            answer = false;
            break;
        }
        match d.witness.expect("yes carries a witness") {
            Witness::Single(certificate) => pieces.push(Piece { instance, certificate }),
            Witness::Composite(more) => pieces.extend(more),
        }
    }
    let _ = whole;
    if answer {
        Decision { answer, witness: Some(Witness::Composite(pieces)), trace }
    } else {
        Decision::no(trace)
    }
}

/// Decides whether the instance admits a streamed drawing.
///
/// The instance is first split by connected components of the union graph.
/// In [`Mode::Auto`], window-1 parts are split per backbone component and run
/// through [`algocon`]; star-shaped parts go to [`solve_star`]; anything else
/// with at most one non-trivial backbone component goes to [`exhaustive`].
pub fn decide(i: &StreamedInstance, mode: Mode, limits: Limits) -> Result<Decision, SolveError> {
    let report = i.validate();
    if !report.is_ok() {
        return Err(SolveError::Invalid(report.violations));
    }
    if mode == Mode::Algocon && i.omega() != 1 {
        return Err(SolveError::UnsupportedOmega(i.omega()));
    }
    let mut parts = Vec::new();
    for part in i.union_components() {
        let d = decide_connected(&part, mode, limits)?;
        let no = !d.answer;
        parts.push((part, d));
        if no {
            break;
        }
    }
    Ok(combine(i, parts))
}

fn decide_connected(i: &StreamedInstance, mode: Mode, limits: Limits) -> Result<Decision, SolveError> {
    let shape = i.shape();
    match mode {
        Mode::Star => solve_star(i, limits),
        Mode::Exhaustive => {
            if shape.components <= 1 {
                exhaustive(i, limits)
            } else if i.omega() == 1 {
                per_component(i, |p| exhaustive(p, limits))
            } else {
                Err(unsupported(shape.components))
            }
        }
        Mode::Algocon => per_component(i, |p| algocon(p, limits)),
        Mode::Auto => {
            if i.omega() == 1 {
                per_component(i, |p| algocon(p, limits))
            } else if matches!(shape.category, Category::AllIsolated | Category::Star) {
                solve_star(i, limits)
            } else if shape.components <= 1 {
                exhaustive(i, limits)
            } else {
                Err(unsupported(shape.components))
            }
        }
    }
}

fn unsupported(components: usize) -> SolveError {
    SolveError::Unsupported(format!(
        "{components} non-trivial backbone components share a union component at omega > 1"
    ))
}

fn per_component(
    i: &StreamedInstance,
    mut solve: impl FnMut(&StreamedInstance) -> Result<Decision, SolveError>,
) -> Result<Decision, SolveError> {
    let parts = i.split_connected()?;
    if parts.len() == 1 {
        return solve(i);
    }
    let mut decided = Vec::new();
    for part in parts {
        let d = solve(&part)?;
        let no = !d.answer;
        decided.push((part, d));
        if no {
            break;
        }
    }
    Ok(combine(i, decided))
}

/// Naive ground truth: every planar rotation of the backbone's non-trivial
/// component times every face assignment, each run through
/// [`check_certificate`].
pub fn brute_oracle(i: &StreamedInstance, limits: Limits) -> Result<bool, SolveError> {
    let core = core_vertices(i)?;
    let (core_graph, _) = i.backbone().induced(&core);
    let isolated = i.backbone().isolated_vertices();
    let rotations: Box<dyn Iterator<Item = RotationSystem>> = if core.is_empty() {
        Box::new(std::iter::once(RotationSystem::empty()))
    } else {
        Box::new(enumerate_planar_rotations(&core_graph, limits.budget)?)
    };
    let slots = i.stream().len() + isolated.len();
    for rotation in rotations {
        let faces = canonical_faces(&rotation).len().max(1);
        let total = (faces as u128).checked_pow(slots as u32).unwrap_or(u128::MAX);
        if total > limits.budget as u128 {
            return Err(SolveError::BudgetExceeded { budget: limits.budget });
        }
        let mut digits = vec![0usize; slots];
        loop {
            let certificate = DrawingCertificate {
                rotation: rotation.clone(),
                stream_faces: i.stream().iter().zip(&digits).map(|(e, &f)| (e.position, f)).collect(),
                vertex_faces: isolated
                    .iter()
                    .zip(&digits[i.stream().len()..])
                    .map(|(&q, &f)| (i.label(q).to_owned(), f))
                    .collect(),
            };
            if check_certificate(i, &certificate)?.is_accept() {
                return Ok(true);
            }
            let mut k = 0;
            while k < slots && digits[k] + 1 == faces {
                digits[k] = 0;
                k += 1;
            }
            if k == slots {
                break;
            }
            digits[k] += 1;
        }
    }
    Ok(false)
}
