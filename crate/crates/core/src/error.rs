use thiserror::Error;

use crate::chords::Chord;
use crate::circle::Angle;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid degree {0}, expected at least 2")]
    InvalidDegree(u32),
    #[error("circular order needs three pairwise distinct angles")]
    DegenerateTriple,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("chord {0} has no sibling decomposition")]
    NoSiblingDecomposition(Chord),
    #[error("invalid critical portrait: {0}")]
    InvalidPortrait(String),
    #[error("pullback of {0} is not determined by the choice policy")]
    AmbiguousPullback(Chord),
    #[error("not a lamination ({rule}): {}", fmt_classes(witness))]
    NotALamination {
        rule: &'static str,
        witness: Vec<Vec<Angle>>,
    },
    #[error("not invariant ({rule}): {}", fmt_classes(std::slice::from_ref(witness)))]
    NotInvariant {
        rule: &'static str,
        witness: Vec<Angle>,
    },
    #[error("leaves {0} and {1} are linked")]
    Linked(Chord, Chord),
    #[error("cone vertex {0} is not periodic")]
    UnsupportedVertex(Angle),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invariance violation: {0}")]
    InvarianceViolation(String),
    #[error("gap is not periodic")]
    NotPeriodic,
    #[error("geolamination has no leaves")]
    EmptyLamination,
    #[error("longest leaves are not a sibling pair: {0:?}")]
    InconsistentMajors(Vec<Chord>),
    #[error("critical set not found at this depth")]
    UndeterminedCritical,
    #[error("{0} is not a leaf of the quadratic minor lamination")]
    NotAMinor(Chord),
    #[error("wrong input: {0}")]
    WrongInput(String),
    #[error("class of {0} is not resolved at the available period bound")]
    InsufficientPeriod(Angle),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn fmt_classes(classes: &[Vec<Angle>]) -> String {
    classes
        .iter()
        .map(|c| {
            let inner: Vec<String> = c.iter().map(|a| a.to_string()).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}
