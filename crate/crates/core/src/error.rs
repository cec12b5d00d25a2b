use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {op} needs {expected}, got {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },
    #[error("graph has no vertex weights")]
    MissingVertexWeights,
    #[error("graph has no edge weights")]
    MissingEdgeWeights,
    #[error("graph has no edge colors")]
    MissingEdgeColors,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("{needed} threshold evaluations exceed the budget of {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("weights over the inner dimension are not sorted ascending (index {0})")]
    NotSorted(usize),
    #[error("matrix entry ({row}, {col}) is NaN")]
    NaN { row: usize, col: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A parse failure, tagged with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("missing header")]
    MissingHeader,
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("duplicate weight for vertex {0}")]
    DuplicateVertexWeight(usize),
    #[error("vertex {0} has no weight while others do")]
    PartialVertexWeights(usize),
    #[error("edge weights must be given on every edge or on none")]
    PartialEdgeWeights,
    #[error("edge colors must be given on every edge or on none")]
    PartialEdgeColors,
    #[error("wrong number of fields: {0}")]
    FieldCount(String),
    #[error("{0}")]
    Invalid(String),
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dims(op: &'static str, expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        op,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
