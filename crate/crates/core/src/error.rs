use thiserror::Error;

/// Errors raised by structure construction, checks and searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid vertex name `{0}`")]
    InvalidName(String),
    #[error("degenerate block {{{0}, {1}, {2}}}: members must be distinct")]
    DegenerateBlock(String, String, String),
    #[error("pair {{{a}, {b}}} lies in two blocks (third members `{first}` and `{second}`)")]
    PairReuse {
        a: String,
        b: String,
        first: String,
        second: String,
    },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("resource limit: {what} would need {needed} vertices (cap {cap})")]
    ResourceLimit {
        what: String,
        needed: usize,
        cap: usize,
    },
    #[error("structure has {size} vertices, above the cap of {cap} for {what}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("missing assignment for generator g{0}")]
    MissingAssignment(usize),
    #[error("sequence is not a permutation of the vertices: {0}")]
    NotAPermutation(String),
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("set is not closed under down-blocks: `{0}` needs `{1}`")]
    NotClosed(String, String),
    #[error("set is not an initial segment below the closed set: {0}")]
    NotInitialSegment(String),
    #[error("interpolated ordering failed verification at `{0}`")]
    ResultNotHF(String),
    #[error("base is confined: no hyperfree ordering of the base exists")]
    BaseConfined,
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("invalid glue map: {0}")]
    InvalidGlue(String),
    #[error("base is not strong in the left structure")]
    BaseNotStrong,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("search exhausted in F({generators},{levels}); retry with F({suggest_generators},{suggest_levels})")]
    NeedDeeper {
        generators: usize,
        levels: usize,
        suggest_generators: usize,
        suggest_levels: usize,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
