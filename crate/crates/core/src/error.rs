use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("cost spec is empty")]
    Empty,
    #[error("letter cost must be a positive finite number, got {0}")]
    NonPositiveCost(f64),
    #[error("alphabet needs at least two letters, got {0}")]
    TooFewLetters(usize),
    #[error("cannot parse cost spec: {0}")]
    Parse(String),
    #[error("characteristic equation has no positive root")]
    NoRoot,
    #[error("characteristic sum diverges everywhere tested: {0}")]
    DivergentSpec(String),
    #[error("sum of c_m 2^(-c c_m) diverges")]
    DivergentTail,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodeError {
    #[error("no probabilities given")]
    Empty,
    #[error("probability at position {index} is negative or not finite: {value}")]
    InvalidProbability { index: usize, value: f64 },
    #[error("all probabilities are zero")]
    AllZero,
    #[error("probabilities sum to {0}, not 1 (pass normalize to rescale)")]
    NotNormalized(f64),
    #[error("bin {bin} has zero width while positive mass remains at node covering {l}..={r}")]
    BinUnderflow { bin: usize, l: usize, r: usize },
    #[error("unknown input index {0}")]
    UnknownIndex(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("bound needs a finite alphabet")]
    InfiniteAlphabet,
    #[error("beta is infinite")]
    BetaInfinite,
    #[error("letter multiplicities d_j are unbounded")]
    UnboundedProfile,
    #[error("epsilon must lie in (0, 1/2], got {0}")]
    InvalidEpsilon(f64),
    #[error("no cost threshold found within {0} levels")]
    ScanExhausted(usize),
    #[error("costs are not normalized (c_1 = {0})")]
    NotNormalized(f64),
    #[error(transparent)]
    Cost(#[from] CostError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for exhaustive search (n = {n}, t = {}; limits n <= 10, t <= 4)", t.map_or("infinite".to_string(), |t| t.to_string()))]
    TooLarge { n: usize, t: Option<usize> },
    #[error("no prefix-free code with cost at most {0}")]
    CapTooSmall(f64),
}

/// Crate-level error used where several stages are chained.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot parse probabilities: {0}")]
    ProbParse(String),
}

impl Error {
    /// Short machine-readable reason code.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::Cost(CostError::Parse(_)) | Error::ProbParse(_) => "parse",
            Error::Cost(CostError::NoRoot) => "no-root",
            Error::Cost(CostError::DivergentSpec(_)) => "divergent-spec",
            Error::Cost(CostError::DivergentTail) => "divergent-tail",
            Error::Cost(_) => "invalid-costs",
            Error::Code(CodeError::BinUnderflow { .. }) => "bin-underflow",
            Error::Code(_) => "invalid-probabilities",
            Error::Analysis(_) => "bound-unavailable",
            Error::Oracle(OracleError::TooLarge { .. }) => "oracle-too-large",
            Error::Oracle(OracleError::CapTooSmall(_)) => "oracle-cap",
        }
    }
}
