use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("size {requested} exceeds configured cap {cap} ({context})")]
    SizeCap {
        context: &'static str,
        requested: String,
        cap: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty sample set")]
    EmptySamples,

    #[error("target lies outside the convex hull of the candidate lifts (phase-one objective {phase_one_objective:.3e})")]
    Infeasible { phase_one_objective: f64 },

    #[error("linear program numerically unstable{}: {reason}", pool_context(*.pool))]
    NumericallyUnstable { reason: String, pool: Option<usize> },

    #[error("candidate pool exhausted at {max_pool} points without reaching the moment vector")]
    PoolExhausted { max_pool: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn pool_context(pool: Option<usize>) -> String {
    match pool {
        Some(n) => format!(" at pool size {n}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
