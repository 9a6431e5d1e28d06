//! Process exit codes. Scripts depend on these; do not renumber.
//!
//! | code | meaning                                             |
//! |------|-----------------------------------------------------|
//! | 0    | success                                             |
//! | 1    | a check failed (verification, compression report)   |
//! | 2    | bad input: usage, parse, dimension or missing file  |
//! | 3    | target outside the hull (infeasible)                |
//! | 4    | candidate pool exhausted                            |
//! | 5    | linear program numerically unstable                 |
//! | 6    | size cap exceeded                                   |
//! | 7    | I/O failure while writing outputs                   |
//! | 70   | internal error                                      |

use std::fmt;

pub const OK: u8 = 0;
pub const CHECK_FAILED: u8 = 1;
pub const BAD_INPUT: u8 = 2;
pub const INFEASIBLE: u8 = 3;
pub const POOL_EXHAUSTED: u8 = 4;
pub const UNSTABLE: u8 = 5;
pub const SIZE_CAP: u8 = 6;
pub const IO: u8 = 7;
pub const INTERNAL: u8 = 70;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn bad_input(message: impl Into<String>) -> Self {
        Failure::new(BAD_INPUT, message)
    }

    pub fn check_failed(message: impl Into<String>) -> Self {
        Failure::new(CHECK_FAILED, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure::new(IO, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Failure::new(INTERNAL, message)
    }

    /// For errors raised while reading user-supplied inputs.
    pub fn reading(what: &str, err: tchakaloff::Error) -> Self {
        match err {
            tchakaloff::Error::Io(e) => Failure::bad_input(format!("cannot read {what}: {e}")),
            other => Failure::bad_input(format!("{what}: {other}")),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<tchakaloff::Error> for Failure {
    fn from(err: tchakaloff::Error) -> Self {
        use tchakaloff::Error as E;
        let code = match &err {
            E::DimensionMismatch { .. }
            | E::NonFinite(_)
            | E::Unsupported(_)
            | E::InvalidInput(_)
            | E::EmptySamples
            | E::Parse { .. } => BAD_INPUT,
            E::Infeasible { .. } => INFEASIBLE,
            E::PoolExhausted { .. } => POOL_EXHAUSTED,
            E::NumericallyUnstable { .. } => UNSTABLE,
            E::SizeCap { .. } => SIZE_CAP,
            E::Io(_) => IO,
        };
        Failure::new(code, err.to_string())
    }
}
