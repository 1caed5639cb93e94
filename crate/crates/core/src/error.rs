use std::fmt;

/// A segment that came up short, which makes the whole limb (and MRP) fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenerationFailure {
    pub q: u32,
    pub id_seg: u16,
    pub accepted: usize,
    pub required: usize,
}

impl fmt::Display for GenerationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={} id_seg={} accepted {}/{}",
            self.q, self.id_seg, self.accepted, self.required
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("generation failure: {0}")]
    Generation(GenerationFailure),

    #[error("no valid seed found after {attempts} attempts")]
    RetriesExhausted { attempts: usize },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
