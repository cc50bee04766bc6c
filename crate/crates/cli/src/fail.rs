use std::fmt;

/// A command failure and the exit status it maps to.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Unreadable files or failed writes.
    Io(String),
    /// Malformed input, schema or parameters.
    Validation(Vec<String>),
    /// The request cannot be met by the pool.
    Infeasible(String),
}

impl Failure {
    pub fn io(message: impl Into<String>) -> Self {
        Failure::Io(message.into())
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Failure::Validation(vec![message.into()])
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }
}

impl From<entrofy::Error> for Failure {
    fn from(e: entrofy::Error) -> Self {
        if e.is_infeasible() {
            Failure::Infeasible(e.to_string())
        } else {
            Failure::Validation(e.flatten().iter().map(ToString::to_string).collect())
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io(m) => write!(f, "error: {m}"),
            Failure::Infeasible(m) => write!(f, "infeasible: {m}"),
            Failure::Validation(ms) => {
                write!(f, "validation failed:")?;
                for m in ms {
                    write!(f, "\n  - {m}")?;
                }
                Ok(())
            }
        }
    }
}
