use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input did not match the expected JSON layout. `path` is a JSON path
    /// such as `values[1][0][2]`.
    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("{path}: expected {expected} entries, found {found}")]
    Dimension {
        path: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The instance falls outside the class an algorithm supports.
    #[error("unsupported instance: {0}")]
    Unsupported(String),

    /// An exhaustive search would exceed its configured budget.
    #[error("capacity exceeded: {what} needs {needed} evaluations, limit is {limit}")]
    Capacity { what: String, needed: u128, limit: u128 },

    /// A condition that a correct solver guarantees did not hold.
    #[error("internal solver failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}
