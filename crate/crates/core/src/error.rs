use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// The variants map one-to-one onto the CLI exit codes: structural and
/// parameter errors are usage problems, domain errors reject inputs outside an
/// operation's scope, and resource errors mean a search budget ran out.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Shapes, arities, carriers or rigs do not line up.
    #[error("structural error: {0}")]
    Structural(String),
    /// A parameter is outside its documented range.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The operation is not defined for this kind of input.
    #[error("domain error: {0}")]
    Domain(String),
    /// A search exceeded its node budget.
    #[error("resource error: visited {visited} nodes, budget {budget} exhausted")]
    Resource { visited: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn parameter(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
