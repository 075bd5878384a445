use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands live over different generator tables or coefficient rings.
    TableMismatch { left: String, right: String },
    /// A generator image violates the degree/parity contract.
    Substitution(String),
    /// Malformed serialized polynomial; `pos` is the byte offset.
    Parse { pos: usize, msg: String },
    /// Input to a symmetric-basis conversion is not symmetric.
    NotSymmetric,
    /// Operation requires a homogeneous input.
    Inhomogeneous,
    /// Argument outside the operation's domain.
    OutOfRange(String),
    /// Matrix entries are not an SL_2 element.
    NotSpecialLinear,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TableMismatch { left, right } => {
                write!(f, "table mismatch: {left} vs {right}")
            }
            Error::Substitution(msg) => write!(f, "substitution error: {msg}"),
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::NotSymmetric => write!(f, "polynomial is not symmetric"),
            Error::Inhomogeneous => write!(f, "polynomial is not homogeneous"),
            Error::OutOfRange(msg) => write!(f, "argument out of range: {msg}"),
            Error::NotSpecialLinear => write!(f, "matrix does not have determinant 1"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
