use alloc::string::String;
use core::fmt;

/// Errors raised anywhere in the core crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NonPrime(u64),
    /// A configured size guard would be exceeded. `required` is the number of
    /// items the operation would have had to visit.
    SizeGuardExceeded {
        what: &'static str,
        required: u128,
        limit: u64,
    },
    DivisionByZero,
    FieldMismatch,
    QuiverMismatch,
    UnknownVertex(String),
    DimensionMismatch,
    UnknownClass(String),
    LoopVertex(String),
    InsufficientSamples { needed: usize, got: usize },
    NonIntegerResult(String),
    Overflow(&'static str),
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPrime(p) => write!(f, "{p} is not prime"),
            Error::SizeGuardExceeded {
                what,
                required,
                limit,
            } => write!(
                f,
                "size guard exceeded for {what}: {required} required, limit {limit}"
            ),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::FieldMismatch => f.write_str("operands live in different fields"),
            Error::QuiverMismatch => f.write_str("operands belong to different quivers"),
            Error::UnknownVertex(v) => write!(f, "unknown vertex {v:?}"),
            Error::DimensionMismatch => f.write_str("dimension vectors do not match"),
            Error::UnknownClass(c) => write!(f, "unknown isomorphism class {c:?}"),
            Error::LoopVertex(v) => write!(f, "vertex {v:?} carries a loop"),
            Error::InsufficientSamples { needed, got } => {
                write!(f, "need at least {needed} samples, got {got}")
            }
            Error::NonIntegerResult(v) => write!(f, "expected an integer, got {v}"),
            Error::Overflow(what) => write!(f, "integer overflow in {what}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
