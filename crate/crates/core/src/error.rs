use thiserror::Error;

/// Errors raised by the library.
///
/// `NonIntegral` and `InexactDivision` are never expected on valid input:
/// they mean a claimed exact identity failed and are surfaced loudly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus must be a positive integer, got {0}")]
    ZeroModulus(u64),

    #[error("{0} is even; the sign-similarity check needs an odd modulus")]
    EvenModulus(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("empty range {from}..={to}")]
    EmptyRange { from: u64, to: u64 },

    #[error("entry ({row}, {col}) of n*G_n^-1 for n = {n} is {value}, not an integer")]
    NonIntegral {
        n: u64,
        row: usize,
        col: usize,
        value: String,
    },

    #[error("inexact division in {context}")]
    InexactDivision { context: &'static str },

    #[error("matrix is singular")]
    Singular,

    #[error("eigenvalue {0:e} is not positive")]
    NotPositiveDefinite(f64),

    #[error("float oracle for c_{n}({t}) left residue {residue:e}")]
    OracleTolerance { n: u64, t: i64, residue: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
