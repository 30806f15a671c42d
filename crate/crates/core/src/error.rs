use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("size limit exceeded for {what}: requested {requested}, cap {cap}")]
    SizeLimit {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("eigensolver did not converge on the block {lo}..={hi}")]
    NonConvergence { lo: usize, hi: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
