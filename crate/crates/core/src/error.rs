use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("angle {angle} hits singular atom at {atom}")]
    SingularAtomHit { angle: f64, atom: f64 },

    #[error("cannot parse symbol literal `{input}`: {reason}")]
    SymbolSyntax { input: String, reason: String },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("probe exhausted: {0}")]
    ProbeExhausted(String),

    #[error("{0} is not a member of the semigroup")]
    NotAMember(u64),

    #[error("membership bound {bound} too small for {needed} basis vectors")]
    BoundTooSmall { bound: u64, needed: usize },

    #[error("invalid semigroup: {0}")]
    InvalidSemigroup(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid generator system: {0}")]
    InvalidSystem(String),

    #[error("cannot parse word `{input}`: {reason}")]
    WordSyntax { input: String, reason: String },

    #[error("operator does not commute with the shift (residual {residual:e})")]
    NotCommuting { residual: f64 },

    #[error("symbol {0} is a monomial")]
    MonomialSymbol(String),

    #[error("Hankel window D = {0} is too small (need D >= 8)")]
    WindowTooSmall(usize),

    #[error("ball has {size} elements; exhaustive mode is limited to {limit}")]
    BallTooLarge { size: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed operator dump: {0}")]
    Dump(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
