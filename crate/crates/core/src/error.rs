use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interval [{inf}, {sup}]")]
    InvalidInterval { inf: f64, sup: f64 },

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e}, allowed {allowed:e})")]
    Asymmetric { asymmetry: f64, allowed: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NotConverged { sweeps: usize },

    #[error("matrix is singular to working precision (pivot {pivot:e})")]
    Singular { pivot: f64 },

    #[error("parameter {index} = {value} lies outside [{inf}, {sup}]")]
    OutsideBox {
        index: usize,
        value: f64,
        inf: f64,
        sup: f64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("parse error at {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("term at {pos} has degree {degree}; at most 3 is supported")]
    Degree { pos: usize, degree: u32 },

    #[error("unknown variable `{name}` at {pos}")]
    UnknownVariable { pos: usize, name: String },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
