//! Positive definiteness and positive semidefiniteness of symmetric linear
//! parametric interval matrices `A(p) = Σ A⁽ᵏ⁾ pₖ`, `p` in a box.
//!
//! Strong (every parameter) and weak (some parameter) variants are decided
//! through reduced vertex enumeration, PSD-splitting sufficient and necessary
//! conditions, and a regularity route based on midpoint preconditioning. The
//! [`hessian`] module applies this to convexity of cubic polynomials on boxes.

pub mod definiteness;
pub mod error;
pub mod hessian;
pub mod interval;
pub mod linalg;
pub mod oracle;
pub mod parametric;

pub use definiteness::{decide, decide_with, Certificate, Goal, Method, MethodChoice, Options, Status, Verdict};
pub use error::{Error, Result};
pub use hessian::{certify_convexity, hessian, CubicPolynomial};
pub use interval::{Interval, IntervalMatrix};
pub use linalg::{Matrix, Property, PsdSplit, SymMatrix, Tolerance};
pub use parametric::{ParameterBox, ParametricSymMatrix};
