//! Error type shared by all modules.
//!
//! Arithmetic errors raised during jet evaluation carry the path of the
//! failing AST node (outermost node first) so that a bad component in a
//! large manifest can be located from the message alone.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Expression text failed to parse; `offset` is a byte offset into the input.
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// An identifier is neither a coordinate, the imaginary unit, nor a known function.
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// Manifest JSON is malformed or violates the schema.
    #[error("manifest schema error: {0}")]
    Schema(String),

    /// Sizes disagree (component rows, sample box rows, point length, ...).
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A holomorphic or frame manifest contains a non-holomorphic construct.
    #[error("holomorphy violation: {0}")]
    HolomorphyViolation(String),

    /// A construction requires real-analytic components but found none usable.
    #[error("non-analytic component: {0}")]
    NonAnalyticComponent(String),

    /// Division by a value too close to zero. `path` locates the AST node.
    #[error("division by near-zero value (|denominator| = {denominator:.3e}) at {path}")]
    DivisionNearZero { denominator: f64, path: String },

    /// Argument of `sqrt`/`log` on the principal branch cut (or a pole of the
    /// derivative, such as `sqrt(0)`).
    #[error("branch cut violation: {func}({value}) at {path}")]
    BranchCut {
        func: &'static str,
        value: String,
        path: String,
    },

    /// Evaluation produced a non-finite number.
    #[error("non-finite value at {path}")]
    NonFinite { path: String },

    /// Evaluation over the real field produced a nonzero imaginary part
    /// outside any `re`/`im` node.
    #[error("nonzero imaginary part {imag:.3e} in real-field evaluation at {path}")]
    NonRealResult { imag: f64, path: String },

    /// Metric matrix is numerically singular at the sample point.
    #[error("singular metric (|det| = {det:.3e}, threshold {threshold:.3e})")]
    SingularMetric { det: f64, threshold: f64 },

    /// Frame matrix is numerically singular at the sample point.
    #[error("singular frame (|det| = {det:.3e}, threshold {threshold:.3e})")]
    FrameSingular { det: f64, threshold: f64 },

    /// An eigenvalue is too close to zero for the signature to be trusted.
    #[error("near-null eigenvalue {value:.3e} (max |eigenvalue| {max_abs:.3e}); signature is ill-determined")]
    NearNullEigenvalue { value: f64, max_abs: f64 },

    /// A construction needs an even real dimension but got an odd one.
    #[error("odd real dimension {0}; adapted coordinates need dimension 2m")]
    OddDimension(usize),

    /// A construction would exceed the supported dimension cap.
    #[error("dimension limit exceeded: {requested} > {limit}")]
    DimensionLimit { requested: usize, limit: usize },

    /// Catalog lookup failed.
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    /// Catalog parameter outside its documented range.
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    /// Too many sample points had to be skipped for a check to be meaningful.
    #[error("numerical failure in check `{check}`: {skipped} of {points} sample points skipped (budget {budget_percent}%)")]
    SkipBudgetExceeded {
        check: String,
        skipped: usize,
        points: usize,
        budget_percent: usize,
    },
}

impl Error {
    /// Prefix the AST path of an arithmetic error with an enclosing node label.
    ///
    /// Non-arithmetic errors are returned unchanged.
    #[must_use]
    pub fn in_node(mut self, label: &str) -> Self {
        match &mut self {
            Error::DivisionNearZero { path, .. }
            | Error::BranchCut { path, .. }
            | Error::NonFinite { path, .. }
            | Error::NonRealResult { path, .. } => {
                if path.is_empty() {
                    *path = label.to_string();
                } else {
                    *path = format!("{label}.{path}");
                }
                self
            }
            _ => self,
        }
    }

    /// True for errors that mark a single bad sample point (the point can be
    /// skipped and counted) rather than a structural problem with the input.
    #[must_use]
    pub fn is_pointwise(&self) -> bool {
        matches!(
            self,
            Error::DivisionNearZero { .. }
                | Error::BranchCut { .. }
                | Error::NonFinite { .. }
                | Error::SingularMetric { .. }
                | Error::FrameSingular { .. }
                | Error::NearNullEigenvalue { .. }
        )
    }
}
