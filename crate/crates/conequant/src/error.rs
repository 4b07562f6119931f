/// Errors shared by the geometric and algorithmic layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Cone generators are linearly dependent: the cone collapses to a ray or
    /// a line and has no two-dimensional dual base segment.
    #[error("cone generators are linearly dependent")]
    DegenerateCone,

    /// The cone is not pointed with nonempty interior (a halfspace, a line, a
    /// ray, or a point). These cases reduce to univariate or trivial problems
    /// and are refused rather than guessed at.
    #[error("cone is not pointed with nonempty interior; only two-generator cones are supported")]
    UnsupportedCone,

    /// A parameter left its admissible range.
    #[error("{what} outside admissible range")]
    OutOfRange {
        /// Name of the offending parameter.
        what: &'static str,
    },

    /// An operation that needs at least one element received none.
    #[error("input must be nonempty")]
    EmptyInput,

    /// Internal precondition violated; the message names the check.
    #[error("invalid state: {0}")]
    InvalidState(&'static str),
}
