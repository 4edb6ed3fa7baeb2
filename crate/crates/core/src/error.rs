use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("simplex budget exceeded: {required} maximal simplices requested, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("vertex {vertex}: label point {label} leaves the affine hull of its supporting face {support:?}")]
    AffineHull {
        vertex: usize,
        label: String,
        support: Vec<usize>,
    },

    /// A preference oracle broke the full division assumption (or returned nothing).
    #[error("assumption violated{}: {reason}", player.map(|p| format!(" by player {p}")).unwrap_or_default())]
    Assumption { player: Option<usize>, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// No fully-labeled simplex where one is guaranteed. `instance` is a JSON dump
    /// of the triangulation and labeling that can be replayed.
    #[error("no fully-labeled simplex found for n = {n}")]
    TheoremViolation { n: usize, instance: String },

    #[error("malformed input: {0}")]
    Parse(String),
}
