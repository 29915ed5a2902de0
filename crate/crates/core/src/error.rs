use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    /// A profile fails discrete convexity; `gap` is how far node `index`
    /// sits above its neighbouring chord (or tail line).
    #[error("convexity violated at node {index}: chord gap {gap:e}")]
    Convexity { index: usize, gap: f64 },

    #[error("slope window [{lo}, {hi}] is not inside [0, {c}]")]
    Window { lo: String, hi: String, c: String },

    #[error("infeasible class: Lelong numbers sum to more than the class mass")]
    InfeasibleClass,

    #[error("envelope is identically -inf: no slope in [{lo}, {hi}] fits under the obstacle")]
    EmptyEnvelope { lo: String, hi: String },

    #[error("shift parameter infeasible: {0}")]
    Feasibility(String),

    #[error("singularity types differ: tails ({0}) vs ({1})")]
    SingularityType(String, String),

    #[error("integral diverges for index {j}")]
    Divergence { j: usize },

    #[error("Gram matrix numerically singular (condition {cond:e})")]
    Conditioning { cond: f64 },

    #[error("no admissible sections at k = {k}")]
    NoSections { k: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
