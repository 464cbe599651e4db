use thiserror::Error;

/// Errors produced by parsing, validation and the counting engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An arithmetic precondition was violated (zero denominator, negative truncation input).
    #[error("domain error: {0}")]
    Domain(String),

    /// Election text or JSON could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The input is well formed but unsuitable for the requested operation.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Ballots violating a method's name-count limit.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// An exhaustive search would exceed its configured budget.
    #[error("search budget exceeded: {count} candidate sets to examine, budget is {budget}")]
    Budget { count: u128, budget: u128 },

    /// Tie enumeration produced more branches than allowed.
    #[error("tie enumeration exceeded limit {limit}; partial outcomes: {}", render_partial(.partial))]
    TieOverflow {
        limit: usize,
        partial: Vec<Vec<String>>,
    },

    /// Fewer supported candidates than open seats.
    #[error("round {round}: only {supported} supported candidates for {open} open seats")]
    UnderSupport {
        round: usize,
        supported: usize,
        open: usize,
    },

    /// The operation is not defined for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn render_partial(partial: &[Vec<String>]) -> String {
    let sets: Vec<String> = partial
        .iter()
        .map(|s| format!("{{{}}}", s.join(",")))
        .collect();
    sets.join(" ")
}

pub type Result<T> = std::result::Result<T, Error>;
