use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An index or count outside its admissible interval.
    #[error("{what} = {value} is out of range [{lo}, {hi}]")]
    Range {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A tensor failed one of its algebraic symmetry checks.
    #[error("{identity} violated: worst residual {residual:.3e} exceeds {tolerance:.1e}")]
    Validation {
        identity: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error(transparent)]
    Parse(#[from] crate::chart::expr::ParseError),

    #[error("evaluation error: {0}")]
    Eval(String),

    /// Chart file rejected; `path` is a JSON path such as `$.samples.grid.counts[1]`.
    #[error("chart schema error at {path}: {message}")]
    Schema { path: String, message: String },

    /// A chart point that cannot be analysed (indefinite metric, stencil off the domain, ...).
    #[error("point rejected: {0}")]
    PointRejected(String),
}

pub(crate) fn check_range(what: &'static str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::Range {
            what,
            value: value as i64,
            lo: lo as i64,
            hi: hi as i64,
        });
    }
    Ok(())
}
