//! Least-squares trend fitting and k-means clustering.

mod kmeans;
mod trend;

pub use kmeans::{kmeans, Clustering};
pub use trend::{fit_trend, predict, Prediction, TimePoint, TrendModel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("all time points are identical; the trend is vertical")]
    DegenerateTime,
    #[error("value at index {0} is not finite")]
    NonFinite(usize),
    #[error("no vectors to cluster")]
    Empty,
    #[error("k = {k} is outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("vector {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("max_iter must be positive")]
    ZeroIterations,
}
