use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::temporal::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimePoint {
    pub t: Instant,
    pub value: f64,
}

impl TimePoint {
    pub fn new(t: Instant, value: f64) -> Self {
        TimePoint { t, value }
    }
}

/// `value ≈ slope · (t − t_ref) + intercept`, with `t` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendModel {
    pub slope: f64,
    pub intercept: f64,
    /// Earliest sample time.
    pub t_ref: Instant,
    /// Latest sample time.
    pub t_last: Instant,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub value: f64,
    /// `t` lies outside `[t_ref, t_last]`.
    pub extrapolated: bool,
}

/// Ordinary least-squares line through the points.
pub fn fit_trend(points: &[TimePoint]) -> Result<TrendModel, AnalyticsError> {
    if points.len() < 2 {
        return Err(AnalyticsError::TooFewPoints(points.len()));
    }
    if let Some(i) = points.iter().position(|p| !p.value.is_finite()) {
        return Err(AnalyticsError::NonFinite(i));
    }
    let t_ref = points.iter().map(|p| p.t).min().unwrap();
    let t_last = points.iter().map(|p| p.t).max().unwrap();
    if t_ref == t_last {
        return Err(AnalyticsError::DegenerateTime);
    }
    let n = points.len() as f64;
    let x = |p: &TimePoint| (p.t.secs() - t_ref.secs()) as f64;
    let x_mean = points.iter().map(x).sum::<f64>() / n;
    let y_mean = points.iter().map(|p| p.value).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for p in points {
        let dx = x(p) - x_mean;
        sxy += dx * (p.value - y_mean);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    Ok(TrendModel { slope, intercept: y_mean - slope * x_mean, t_ref, t_last, n: points.len() })
}

pub fn predict(model: &TrendModel, t: Instant) -> Prediction {
    let dt = (t.secs() as f64) - (model.t_ref.secs() as f64);
    Prediction { value: model.slope * dt + model.intercept, extrapolated: t < model.t_ref || t > model.t_last }
}
