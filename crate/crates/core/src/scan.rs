//! Parameter ranges for sweeps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("scan needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("scan start {start} must be below stop {stop}")]
    EmptyRange { start: f64, stop: f64 },
    #[error("log spacing needs a positive start, got {0}")]
    NonPositiveLogStart(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `count` points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRange", into = "RawRange")]
pub struct Range {
    start: f64,
    stop: f64,
    count: usize,
    spacing: Spacing,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    start: f64,
    stop: f64,
    count: usize,
    #[serde(default)]
    spacing: Spacing,
}

impl TryFrom<RawRange> for Range {
    type Error = ScanError;
    fn try_from(r: RawRange) -> Result<Self, ScanError> {
        Range::new(r.start, r.stop, r.count, r.spacing)
    }
}

impl From<Range> for RawRange {
    fn from(r: Range) -> Self {
        RawRange {
            start: r.start,
            stop: r.stop,
            count: r.count,
            spacing: r.spacing,
        }
    }
}

impl Range {
    pub fn new(start: f64, stop: f64, count: usize, spacing: Spacing) -> Result<Self, ScanError> {
        if count < 2 {
            return Err(ScanError::TooFewPoints(count));
        }
        // Written so that NaN fails too.
        if !(start < stop && start.is_finite() && stop.is_finite()) {
            return Err(ScanError::EmptyRange { start, stop });
        }
        if spacing == Spacing::Log && start <= 0.0 {
            return Err(ScanError::NonPositiveLogStart(start));
        }
        Ok(Range {
            start,
            stop,
            count,
            spacing,
        })
    }

    pub fn linear(start: f64, stop: f64, count: usize) -> Result<Self, ScanError> {
        Range::new(start, stop, count, Spacing::Linear)
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Result<Self, ScanError> {
        Range::new(start, stop, count, Spacing::Log)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// The sample points. Endpoints are exact.
    pub fn values(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == last {
                    return self.stop;
                }
                let f = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(f),
                }
            })
            .collect()
    }
}
