use serde::Serialize;

use super::{invalid, UncertaintyError};

/// A closed, finite interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, UncertaintyError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(invalid(format!("interval endpoints must be finite, got [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(invalid(format!("interval has lo > hi: [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval `[v, v]`.
    pub fn point(v: f64) -> Result<Self, UncertaintyError> {
        Self::new(v, v)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }

    /// `k` evenly spaced points from `lo` to `hi` inclusive; a single point
    /// when the interval is degenerate or `k < 2`.
    pub fn grid(&self, k: usize) -> Vec<f64> {
        if self.is_degenerate() || k < 2 {
            return vec![self.lo];
        }
        let last = (k - 1) as f64;
        (0..k)
            .map(|i| {
                if i == k - 1 {
                    self.hi
                } else {
                    self.lo + self.width() * (i as f64) / last
                }
            })
            .collect()
    }

    /// The endpoints, deduplicated.
    pub fn endpoints(&self) -> Vec<f64> {
        if self.is_degenerate() {
            vec![self.lo]
        } else {
            vec![self.lo, self.hi]
        }
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
