use serde::Serialize;

use super::{invalid, Interval, UncertaintyError, MASS_TOL};

/// A finite Dempster–Shafer structure: focal intervals with masses summing
/// to one, all inside a declared support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DsStructure {
    support: Interval,
    focal: Vec<(Interval, f64)>,
}

impl DsStructure {
    pub fn new(support: Interval, focal: Vec<(Interval, f64)>) -> Result<Self, UncertaintyError> {
        if focal.is_empty() {
            return Err(invalid("DS structure needs at least one focal element"));
        }
        let mut total = 0.0;
        for (k, (iv, m)) in focal.iter().enumerate() {
            if !m.is_finite() || *m < 0.0 {
                return Err(invalid(format!("focal element {k} has invalid mass {m}")));
            }
            if !support.contains_interval(iv) {
                return Err(invalid(format!(
                    "focal element {k} {iv} is outside the support {support}"
                )));
            }
            total += m;
        }
        if (total - 1.0).abs() > MASS_TOL {
            return Err(invalid(format!("focal masses sum to {total}, expected 1")));
        }
        Ok(Self { support, focal })
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn focal(&self) -> &[(Interval, f64)] {
        &self.focal
    }

    pub fn len(&self) -> usize {
        self.focal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focal.is_empty()
    }

    /// `Σ m · lo`, the lower expectation of the identity.
    pub fn lower_mean(&self) -> f64 {
        self.focal.iter().map(|(iv, m)| m * iv.lo()).sum()
    }

    /// `Σ m · hi`, the upper expectation of the identity.
    pub fn upper_mean(&self) -> f64 {
        self.focal.iter().map(|(iv, m)| m * iv.hi()).sum()
    }
}
