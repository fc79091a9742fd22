use serde::Serialize;

use super::{invalid, UncertaintyError};

/// A nondecreasing cumulative distribution function given by knots
/// `(value, probability)` with strictly increasing values.
///
/// Both variants are zero strictly left of the first knot and equal to the
/// last knot's probability from the last knot onwards.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "points", rename_all = "snake_case")]
pub enum Cdf {
    /// Right-continuous step function: `F(v)` is the probability of the last
    /// knot at or left of `v`.
    Step(Vec<(f64, f64)>),
    /// Linear interpolation between knots.
    Linear(Vec<(f64, f64)>),
}

impl Cdf {
    pub fn step(points: Vec<(f64, f64)>) -> Result<Self, UncertaintyError> {
        validate_knots(&points)?;
        Ok(Cdf::Step(points))
    }

    pub fn linear(points: Vec<(f64, f64)>) -> Result<Self, UncertaintyError> {
        validate_knots(&points)?;
        Ok(Cdf::Linear(points))
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        match self {
            Cdf::Step(k) | Cdf::Linear(k) => k,
        }
    }

    pub fn validate(&self) -> Result<(), UncertaintyError> {
        validate_knots(self.knots())
    }

    /// `F(v)`.
    pub fn eval(&self, v: f64) -> f64 {
        let knots = self.knots();
        // index of the first knot strictly right of v
        let k = knots.partition_point(|&(x, _)| x <= v);
        if k == 0 {
            return 0.0;
        }
        if k == knots.len() {
            return knots[k - 1].1;
        }
        match self {
            Cdf::Step(_) => knots[k - 1].1,
            Cdf::Linear(_) => {
                let (x0, p0) = knots[k - 1];
                let (x1, p1) = knots[k];
                p0 + (p1 - p0) * (v - x0) / (x1 - x0)
            }
        }
    }

    /// Left limit `F(v⁻)`.
    pub fn eval_left(&self, v: f64) -> f64 {
        let knots = self.knots();
        let k = knots.partition_point(|&(x, _)| x < v);
        if k == 0 {
            return 0.0;
        }
        match self {
            Cdf::Step(_) => knots[k - 1].1,
            // continuous right of the first knot
            Cdf::Linear(_) => self.eval(v),
        }
    }

    /// Generalized inverse `inf { v : F(v) ≥ p }` for `p ∈ (0, 1]`.
    ///
    /// Returns the last knot's value when `p` exceeds the final probability.
    pub fn quantile(&self, p: f64) -> f64 {
        let knots = self.knots();
        let k = knots.partition_point(|&(_, q)| q < p);
        if k == knots.len() {
            return knots[k - 1].0;
        }
        match self {
            Cdf::Step(_) => knots[k].0,
            Cdf::Linear(_) => {
                if k == 0 {
                    return knots[0].0;
                }
                let (x0, p0) = knots[k - 1];
                let (x1, p1) = knots[k];
                // p0 < p <= p1
                x0 + (x1 - x0) * (p - p0) / (p1 - p0)
            }
        }
    }
}

fn validate_knots(points: &[(f64, f64)]) -> Result<(), UncertaintyError> {
    if points.is_empty() {
        return Err(invalid("a CDF needs at least one knot"));
    }
    for (k, &(x, p)) in points.iter().enumerate() {
        if !x.is_finite() || !p.is_finite() {
            return Err(invalid(format!("CDF knot {k} is not finite: ({x}, {p})")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("CDF knot {k} has probability {p} outside [0, 1]")));
        }
        if k > 0 {
            let (xp, pp) = points[k - 1];
            if xp >= x {
                return Err(invalid(format!("CDF knot values must strictly increase (knot {k})")));
            }
            if pp > p {
                return Err(invalid(format!("CDF must be nondecreasing (knot {k})")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_eval_and_quantile() {
        let f = Cdf::step(vec![(0.0, 0.25), (1.0, 0.5), (2.0, 1.0)]).unwrap();
        assert_eq!(f.eval(-0.1), 0.0);
        assert_eq!(f.eval(0.0), 0.25);
        assert_eq!(f.eval(1.5), 0.5);
        assert_eq!(f.eval(5.0), 1.0);
        assert_eq!(f.eval_left(1.0), 0.25);
        assert_eq!(f.eval_left(0.0), 0.0);
        assert_eq!(f.quantile(0.1), 0.0);
        assert_eq!(f.quantile(0.25), 0.0);
        assert_eq!(f.quantile(0.26), 1.0);
        assert_eq!(f.quantile(0.75), 2.0);
    }

    #[test]
    fn linear_eval_and_quantile() {
        let f = Cdf::linear(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert_eq!(f.eval(0.25), 0.25);
        assert_eq!(f.quantile(0.25), 0.25);
        assert_eq!(f.quantile(0.75), 0.75);
        // flat piece: quantile takes the left end
        let g = Cdf::linear(vec![(0.0, 0.0), (1.0, 0.5), (2.0, 0.5), (3.0, 1.0)]).unwrap();
        assert_eq!(g.quantile(0.5), 1.0);
        assert_eq!(g.eval(1.5), 0.5);
        assert!((g.quantile(0.75) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_decreasing() {
        assert!(Cdf::linear(vec![(0.0, 0.5), (1.0, 0.4)]).is_err());
        assert!(Cdf::step(vec![(1.0, 0.5), (0.0, 1.0)]).is_err());
        assert!(Cdf::step(vec![(0.0, 1.5)]).is_err());
    }
}
