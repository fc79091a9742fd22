use serde::Serialize;

use super::{invalid, Cdf, DiscreteDistribution, DsStructure, Interval, UncertaintyError};

/// ε-contamination of a discrete center distribution by arbitrary
/// distributions on `support`: `{(1−ε)·P₀ + ε·Q}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contamination {
    center: DiscreteDistribution,
    epsilon: f64,
    support: Interval,
}

impl Contamination {
    pub fn new(
        center: DiscreteDistribution,
        epsilon: f64,
        support: Interval,
    ) -> Result<Self, UncertaintyError> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(invalid(format!("epsilon must lie in [0, 1], got {epsilon}")));
        }
        if let Some(&(v, _)) = center.atoms().iter().find(|(v, _)| !support.contains(*v)) {
            return Err(invalid(format!("center atom {v} lies outside the support {support}")));
        }
        Ok(Self { center, epsilon, support })
    }

    pub fn center(&self) -> &DiscreteDistribution {
        &self.center
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn support(&self) -> Interval {
        self.support
    }
}

/// A probability box: every distribution on `support` whose CDF lies between
/// `lower` and `upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PBox {
    support: Interval,
    lower: Cdf,
    upper: Cdf,
}

impl PBox {
    pub fn new(support: Interval, lower: Cdf, upper: Cdf) -> Result<Self, UncertaintyError> {
        lower.validate()?;
        upper.validate()?;
        for (name, cdf) in [("lower", &lower), ("upper", &upper)] {
            let knots = cdf.knots();
            if knots[0].0 < support.lo() || knots[knots.len() - 1].0 > support.hi() {
                return Err(invalid(format!("{name} CDF has knots outside the support {support}")));
            }
            let top = cdf.eval(support.hi());
            if (top - 1.0).abs() > super::MASS_TOL {
                return Err(invalid(format!(
                    "{name} CDF must reach 1 at the support's upper end, got {top}"
                )));
            }
        }
        for &(v, _) in lower.knots().iter().chain(upper.knots()) {
            let (l, u) = (lower.eval(v), upper.eval(v));
            let (ll, ul) = (lower.eval_left(v), upper.eval_left(v));
            if l > u + super::MASS_TOL || ll > ul + super::MASS_TOL {
                return Err(invalid(format!("lower CDF exceeds upper CDF at {v}")));
            }
        }
        Ok(Self { support, lower, upper })
    }

    /// A precise distribution wrapped as a degenerate p-box.
    pub fn precise(support: Interval, cdf: Cdf) -> Result<Self, UncertaintyError> {
        Self::new(support, cdf.clone(), cdf)
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn lower(&self) -> &Cdf {
        &self.lower
    }

    pub fn upper(&self) -> &Cdf {
        &self.upper
    }
}

/// The epistemic model of one scalar parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum UncertainScalar {
    Point { value: f64 },
    Interval(Interval),
    Contamination(Contamination),
    #[serde(rename = "pbox")]
    PBox(PBox),
}

impl UncertainScalar {
    pub fn point(value: f64) -> Result<Self, UncertaintyError> {
        if !value.is_finite() {
            return Err(invalid(format!("point value must be finite, got {value}")));
        }
        Ok(UncertainScalar::Point { value })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self, UncertaintyError> {
        Ok(UncertainScalar::Interval(Interval::new(lo, hi)?))
    }

    /// Smallest interval containing every value the parameter can take.
    pub fn support(&self) -> Interval {
        match self {
            UncertainScalar::Point { value } => {
                Interval::point(*value).expect("point values are finite")
            }
            UncertainScalar::Interval(iv) => *iv,
            UncertainScalar::Contamination(c) => c.support(),
            UncertainScalar::PBox(p) => p.support(),
        }
    }

    /// Whether the model is a point or an interval.
    pub fn is_interval_typed(&self) -> bool {
        matches!(self, UncertainScalar::Point { .. } | UncertainScalar::Interval(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            UncertainScalar::Point { .. } => "point",
            UncertainScalar::Interval(_) => "interval",
            UncertainScalar::Contamination(_) => "contamination",
            UncertainScalar::PBox(_) => "pbox",
        }
    }

    pub fn to_ds(&self, n_focal: usize) -> Result<DsStructure, UncertaintyError> {
        to_ds(self, n_focal)
    }
}

/// Discretize a model into a Dempster–Shafer structure.
///
/// P-boxes are sliced into `n_focal` equal-mass focal elements by evaluating
/// the generalized inverses of both CDF bounds at the slice midpoints; the
/// other models ignore `n_focal`.
pub fn to_ds(model: &UncertainScalar, n_focal: usize) -> Result<DsStructure, UncertaintyError> {
    if n_focal == 0 {
        return Err(invalid("n_focal must be at least 1"));
    }
    let support = model.support();
    match model {
        UncertainScalar::Point { .. } | UncertainScalar::Interval(_) => {
            DsStructure::new(support, vec![(support, 1.0)])
        }
        UncertainScalar::Contamination(c) => {
            let eps = c.epsilon();
            let mut focal: Vec<(Interval, f64)> = c
                .center()
                .atoms()
                .iter()
                .map(|&(v, p)| (Interval::point(v).expect("validated atom"), (1.0 - eps) * p))
                .filter(|(_, m)| *m > 0.0)
                .collect();
            if eps > 0.0 {
                focal.push((support, eps));
            }
            DsStructure::new(support, focal)
        }
        UncertainScalar::PBox(p) => {
            let mass = 1.0 / n_focal as f64;
            let focal = (0..n_focal)
                .map(|i| {
                    let level = (i as f64 + 0.5) / n_focal as f64;
                    let lo = support.clamp(p.upper().quantile(level));
                    let hi = support.clamp(p.lower().quantile(level));
                    let iv = Interval::new(lo.min(hi), hi).expect("clamped quantiles are finite");
                    (iv, mass)
                })
                .collect();
            DsStructure::new(support, focal)
        }
    }
}

/// An ordered list of independent uncertain parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointModel {
    entries: Vec<UncertainScalar>,
}

impl JointModel {
    pub fn new(entries: Vec<UncertainScalar>) -> Result<Self, UncertaintyError> {
        if entries.is_empty() {
            return Err(invalid("a joint model needs at least one entry"));
        }
        Ok(Self { entries })
    }

    pub fn single(entry: UncertainScalar) -> Self {
        Self { entries: vec![entry] }
    }

    pub fn entries(&self) -> &[UncertainScalar] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn supports(&self) -> Vec<Interval> {
        self.entries.iter().map(UncertainScalar::support).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn point_to_ds() {
        let ds = to_ds(&UncertainScalar::point(2.0).unwrap(), 4).unwrap();
        assert_eq!(ds.focal(), &[(iv(2.0, 2.0), 1.0)]);
    }

    #[test]
    fn interval_ignores_n_focal() {
        let ds = to_ds(&UncertainScalar::interval(0.0, 1.0).unwrap(), 8).unwrap();
        assert_eq!(ds.focal(), &[(iv(0.0, 1.0), 1.0)]);
    }

    #[test]
    fn contamination_to_ds() {
        let c = Contamination::new(DiscreteDistribution::dirac(3.0).unwrap(), 0.25, iv(0.0, 10.0))
            .unwrap();
        let model = UncertainScalar::Contamination(c);
        for n in [1, 3, 8] {
            let ds = to_ds(&model, n).unwrap();
            assert_eq!(ds.focal(), &[(iv(3.0, 3.0), 0.75), (iv(0.0, 10.0), 0.25)]);
        }
    }

    #[test]
    fn uniform_pbox_to_ds() {
        let cdf = Cdf::linear(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
        let model = UncertainScalar::PBox(PBox::precise(iv(0.0, 1.0), cdf).unwrap());
        let ds = to_ds(&model, 2).unwrap();
        assert_eq!(ds.focal(), &[(iv(0.25, 0.25), 0.5), (iv(0.75, 0.75), 0.5)]);
    }

    #[test]
    fn step_pbox_slices_are_ordered() {
        let lower = Cdf::step(vec![(1.0, 0.2), (2.0, 0.6), (3.0, 1.0)]).unwrap();
        let upper = Cdf::step(vec![(0.0, 0.3), (1.0, 0.7), (2.0, 1.0)]).unwrap();
        let pb = PBox::new(iv(0.0, 3.0), lower, upper).unwrap();
        let ds = to_ds(&UncertainScalar::PBox(pb), 4).unwrap();
        assert_eq!(ds.len(), 4);
        // levels 0.125, 0.375, 0.625, 0.875
        let got: Vec<(f64, f64)> = ds.focal().iter().map(|(i, _)| (i.lo(), i.hi())).collect();
        assert_eq!(got, vec![(0.0, 1.0), (1.0, 2.0), (1.0, 3.0), (2.0, 3.0)]);
    }

    #[test]
    fn pbox_validation() {
        let lin = |pts: Vec<(f64, f64)>| Cdf::linear(pts).unwrap();
        // bounds swapped
        assert!(PBox::new(
            iv(0.0, 1.0),
            lin(vec![(0.0, 0.5), (1.0, 1.0)]),
            lin(vec![(0.0, 0.0), (1.0, 1.0)])
        )
        .is_err());
        // does not reach one
        assert!(PBox::precise(iv(0.0, 1.0), lin(vec![(0.0, 0.0), (1.0, 0.9)])).is_err());
        // knots outside support
        assert!(PBox::precise(iv(0.0, 1.0), lin(vec![(-1.0, 0.0), (1.0, 1.0)])).is_err());
    }

    #[test]
    fn contamination_validation() {
        let d = DiscreteDistribution::dirac(3.0).unwrap();
        assert!(Contamination::new(d.clone(), 1.5, iv(0.0, 10.0)).is_err());
        assert!(Contamination::new(d, 0.5, iv(4.0, 10.0)).is_err());
    }
}
