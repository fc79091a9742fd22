use super::{invalid, DsStructure, Interval, JointModel, UncertaintyError};

/// Default number of focal elements a p-box is sliced into.
pub const DEFAULT_N_FOCAL: usize = 8;
/// Default per-coordinate resolution of the grid box-minimization strategy.
pub const DEFAULT_GRID_POINTS: usize = 17;

/// Direction in which a function moves along one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
}

impl Monotonicity {
    pub fn reversed(self) -> Self {
        match self {
            Monotonicity::Nondecreasing => Monotonicity::Nonincreasing,
            Monotonicity::Nonincreasing => Monotonicity::Nondecreasing,
        }
    }
}

/// How the minimum of `f` over a focal box is found.
#[derive(Debug, Clone, PartialEq)]
pub enum BoxStrategy {
    /// One declared direction per coordinate; the minimum sits at the matching
    /// corner. Exact for functions that really are coordinate-monotone.
    Monotone(Vec<Monotonicity>),
    /// Minimum over a uniform grid with `points` per non-degenerate coordinate.
    /// Over-estimates the true minimum by at most the grid's modulus of
    /// continuity.
    Grid { points: usize },
}

/// Number of focal elements used when discretizing each entry.
#[derive(Debug, Clone, PartialEq)]
pub enum FocalCount {
    Uniform(usize),
    PerEntry(Vec<usize>),
}

impl FocalCount {
    pub fn for_entry(&self, index: usize) -> usize {
        match self {
            FocalCount::Uniform(n) => *n,
            FocalCount::PerEntry(v) => v.get(index).copied().unwrap_or(DEFAULT_N_FOCAL),
        }
    }

    /// Discretize every entry of `joint`.
    pub fn discretize(&self, joint: &JointModel) -> Result<Vec<DsStructure>, UncertaintyError> {
        if let FocalCount::PerEntry(v) = self {
            if v.len() != joint.len() {
                return Err(invalid(format!(
                    "per-entry focal counts have length {}, joint model has {} entries",
                    v.len(),
                    joint.len()
                )));
            }
        }
        joint.entries().iter().enumerate().map(|(i, e)| e.to_ds(self.for_entry(i))).collect()
    }
}

impl Default for FocalCount {
    fn default() -> Self {
        FocalCount::Uniform(DEFAULT_N_FOCAL)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationPlan {
    pub focal: FocalCount,
    pub strategy: BoxStrategy,
}

impl EvaluationPlan {
    pub fn grid(points: usize) -> Self {
        Self { focal: FocalCount::default(), strategy: BoxStrategy::Grid { points } }
    }

    pub fn monotone(directions: Vec<Monotonicity>) -> Self {
        Self { focal: FocalCount::default(), strategy: BoxStrategy::Monotone(directions) }
    }

    pub fn with_focal(mut self, focal: FocalCount) -> Self {
        self.focal = focal;
        self
    }

    /// The plan describing `−f` when `self` describes `f`.
    pub fn reversed(&self) -> Self {
        let strategy = match &self.strategy {
            BoxStrategy::Monotone(dirs) => {
                BoxStrategy::Monotone(dirs.iter().map(|d| d.reversed()).collect())
            }
            grid @ BoxStrategy::Grid { .. } => grid.clone(),
        };
        Self { focal: self.focal.clone(), strategy }
    }
}

impl Default for EvaluationPlan {
    fn default() -> Self {
        Self::grid(DEFAULT_GRID_POINTS)
    }
}

/// Lower expectation of `f` under `joint` with random-set independence.
pub fn lower_expectation(
    joint: &JointModel,
    f: &dyn Fn(&[f64]) -> f64,
    plan: &EvaluationPlan,
) -> Result<f64, UncertaintyError> {
    let ds = plan.focal.discretize(joint)?;
    lower_expectation_ds(&ds, f, &plan.strategy)
}

/// Upper expectation, defined as `−E̲[−f]`.
pub fn upper_expectation(
    joint: &JointModel,
    f: &dyn Fn(&[f64]) -> f64,
    plan: &EvaluationPlan,
) -> Result<f64, UncertaintyError> {
    let neg = |v: &[f64]| -f(v);
    Ok(-lower_expectation(joint, &neg, &plan.reversed())?)
}

pub(crate) fn lower_expectation_ds(
    ds: &[DsStructure],
    f: &dyn Fn(&[f64]) -> f64,
    strategy: &BoxStrategy,
) -> Result<f64, UncertaintyError> {
    let dims = ds.len();
    // per entry, per focal element: the coordinates probed for the box minimum
    let probes: Vec<Vec<Vec<f64>>> = match strategy {
        BoxStrategy::Monotone(dirs) => {
            if dirs.len() != dims {
                return Err(invalid(format!(
                    "monotone plan declares {} directions for {dims} entries",
                    dirs.len()
                )));
            }
            ds.iter()
                .zip(dirs)
                .map(|(d, dir)| d.focal().iter().map(|(iv, _)| vec![corner(iv, *dir)]).collect())
                .collect()
        }
        BoxStrategy::Grid { points } => {
            if *points < 2 {
                return Err(invalid("grid strategy needs at least 2 points per coordinate"));
            }
            ds.iter()
                .map(|d| d.focal().iter().map(|(iv, _)| iv.grid(*points)).collect())
                .collect()
        }
    };

    let mut total = 0.0;
    let mut focal_idx = vec![0usize; dims];
    let mut point = vec![0.0; dims];
    loop {
        let mass: f64 = ds.iter().zip(&focal_idx).map(|(d, &k)| d.focal()[k].1).product();
        if mass > 0.0 {
            let axes: Vec<&[f64]> =
                probes.iter().zip(&focal_idx).map(|(p, &k)| p[k].as_slice()).collect();
            total += mass * box_min(&axes, f, &mut point)?;
        }
        if !advance(&mut focal_idx, |i| ds[i].len()) {
            break;
        }
    }
    Ok(total)
}

fn corner(iv: &Interval, dir: Monotonicity) -> f64 {
    match dir {
        Monotonicity::Nondecreasing => iv.lo(),
        Monotonicity::Nonincreasing => iv.hi(),
    }
}

/// Minimum of `f` over the Cartesian product of `axes`.
fn box_min(
    axes: &[&[f64]],
    f: &dyn Fn(&[f64]) -> f64,
    point: &mut [f64],
) -> Result<f64, UncertaintyError> {
    let mut idx = vec![0usize; axes.len()];
    let mut best = f64::INFINITY;
    loop {
        for (i, &k) in idx.iter().enumerate() {
            point[i] = axes[i][k];
        }
        let v = f(point);
        if !v.is_finite() {
            return Err(UncertaintyError::Unbounded { value: v, point: point.to_vec() });
        }
        if v < best {
            best = v;
        }
        if !advance(&mut idx, |i| axes[i].len()) {
            return Ok(best);
        }
    }
}

/// Odometer increment with the last index running fastest. Returns `false`
/// once every combination has been visited.
pub(crate) fn advance(idx: &mut [usize], len: impl Fn(usize) -> usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < len(i) {
            return true;
        }
        idx[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uncertainty::{Contamination, DiscreteDistribution, UncertainScalar};

    fn single(e: UncertainScalar) -> JointModel {
        JointModel::single(e)
    }

    #[test]
    fn point_collapses() {
        let j = single(UncertainScalar::point(3.0).unwrap());
        let plan = EvaluationPlan::default();
        assert_eq!(lower_expectation(&j, &|v| v[0], &plan).unwrap(), 3.0);
        assert_eq!(upper_expectation(&j, &|v| v[0], &plan).unwrap(), 3.0);
    }

    #[test]
    fn interval_square() {
        let j = single(UncertainScalar::interval(0.0, 1.0).unwrap());
        let plan = EvaluationPlan::default();
        assert_eq!(lower_expectation(&j, &|v| v[0] * v[0], &plan).unwrap(), 0.0);
        assert_eq!(upper_expectation(&j, &|v| v[0] * v[0], &plan).unwrap(), 1.0);
    }

    #[test]
    fn contamination_identity() {
        let c = Contamination::new(
            DiscreteDistribution::uniform(&[1.0, 2.0, 3.0]).unwrap(),
            0.5,
            Interval::new(1.0, 3.0).unwrap(),
        )
        .unwrap();
        let j = single(UncertainScalar::Contamination(c));
        let plan = EvaluationPlan::monotone(vec![Monotonicity::Nondecreasing]);
        let lo = lower_expectation(&j, &|v| v[0], &plan).unwrap();
        assert!((lo - 1.5).abs() < 1e-12);
    }

    #[test]
    fn ds_two_focal_identity() {
        let ds = vec![DsStructure::new(
            Interval::new(0.0, 2.0).unwrap(),
            vec![(Interval::new(0.0, 1.0).unwrap(), 0.5), (Interval::new(1.0, 2.0).unwrap(), 0.5)],
        )
        .unwrap()];
        let grid = BoxStrategy::Grid { points: 17 };
        assert_eq!(lower_expectation_ds(&ds, &|v| v[0], &grid).unwrap(), 0.5);
        assert_eq!(-lower_expectation_ds(&ds, &|v| -v[0], &grid).unwrap(), 1.5);
    }

    #[test]
    fn non_finite_is_reported() {
        let j = single(UncertainScalar::interval(-1.0, 1.0).unwrap());
        let err = lower_expectation(&j, &|v| 1.0 / v[0], &EvaluationPlan::grid(3)).unwrap_err();
        assert!(matches!(err, UncertaintyError::Unbounded { .. }));
    }

    #[test]
    fn monotone_plan_dimension_mismatch() {
        let j = single(UncertainScalar::interval(0.0, 1.0).unwrap());
        assert!(lower_expectation(&j, &|v| v[0], &EvaluationPlan::monotone(vec![])).is_err());
    }

    #[test]
    fn independent_product() {
        // two independent intervals, f = v0 * v1 on [1,2]x[3,4]
        let j = JointModel::new(vec![
            UncertainScalar::interval(1.0, 2.0).unwrap(),
            UncertainScalar::interval(3.0, 4.0).unwrap(),
        ])
        .unwrap();
        let plan = EvaluationPlan::monotone(vec![Monotonicity::Nondecreasing; 2]);
        assert_eq!(lower_expectation(&j, &|v| v[0] * v[1], &plan).unwrap(), 3.0);
        assert_eq!(upper_expectation(&j, &|v| v[0] * v[1], &plan).unwrap(), 8.0);
    }
}
