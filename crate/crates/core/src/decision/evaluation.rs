//! Lower/upper expected utilities and upper expected utility differences for
//! a discretized problem.
//!
//! Under random-set independence the joint focal boxes factor into a box for
//! the objective coefficients and one box per constraint row. The utility
//! only depends on the rows through feasibility, so the sums over joint boxes
//! are regrouped: per row we accumulate the mass of each feasibility class,
//! combine rows by products, and pair the result with the objective part.
//! This is the same sum as a full enumeration of joint boxes, computed without
//! materializing their product.

use crate::problem::{dot, DecisionVector, UncertainLp};
use crate::uncertainty::{advance_index, DsStructure, FocalCount, Interval};
use crate::TOL;

use super::DecisionError;


/// Strict-inequality margin for mixed feasibility patterns.
const STRICT_TOL: f64 = 1e-12;

/// A problem whose entries have been discretized into DS structures.
#[derive(Debug, Clone)]
pub struct DiscretizedLp {
    n: usize,
    m: usize,
    u: Vec<DsStructure>,
    /// One vector per row: the `n` matrix entries followed by the rhs.
    rows: Vec<Vec<DsStructure>>,
}

impl DiscretizedLp {
    pub fn new(problem: &UncertainLp, focal: &FocalCount) -> Result<Self, DecisionError> {
        let ds = focal.discretize(&problem.joint())?;
        let (n, m) = (problem.n(), problem.m());
        let u = ds[..n].to_vec();
        let rows = (0..m)
            .map(|i| {
                let mut row = ds[n + i * n..n + (i + 1) * n].to_vec();
                row.push(ds[n + m * n + i].clone());
                row
            })
            .collect();
        Ok(Self { n, m, u, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `E̲[G_x]`.
    pub fn lower_utility(&self, x: &DecisionVector, punishment: f64) -> f64 {
        let x = x.as_slice();
        let (all_feasible, some_feasible) = self.feasibility_masses(x);
        let mean_lo: f64 = self.u.iter().zip(x).fold(0.0, |acc, (d, xj)| acc + xj * d.lower_mean());
        let mixed = if some_feasible > all_feasible {
            self.objective_mean(x, punishment, Extremum::Lower)
        } else {
            0.0
        };
        combine(all_feasible, some_feasible, mean_lo, mixed, punishment)
    }

    /// `E̅[G_x]`.
    pub fn upper_utility(&self, x: &DecisionVector, punishment: f64) -> f64 {
        let x = x.as_slice();
        let (all_feasible, some_feasible) = self.feasibility_masses(x);
        let mean_hi: f64 = self.u.iter().zip(x).fold(0.0, |acc, (d, xj)| acc + xj * d.upper_mean());
        let mixed = if some_feasible > all_feasible {
            self.objective_mean(x, punishment, Extremum::Upper)
        } else {
            0.0
        };
        combine(all_feasible, some_feasible, mean_hi, mixed, punishment)
    }

    /// Probability mass of joint boxes in which every point is feasible, and
    /// of those containing at least one feasible point.
    fn feasibility_masses(&self, x: &[f64]) -> (f64, f64) {
        let mut all = 1.0;
        let mut some = 1.0;
        for row in &self.rows {
            let (a, s) = row_feasibility(row, x);
            all *= a;
            some *= s;
        }
        (all, some)
    }

    /// `Σ_U m · min(L, u_lo·x)` (or `max(L, u_hi·x)` for the upper side).
    fn objective_mean(&self, x: &[f64], punishment: f64, side: Extremum) -> f64 {
        let sup: Vec<Interval> = self.u.iter().map(|d| d.support()).collect();
        let lo_all: f64 = sup.iter().zip(x).map(|(s, xj)| s.lo() * xj).sum();
        let hi_all: f64 = sup.iter().zip(x).map(|(s, xj)| s.hi() * xj).sum();
        match side {
            Extremum::Lower if lo_all >= punishment => return punishment,
            Extremum::Upper if hi_all <= punishment => return punishment,
            _ => {}
        }
        let mut total = 0.0;
        for_each_box(&self.u, |boxes, mass| {
            let v = match side {
                Extremum::Lower => punishment.min(boxes.iter().zip(x).map(|(b, xj)| b.lo() * xj).sum()),
                Extremum::Upper => punishment.max(boxes.iter().zip(x).map(|(b, xj)| b.hi() * xj).sum()),
            };
            total += mass * v;
        });
        total
    }

    /// `E̅[G_x − G_x']`.
    pub fn upper_difference(
        &self,
        x: &DecisionVector,
        other: &DecisionVector,
        punishment: f64,
    ) -> f64 {
        let (x, xp) = (x.as_slice(), other.as_slice());

        // mass of each set of achievable feasibility patterns over the rows
        let mut pattern_mass = [0.0f64; 16];
        let mut per_row: Vec<Vec<(u8, f64)>> = Vec::with_capacity(self.m);
        for row in &self.rows {
            per_row.push(row_pattern_classes(row, x, xp));
        }
        let mut idx = vec![0usize; self.m];
        loop {
            let mut mass = 1.0;
            let mut flags = Vec::with_capacity(self.m);
            for (classes, &k) in per_row.iter().zip(&idx) {
                mass *= classes[k].1;
                flags.push(classes[k].0);
            }
            pattern_mass[achievable_patterns(&flags) as usize] += mass;
            if self.m == 0 || !advance_index(&mut idx, |i| per_row[i].len()) {
                break;
            }
        }

        let d: Vec<f64> = x.iter().zip(xp).map(|(a, b)| a - b).collect();
        let mut total = 0.0;
        for_each_box(&self.u, |boxes, mass| {
            // best difference per pattern: (1,1), (1,0), (0,1), (0,0)
            let both: f64 =
                boxes.iter().zip(&d).map(|(b, dj)| (b.lo() * dj).max(b.hi() * dj)).sum();
            let only_x = boxes.iter().zip(x).map(|(b, xj)| b.hi() * xj).sum::<f64>() - punishment;
            let only_other =
                punishment - boxes.iter().zip(xp).map(|(b, xj)| b.lo() * xj).sum::<f64>();
            let values = [both, only_x, only_other, 0.0];
            for (set, w) in pattern_mass.iter().enumerate() {
                if *w > 0.0 {
                    let best = (0..4)
                        .filter(|p| set & (1 << p) != 0)
                        .map(|p| values[p])
                        .fold(f64::NEG_INFINITY, f64::max);
                    total += w * mass * best;
                }
            }
        });
        total
    }
}

#[derive(Clone, Copy)]
enum Extremum {
    Lower,
    Upper,
}

fn combine(all: f64, some: f64, mean: f64, mixed: f64, punishment: f64) -> f64 {
    all * mean + (some - all) * mixed + (1.0 - some) * punishment
}

/// Enumerate the product of focal elements of `ds`, calling `visit` with the
/// focal intervals and the product mass.
fn for_each_box(ds: &[DsStructure], mut visit: impl FnMut(&[Interval], f64)) {
    let mut idx = vec![0usize; ds.len()];
    let mut boxes: Vec<Interval> = Vec::with_capacity(ds.len());
    loop {
        boxes.clear();
        let mut mass = 1.0;
        for (d, &k) in ds.iter().zip(&idx) {
            let (iv, m) = d.focal()[k];
            boxes.push(iv);
            mass *= m;
        }
        if mass > 0.0 {
            visit(&boxes, mass);
        }
        if ds.is_empty() || !advance_index(&mut idx, |i| ds[i].len()) {
            break;
        }
    }
}

/// For one row: mass of boxes where the row holds everywhere (worst corner
/// `y_hi, z_lo`) and where it holds somewhere (best corner `y_lo, z_hi`).
/// Coordinates with `x_j = 0` do not affect the row and are summed out.
fn row_feasibility(row: &[DsStructure], x: &[f64]) -> (f64, f64) {
    let n = x.len();
    let active: Vec<usize> = (0..n).filter(|&j| x[j] != 0.0).chain([n]).collect();
    let entries: Vec<DsStructure> = active.iter().map(|&j| row[j].clone()).collect();
    let xs: Vec<f64> = active[..active.len() - 1].iter().map(|&j| x[j]).collect();
    let mut all = 0.0;
    let mut some = 0.0;
    for_each_box(&entries, |boxes, mass| {
        let (ys, z) = boxes.split_at(boxes.len() - 1);
        let worst: f64 = ys.iter().zip(&xs).map(|(b, xj)| b.hi() * xj).sum();
        let best: f64 = ys.iter().zip(&xs).map(|(b, xj)| b.lo() * xj).sum();
        if worst <= z[0].lo() + TOL {
            all += mass;
        }
        if best <= z[0].hi() + TOL {
            some += mass;
        }
    });
    (all, some)
}

// per-row feasibility flags
const FX: u8 = 1; // x feasible somewhere
const FXP: u8 = 2; // x' feasible somewhere
const IX: u8 = 4; // x infeasible somewhere
const IXP: u8 = 8; // x' infeasible somewhere
const M10: u8 = 16; // x feasible and x' infeasible at one point
const M01: u8 = 32; // x infeasible and x' feasible at one point

/// Mass of each flag combination over the focal boxes of one row.
fn row_pattern_classes(row: &[DsStructure], x: &[f64], xp: &[f64]) -> Vec<(u8, f64)> {
    let mut mass_by_flags = [0.0f64; 64];
    for_each_box(row, |boxes, mass| {
        let (ys, z) = boxes.split_at(boxes.len() - 1);
        mass_by_flags[row_flags(ys, z[0], x, xp) as usize] += mass;
    });
    mass_by_flags
        .iter()
        .enumerate()
        .filter(|(_, m)| **m > 0.0)
        .map(|(f, m)| (f as u8, *m))
        .collect()
}

fn row_flags(ys: &[Interval], z: Interval, x: &[f64], xp: &[f64]) -> u8 {
    let lo = |v: &[f64]| ys.iter().zip(v).map(|(b, c)| b.lo() * c).sum::<f64>();
    let hi = |v: &[f64]| ys.iter().zip(v).map(|(b, c)| b.hi() * c).sum::<f64>();
    let mut flags = 0u8;
    if lo(x) <= z.hi() + TOL {
        flags |= FX;
    }
    if lo(xp) <= z.hi() + TOL {
        flags |= FXP;
    }
    if hi(x) > z.lo() + TOL {
        flags |= IX;
    }
    if hi(xp) > z.lo() + TOL {
        flags |= IXP;
    }
    if flags & FX != 0 && flags & IXP != 0 && mixed_achievable(ys, z, x, xp) {
        flags |= M10;
    }
    if flags & FXP != 0 && flags & IX != 0 && mixed_achievable(ys, z, xp, x) {
        flags |= M01;
    }
    flags
}

/// Whether some `(y, z)` in the box has `y·a ≤ z + TOL` and `y·b > z + TOL`.
///
/// With `z' = z + TOL` this holds iff the margin
/// `max min(y·b − z'_lo, y·(b − a))` over the polytope
/// `{y in the box, y·a ≤ z'_hi}` is positive. The two linear pieces agree
/// where `y·a = z'_lo`, so the maximum is attained at a box corner or where
/// one of the hyperplanes `y·a = z'_hi`, `y·a = z'_lo` crosses a box edge;
/// those finitely many points are checked directly.
fn mixed_achievable(ys: &[Interval], z: Interval, a: &[f64], b: &[f64]) -> bool {
    let (zlo, zhi) = (z.lo() + TOL, z.hi() + TOL);
    let margin = |y: &[f64]| -> f64 {
        let (ya, yb) = (dot(y, a), dot(y, b));
        if ya > zhi + STRICT_TOL {
            return f64::NEG_INFINITY;
        }
        (yb - zlo).min(yb - ya)
    };
    let n = ys.len();
    let axes: Vec<[f64; 2]> = ys.iter().map(|iv| [iv.lo(), iv.hi()]).collect();
    let mut corner = vec![0usize; n];
    let mut y = vec![0.0; n];
    loop {
        for j in 0..n {
            y[j] = axes[j][corner[j]];
        }
        if margin(&y) > STRICT_TOL {
            return true;
        }
        for free in 0..n {
            // edge along coordinate `free` through this corner
            if corner[free] != 0 || ys[free].is_degenerate() || a[free] == 0.0 {
                continue;
            }
            let rest: f64 = (0..n).filter(|&j| j != free).map(|j| y[j] * a[j]).sum();
            for h in [zhi, zlo] {
                let v = (h - rest) / a[free];
                if v > ys[free].lo() && v < ys[free].hi() {
                    let saved = y[free];
                    y[free] = v;
                    let ok = margin(&y) > STRICT_TOL;
                    y[free] = saved;
                    if ok {
                        return true;
                    }
                }
            }
        }
        if !advance_index(&mut corner, |_| 2) {
            return false;
        }
    }
}

/// Bitset over patterns (1,1)=bit 0, (1,0)=bit 1, (0,1)=bit 2, (0,0)=bit 3
/// achievable jointly, given each row's flags. Rows are independent
/// coordinates, so a joint point is assembled row by row.
fn achievable_patterns(rows: &[u8]) -> u8 {
    let all = |f: u8| rows.iter().all(|r| r & f == f);
    let any = |f: u8| rows.iter().any(|r| r & f == f);
    let mut set = 0u8;
    if all(FX | FXP) {
        set |= 1;
    }
    if all(FX) && any(M10) {
        set |= 2;
    }
    if all(FXP) && any(M01) {
        set |= 4;
    }
    let both_same_row = any(IX | IXP);
    let split = rows.iter().enumerate().any(|(i, ri)| {
        ri & IX != 0 && rows.iter().enumerate().any(|(k, rk)| k != i && rk & IXP != 0)
    });
    if both_same_row || split {
        set |= 8;
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn mixed_needs_interior_z() {
        // y = 1, z in [0, 10], a = 1, b = 2: only z in [1, 2) separates them
        assert!(mixed_achievable(&[iv(1.0, 1.0)], iv(0.0, 10.0), &[1.0], &[2.0]));
        assert!(!mixed_achievable(&[iv(1.0, 1.0)], iv(0.0, 10.0), &[2.0], &[1.0]));
    }

    #[test]
    fn mixed_needs_interior_y() {
        // z = 1, y in [0, 2], a = 1, b = 1.25: y in (0.8, 1]
        assert!(mixed_achievable(&[iv(0.0, 2.0)], iv(1.0, 1.0), &[1.0], &[1.25]));
        // identical decisions never separate
        assert!(!mixed_achievable(&[iv(0.0, 2.0)], iv(1.0, 1.0), &[1.0], &[1.0]));
    }

    #[test]
    fn mixed_two_dimensional_lp_path() {
        // y1, y2 in [0, 1], z = 1; a = (1, 0), b = (0, 1): need y1 <= 1 and y2 > 1: impossible
        let ys = [iv(0.0, 1.0), iv(0.0, 1.0)];
        assert!(!mixed_achievable(&ys, iv(1.0, 1.0), &[1.0, 0.0], &[0.0, 1.0]));
        // z = 0.5: y2 in (0.5, 1], y1 <= 0.5 works
        assert!(mixed_achievable(&ys, iv(0.5, 0.5), &[1.0, 0.0], &[0.0, 1.0]));
    }

    #[test]
    fn pattern_sets() {
        // single row, everything possible
        assert_eq!(achievable_patterns(&[FX | FXP | IX | IXP | M10 | M01]), 15);
        // x infeasible in row 0 only, x' infeasible in row 1 only
        let r0 = FX | FXP | IX;
        let r1 = FX | FXP | IXP;
        assert_eq!(achievable_patterns(&[r0, r1]), 1 | 8);
    }
}
