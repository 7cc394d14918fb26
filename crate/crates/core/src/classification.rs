//! Balanced classification: `N = c n` points split into `n` classes of
//! exactly `c` points, class `k` inside a cube of diameter `<= 4 r k^{-1/d}`.
//!
//! Same heavy-cube iteration as the measure decomposition, run on the
//! counting measure of the not yet assigned points, so all masses are
//! integer counts.

use serde::Serialize;

use crate::decomposition::diameter_bound;
use crate::error::{Error, Result};
use crate::measure::{Cube, CubePartition, Point};
use crate::quantization::closed_form_bound;

#[derive(Debug, Clone)]
pub struct BalancedClassification {
    pub n: usize,
    pub c: usize,
    pub dim: usize,
    /// `max_i ||x_i||`.
    pub r: f64,
    /// `classes[k - 1]` holds the 0-based point indices of class `k`, ascending.
    pub classes: Vec<Vec<usize>>,
    pub cubes: Vec<Cube>,
    /// Cube centers.
    pub representatives: Vec<Point>,
}

/// Largest `m >= 1` with `m^d <= j`, exact on integers.
fn integer_root(j: usize, dim: usize) -> usize {
    let fits = |m: usize| (m as u128).checked_pow(dim as u32).is_some_and(|v| v <= j as u128);
    let mut m = ((j.max(1) as f64).powf(1.0 / dim as f64).round() as usize).max(1);
    while !fits(m) && m > 1 {
        m -= 1;
    }
    while fits(m + 1) {
        m += 1;
    }
    m
}

/// Max-norm diameter of a point set: the largest coordinate range.
pub fn point_set_diameter<'a>(points: impl IntoIterator<Item = &'a Point>) -> f64 {
    let mut lo: Vec<f64> = Vec::new();
    let mut hi: Vec<f64> = Vec::new();
    for p in points {
        if lo.is_empty() {
            lo = p.coords().to_vec();
            hi = p.coords().to_vec();
            continue;
        }
        for (axis, &x) in p.coords().iter().enumerate() {
            lo[axis] = lo[axis].min(x);
            hi[axis] = hi[axis].max(x);
        }
    }
    lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max)
}

pub fn classify(points: &[Point], n: usize) -> Result<BalancedClassification> {
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    let total = points.len();
    if total == 0 {
        return Err(Error::EmptyMeasure);
    }
    if !total.is_multiple_of(n) {
        return Err(Error::IndivisibleCount { count: total, classes: n });
    }
    let c = total / n;
    let dim = points[0].dim();
    if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: bad.dim() });
    }
    let r = points.iter().map(Point::norm).fold(0.0, f64::max);

    let mut assigned = vec![false; total];
    let mut classes = vec![Vec::new(); n];
    let mut cubes = Vec::with_capacity(n);
    for j in (1..=n).rev() {
        // j c points remain; at most j cells, so one holds at least c.
        let per_axis = if r == 0.0 { 1 } else { integer_root(j, dim) };
        let partition = CubePartition::new(dim, r, per_axis);
        let cell_of: Vec<Option<usize>> = points
            .iter()
            .zip(&assigned)
            .map(|(p, &done)| if done { None } else { partition.locate(p) })
            .collect();
        let mut counts = vec![0usize; partition.cell_count()];
        cell_of.iter().flatten().for_each(|&cell| counts[cell] += 1);
        let best = *counts.iter().max().expect("partition has at least one cell");
        if best < c {
            return Err(Error::Numerical(format!("heaviest cell holds {best} < {c} points")));
        }
        let chosen = counts.iter().position(|&k| k == best).unwrap();
        let members: Vec<usize> = (0..total).filter(|&i| cell_of[i] == Some(chosen)).take(c).collect();
        members.iter().for_each(|&i| assigned[i] = true);
        classes[j - 1] = members;
        cubes.push(partition.cell(chosen));
    }
    cubes.reverse();
    let representatives = cubes.iter().map(|cube| cube.center().clone()).collect();
    Ok(BalancedClassification { n, c, dim, r, classes, cubes, representatives })
}

/// Per-class and global checks of a classification against its certificates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationCheck {
    pub cardinalities_exact: bool,
    pub partition_exact: bool,
    pub points_in_cubes: bool,
    pub diameters_certified: bool,
    pub cost: f64,
    pub cost_bound: f64,
}

impl ClassificationCheck {
    pub fn holds(&self) -> bool {
        self.cardinalities_exact
            && self.partition_exact
            && self.points_in_cubes
            && self.diameters_certified
            && self.cost <= self.cost_bound
    }
}

impl BalancedClassification {
    /// `labels[i] = k - 1` for the class `k` containing point `i`.
    pub fn labels(&self, total: usize) -> Vec<Option<usize>> {
        let mut labels = vec![None; total];
        for (k, class) in self.classes.iter().enumerate() {
            for &i in class {
                if i < total {
                    labels[i] = Some(k);
                }
            }
        }
        labels
    }

    pub fn class_diameter(&self, k: usize, points: &[Point]) -> f64 {
        point_set_diameter(self.classes[k - 1].iter().map(|&i| &points[i]))
    }

    /// `4 r f_{1,d}(n)`.
    pub fn cost_bound(&self) -> Result<f64> {
        closed_form_bound(self.r, 1.0, self.dim, self.n)
    }

    pub fn check(&self, points: &[Point]) -> Result<ClassificationCheck> {
        let cardinalities_exact = self.classes.iter().all(|class| class.len() == self.c);
        let mut seen = vec![0usize; points.len()];
        for &i in self.classes.iter().flatten() {
            if i < points.len() {
                seen[i] += 1;
            }
        }
        let partition_exact =
            seen.iter().all(|&s| s == 1) && self.classes.iter().flatten().all(|&i| i < points.len());
        let points_in_cubes = partition_exact
            && self
                .classes
                .iter()
                .zip(&self.cubes)
                .all(|(class, cube)| class.iter().all(|&i| cube.contains(&points[i])));
        let diameters_certified = partition_exact
            && (1..=self.n).all(|k| {
                let bound = diameter_bound(self.r, k, self.dim);
                self.class_diameter(k, points) <= self.cubes[k - 1].diameter()
                    && self.cubes[k - 1].diameter() <= bound
            });
        Ok(ClassificationCheck {
            cardinalities_exact,
            partition_exact,
            points_in_cubes,
            diameters_certified,
            cost: classification_cost(self, points)?,
            cost_bound: self.cost_bound()?,
        })
    }
}

/// `N^{-1} sum_i ||x_i - xbar_{k(i)}||`.
pub fn classification_cost(cls: &BalancedClassification, points: &[Point]) -> Result<f64> {
    let labels = cls.labels(points.len());
    let mut sum = 0.0;
    for (point, label) in points.iter().zip(labels) {
        let k = label.ok_or_else(|| Error::Config("point missing from the classification".into()))?;
        sum += point.dist(&cls.representatives[k]);
    }
    Ok(sum / points.len() as f64)
}

/// Wire form: `{"n","c","classes","representatives","cost","cost_bound"}`.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub c: usize,
    pub classes: Vec<Vec<usize>>,
    pub representatives: Vec<Point>,
    pub cost: f64,
    pub cost_bound: f64,
}

impl ClassificationReport {
    pub fn new(cls: &BalancedClassification, points: &[Point]) -> Result<Self> {
        Ok(ClassificationReport {
            n: cls.n,
            c: cls.c,
            classes: cls.classes.clone(),
            representatives: cls.representatives.clone(),
            cost: classification_cost(cls, points)?,
            cost_bound: cls.cost_bound()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts1(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::new(vec![x]).unwrap()).collect()
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(1, 3), 1);
        assert_eq!(integer_root(7, 3), 1);
        assert_eq!(integer_root(8, 3), 2);
        assert_eq!(integer_root(99, 2), 9);
        assert_eq!(integer_root(100, 2), 10);
        assert_eq!(integer_root(1_000_000, 1), 1_000_000);
    }

    #[test]
    fn singletons() {
        let pts = pts1(&[0.3, -0.2, 0.9, 0.1, -1.0]);
        let cls = classify(&pts, 5).unwrap();
        assert!(cls.classes.iter().all(|c| c.len() == 1));
        assert!((1..=5).all(|k| cls.class_diameter(k, &pts) == 0.0));
        assert!(cls.check(&pts).unwrap().holds());
    }

    #[test]
    fn four_point_trace() {
        let pts = pts1(&[-1.0, -0.9, 0.9, 1.0]);
        let cls = classify(&pts, 2).unwrap();
        assert_eq!(cls.classes, vec![vec![2, 3], vec![0, 1]]);
        assert!((cls.class_diameter(1, &pts) - 0.1).abs() < 1e-15);
        assert!((cls.class_diameter(2, &pts) - 0.1).abs() < 1e-15);
        assert_eq!(diameter_bound(cls.r, 1, 1), 4.0);
        assert_eq!(diameter_bound(cls.r, 2, 1), 2.0);
        // Representatives: center of B_1 is 0, center of [-1, 0) is -0.5.
        let cost = classification_cost(&cls, &pts).unwrap();
        assert!((cost - 0.7).abs() < 1e-15);
        let bound = cls.cost_bound().unwrap();
        assert!((bound - 2.0 * (1.0 + 2f64.ln())).abs() < 1e-12);
        assert!(cls.check(&pts).unwrap().holds());
    }

    #[test]
    fn identical_points() {
        let pts = pts1(&[0.5; 6]);
        let cls = classify(&pts, 3).unwrap();
        assert!((1..=3).all(|k| cls.class_diameter(k, &pts) == 0.0));
        let check = cls.check(&pts).unwrap();
        assert!(check.holds());
        let at_origin = vec![Point::origin(2); 4];
        let cls = classify(&at_origin, 2).unwrap();
        assert_eq!(classification_cost(&cls, &at_origin).unwrap(), 0.0);
    }

    #[test]
    fn indivisible() {
        let pts = pts1(&[0.0, 1.0, 2.0]);
        assert!(matches!(classify(&pts, 2), Err(Error::IndivisibleCount { count: 3, classes: 2 })));
    }

    #[test]
    fn report_shape() {
        let pts = pts1(&[-1.0, -0.9, 0.9, 1.0]);
        let cls = classify(&pts, 2).unwrap();
        let json = serde_json::to_value(ClassificationReport::new(&cls, &pts).unwrap()).unwrap();
        assert_eq!(json["c"], 2);
        assert_eq!(json["classes"][1], serde_json::json!([0, 1]));
        assert_eq!(json["representatives"][1], serde_json::json!([-0.5]));
    }
}
