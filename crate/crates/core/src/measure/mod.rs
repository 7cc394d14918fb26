//! Finitely supported measures on `R^d` under the maximum norm.
//!
//! A [`DiscreteMeasure`] is an ordered list of weighted atoms. Atom order is
//! significant for bookkeeping (pieces refer back to atom indices) and
//! zero-weight atoms are kept, so that a measure can always be reconstructed
//! atom by atom from the pieces split off it.

mod cube;
mod io;
mod synth;

pub use cube::{Cube, CubePartition};
pub use io::{load_measure, save_measure, MeasureFormat};
pub use synth::{synth, GeneratorSpec, SampleDist};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed between a requested piece mass and what a cube holds.
pub const MASS_SLACK: f64 = 1e-12;

/// Tolerance for `|total mass - 1|` of a probability measure.
pub const PROBABILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidMeasure("point has no coordinates".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidMeasure(format!("non-finite coordinate {bad}")));
        }
        Ok(Point(coords))
    }

    pub(crate) fn new_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(rename = "x")]
    pub point: Point,
    #[serde(rename = "w")]
    pub weight: f64,
}

impl Atom {
    pub fn new(point: Point, weight: f64) -> Self {
        Atom { point, weight }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct DiscreteMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(raw.dim, raw.atoms)
    }
}

/// Sum that does not depend on the order of its inputs: the values are
/// sorted before a compensated summation.
pub(crate) fn order_free_sum(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &v in values.iter() {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Outcome of splitting a measure along a cube.
#[derive(Debug, Clone)]
pub(crate) struct Split {
    pub piece: DiscreteMeasure,
    /// Index in the source measure of every piece atom.
    pub source_indices: Vec<usize>,
    pub remainder: DiscreteMeasure,
}

impl DiscreteMeasure {
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMeasure("dimension must be positive".into()));
        }
        for atom in &atoms {
            if atom.point.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: atom.point.dim() });
            }
            if !(atom.weight >= 0.0) || !atom.weight.is_finite() {
                return Err(Error::InvalidMeasure(format!("bad atom weight {}", atom.weight)));
            }
        }
        Ok(DiscreteMeasure { dim, atoms })
    }

    /// Uniform measure `N^{-1} sum_i delta_{x_i}` on the given points.
    pub fn uniform(dim: usize, points: Vec<Point>) -> Result<Self> {
        let w = 1.0 / points.len() as f64;
        Self::new(dim, points.into_iter().map(|p| Atom::new(p, w)).collect())
    }

    pub fn dirac(point: Point) -> Self {
        DiscreteMeasure { dim: point.dim(), atoms: vec![Atom::new(point, 1.0)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.weight)
    }

    pub fn total_mass(&self) -> f64 {
        order_free_sum(&mut self.weights().collect::<Vec<_>>())
    }

    pub fn is_probability(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= PROBABILITY_TOL
    }

    pub fn ensure_probability(&self) -> Result<()> {
        if self.is_probability() {
            Ok(())
        } else {
            Err(Error::InvalidMeasure(format!(
                "expected a probability measure, total mass is {}",
                self.total_mass()
            )))
        }
    }

    /// Copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let atoms = self.atoms.iter().map(|a| Atom::new(a.point.clone(), a.weight * factor)).collect();
        DiscreteMeasure { dim: self.dim, atoms }
    }

    /// Copy rescaled to total mass one.
    pub fn normalized(&self) -> Result<Self> {
        let mass = self.total_mass();
        if mass <= 0.0 {
            return Err(Error::EmptyMeasure);
        }
        Ok(self.scaled(1.0 / mass))
    }

    /// Smallest `r` such that every positive-weight atom lies in `B_r = [-r, r]^d`.
    pub fn bounding_radius(&self) -> Result<f64> {
        self.atoms
            .iter()
            .filter(|a| a.weight > 0.0)
            .map(|a| a.point.norm())
            .reduce(f64::max)
            .ok_or(Error::EmptyMeasure)
    }

    /// Mass carried by the atoms lying in `cube`.
    pub fn mass_in(&self, cube: &Cube) -> f64 {
        let mut inside: Vec<f64> =
            self.atoms.iter().filter(|a| cube.contains(&a.point)).map(|a| a.weight).collect();
        order_free_sum(&mut inside)
    }

    /// Split off `target_mass` from the atoms inside `cube`, every inside atom
    /// contributing in proportion to its weight.
    ///
    /// The piece lists the inside atoms of positive weight; the remainder keeps
    /// the full atom list with residual weights.
    pub fn restrict_and_rescale(&self, cube: &Cube, target_mass: f64) -> Result<(Self, Self)> {
        let split = self.split(cube, target_mass)?;
        Ok((split.piece, split.remainder))
    }

    pub(crate) fn split(&self, cube: &Cube, target_mass: f64) -> Result<Split> {
        let available = self.mass_in(cube);
        if available < target_mass - MASS_SLACK {
            return Err(Error::InsufficientMass { available, requested: target_mass });
        }
        let scale = if available > 0.0 { target_mass / available } else { 0.0 };

        let mut piece_atoms = Vec::new();
        let mut source_indices = Vec::new();
        let mut remainder_atoms = Vec::with_capacity(self.atoms.len());
        for (i, atom) in self.atoms.iter().enumerate() {
            if atom.weight > 0.0 && cube.contains(&atom.point) {
                let taken = atom.weight * scale;
                piece_atoms.push(Atom::new(atom.point.clone(), taken));
                source_indices.push(i);
                remainder_atoms.push(Atom::new(atom.point.clone(), (atom.weight - taken).max(0.0)));
            } else {
                remainder_atoms.push(atom.clone());
            }
        }
        Ok(Split {
            piece: DiscreteMeasure { dim: self.dim, atoms: piece_atoms },
            source_indices,
            remainder: DiscreteMeasure { dim: self.dim, atoms: remainder_atoms },
        })
    }

    /// Keep the atoms inside the closed ball `B_r` and move all outside mass
    /// onto a single atom at the origin (appended only if something moved).
    pub fn truncate(&self, r: f64) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(Error::InvalidRadius(r));
        }
        let (kept, moved): (Vec<&Atom>, Vec<&Atom>) = self.atoms.iter().partition(|a| a.point.norm() <= r);
        let mut atoms: Vec<Atom> = kept.into_iter().cloned().collect();
        if !moved.is_empty() {
            let mass = order_free_sum(&mut moved.iter().map(|a| a.weight).collect::<Vec<_>>());
            atoms.push(Atom::new(Point::origin(self.dim), mass));
        }
        Ok(DiscreteMeasure { dim: self.dim, atoms })
    }

    /// `int ||x||^q 1{||x|| > r} dmu(x)`.
    pub fn tail_moment(&self, q: f64, r: f64) -> f64 {
        let mut terms: Vec<f64> = self
            .atoms
            .iter()
            .filter(|a| a.point.norm() > r)
            .map(|a| a.weight * a.point.norm().powf(q))
            .collect();
        order_free_sum(&mut terms)
    }

    /// Draw `count` i.i.d. atoms from this measure; returns the uniform
    /// empirical measure on the draws.
    pub fn sample_empirical<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<Self> {
        let index = WeightedIndex::new(self.weights()).map_err(|_| Error::EmptyMeasure)?;
        let points = (0..count).map(|_| self.atoms[index.sample(rng)].point.clone()).collect();
        Self::uniform(self.dim, points)
    }
}
