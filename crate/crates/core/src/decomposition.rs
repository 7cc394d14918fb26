//! Uniform decomposition of a probability measure into `n` pieces of mass
//! `1/n`, piece `k` supported in a cube of diameter at most `4 r k^{-1/d}`.
//!
//! Each step partitions the centered ball `B_r` into `m^d` congruent cubes
//! with `m = floor((n |nu|)^{1/d})` and takes the heaviest one. There are at
//! most `n |nu|` cubes, so by pigeonhole the heaviest carries at least `1/n`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::{order_free_sum, Cube, CubePartition, DiscreteMeasure, MASS_SLACK};

/// Largest `m >= 1` with `m^d <= x`, allowing a relative slack of `1e-12` on `x`
/// so that values meant to be integers survive rounding.
pub fn floor_root(x: f64, dim: usize) -> usize {
    let x = x * (1.0 + 1e-12);
    let fits = |m: usize| (m as f64).powi(dim as i32) <= x;
    let mut m = (x.max(1.0).powf(1.0 / dim as f64).floor() as usize).max(1);
    while fits(m + 1) {
        m += 1;
    }
    while m > 1 && !fits(m) {
        m -= 1;
    }
    m
}

/// Per-piece diameter certificate `4 r k^{-1/d}`.
pub fn diameter_bound(r: f64, k: usize, dim: usize) -> f64 {
    4.0 * r * (k as f64).powf(-1.0 / dim as f64)
}

/// Heaviest cube of the regular `m^d` partition of `B_r`, with
/// `m = floor((n |nu|)^{1/d})`. Ties within `1e-12` of the maximum go to the
/// lexicographically smallest cell.
pub fn heavy_cube(nu: &DiscreteMeasure, n: usize, r: f64) -> Result<Cube> {
    heavy_cell(nu, n, r).map(|(cube, _)| cube)
}

fn heavy_cell(nu: &DiscreteMeasure, n: usize, r: f64) -> Result<(Cube, f64)> {
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidRadius(r));
    }
    let mass = nu.total_mass();
    let required = 1.0 / n as f64;
    if mass < required - MASS_SLACK {
        return Err(Error::InsufficientTotalMass { mass, required });
    }
    let dim = nu.dim();
    let per_axis = if r == 0.0 { 1 } else { floor_root(n as f64 * mass, dim) };
    let partition = CubePartition::new(dim, r, per_axis);

    let mut bins: Vec<Vec<f64>> = vec![Vec::new(); partition.cell_count()];
    for atom in nu.atoms().iter().filter(|a| a.weight > 0.0) {
        let cell = partition.locate(&atom.point).ok_or_else(|| {
            Error::InvalidMeasure(format!("atom {:?} lies outside B_{r}", atom.point.coords()))
        })?;
        bins[cell].push(atom.weight);
    }
    let masses: Vec<f64> = bins.iter_mut().map(|b| order_free_sum(b)).collect();
    let best = masses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let chosen =
        masses.iter().position(|&m| m >= best - MASS_SLACK).expect("partition has at least one cell");
    Ok((partition.cell(chosen), masses[chosen]))
}

/// One `(rho_k, A_k)` pair.
#[derive(Debug, Clone)]
pub struct DecompositionPiece {
    pub k: usize,
    pub piece: DiscreteMeasure,
    pub cube: Cube,
    /// Index in the decomposed measure of each atom of `piece`.
    pub source_indices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct UniformDecomposition {
    pub n: usize,
    pub r: f64,
    pub dim: usize,
    /// Ordered by `k = 1..=n`.
    pub pieces: Vec<DecompositionPiece>,
}

/// Worst-case deviations of a decomposition from its invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionCheck {
    pub max_piece_mass_error: f64,
    pub max_reconstruction_error: f64,
    pub support_in_cubes: bool,
    pub diameters_certified: bool,
}

impl DecompositionCheck {
    pub fn holds(&self) -> bool {
        self.max_piece_mass_error <= 1e-12
            && self.max_reconstruction_error <= 1e-9
            && self.support_in_cubes
            && self.diameters_certified
    }
}

/// Decompose a probability measure into `n` pieces of mass `1/n`.
///
/// Pieces are produced for `j = n, n-1, ..., 1`; at step `j` the remainder has
/// mass `j/n` (renormalized exactly after every split) and the heavy cube has
/// side `2r / floor(j^{1/d})`.
pub fn decompose(rho: &DiscreteMeasure, n: usize) -> Result<UniformDecomposition> {
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    rho.ensure_probability()?;
    let r = rho.bounding_radius()?;
    let share = 1.0 / n as f64;

    let mut remainder = rho.clone();
    let mut pieces = Vec::with_capacity(n);
    for j in (1..=n).rev() {
        let (cube, _) = heavy_cell(&remainder, n, r)?;
        let split = remainder.split(&cube, share)?;
        remainder = if j == 1 {
            split.remainder.scaled(0.0)
        } else {
            let left = split.remainder.total_mass();
            let target = (j - 1) as f64 / n as f64;
            if left > 0.0 {
                split.remainder.scaled(target / left)
            } else {
                split.remainder
            }
        };
        pieces.push(DecompositionPiece {
            k: j,
            piece: split.piece,
            cube,
            source_indices: split.source_indices,
        });
    }
    pieces.reverse();
    Ok(UniformDecomposition { n, r, dim: rho.dim(), pieces })
}

impl UniformDecomposition {
    /// Sum of the pieces, expressed on the atom list of the decomposed measure.
    pub fn reconstruct(&self, source_len: usize) -> Vec<f64> {
        let mut parts: Vec<Vec<f64>> = vec![Vec::new(); source_len];
        for piece in &self.pieces {
            for (atom, &i) in piece.piece.atoms().iter().zip(&piece.source_indices) {
                parts[i].push(atom.weight);
            }
        }
        parts.iter_mut().map(|p| order_free_sum(p)).collect()
    }

    pub fn check(&self, source: &DiscreteMeasure) -> DecompositionCheck {
        let share = 1.0 / self.n as f64;
        let max_piece_mass_error =
            self.pieces.iter().map(|p| (p.piece.total_mass() - share).abs()).fold(0.0, f64::max);
        let max_reconstruction_error = self
            .reconstruct(source.len())
            .iter()
            .zip(source.weights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let support_in_cubes =
            self.pieces.iter().all(|p| p.piece.atoms().iter().all(|a| p.cube.contains(&a.point)));
        let diameters_certified =
            self.pieces.iter().all(|p| p.cube.diameter() <= diameter_bound(self.r, p.k, self.dim));
        DecompositionCheck {
            max_piece_mass_error,
            max_reconstruction_error,
            support_in_cubes,
            diameters_certified,
        }
    }
}

impl Serialize for DecompositionPiece {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DecompositionPiece", 3)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("cube", &self.cube)?;
        s.serialize_field("atoms", self.piece.atoms())?;
        s.end()
    }
}

impl Serialize for UniformDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("UniformDecomposition", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("r", &self.r)?;
        s.serialize_field("pieces", &self.pieces)?;
        s.end()
    }
}
