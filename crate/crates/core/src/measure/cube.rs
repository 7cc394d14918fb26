use serde::{Serialize, Serializer};

use super::Point;

/// Axis-aligned hypercube, i.e. a ball of the maximum norm.
///
/// Membership is decided by explicit per-axis bounds rather than by
/// `center ± half_side`, so that neighbouring cells of a [`CubePartition`]
/// share their boundary value bit for bit. Each axis is half-open `[lo, hi)`
/// unless its upper face lies on the enclosing domain, where it is closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Cube {
    center: Point,
    half_side: f64,
    lo: Vec<f64>,
    hi: Vec<f64>,
    upper_closed: Vec<bool>,
}

impl Cube {
    /// The closed centered ball `B_r = [-r, r]^d`.
    pub fn ball(dim: usize, r: f64) -> Self {
        Cube {
            center: Point::origin(dim),
            half_side: r,
            lo: vec![-r; dim],
            hi: vec![r; dim],
            upper_closed: vec![true; dim],
        }
    }

    /// Half-open cube `[c - h, c + h)` on every axis.
    pub fn half_open(center: Point, half_side: f64) -> Self {
        let lo = center.coords().iter().map(|c| c - half_side).collect();
        let hi = center.coords().iter().map(|c| c + half_side).collect();
        let dim = center.dim();
        Cube { center, half_side, lo, hi, upper_closed: vec![false; dim] }
    }

    /// Closed cube `[c - h, c + h]` on every axis.
    pub fn closed(center: Point, half_side: f64) -> Self {
        let mut cube = Self::half_open(center, half_side);
        cube.upper_closed.iter_mut().for_each(|c| *c = true);
        cube
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn half_side(&self) -> f64 {
        self.half_side
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Per-axis lower and upper faces.
    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    /// Max-norm diameter, `2 * half_side`.
    pub fn diameter(&self) -> f64 {
        2.0 * self.half_side
    }

    pub fn contains(&self, point: &Point) -> bool {
        point.dim() == self.dim()
            && point.coords().iter().enumerate().all(|(axis, &x)| {
                x >= self.lo[axis] && (x < self.hi[axis] || (self.upper_closed[axis] && x <= self.hi[axis]))
            })
    }
}

impl Serialize for Cube {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            center: &'a Point,
            half_side: f64,
        }
        Wire { center: &self.center, half_side: self.half_side }.serialize(serializer)
    }
}

/// Regular partition of `B_r` into `m^d` congruent cubes of side `2r/m`.
///
/// Cells are addressed by a multi-index in `0..m` per axis; the flat index is
/// row-major with axis 0 most significant, so flat order is lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubePartition {
    dim: usize,
    radius: f64,
    per_axis: usize,
}

impl CubePartition {
    pub fn new(dim: usize, radius: f64, per_axis: usize) -> Self {
        assert!(dim >= 1 && per_axis >= 1 && radius >= 0.0);
        CubePartition { dim, radius, per_axis }
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    pub fn cell_count(&self) -> usize {
        self.per_axis.pow(self.dim as u32)
    }

    fn boundary(&self, i: usize) -> f64 {
        if i == self.per_axis {
            self.radius
        } else {
            -self.radius + i as f64 * (2.0 * self.radius / self.per_axis as f64)
        }
    }

    fn locate_axis(&self, x: f64) -> Option<usize> {
        if !(x >= -self.radius && x <= self.radius) {
            return None;
        }
        let m = self.per_axis;
        if self.radius == 0.0 {
            return Some(0);
        }
        let guess = ((x + self.radius) / (2.0 * self.radius) * m as f64).floor();
        let mut i = (guess.max(0.0) as usize).min(m - 1);
        while i > 0 && x < self.boundary(i) {
            i -= 1;
        }
        while i + 1 < m && x >= self.boundary(i + 1) {
            i += 1;
        }
        Some(i)
    }

    /// Flat index of the unique cell containing `point`, or `None` outside `B_r`.
    pub fn locate(&self, point: &Point) -> Option<usize> {
        debug_assert_eq!(point.dim(), self.dim);
        point.coords().iter().try_fold(0usize, |flat, &x| Some(flat * self.per_axis + self.locate_axis(x)?))
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for axis in (0..self.dim).rev() {
            idx[axis] = flat % self.per_axis;
            flat /= self.per_axis;
        }
        idx
    }

    pub fn cell(&self, flat: usize) -> Cube {
        let idx = self.multi_index(flat);
        let lo: Vec<f64> = idx.iter().map(|&i| self.boundary(i)).collect();
        let hi: Vec<f64> = idx.iter().map(|&i| self.boundary(i + 1)).collect();
        let center = Point::new_unchecked(lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect());
        let upper_closed = idx.iter().map(|&i| i + 1 == self.per_axis).collect();
        Cube { center, half_side: self.radius / self.per_axis as f64, lo, hi, upper_closed }
    }
}
