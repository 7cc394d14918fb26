//! Fixtures shared by the benchmarks.

use uniquant_core::measure::{synth, DiscreteMeasure};

/// Uniform weights on an `m x m` grid of `[-1, 1]^2`.
pub fn grid_2d(m: usize) -> DiscreteMeasure {
    synth(&format!("grid:d=2,m={m},r=1").parse().expect("valid spec")).expect("valid grid")
}

/// `count` seeded Gaussian draws in dimension `dim`.
pub fn gaussian(count: usize, dim: usize, seed: u64) -> DiscreteMeasure {
    synth(&format!("sample:dist=gaussian,N={count},d={dim},seed={seed}").parse().expect("valid spec"))
        .expect("valid sample")
}
