//! Riemann zeta on the real half-line `s > 1`, with a rigorous bracket.
//!
//! `zeta(s) = sum_{k<K} k^{-s} + T_K` where, by Euler-Maclaurin for the
//! completely monotone `f(x) = x^{-s}`,
//!
//! ```text
//! T_K = K^{1-s}/(s-1) + K^{-s}/2 + s K^{-s-1}/12 - theta * s(s+1)(s+2) K^{-s-3}/720
//! ```
//!
//! for some `theta` in `(0, 1)`. Dropping or keeping the last term gives the
//! upper and lower ends of the bracket.

use crate::error::{Error, Result};

/// Width below which the bracket is accepted.
pub const ZETA_BRACKET_WIDTH: f64 = 1e-12;

const MAX_TERMS: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaBracket {
    pub lower: f64,
    pub upper: f64,
    /// Number of explicitly summed terms plus one (`K`).
    pub cutoff: usize,
}

impl ZetaBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

fn bracket_at(s: f64, cutoff: usize) -> ZetaBracket {
    // Smallest terms first.
    let partial: f64 = (1..cutoff).rev().map(|k| (k as f64).powf(-s)).sum();
    let k = cutoff as f64;
    let upper_tail = k.powf(1.0 - s) / (s - 1.0) + 0.5 * k.powf(-s) + s * k.powf(-s - 1.0) / 12.0;
    let correction = s * (s + 1.0) * (s + 2.0) * k.powf(-s - 3.0) / 720.0;
    ZetaBracket { lower: partial + upper_tail - correction, upper: partial + upper_tail, cutoff }
}

pub fn zeta_bracket(s: f64) -> Result<ZetaBracket> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::DivergentSeries(s));
    }
    let mut cutoff = 16;
    loop {
        let bracket = bracket_at(s, cutoff);
        if bracket.width() < ZETA_BRACKET_WIDTH {
            return Ok(bracket);
        }
        if cutoff >= MAX_TERMS {
            return Err(Error::Numerical(format!("zeta({s}) bracket did not converge")));
        }
        cutoff *= 2;
    }
}

/// `zeta(s)` for real `s > 1`, the midpoint of [`zeta_bracket`].
pub fn zeta(s: f64) -> Result<f64> {
    zeta_bracket(s).map(|b| b.midpoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: long partial sum with the plain integral bracket
    /// `[(K+1)^{1-s}, K^{1-s}] / (s-1)` on the tail.
    fn crude_zeta(s: f64, terms: usize) -> (f64, f64) {
        let partial: f64 = (1..=terms).rev().map(|k| (k as f64).powf(-s)).sum();
        let k = terms as f64;
        (partial + (k + 1.0).powf(1.0 - s) / (s - 1.0), partial + k.powf(1.0 - s) / (s - 1.0))
    }

    #[test]
    fn zeta_two_is_basel() {
        let basel = std::f64::consts::PI.powi(2) / 6.0;
        assert!((zeta(2.0).unwrap() - basel).abs() < 1e-12);
        let (lo, hi) = crude_zeta(2.0, 1_000_000);
        assert!(lo - 1e-13 <= zeta(2.0).unwrap() && zeta(2.0).unwrap() <= hi + 1e-13);
    }

    #[test]
    fn zeta_ten() {
        // 1.000994575127818085337...
        assert!((zeta(10.0).unwrap() - 1.000_994_575_127_818_1).abs() < 1e-14);
        let (lo, hi) = crude_zeta(10.0, 1000);
        assert!((lo - zeta(10.0).unwrap()).abs() < 1e-14 && (hi - lo) < 1e-26);
    }

    #[test]
    fn bracket_contains_crude_oracle() {
        for s in [1.5, 3.0, 4.5] {
            let b = zeta_bracket(s).unwrap();
            let (lo, hi) = crude_zeta(s, 200_000);
            assert!(b.lower <= hi + 1e-13 && lo - 1e-13 <= b.upper, "s={s}");
        }
    }

    #[test]
    fn bracket_width_and_order() {
        for s in [1.1, 1.5, 2.0, 3.0, 10.0, 1.0 + 1e-6] {
            let b = zeta_bracket(s).unwrap();
            assert!(b.width() < ZETA_BRACKET_WIDTH, "s={s}");
            assert!(b.lower <= b.midpoint() && b.midpoint() <= b.upper);
        }
    }

    #[test]
    fn divergent() {
        assert!(matches!(zeta(1.0), Err(Error::DivergentSeries(_))));
        assert!(matches!(zeta(0.5), Err(Error::DivergentSeries(_))));
        assert!(matches!(zeta(f64::NAN), Err(Error::DivergentSeries(_))));
    }
}
