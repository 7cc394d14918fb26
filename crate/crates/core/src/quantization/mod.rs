//! Deterministic empirical quantizers built from a uniform decomposition.
//!
//! The quantizer puts one atom of mass `1/n` at the center of every cube
//! `A_k`. Sending each piece `rho_k` to its center is a coupling, so the
//! quantization error is at most `(n^{-1} sum_k Diam(A_k)^p)^{1/p}`, which is
//! itself at most `4 r f_{p,d}(n)`.

mod rate;
mod unbounded;
mod zeta;

pub use rate::{closed_form_bound, rate_bound, RateRegime, Regime};
pub use unbounded::{quantize_unbounded, truncation_schedule, TruncationSchedule, UnboundedQuantizer};
pub use zeta::{zeta, zeta_bracket, ZetaBracket, ZETA_BRACKET_WIDTH};

use serde::Serialize;

use crate::decomposition::{decompose, UniformDecomposition};
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, Point};

#[derive(Debug, Clone)]
pub struct Quantizer {
    pub centers: Vec<Point>,
    pub decomposition: UniformDecomposition,
}

impl Quantizer {
    pub fn n(&self) -> usize {
        self.centers.len()
    }

    /// `n^{-1} sum_k delta_{x_k}`.
    pub fn empirical_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure::uniform(self.decomposition.dim, self.centers.clone())
            .expect("centers share the decomposition dimension")
    }

    pub fn certificates(&self, p: f64) -> Result<Certificates> {
        let dec = &self.decomposition;
        Ok(Certificates {
            p,
            coupling_bound: coupling_upper_bound(dec, p)?,
            closed_form_bound: closed_form_bound(dec.r, p, dec.dim, dec.n)?,
        })
    }
}

/// Quantize `rho` with `n` equally weighted atoms at the decomposition's cube centers.
pub fn quantize(rho: &DiscreteMeasure, n: usize) -> Result<Quantizer> {
    let decomposition = decompose(rho, n)?;
    let centers = decomposition.pieces.iter().map(|p| p.cube.center().clone()).collect();
    Ok(Quantizer { centers, decomposition })
}

/// `(n^{-1} sum_k Diam(A_k)^p)^{1/p}` over the constructed cubes.
pub fn coupling_upper_bound(dec: &UniformDecomposition, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    let mean = dec.pieces.iter().map(|piece| piece.cube.diameter().powf(p)).sum::<f64>() / dec.n as f64;
    Ok(mean.powf(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificates {
    pub p: f64,
    pub coupling_bound: f64,
    pub closed_form_bound: f64,
}

/// Wire form of a quantizer:
/// `{"centers": [[..], ..], "n": .., "certificates": {..}}`.
#[derive(Debug, Clone, Serialize)]
pub struct QuantizerReport {
    pub centers: Vec<Point>,
    pub n: usize,
    pub certificates: Certificates,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationReport>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TruncationReport {
    pub q: f64,
    pub radius: f64,
    pub tail_bound: f64,
    pub quantization_bound: f64,
    pub certificate: f64,
}

impl QuantizerReport {
    pub fn new(quantizer: &Quantizer, p: f64) -> Result<Self> {
        Ok(QuantizerReport {
            centers: quantizer.centers.clone(),
            n: quantizer.n(),
            certificates: quantizer.certificates(p)?,
            truncation: None,
        })
    }

    pub fn unbounded(result: &UnboundedQuantizer) -> Result<Self> {
        let mut report = Self::new(&result.quantizer, result.p)?;
        report.truncation = Some(TruncationReport {
            q: result.q,
            radius: result.schedule.radius,
            tail_bound: result.tail_bound,
            quantization_bound: result.quantization_bound,
            certificate: result.certificate(),
        });
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;

    fn m1(atoms: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::new(
            1,
            atoms.iter().map(|&(x, w)| Atom::new(Point::new(vec![x]).unwrap(), w)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn dirac_single_center() {
        let q = quantize(&DiscreteMeasure::dirac(Point::origin(2)), 1).unwrap();
        assert_eq!(q.centers, vec![Point::origin(2)]);
        assert_eq!(coupling_upper_bound(&q.decomposition, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn two_dirac_centers_and_bounds() {
        let q = quantize(&m1(&[(-1.0, 0.5), (1.0, 0.5)]), 2).unwrap();
        let centers: Vec<f64> = q.centers.iter().map(|c| c.coords()[0]).collect();
        // Center of A_1 = B_1 is 0, center of A_2 = [-1, 0) is -0.5.
        assert_eq!(centers, vec![0.0, -0.5]);
        assert_eq!(coupling_upper_bound(&q.decomposition, 1.0).unwrap(), 1.5);
        let cert = q.certificates(1.0).unwrap();
        assert!((cert.closed_form_bound - 2.0 * (1.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn single_piece_bound_is_diameter() {
        let rho = m1(&[(-0.5, 0.5), (0.25, 0.5)]);
        let q = quantize(&rho, 1).unwrap();
        assert_eq!(coupling_upper_bound(&q.decomposition, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn coupling_bound_below_closed_form() {
        let rho = crate::measure::synth(&"grid:d=2,m=9,r=1".parse().unwrap()).unwrap();
        for n in 1..=40 {
            let q = quantize(&rho, n).unwrap();
            for p in [1.0, 1.5, 2.0, 3.0] {
                let c = q.certificates(p).unwrap();
                assert!(c.coupling_bound <= c.closed_form_bound, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let rho = crate::measure::synth(&"sample:dist=gaussian,N=300,d=2,seed=3".parse().unwrap()).unwrap();
        assert_eq!(quantize(&rho, 17).unwrap().centers, quantize(&rho, 17).unwrap().centers);
    }

    #[test]
    fn report_shape() {
        let q = quantize(&m1(&[(-1.0, 0.5), (1.0, 0.5)]), 2).unwrap();
        let json = serde_json::to_value(QuantizerReport::new(&q, 1.0).unwrap()).unwrap();
        assert_eq!(json["n"], 2);
        assert_eq!(json["centers"][1][0], -0.5);
        assert_eq!(json["certificates"]["coupling_bound"], 1.5);
        assert!(json.get("truncation").is_none());
    }
}
