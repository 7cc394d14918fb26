use serde::Serialize;

use super::zeta::zeta;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `p < d`: density-like rate `n^{-1/d}`.
    Sub,
    /// `p = d`: `n^{-1/d}` with a logarithmic factor.
    Critical,
    /// `p > d`: disconnected-support rate `n^{-1/p}`.
    Super,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRegime {
    pub p: f64,
    pub d: usize,
    pub regime: Regime,
}

impl RateRegime {
    pub fn new(p: f64, d: usize) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        if d == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        let df = d as f64;
        let regime = if p < df {
            Regime::Sub
        } else if p == df {
            Regime::Critical
        } else {
            Regime::Super
        };
        Ok(RateRegime { p, d, regime })
    }

    /// `f_{p,d}(n)`.
    pub fn rate(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        let (p, d, n) = (self.p, self.d as f64, n as f64);
        Ok(match self.regime {
            Regime::Sub => (d / (d - p)).powf(1.0 / p) * n.powf(-1.0 / d),
            Regime::Critical => ((1.0 + n.ln()) / n).powf(1.0 / d),
            Regime::Super => zeta(p / d)? * n.powf(-1.0 / p),
        })
    }
}

/// The three-regime rate function `f_{p,d}(n)`.
pub fn rate_bound(p: f64, d: usize, n: usize) -> Result<f64> {
    RateRegime::new(p, d)?.rate(n)
}

/// `4 r f_{p,d}(n)`, the closed-form bound on the quantization error.
pub fn closed_form_bound(r: f64, p: f64, d: usize, n: usize) -> Result<f64> {
    Ok(4.0 * r * rate_bound(p, d, n)?)
}
