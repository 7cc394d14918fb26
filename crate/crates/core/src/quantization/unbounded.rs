//! Quantization of measures whose support is not uniformly bounded in `n`:
//! truncate at a level `r(n)` that grows with `n`, then quantize the
//! truncated measure.
//!
//! With `f = f_{p,d}(n)`, `r~ = f^{-p/q}`, tail moment
//! `C_q(r) = int_{||x|| > r} ||x||^q drho` and `C(r) = max(C_q(r), 1/r)`,
//! the truncation level is `r(n) = C(r~) r~`.

use super::rate::rate_bound;
use super::{quantize, Quantizer};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSchedule {
    /// `f_{p,d}(n)`.
    pub rate: f64,
    /// `r~ = f^{-p/q}`.
    pub pivot: f64,
    /// `C(r~) = max(C_q(r~), 1/r~)`.
    pub tail_constant: f64,
    /// `r(n) = C(r~) r~`.
    pub radius: f64,
}

pub fn truncation_schedule(rho: &DiscreteMeasure, p: f64, q: f64, n: usize) -> Result<TruncationSchedule> {
    if !(q > p) || !q.is_finite() {
        return Err(Error::InvalidOrder { p, q });
    }
    let rate = rate_bound(p, rho.dim(), n)?;
    let pivot = rate.powf(-p / q);
    let tail_constant = rho.tail_moment(q, pivot).max(1.0 / pivot);
    Ok(TruncationSchedule { rate, pivot, tail_constant, radius: tail_constant * pivot })
}

#[derive(Debug, Clone)]
pub struct UnboundedQuantizer {
    pub p: f64,
    pub q: f64,
    pub schedule: TruncationSchedule,
    pub quantizer: Quantizer,
    /// `(int_{||x|| > r(n)} ||x||^p drho)^{1/p}`, the cost of moving the
    /// truncated mass to the origin; bounds `W_p(rho, rho^{(r)})`.
    pub tail_bound: f64,
    /// `4 r(n) f_{p,d}(n)`; bounds `W_p(mu^{(n)}, rho^{(r)})`.
    pub quantization_bound: f64,
}

impl UnboundedQuantizer {
    /// Triangle-inequality bound on `W_p(mu^{(n)}, rho)`.
    pub fn certificate(&self) -> f64 {
        self.tail_bound + self.quantization_bound
    }
}

pub fn quantize_unbounded(rho: &DiscreteMeasure, n: usize, p: f64, q: f64) -> Result<UnboundedQuantizer> {
    let schedule = truncation_schedule(rho, p, q, n)?;
    let truncated = rho.truncate(schedule.radius)?;
    let quantizer = quantize(&truncated, n)?;
    let tail_bound = rho.tail_moment(p, schedule.radius).powf(1.0 / p);
    Ok(UnboundedQuantizer {
        p,
        q,
        schedule,
        quantizer,
        tail_bound,
        quantization_bound: 4.0 * schedule.radius * schedule.rate,
    })
}
