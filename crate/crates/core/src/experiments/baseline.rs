use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::transport::exact_wasserstein;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineStats {
    pub mean: f64,
    /// Sample standard deviation; zero for a single trial.
    pub std_dev: f64,
    pub trials: usize,
}

/// Mean and spread of `W_p(rho_n, rho)` over `trials` i.i.d. empirical
/// measures `rho_n` of `n` points, reproducible from `seed`.
pub fn random_empirical_error(
    rho: &DiscreteMeasure,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<BaselineStats> {
    if trials == 0 || n == 0 {
        return Err(Error::Config("baseline needs at least one trial and one point".into()));
    }
    let mut values = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let sample = rho.sample_empirical(n, &mut rng)?;
        values.push(exact_wasserstein(&sample, rho, p)?.value);
    }
    let mean = values.iter().sum::<f64>() / trials as f64;
    let std_dev = if trials > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(BaselineStats { mean, std_dev, trials })
}
