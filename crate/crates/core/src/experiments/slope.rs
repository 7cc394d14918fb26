use serde::Serialize;

/// Least-squares fit of `log(value) = intercept + slope * log(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; needs at least three points.
    pub std_error: Option<f64>,
    pub points: usize,
}

/// Fit over all `(n, value)` pairs with `value > 0`. `None` with fewer than
/// two usable points or a single distinct `n`.
pub fn fit_log_log(samples: &[(usize, f64)]) -> Option<SlopeFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(n, v)| *n > 0 && *v > 0.0 && v.is_finite())
        .map(|&(n, v)| ((n as f64).ln(), v.ln()))
        .collect();
    let k = pts.len();
    if k < 2 {
        return None;
    }
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / k as f64;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / k as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let std_error = (k > 2).then(|| {
        let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
        (ssr / (k - 2) as f64 / sxx).sqrt()
    });
    Some(SlopeFit { slope, intercept, std_error, points: k })
}

/// Fit over the upper half (by `n`) of the samples, skipping small-`n` transients.
pub fn fit_upper_half(samples: &[(usize, f64)]) -> Option<SlopeFit> {
    let mut sorted = samples.to_vec();
    sorted.sort_by_key(|s| s.0);
    fit_log_log(&sorted[sorted.len() / 2..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let samples: Vec<(usize, f64)> = (1..=20).map(|n| (n, 3.0 * (n as f64).powf(-0.5))).collect();
        let fit = fit_log_log(&samples).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit.std_error.unwrap() < 1e-10);
    }

    #[test]
    fn degenerate_fits() {
        assert!(fit_log_log(&[(4, 1.0)]).is_none());
        assert!(fit_log_log(&[(4, 1.0), (4, 2.0)]).is_none());
        assert!(fit_log_log(&[(4, 1.0), (8, 0.0)]).is_none());
        let two = fit_log_log(&[(2, 1.0), (8, 0.5)]).unwrap();
        assert!((two.slope + 0.5).abs() < 1e-12);
        assert!(two.std_error.is_none());
        assert!(fit_upper_half(&[(4, 1.0)]).is_none());
    }

    #[test]
    fn upper_half_ignores_transient() {
        let mut samples: Vec<(usize, f64)> = (10..=20).map(|n| (n, (n as f64).powi(-1))).collect();
        samples.extend((1..10).map(|n| (n, 100.0)));
        let fit = fit_upper_half(&samples).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-12);
    }
}
