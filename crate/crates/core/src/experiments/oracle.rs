//! Upper estimates of the optimal uniform quantization error
//! `inf W_p(n^{-1} sum_k delta_{x_k}, rho)` by searching centers on a grid.
//!
//! On the line the search is exact over the candidate set: the optimal
//! coupling to a sorted uniform measure is the quantile coupling, which
//! splits `[0, 1]` into `n` slots of mass `1/n`, and the best center of each
//! slot can be chosen independently. In higher dimension the multisets of
//! candidates are enumerated when few enough, otherwise coordinate descent
//! runs from several deterministic starts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, Point};
use crate::transport::exact_wasserstein;

const MAX_GRID_POINTS: usize = 10_000_000;
const EXHAUSTIVE_LIMIT: u128 = 20_000;
const MAX_EXHAUSTIVE_N: usize = 6;
const DESCENT_BUDGET: usize = 50_000;
const DESCENT_ROUNDS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    QuantileSlots,
    Exhaustive,
    CoordinateDescent,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleOutcome {
    pub value: f64,
    pub centers: Vec<Point>,
    pub method: SearchMethod,
}

/// Grid search with the default candidate set (grid plus support points).
pub fn brute_force_optimal_uniform(
    rho: &DiscreteMeasure,
    n: usize,
    p: f64,
    resolution: f64,
) -> Result<OracleOutcome> {
    brute_force_optimal_uniform_with(rho, n, p, resolution, &[])
}

/// As [`brute_force_optimal_uniform`], with `extra` points added to the
/// candidates; the result is then never worse than placing centers there.
pub fn brute_force_optimal_uniform_with(
    rho: &DiscreteMeasure,
    n: usize,
    p: f64,
    resolution: f64,
    extra: &[Point],
) -> Result<OracleOutcome> {
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::Config(format!("grid resolution must be positive, got {resolution}")));
    }
    rho.ensure_probability()?;
    let r = rho.bounding_radius()?;
    let candidates = candidates(rho, r, resolution, extra)?;

    if rho.dim() == 1 {
        return Ok(quantile_slots(rho, n, p, &candidates));
    }
    let multisets = multiset_count(candidates.len(), n);
    if n <= MAX_EXHAUSTIVE_N && multisets <= EXHAUSTIVE_LIMIT {
        exhaustive(rho, n, p, &candidates)
    } else if n * candidates.len() <= DESCENT_BUDGET {
        coordinate_descent(rho, n, p, &candidates, extra)
    } else {
        Err(Error::ProblemTooLarge(format!(
            "{} candidates for {n} centers in dimension {}",
            candidates.len(),
            rho.dim()
        )))
    }
}

fn ticks(r: f64, resolution: f64) -> Vec<f64> {
    let steps = (2.0 * r / resolution + 1e-9).floor() as usize;
    let mut t: Vec<f64> = (0..=steps).map(|i| -r + i as f64 * resolution).collect();
    if t.last().is_some_and(|&last| last < r) {
        t.push(r);
    }
    t
}

fn candidates(rho: &DiscreteMeasure, r: f64, resolution: f64, extra: &[Point]) -> Result<Vec<Point>> {
    let dim = rho.dim();
    let axis = ticks(r, resolution);
    let count = (axis.len() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if count > MAX_GRID_POINTS as u128 {
        return Err(Error::ProblemTooLarge(format!("{count} grid candidates")));
    }
    let mut out: Vec<Point> = (0..count as usize)
        .map(|mut flat| {
            let mut coords = vec![0.0; dim];
            for c in coords.iter_mut().rev() {
                *c = axis[flat % axis.len()];
                flat /= axis.len();
            }
            Point::new_unchecked(coords)
        })
        .collect();
    out.extend(rho.atoms().iter().filter(|a| a.weight > 0.0).map(|a| a.point.clone()));
    out.extend(extra.iter().filter(|p| p.dim() == dim).cloned());
    out.sort_by(|a, b| {
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out.dedup();
    Ok(out)
}

fn multiset_count(candidates: usize, n: usize) -> u128 {
    // C(G + n - 1, n), saturating.
    let mut acc: u128 = 1;
    for i in 0..n as u128 {
        acc = acc.saturating_mul(candidates as u128 + i) / (i + 1);
        if acc > EXHAUSTIVE_LIMIT * 1000 {
            return u128::MAX;
        }
    }
    acc
}

fn quantile_slots(rho: &DiscreteMeasure, n: usize, p: f64, candidates: &[Point]) -> OracleOutcome {
    let mut atoms: Vec<(f64, f64)> =
        rho.atoms().iter().filter(|a| a.weight > 0.0).map(|a| (a.point.coords()[0], a.weight)).collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    let share = total / n as f64;

    // Mass of each atom inside each slot [k share, (k+1) share).
    let mut slots: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n];
    let mut start = 0.0;
    for &(x, w) in &atoms {
        let end = start + w;
        let first = ((start / share).floor() as usize).min(n - 1);
        let last = ((end / share).ceil() as usize).clamp(first + 1, n);
        for (k, slot) in slots.iter_mut().enumerate().take(last).skip(first) {
            let lo = start.max(k as f64 * share);
            let hi = if k + 1 == n { end } else { end.min((k + 1) as f64 * share) };
            if hi > lo {
                slot.push((x, hi - lo));
            }
        }
        start = end;
    }

    let xs: Vec<f64> = candidates.iter().map(|c| c.coords()[0]).collect();
    let mut value = 0.0;
    let mut centers = Vec::with_capacity(n);
    for slot in &slots {
        let (best_x, best_cost) = xs
            .iter()
            .map(|&x| {
                let cost: f64 = slot.iter().map(|&(a, m)| m * (x - a).abs().powf(p)).sum();
                (x, cost)
            })
            .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        value += best_cost;
        centers.push(Point::new_unchecked(vec![best_x]));
    }
    OracleOutcome { value: value.max(0.0).powf(1.0 / p), centers, method: SearchMethod::QuantileSlots }
}

fn empirical_error(rho: &DiscreteMeasure, centers: &[Point], p: f64) -> Result<f64> {
    let mu = DiscreteMeasure::uniform(rho.dim(), centers.to_vec())?;
    Ok(exact_wasserstein(&mu, rho, p)?.value)
}

fn exhaustive(rho: &DiscreteMeasure, n: usize, p: f64, candidates: &[Point]) -> Result<OracleOutcome> {
    let g = candidates.len();
    let mut idx = vec![0usize; n];
    let mut best = (f64::INFINITY, idx.clone());
    loop {
        let centers: Vec<Point> = idx.iter().map(|&i| candidates[i].clone()).collect();
        let value = empirical_error(rho, &centers, p)?;
        if value < best.0 {
            best = (value, idx.clone());
        }
        // Next non-decreasing index sequence.
        let Some(pos) = (0..n).rev().find(|&k| idx[k] + 1 < g) else { break };
        let next = idx[pos] + 1;
        idx[pos..].iter_mut().for_each(|i| *i = next);
    }
    Ok(OracleOutcome {
        value: best.0,
        centers: best.1.iter().map(|&i| candidates[i].clone()).collect(),
        method: SearchMethod::Exhaustive,
    })
}

fn nearest(candidates: &[Point], target: &Point) -> usize {
    (0..candidates.len())
        .min_by(|&a, &b| candidates[a].dist(target).total_cmp(&candidates[b].dist(target)))
        .expect("candidate set is never empty")
}

fn coordinate_descent(
    rho: &DiscreteMeasure,
    n: usize,
    p: f64,
    candidates: &[Point],
    extra: &[Point],
) -> Result<OracleOutcome> {
    let mut starts: Vec<Vec<usize>> = Vec::new();
    if extra.len() == n {
        starts.push(extra.iter().map(|e| nearest(candidates, e)).collect());
    }
    // Heaviest atoms, cycled.
    let mut by_weight: Vec<usize> = (0..rho.len()).filter(|&i| rho.atoms()[i].weight > 0.0).collect();
    by_weight.sort_by(|&a, &b| rho.atoms()[b].weight.total_cmp(&rho.atoms()[a].weight).then(a.cmp(&b)));
    starts.push(
        (0..n).map(|k| nearest(candidates, &rho.atoms()[by_weight[k % by_weight.len()]].point)).collect(),
    );
    // Evenly spread through the sorted candidate list.
    starts.push((0..n).map(|k| (2 * k + 1) * candidates.len() / (2 * n)).collect());

    let mut best: Option<(f64, Vec<usize>)> = None;
    for start in starts {
        let mut current = start;
        let centers = |idx: &[usize]| idx.iter().map(|&i| candidates[i].clone()).collect::<Vec<_>>();
        let mut value = empirical_error(rho, &centers(&current), p)?;
        for _ in 0..DESCENT_ROUNDS {
            let mut improved = false;
            for k in 0..n {
                for c in 0..candidates.len() {
                    if c == current[k] {
                        continue;
                    }
                    let mut trial = current.clone();
                    trial[k] = c;
                    let v = empirical_error(rho, &centers(&trial), p)?;
                    if v < value - 1e-15 {
                        value = v;
                        current = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, current));
        }
    }
    let (value, idx) = best.expect("at least one start");
    Ok(OracleOutcome {
        value,
        centers: idx.iter().map(|&i| candidates[i].clone()).collect(),
        method: SearchMethod::CoordinateDescent,
    })
}
