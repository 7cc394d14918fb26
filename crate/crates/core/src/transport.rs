//! Exact Wasserstein distances between discrete measures.
//!
//! The balanced transportation problem is solved by successive shortest
//! paths: repeatedly route excess from a source to the nearest sink with
//! unmet demand along a shortest path of the residual graph, with node
//! potentials keeping reduced costs nonnegative so Dijkstra applies. The
//! final potentials give a feasible dual solution; the primal/dual gap is
//! checked before any value is returned.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::decomposition::UniformDecomposition;
use crate::error::{Error, Result};
use crate::measure::{order_free_sum, DiscreteMeasure, Point};
use crate::quantization::Quantizer;

/// Largest accepted `(#source atoms) * (#target atoms)`.
pub const MAX_PROBLEM_CELLS: usize = 1_000_000;

/// Accepted difference between the total masses of the two measures.
pub const MASS_BALANCE_TOL: f64 = 1e-9;

/// Accepted relative primal/dual gap of a solution.
pub const DUALITY_GAP_TOL: f64 = 1e-7;

/// `||x - y||_inf^p`.
pub fn ground_cost(x: &Point, y: &Point, p: f64) -> f64 {
    let d = x.dist(y);
    if p == 1.0 {
        d
    } else if p == 2.0 {
        d * d
    } else {
        d.powf(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanEntry {
    pub i: usize,
    pub j: usize,
    #[serde(rename = "m")]
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportPlan {
    pub entries: Vec<PlanEntry>,
    /// `sum mass * c_ij`.
    pub cost: f64,
}

impl TransportPlan {
    pub fn row_sums(&self, rows: usize) -> Vec<f64> {
        let mut sums = vec![0.0; rows];
        self.entries.iter().for_each(|e| sums[e.i] += e.mass);
        sums
    }

    pub fn column_sums(&self, columns: usize) -> Vec<f64> {
        let mut sums = vec![0.0; columns];
        self.entries.iter().for_each(|e| sums[e.j] += e.mass);
        sums
    }
}

/// Optimal solution of a transportation problem with its dual certificate.
#[derive(Debug, Clone)]
pub struct TransportSolution {
    pub plan: TransportPlan,
    /// Value of the feasible dual solution built from the final potentials.
    pub dual_value: f64,
}

impl TransportSolution {
    pub fn duality_gap(&self) -> f64 {
        self.plan.cost - self.dual_value
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Wasserstein {
    pub p: f64,
    pub value: f64,
    #[serde(flatten)]
    pub plan: TransportPlan,
    #[serde(skip)]
    pub duality_gap: f64,
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Solve `min sum_ij f_ij c_ij` subject to row sums `supply`, column sums
/// `demand`, `f >= 0`. `cost` is row-major `supply.len() x demand.len()`.
///
/// The two totals must agree up to [`MASS_BALANCE_TOL`]; the demand is
/// rescaled to the supply total before solving.
pub fn solve_transportation(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<TransportSolution> {
    let (rows, cols) = (supply.len(), demand.len());
    if cost.len() != rows * cols {
        return Err(Error::Config("cost matrix shape does not match the marginals".into()));
    }
    if supply.iter().chain(demand).any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidMeasure("marginals must be finite and nonnegative".into()));
    }
    let supply_total = order_free_sum(&mut supply.to_vec());
    let demand_total = order_free_sum(&mut demand.to_vec());
    if (supply_total - demand_total).abs() > MASS_BALANCE_TOL {
        return Err(Error::UnbalancedMasses(supply_total, demand_total));
    }
    if supply_total <= 0.0 {
        return Err(Error::EmptyMeasure);
    }

    // Only positive-mass rows and columns take part.
    let src: Vec<usize> = (0..rows).filter(|&i| supply[i] > 0.0).collect();
    let dst: Vec<usize> = (0..cols).filter(|&j| demand[j] > 0.0).collect();
    let scale = supply_total / demand_total;
    let mut solver = Ssp::new(
        src.iter().map(|&i| supply[i]).collect(),
        dst.iter().map(|&j| demand[j] * scale).collect(),
        |a, b| cost[src[a] * cols + dst[b]],
    );
    solver.run()?;

    let mut entries = Vec::new();
    let mut terms = Vec::new();
    for (a, &i) in src.iter().enumerate() {
        for (b, &j) in dst.iter().enumerate() {
            let mass = solver.flow[a * solver.n + b];
            if mass > 0.0 {
                terms.push(mass * cost[i * cols + j]);
                entries.push(PlanEntry { i, j, mass });
            }
        }
    }
    let plan = TransportPlan { entries, cost: order_free_sum(&mut terms) };
    let dual_value = solver.dual_value();
    let solution = TransportSolution { plan, dual_value };
    let gap = solution.duality_gap();
    if gap > DUALITY_GAP_TOL * solution.plan.cost.abs() + 1e-12 {
        return Err(Error::Numerical(format!(
            "transport duality gap {gap:e} exceeds tolerance (primal {})",
            solution.plan.cost
        )));
    }
    Ok(solution)
}

struct Ssp {
    m: usize,
    n: usize,
    cost: Vec<f64>,
    supply: Vec<f64>,
    demand: Vec<f64>,
    excess: Vec<f64>,
    deficit: Vec<f64>,
    flow: Vec<f64>,
    /// For every sink, sources currently sending it positive flow.
    senders: Vec<Vec<usize>>,
    potential: Vec<f64>,
    tiny: f64,
    /// Unplaceable leftover excess tolerated as rounding.
    slack: f64,
}

impl Ssp {
    fn new(supply: Vec<f64>, demand: Vec<f64>, cost_of: impl Fn(usize, usize) -> f64) -> Self {
        let (m, n) = (supply.len(), demand.len());
        let mut cost = Vec::with_capacity(m * n);
        for a in 0..m {
            for b in 0..n {
                cost.push(cost_of(a, b));
            }
        }
        let mut potential = vec![0.0; m + n];
        for b in 0..n {
            potential[m + b] = (0..m).map(|a| cost[a * n + b]).fold(f64::INFINITY, f64::min);
        }
        let total: f64 = supply.iter().sum();
        Ssp {
            m,
            n,
            excess: supply.clone(),
            deficit: demand.clone(),
            supply,
            demand,
            flow: vec![0.0; m * n],
            senders: vec![Vec::new(); n],
            potential,
            cost,
            tiny: 1e-15 * total,
            slack: MASS_BALANCE_TOL * total,
        }
    }

    fn reduced(&self, a: usize, b: usize) -> f64 {
        self.cost[a * self.n + b] + self.potential[a] - self.potential[self.m + b]
    }

    fn run(&mut self) -> Result<()> {
        let (m, n) = (self.m, self.n);
        let nodes = m + n;
        let mut dist = vec![f64::INFINITY; nodes];
        let mut prev = vec![usize::MAX; nodes];
        let mut done = vec![false; nodes];
        let mut touched: Vec<usize> = Vec::new();
        let mut heap = BinaryHeap::new();
        let max_rounds = 20 * nodes + 1000;
        let mut rounds = 0;

        for s in 0..m {
            while self.excess[s] > self.tiny {
                rounds += 1;
                if rounds > max_rounds {
                    return Err(Error::Numerical("transport solver did not terminate".into()));
                }
                for &v in &touched {
                    dist[v] = f64::INFINITY;
                    prev[v] = usize::MAX;
                    done[v] = false;
                }
                touched.clear();
                heap.clear();

                dist[s] = 0.0;
                touched.push(s);
                heap.push(Reverse((Key(0.0), s)));
                let mut target = None;
                while let Some(Reverse((Key(d), u))) = heap.pop() {
                    if done[u] || d > dist[u] {
                        continue;
                    }
                    done[u] = true;
                    if u >= m {
                        let b = u - m;
                        if self.deficit[b] > self.tiny {
                            target = Some(u);
                            break;
                        }
                        for &a in &self.senders[b] {
                            let rc = (-self.reduced(a, b)).max(0.0);
                            let nd = d + rc;
                            if nd < dist[a] {
                                if dist[a].is_infinite() {
                                    touched.push(a);
                                }
                                dist[a] = nd;
                                prev[a] = u;
                                heap.push(Reverse((Key(nd), a)));
                            }
                        }
                    } else {
                        for b in 0..n {
                            let v = m + b;
                            if done[v] {
                                continue;
                            }
                            let nd = d + self.reduced(u, b).max(0.0);
                            if nd < dist[v] {
                                if dist[v].is_infinite() {
                                    touched.push(v);
                                }
                                dist[v] = nd;
                                prev[v] = u;
                                heap.push(Reverse((Key(nd), v)));
                            }
                        }
                    }
                }
                let Some(t) = target else {
                    // Every sink is full: what is left is rounding from the
                    // clamped deficits, and no later source can place it either.
                    if self.excess[s] <= self.slack {
                        self.excess[s] = 0.0;
                        continue;
                    }
                    return Err(Error::Numerical("no augmenting path with remaining demand".into()));
                };

                let reach = dist[t];
                for (pot, d) in self.potential.iter_mut().zip(&dist) {
                    *pot += d.min(reach);
                }
                self.augment(s, t, &prev);
            }
        }
        Ok(())
    }

    fn augment(&mut self, s: usize, t: usize, prev: &[usize]) {
        let m = self.m;
        let mut amount = self.excess[s].min(self.deficit[t - m]);
        // Path alternates source -> sink (forward) and sink -> source (backward).
        let mut v = t;
        while v != s {
            let u = prev[v];
            if u >= m {
                amount = amount.min(self.flow[v * self.n + (u - m)]);
            }
            v = u;
        }

        let mut v = t;
        while v != s {
            let u = prev[v];
            if u < m {
                let b = v - m;
                let cell = u * self.n + b;
                if self.flow[cell] == 0.0 {
                    self.senders[b].push(u);
                }
                self.flow[cell] += amount;
            } else {
                let b = u - m;
                let cell = v * self.n + b;
                self.flow[cell] -= amount;
                if self.flow[cell] <= self.tiny {
                    self.flow[cell] = 0.0;
                    self.senders[b].retain(|&a| a != v);
                }
            }
            v = u;
        }
        self.excess[s] -= amount;
        if self.excess[s] <= self.tiny {
            self.excess[s] = 0.0;
        }
        self.deficit[t - m] -= amount;
        if self.deficit[t - m] <= self.tiny {
            self.deficit[t - m] = 0.0;
        }
    }

    /// Dual value of `alpha_a = -pi_a`, `beta_b = min_a (c_ab - alpha_a)`,
    /// which is feasible by construction.
    fn dual_value(&self) -> f64 {
        let mut terms: Vec<f64> = (0..self.m).map(|a| -self.potential[a] * self.supply[a]).collect();
        for b in 0..self.n {
            let beta = (0..self.m)
                .map(|a| self.cost[a * self.n + b] + self.potential[a])
                .fold(f64::INFINITY, f64::min);
            terms.push(beta * self.demand[b]);
        }
        order_free_sum(&mut terms)
    }
}

/// Exact `W_p(mu, nu)` under the max-norm ground cost, with an optimal plan.
/// Plan indices refer to the atom lists of `mu` (`i`) and `nu` (`j`).
pub fn exact_wasserstein(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<Wasserstein> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: nu.dim() });
    }
    let live_mu = mu.weights().filter(|&w| w > 0.0).count();
    let live_nu = nu.weights().filter(|&w| w > 0.0).count();
    if live_mu == 0 || live_nu == 0 {
        return Err(Error::EmptyMeasure);
    }
    if live_mu.saturating_mul(live_nu) > MAX_PROBLEM_CELLS {
        return Err(Error::ProblemTooLarge(format!(
            "{live_mu} x {live_nu} atoms exceeds {MAX_PROBLEM_CELLS} cells"
        )));
    }

    let supply: Vec<f64> = mu.weights().collect();
    let demand: Vec<f64> = nu.weights().collect();
    let cols = nu.len();
    let mut cost = vec![0.0; mu.len() * cols];
    for (i, a) in mu.atoms().iter().enumerate() {
        if a.weight == 0.0 {
            continue;
        }
        for (j, b) in nu.atoms().iter().enumerate() {
            cost[i * cols + j] = ground_cost(&a.point, &b.point, p);
        }
    }
    let solution = solve_transportation(&supply, &demand, &cost)?;
    let duality_gap = solution.duality_gap();
    let value = solution.plan.cost.max(0.0).powf(1.0 / p);
    Ok(Wasserstein { p, value, plan: solution.plan, duality_gap })
}

/// Cost of the canonical coupling that sends piece `k` entirely to center `k`:
/// `(sum_k int ||x - x_k||^p drho_k(x))^{1/p}`.
pub fn coupling_cost(dec: &UniformDecomposition, quantizer: &Quantizer, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    if quantizer.centers.len() != dec.pieces.len() {
        return Err(Error::Config("quantizer does not match the decomposition".into()));
    }
    let mut terms: Vec<f64> = dec
        .pieces
        .iter()
        .zip(&quantizer.centers)
        .flat_map(|(piece, center)| {
            piece.piece.atoms().iter().map(move |a| a.weight * ground_cost(&a.point, center, p))
        })
        .collect();
    Ok(order_free_sum(&mut terms).powf(1.0 / p))
}
