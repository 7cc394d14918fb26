//! Slow reference implementations for testing the fast paths.

use crate::error::{Error, Result};

/// Largest number of cells accepted by [`enumerate_transport_vertices`].
pub const MAX_ENUMERATION_CELLS: usize = 20;

/// Minimum cost over all vertices of the transportation polytope
/// `{pi >= 0 : row sums = supply, column sums = demand}`.
///
/// Every vertex is a basic solution supported on a spanning tree of the
/// bipartite graph on rows and columns; each tree fixes the flows, found
/// by peeling leaves. The linear objective attains its minimum at a vertex,
/// so this is the exact optimum. Exponential in the number of cells.
pub fn enumerate_transport_vertices(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<f64> {
    let (m, n) = (supply.len(), demand.len());
    let cells = m * n;
    if m == 0 || n == 0 || cost.len() != cells {
        return Err(Error::Config("shape mismatch".into()));
    }
    if cells > MAX_ENUMERATION_CELLS {
        return Err(Error::ProblemTooLarge(format!("{cells} cells")));
    }
    let edges = m + n - 1;
    let mut best = f64::INFINITY;
    for mask in 0u32..(1u32 << cells) {
        if mask.count_ones() as usize != edges {
            continue;
        }
        let chosen: Vec<usize> = (0..cells).filter(|&c| mask >> c & 1 == 1).collect();
        if !is_spanning_tree(&chosen, m, n) {
            continue;
        }
        if let Some(flow) = peel(&chosen, supply, demand) {
            let value: f64 = chosen.iter().zip(&flow).map(|(&c, &f)| cost[c] * f).sum();
            best = best.min(value);
        }
    }
    Ok(best)
}

fn is_spanning_tree(cells: &[usize], m: usize, n: usize) -> bool {
    let mut parent: Vec<usize> = (0..m + n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &c in cells {
        let (a, b) = (find(&mut parent, c / n), find(&mut parent, m + c % n));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Flows on a spanning tree, or `None` if some flow is negative.
fn peel(cells: &[usize], supply: &[f64], demand: &[f64]) -> Option<Vec<f64>> {
    let (m, n) = (supply.len(), demand.len());
    let mut residual: Vec<f64> = supply.iter().chain(demand).copied().collect();
    let mut flow = vec![0.0; cells.len()];
    let mut alive = vec![true; cells.len()];
    let ends = |c: usize| (c / n, m + c % n);
    for _ in 0..cells.len() {
        let mut degree = vec![0usize; m + n];
        for (e, &c) in cells.iter().enumerate() {
            if alive[e] {
                let (a, b) = ends(c);
                degree[a] += 1;
                degree[b] += 1;
            }
        }
        let (e, leaf, other) = cells.iter().enumerate().filter(|&(e, _)| alive[e]).find_map(|(e, &c)| {
            let (a, b) = ends(c);
            if degree[a] == 1 {
                Some((e, a, b))
            } else if degree[b] == 1 {
                Some((e, b, a))
            } else {
                None
            }
        })?;
        flow[e] = residual[leaf];
        residual[other] -= flow[e];
        residual[leaf] = 0.0;
        alive[e] = false;
    }
    let scale = supply.iter().sum::<f64>().max(1.0);
    flow.iter().all(|&f| f >= -1e-12 * scale).then_some(flow)
}
