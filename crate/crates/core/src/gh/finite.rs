//! Finite metric spaces and exact Gromov–Hausdorff distances for tiny ones.

use crate::error::{Error, Result};

/// Largest |X|·|Y| accepted by the exact oracles.
pub const ORACLE_MAX_PAIRS: usize = 36;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    n: usize,
    d: Vec<f64>,
}

impl FiniteMetric {
    /// Validates symmetry, zero diagonal, nonnegativity and the triangle
    /// inequality (to 1e-9).
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::usage(format!("expected {} distances, got {}", n * n, d.len())));
        }
        let m = FiniteMetric { n, d };
        for i in 0..n {
            if m.dist(i, i) != 0.0 {
                return Err(Error::data(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let dij = m.dist(i, j);
                if !(dij >= 0.0) || dij != m.dist(j, i) {
                    return Err(Error::data(format!("invalid or asymmetric distance at ({i},{j})")));
                }
                if (0..n).any(|k| dij > m.dist(i, k) + m.dist(k, j) + 1e-9) {
                    return Err(Error::data(format!("triangle inequality fails at ({i},{j})")));
                }
            }
        }
        Ok(m)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(n, (0..n * n).map(|k| f(k / n, k % n)).collect())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Quotient (pseudo)metric identifying points with equal class labels:
    /// the chain metric of the identifications, on classes 0..max+1.
    pub fn quotient(&self, class_of: &[usize]) -> Result<FiniteMetric> {
        if class_of.len() != self.n {
            return Err(Error::usage("one class label per point is required"));
        }
        let m = class_of.iter().max().map_or(0, |&c| c + 1);
        let mut d = vec![f64::INFINITY; m * m];
        for i in 0..self.n {
            for j in 0..self.n {
                let k = class_of[i] * m + class_of[j];
                d[k] = d[k].min(self.dist(i, j));
            }
        }
        for c in 0..m {
            if !d[c * m + c].is_finite() {
                return Err(Error::usage(format!("class {c} is empty")));
            }
            d[c * m + c] = 0.0;
        }
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let via = d[i * m + k] + d[k * m + j];
                    if via < d[i * m + j] {
                        d[i * m + j] = via;
                    }
                }
            }
        }
        Ok(FiniteMetric { n: m, d })
    }

    /// Distortion of the correspondence `pairs`.
    pub fn distortion(&self, other: &FiniteMetric, pairs: &[(usize, usize)]) -> f64 {
        let mut dis = 0.0f64;
        for &(x, y) in pairs {
            for &(x2, y2) in pairs {
                dis = dis.max((self.dist(x, x2) - other.dist(y, y2)).abs());
            }
        }
        dis
    }
}

/// An upper bound ½·dis(R) from a greedily built correspondence, never above
/// ½·max(diam X, diam Y).
pub fn gh_upper_bound(x: &FiniteMetric, y: &FiniteMetric) -> f64 {
    if x.is_empty() || y.is_empty() {
        return f64::INFINITY;
    }
    let mut best = x.diameter().max(y.diameter());
    for start in 0..y.len() {
        let mut pairs = vec![(0, start)];
        let cost = |pairs: &[(usize, usize)], a: usize, b: usize| {
            pairs
                .iter()
                .map(|&(p, q)| (x.dist(a, p) - y.dist(b, q)).abs())
                .fold(0.0, f64::max)
        };
        for a in 1..x.len() {
            let b = (0..y.len())
                .min_by(|&b1, &b2| cost(&pairs, a, b1).total_cmp(&cost(&pairs, a, b2)))
                .expect("nonempty");
            pairs.push((a, b));
        }
        for b in 0..y.len() {
            if pairs.iter().all(|&(_, q)| q != b) {
                let a = (0..x.len())
                    .min_by(|&a1, &a2| cost(&pairs, a1, b).total_cmp(&cost(&pairs, a2, b)))
                    .expect("nonempty");
                pairs.push((a, b));
            }
        }
        best = best.min(x.distortion(y, &pairs));
    }
    0.5 * best
}

/// Whether some clique of `adj` covers every x and every y; nodes carry the
/// bitmasks of the x and y points they cover.
fn covering_clique(adj: &[u64], cover_x: &[u64], cover_y: &[u64], full_x: u64, full_y: u64) -> bool {
    // Bron–Kerbosch with pivoting over maximal cliques
    fn rec(r: (u64, u64), p: u64, mut xs: u64, ctx: (&[u64], &[u64], &[u64], u64, u64)) -> bool {
        let (adj, cx, cy, fx, fy) = ctx;
        if p == 0 && xs == 0 {
            return r.0 == fx && r.1 == fy;
        }
        // covers reachable from r ∪ p must be complete
        let (mut ax, mut ay) = r;
        let mut rest = p;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            ax |= cx[v];
            ay |= cy[v];
        }
        if ax != fx || ay != fy {
            return false;
        }
        let pivot = (p | xs).trailing_zeros() as usize;
        let mut cand = p & !adj[pivot];
        let mut p = p;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if rec((r.0 | cx[v], r.1 | cy[v]), p & adj[v], xs & adj[v], ctx) {
                return true;
            }
            p &= !(1 << v);
            xs |= 1 << v;
        }
        false
    }
    let all = if adj.len() == 64 { u64::MAX } else { (1u64 << adj.len()) - 1 };
    rec((0, 0), all, 0, (adj, cover_x, cover_y, full_x, full_y))
}

/// Minimal threshold over `values` for which `feasible` holds (monotone).
fn threshold_search(mut values: Vec<f64>, feasible: impl Fn(f64) -> bool) -> f64 {
    values.sort_by(f64::total_cmp);
    values.dedup();
    let (mut lo, mut hi) = (0, values.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(values[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    values[lo]
}

fn check_sizes(x: &FiniteMetric, y: &FiniteMetric) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::usage("GH distance needs nonempty spaces"));
    }
    if x.len() * y.len() > ORACLE_MAX_PAIRS {
        return Err(Error::usage(format!(
            "exact GH oracle limited to |X|·|Y| ≤ {ORACLE_MAX_PAIRS}, got {}",
            x.len() * y.len()
        )));
    }
    Ok(())
}

/// Exact d_GH(X, Y) = ½ min over correspondences of the distortion.
pub fn gh_oracle_small(x: &FiniteMetric, y: &FiniteMetric) -> Result<f64> {
    check_sizes(x, y)?;
    let pairs: Vec<(usize, usize)> = (0..x.len()).flat_map(|a| (0..y.len()).map(move |b| (a, b))).collect();
    let orbits: Vec<Vec<(usize, usize)>> = pairs.iter().map(|&p| vec![p]).collect();
    Ok(0.5 * min_distortion(x, y, &orbits))
}

/// Exact equivariant distance for ℤ₂-spaces: correspondences must be
/// invariant under (σ_X, σ_Y).
pub fn gh_oracle_equivariant(
    x: &FiniteMetric,
    sigma_x: &[usize],
    y: &FiniteMetric,
    sigma_y: &[usize],
) -> Result<f64> {
    check_sizes(x, y)?;
    if sigma_x.len() != x.len() || sigma_y.len() != y.len() {
        return Err(Error::usage("involution length differs from the space size"));
    }
    for (s, m) in [(sigma_x, x), (sigma_y, y)] {
        let ok = (0..m.len()).all(|i| s[i] < m.len() && s[s[i]] == i && (0..m.len()).all(|j| m.dist(s[i], s[j]) == m.dist(i, j)));
        if !ok {
            return Err(Error::usage("σ must be an isometric involution"));
        }
    }
    let mut orbits = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for a in 0..x.len() {
        for b in 0..y.len() {
            if seen.insert((a, b)) {
                let img = (sigma_x[a], sigma_y[b]);
                seen.insert(img);
                orbits.push(if img == (a, b) { vec![img] } else { vec![(a, b), img] });
            }
        }
    }
    Ok(0.5 * min_distortion(x, y, &orbits))
}

fn min_distortion(x: &FiniteMetric, y: &FiniteMetric, orbits: &[Vec<(usize, usize)>]) -> f64 {
    let conflict = |o1: &[(usize, usize)], o2: &[(usize, usize)]| {
        o1.iter()
            .flat_map(|&(a, b)| o2.iter().map(move |&(c, d)| (x.dist(a, c) - y.dist(b, d)).abs()))
            .fold(0.0, f64::max)
    };
    let m = orbits.len();
    let cost: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| conflict(&orbits[i], &orbits[j])).collect()).collect();
    let self_cost: Vec<f64> = (0..m).map(|i| cost[i][i]).collect();
    let cover_x: Vec<u64> = orbits.iter().map(|o| o.iter().fold(0, |acc, &(a, _)| acc | 1 << a)).collect();
    let cover_y: Vec<u64> = orbits.iter().map(|o| o.iter().fold(0, |acc, &(_, b)| acc | 1 << b)).collect();
    let (fx, fy) = ((1u64 << x.len()) - 1, (1u64 << y.len()) - 1);
    let values: Vec<f64> = cost.iter().flatten().copied().collect();
    threshold_search(values, |t| {
        let nodes: Vec<usize> = (0..m).filter(|&i| self_cost[i] <= t).collect();
        let adj: Vec<u64> = nodes
            .iter()
            .map(|&i| {
                nodes
                    .iter()
                    .enumerate()
                    .filter(|&(_, &j)| j != i && cost[i][j] <= t)
                    .fold(0, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        let cx: Vec<u64> = nodes.iter().map(|&i| cover_x[i]).collect();
        let cy: Vec<u64> = nodes.iter().map(|&i| cover_y[i]).collect();
        !nodes.is_empty() && covering_clique(&adj, &cx, &cy, fx, fy)
    })
}
