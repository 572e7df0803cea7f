//! Distance backends for sampled surfaces.

use crate::exec::Exec;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, RwLock};

fn wrap(x: f64, period: f64) -> f64 {
    let y = x.rem_euclid(period);
    y.min(period - y)
}

/// Flat quotients of the plane with closed-form distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlatKind {
    /// ℝ² / ⟨(u,v) ↦ (u+L, v), (u,v) ↦ (u, v+w)⟩.
    Torus { l: f64, w: f64 },
    /// ℝ² / ⟨(u,v) ↦ (u+L, −v), (u,v) ↦ (u, v+w)⟩.
    KleinCircle { l: f64, w: f64 },
    /// The torus T(L, w) modulo σ(u,v) = (−u, v + w/2).
    KleinSegment { l: f64, w: f64 },
}

impl FlatKind {
    pub fn distance(&self, p: [f64; 2], q: [f64; 2]) -> f64 {
        match *self {
            FlatKind::Torus { l, w } => wrap(p[0] - q[0], l).hypot(wrap(p[1] - q[1], w)),
            FlatKind::KleinCircle { l, w } => {
                // Deck elements (u,v) ↦ (u + kL, (−1)^k v + mw); |k| ≤ 2 is
                // more than enough since |Δu| < L after reduction.
                let du = p[0] - q[0];
                let mut best = f64::INFINITY;
                for k in -2i32..=2 {
                    let sv = if k % 2 == 0 { q[1] } else { -q[1] };
                    let d2 = (du - k as f64 * l).powi(2) + wrap(p[1] - sv, w).powi(2);
                    best = best.min(d2);
                }
                best.sqrt()
            }
            FlatKind::KleinSegment { l, w } => {
                let t = FlatKind::Torus { l, w };
                t.distance(p, q).min(t.distance(p, [-q[0], q[1] + 0.5 * w]))
            }
        }
    }

    /// The lift of `q` in the universal cover closest to `p`.
    pub fn nearest_lift(&self, p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
        let (l, w) = self.sides();
        let mut best = (f64::INFINITY, q);
        let images: Vec<[f64; 2]> = match *self {
            FlatKind::Torus { .. } => vec![q],
            FlatKind::KleinCircle { .. } => vec![q],
            FlatKind::KleinSegment { .. } => vec![q, [-q[0], q[1] + 0.5 * w]],
        };
        for img in images {
            for k in -2i32..=2 {
                let twisted = matches!(self, FlatKind::KleinCircle { .. }) && k % 2 != 0;
                let v0 = if twisted { -img[1] } else { img[1] };
                let u = img[0] + k as f64 * l;
                let m = ((p[1] - v0) / w).round();
                for dm in -1..=1 {
                    let v = v0 + (m + dm as f64) * w;
                    let d = (p[0] - u).hypot(p[1] - v);
                    if d < best.0 {
                        best = (d, [u, v]);
                    }
                }
            }
        }
        best.1
    }

    pub fn sides(&self) -> (f64, f64) {
        match *self {
            FlatKind::Torus { l, w } | FlatKind::KleinCircle { l, w } | FlatKind::KleinSegment { l, w } => (l, w),
        }
    }
}

/// Undirected weighted graph in compressed adjacency form.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // min-heap on distance, ties broken by index for determinism
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl Graph {
    /// Builds the graph from undirected edges; parallel edges keep the lighter weight.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Graph {
        let mut best: HashMap<(u32, u32), f64> = HashMap::new();
        for (a, b, w) in edges {
            if a == b {
                continue;
            }
            let key = (a.min(b) as u32, a.max(b) as u32);
            let e = best.entry(key).or_insert(w);
            if w < *e {
                *e = w;
            }
        }
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for ((a, b), w) in best {
            adj[a as usize].push((b, w));
            adj[b as usize].push((a, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for mut list in adj {
            list.sort_by_key(|e| e.0);
            for (t, w) in list {
                targets.push(t);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Graph {
            offsets,
            targets,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.targets[r.clone()]
            .iter()
            .zip(&self.weights[r])
            .map(|(&t, &w)| (t as usize, w))
    }

    /// Multi-source shortest paths: `out[v] = min_s init[s] + d(s, v)`.
    /// Also returns the predecessor of each vertex (`usize::MAX` for roots).
    pub fn dijkstra(&self, init: &[f64]) -> (Vec<f64>, Vec<usize>) {
        let n = self.len();
        let mut dist = init.to_vec();
        let mut parent = vec![usize::MAX; n];
        let mut heap: BinaryHeap<Entry> = (0..n)
            .filter(|&v| dist[v].is_finite())
            .map(|v| Entry(dist[v], v as u32))
            .collect();
        while let Some(Entry(d, v)) = heap.pop() {
            let v = v as usize;
            if d > dist[v] {
                continue;
            }
            for (t, w) in self.neighbors(v) {
                let nd = d + w;
                if nd < dist[t] {
                    dist[t] = nd;
                    parent[t] = v;
                    heap.push(Entry(nd, t as u32));
                }
            }
        }
        (dist, parent)
    }

    pub fn single_source(&self, s: usize) -> (Vec<f64>, Vec<usize>) {
        let mut init = vec![f64::INFINITY; self.len()];
        init[s] = 0.0;
        self.dijkstra(&init)
    }
}

/// The distance structure of a sampled surface.
#[derive(Debug, Clone)]
pub enum SurfaceMetric {
    /// Exact closed form on chart coordinates.
    Flat { kind: FlatKind, coords: Vec<[f64; 2]> },
    /// Shortest paths in a weighted graph.
    Graph(Graph),
    /// Row-major symmetric matrix.
    Dense { n: usize, d: Vec<f64> },
}

const ROW_CACHE_CAP: usize = 512;

/// Distance oracle with a bounded per-source row cache for graph metrics.
#[derive(Debug)]
pub struct MetricOracle {
    metric: SurfaceMetric,
    cache: RwLock<HashMap<usize, Arc<Vec<f64>>>>,
}

impl Clone for MetricOracle {
    fn clone(&self) -> Self {
        MetricOracle::new(self.metric.clone())
    }
}

impl MetricOracle {
    pub fn new(metric: SurfaceMetric) -> Self {
        MetricOracle {
            metric,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn metric(&self) -> &SurfaceMetric {
        &self.metric
    }

    pub fn len(&self) -> usize {
        match &self.metric {
            SurfaceMetric::Flat { coords, .. } => coords.len(),
            SurfaceMetric::Graph(g) => g.len(),
            SurfaceMetric::Dense { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.metric, SurfaceMetric::Graph(_))
    }

    /// Distances from `s` to every vertex, without touching the cache.
    pub fn compute_row(&self, s: usize) -> Vec<f64> {
        match &self.metric {
            SurfaceMetric::Flat { kind, coords } => {
                coords.iter().map(|&q| kind.distance(coords[s], q)).collect()
            }
            SurfaceMetric::Graph(g) => g.single_source(s).0,
            SurfaceMetric::Dense { n, d } => d[s * n..(s + 1) * n].to_vec(),
        }
    }

    /// Memoised distance row.
    pub fn row(&self, s: usize) -> Arc<Vec<f64>> {
        if let Some(r) = self.cache.read().expect("row cache poisoned").get(&s) {
            return Arc::clone(r);
        }
        let row = Arc::new(self.compute_row(s));
        let mut cache = self.cache.write().expect("row cache poisoned");
        if cache.len() >= ROW_CACHE_CAP {
            cache.clear();
        }
        cache.insert(s, Arc::clone(&row));
        row
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            SurfaceMetric::Flat { kind, coords } => kind.distance(coords[i], coords[j]),
            SurfaceMetric::Dense { n, d } => d[i * n + j],
            SurfaceMetric::Graph(_) => self.row(i)[j],
        }
    }

    /// `out[v] = min_s init[s] + d(s, v)`; infinite entries are not sources.
    pub fn multi_source(&self, init: &[f64], exec: Exec) -> Vec<f64> {
        match &self.metric {
            SurfaceMetric::Graph(g) => g.dijkstra(init).0,
            _ => {
                let sources: Vec<usize> = (0..init.len()).filter(|&s| init[s].is_finite()).collect();
                exec.map_range(self.len(), |v| {
                    sources
                        .iter()
                        .map(|&s| init[s] + self.dist(s, v))
                        .fold(f64::INFINITY, f64::min)
                })
            }
        }
    }

    /// A shortest path from `s` to `t` as a vertex list, for graph metrics.
    pub fn path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let SurfaceMetric::Graph(g) = &self.metric else {
            return None;
        };
        let (dist, parent) = g.single_source(s);
        if !dist[t].is_finite() {
            return None;
        }
        let mut path = vec![t];
        let mut v = t;
        while v != s {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        Some(path)
    }
}
