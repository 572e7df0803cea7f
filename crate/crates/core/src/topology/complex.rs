use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// A 2-dimensional simplicial complex with sorted simplices and face closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SimplicialComplex {
    vertices: Vec<usize>,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
}

fn sort2(mut e: [usize; 2]) -> [usize; 2] {
    e.sort_unstable();
    e
}

fn sort3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

impl SimplicialComplex {
    /// Validating constructor: simplices must be sorted, duplicate-free and
    /// closed under taking faces.
    pub fn new(
        vertices: Vec<usize>,
        edges: Vec<[usize; 2]>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Self> {
        let k = SimplicialComplex {
            vertices,
            edges,
            triangles,
        };
        k.validate()?;
        Ok(k)
    }

    /// Closure of a list of triangles plus extra edges and vertices.
    pub fn from_simplices(
        vertices: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = [usize; 2]>,
        triangles: impl IntoIterator<Item = [usize; 3]>,
    ) -> Result<Self> {
        let mut vs = BTreeSet::new();
        let mut es = BTreeSet::new();
        let mut ts = BTreeSet::new();
        for t in triangles {
            let t = sort3(t);
            if t[0] == t[1] || t[1] == t[2] {
                return Err(Error::data(format!("degenerate triangle {t:?}")));
            }
            ts.insert(t);
            es.insert([t[0], t[1]]);
            es.insert([t[0], t[2]]);
            es.insert([t[1], t[2]]);
        }
        for e in edges {
            let e = sort2(e);
            if e[0] == e[1] {
                return Err(Error::data(format!("degenerate edge {e:?}")));
            }
            es.insert(e);
        }
        for e in &es {
            vs.insert(e[0]);
            vs.insert(e[1]);
        }
        vs.extend(vertices);
        Ok(SimplicialComplex {
            vertices: vs.into_iter().collect(),
            edges: es.into_iter().collect(),
            triangles: ts.into_iter().collect(),
        })
    }

    pub fn from_triangles(triangles: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        Self::from_simplices([], [], triangles)
    }

    fn validate(&self) -> Result<()> {
        let sorted_unique = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::data(format!("{what} not strictly sorted")))
            }
        };
        sorted_unique(self.vertices.windows(2).all(|w| w[0] < w[1]), "vertices")?;
        sorted_unique(self.edges.windows(2).all(|w| w[0] < w[1]), "edges")?;
        sorted_unique(self.triangles.windows(2).all(|w| w[0] < w[1]), "triangles")?;
        if self.edges.iter().any(|e| e[0] >= e[1]) || self.triangles.iter().any(|t| t[0] >= t[1] || t[1] >= t[2]) {
            return Err(Error::data("simplex vertices not in increasing order"));
        }
        for e in &self.edges {
            for v in e {
                if self.vertices.binary_search(v).is_err() {
                    return Err(Error::data(format!("edge {e:?} has missing vertex {v}")));
                }
            }
        }
        for t in &self.triangles {
            for e in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
                if self.edges.binary_search(&e).is_err() {
                    return Err(Error::data(format!("triangle {t:?} has missing edge {e:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.vertices.len(), self.edges.len(), self.triangles.len()]
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Full subcomplex spanned by the vertices for which `keep` is true.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> SimplicialComplex {
        SimplicialComplex {
            vertices: self.vertices.iter().copied().filter(|&v| keep(v)).collect(),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|e| keep(e[0]) && keep(e[1]))
                .collect(),
            triangles: self
                .triangles
                .iter()
                .copied()
                .filter(|t| keep(t[0]) && keep(t[1]) && keep(t[2]))
                .collect(),
        }
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.vertices.iter().all(|v| other.vertices.binary_search(v).is_ok())
            && self.edges.iter().all(|e| other.edges.binary_search(e).is_ok())
            && self.triangles.iter().all(|t| other.triangles.binary_search(t).is_ok())
    }

    /// Relabels vertices through `map` (which must be injective on them).
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Result<SimplicialComplex> {
        let k = Self::from_simplices(
            self.vertices.iter().map(|&v| map(v)),
            self.edges.iter().map(|e| [map(e[0]), map(e[1])]),
            self.triangles.iter().map(|t| [map(t[0]), map(t[1]), map(t[2])]),
        )?;
        if k.counts() != self.counts() {
            return Err(Error::data("relabelling is not injective on simplices"));
        }
        Ok(k)
    }

    /// Checks that the complex triangulates a closed surface: every edge lies
    /// in exactly two triangles and every vertex link is a single cycle.
    pub fn check_closed_surface(&self) -> Result<()> {
        if self.triangles.is_empty() {
            return Err(Error::construction("no triangles"));
        }
        let mut edge_count: HashMap<[usize; 2], u32> = HashMap::new();
        let mut link: BTreeMap<usize, Vec<[usize; 2]>> = BTreeMap::new();
        for t in &self.triangles {
            for (e, opp) in [([t[0], t[1]], t[2]), ([t[0], t[2]], t[1]), ([t[1], t[2]], t[0])] {
                *edge_count.entry(e).or_default() += 1;
                link.entry(opp).or_default().push(e);
            }
        }
        for e in &self.edges {
            let c = edge_count.get(e).copied().unwrap_or(0);
            if c != 2 {
                return Err(Error::construction(format!(
                    "edge {e:?} lies in {c} triangles (expected 2)"
                )));
            }
        }
        for v in &self.vertices {
            let edges = link
                .get(v)
                .ok_or_else(|| Error::construction(format!("vertex {v} has an empty link")))?;
            if !is_single_cycle(edges) {
                return Err(Error::construction(format!("link of vertex {v} is not a single cycle")));
            }
        }
        Ok(())
    }
}

fn is_single_cycle(edges: &[[usize; 2]]) -> bool {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in edges {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    if adj.len() < 3 || adj.values().any(|n| n.len() != 2) {
        return false;
    }
    let start = *adj.keys().next().unwrap();
    let mut seen = HashSet::from([start]);
    let (mut prev, mut cur) = (start, adj[&start][0]);
    while cur != start {
        if !seen.insert(cur) {
            return false;
        }
        let n = &adj[&cur];
        let next = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = next;
    }
    seen.len() == adj.len()
}
