//! Betti numbers and inclusion image ranks over F_p.
//!
//! Ranks of ∂₁ are field independent and come from union–find. Ranks of ∂₂
//! come from a sparse column reduction with "low" pivots; processing the
//! simplices of the subcomplex first turns the image rank in degree 1 into a
//! count of persistence pairs.

use super::complex::SimplicialComplex;
use super::field::Fp;
use crate::error::{Error, Result};
use std::collections::HashMap;

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when the two classes were distinct.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

type Column = Vec<(u32, u64)>;

/// Incremental column reduction; rows are indexed by filtration position.
struct Reducer {
    f: Fp,
    pivot_of_low: HashMap<u32, usize>,
    reduced: Vec<Column>,
}

impl Reducer {
    fn new(f: Fp) -> Self {
        Reducer {
            f,
            pivot_of_low: HashMap::new(),
            reduced: Vec::new(),
        }
    }

    /// Reduces `col` against earlier columns and returns its low row, if any.
    fn push(&mut self, mut col: Column) -> Option<u32> {
        let f = self.f;
        while let Some(&(low, c)) = col.last() {
            let Some(&j) = self.pivot_of_low.get(&low) else {
                let idx = self.reduced.len();
                self.pivot_of_low.insert(low, idx);
                self.reduced.push(col);
                return Some(low);
            };
            let piv = &self.reduced[j];
            let cp = piv.last().expect("stored pivots are nonzero").1;
            let factor = f.mul(c, f.inv(cp));
            col = axpy(f, &col, factor, piv);
        }
        None
    }
}

/// `a − factor·b` for sorted sparse columns.
fn axpy(f: Fp, a: &[(u32, u64)], factor: u64, b: &[(u32, u64)]) -> Column {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.neg(f.mul(factor, b[j].1))));
            j += 1;
        } else {
            let v = f.sub(a[i].1, f.mul(factor, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn triangle_column(f: Fp, t: &[usize; 3], row: impl Fn([usize; 2]) -> u32) -> Column {
    // ∂[a,b,c] = [b,c] − [a,c] + [a,b]
    let mut col = vec![
        (row([t[1], t[2]]), 1),
        (row([t[0], t[2]]), f.neg(1)),
        (row([t[0], t[1]]), 1),
    ];
    col.sort_unstable_by_key(|e| e.0);
    col
}

fn vertex_index(k: &SimplicialComplex) -> HashMap<usize, usize> {
    k.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

fn rank_d1(k: &SimplicialComplex, index: &HashMap<usize, usize>) -> usize {
    let mut uf = UnionFind::new(k.vertices().len());
    k.edges()
        .iter()
        .filter(|e| uf.union(index[&e[0]], index[&e[1]]))
        .count()
}

fn rank_d2(k: &SimplicialComplex, f: Fp) -> usize {
    let mut red = Reducer::new(f);
    let row = |e: [usize; 2]| k.edges().binary_search(&e).expect("closed complex") as u32;
    k.triangles()
        .iter()
        .filter(|t| red.push(triangle_column(f, t, row)).is_some())
        .count()
}

/// Dimensions of H₀, H₁, H₂ with coefficients in F_p.
pub fn homology_dims(k: &SimplicialComplex, p: u64) -> Result<[usize; 3]> {
    let f = Fp::new(p)?;
    let [n0, n1, n2] = k.counts();
    let r1 = rank_d1(k, &vertex_index(k));
    let r2 = rank_d2(k, f);
    Ok([n0 - r1, n1 - r1 - r2, n2 - r2])
}

/// Rank of the map H_a(K₁; F_p) → H_a(K₂; F_p) induced by the inclusion K₁ ⊆ K₂.
pub fn image_rank(k1: &SimplicialComplex, k2: &SimplicialComplex, a: usize, p: u64) -> Result<usize> {
    let f = Fp::new(p)?;
    if a > 2 {
        return Err(Error::usage(format!("degree {a} out of range 0..=2")));
    }
    if !k1.is_subcomplex_of(k2) {
        return Err(Error::usage("image_rank needs K1 to be a subcomplex of K2"));
    }
    match a {
        0 => {
            let index = vertex_index(k2);
            let mut uf = UnionFind::new(k2.vertices().len());
            for e in k2.edges() {
                uf.union(index[&e[0]], index[&e[1]]);
            }
            let mut roots: Vec<usize> = k1.vertices().iter().map(|v| uf.find(index[v])).collect();
            roots.sort_unstable();
            roots.dedup();
            Ok(roots.len())
        }
        1 => {
            // Filtration order: K₁ simplices first, then K₂ \ K₁.
            let n1 = k1.edges().len();
            let r1 = rank_d1(k1, &vertex_index(k1));
            let mut rows: HashMap<[usize; 2], u32> = HashMap::with_capacity(k2.edges().len());
            for (i, e) in k1.edges().iter().enumerate() {
                rows.insert(*e, i as u32);
            }
            let mut next = n1 as u32;
            for e in k2.edges() {
                rows.entry(*e).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
            }
            let row = |e: [usize; 2]| rows[&e];
            let outer = k2
                .triangles()
                .iter()
                .filter(|t| k1.triangles().binary_search(t).is_err());
            let mut red = Reducer::new(f);
            let killed = k1
                .triangles()
                .iter()
                .chain(outer)
                .filter_map(|t| red.push(triangle_column(f, t, row)))
                .filter(|&low| (low as usize) < n1)
                .count();
            Ok(n1 - r1 - killed)
        }
        _ => Ok(k1.triangles().len() - rank_d2(k1, f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hollow() -> SimplicialComplex {
        SimplicialComplex::from_simplices([], [[0, 1], [1, 2], [0, 2]], []).unwrap()
    }

    #[test]
    fn small_betti_numbers() {
        let pt = SimplicialComplex::from_simplices([7], [], []).unwrap();
        assert_eq!(homology_dims(&pt, 2).unwrap(), [1, 0, 0]);
        assert_eq!(homology_dims(&hollow(), 3).unwrap(), [1, 1, 0]);
        let filled = SimplicialComplex::from_triangles([[0, 1, 2]]).unwrap();
        assert_eq!(homology_dims(&filled, 5).unwrap(), [1, 0, 0]);
        assert_eq!(homology_dims(&SimplicialComplex::default(), 2).unwrap(), [0, 0, 0]);
        assert!(homology_dims(&pt, 4).is_err());
    }

    #[test]
    fn image_ranks_of_simple_inclusions() {
        let filled = SimplicialComplex::from_triangles([[0, 1, 2]]).unwrap();
        assert_eq!(image_rank(&hollow(), &filled, 1, 2).unwrap(), 0);
        assert_eq!(image_rank(&hollow(), &hollow(), 1, 2).unwrap(), 1);
        let v = SimplicialComplex::from_simplices([0], [], []).unwrap();
        let e = SimplicialComplex::from_simplices([], [[0, 1]], []).unwrap();
        assert_eq!(image_rank(&v, &e, 0, 2).unwrap(), 1);
        assert!(image_rank(&e, &v, 0, 2).is_err());
        let two = SimplicialComplex::from_simplices([0, 1], [], []).unwrap();
        assert_eq!(image_rank(&two, &e, 0, 3).unwrap(), 1);
    }

    #[test]
    fn sparse_axpy_cancels() {
        let f = Fp::new(3).unwrap();
        let a = vec![(0, 1), (2, 2)];
        let b = vec![(1, 1), (2, 2)];
        assert_eq!(axpy(f, &a, 1, &b), vec![(0, 1), (1, 2)]);
    }
}
