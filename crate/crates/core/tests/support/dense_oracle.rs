//! Dense brute-force homology oracles: explicit boundary matrices over F_p,
//! cycle bases from reduced row echelon form, and the cohomology side via
//! transposed matrices.

#![allow(dead_code)]

use collapse_core::topology::SimplicialComplex;

type Mat = Vec<Vec<u64>>;

fn inv(a: u64, p: u64) -> u64 {
    // a^(p−2) by repeated squaring
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut Mat, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(r) = (row..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(row, r);
        let s = inv(m[row][c], p);
        for x in m[row].iter_mut() {
            *x = *x * s % p;
        }
        for r2 in 0..m.len() {
            if r2 != row && m[r2][c] != 0 {
                let f = m[r2][c];
                for k in 0..cols {
                    m[r2][k] = (m[r2][k] + p * p - f * m[row][k] % p) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Mat, cols: usize, p: u64) -> usize {
    let mut m = m.clone();
    rref(&mut m, cols, p).len()
}

/// Basis of the null space of `m` (rows × cols), as column vectors.
fn null_space(m: &Mat, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut r = m.clone();
    let pivots = rref(&mut r, cols, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - r[row][f]) % p;
            }
            v
        })
        .collect()
}

fn simplices(k: &SimplicialComplex, a: usize) -> Vec<Vec<usize>> {
    match a {
        0 => k.vertices().iter().map(|&v| vec![v]).collect(),
        1 => k.edges().iter().map(|e| e.to_vec()).collect(),
        2 => k.triangles().iter().map(|t| t.to_vec()).collect(),
        _ => Vec::new(),
    }
}

/// ∂_a as a dense matrix: rows are (a−1)-simplices, columns a-simplices.
fn boundary(k: &SimplicialComplex, a: usize, p: u64) -> (Mat, usize, usize) {
    let cols = simplices(k, a);
    if a == 0 {
        return (Vec::new(), 0, cols.len());
    }
    let rows = simplices(k, a - 1);
    let mut m = vec![vec![0u64; cols.len()]; rows.len()];
    for (j, s) in cols.iter().enumerate() {
        for drop in 0..s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
            let i = rows.iter().position(|r| *r == face).expect("closed complex");
            m[i][j] = if drop % 2 == 0 { 1 } else { p - 1 };
        }
    }
    (m, rows.len(), cols.len())
}

fn transpose(m: &Mat, rows: usize, cols: usize) -> Mat {
    (0..cols).map(|j| (0..rows).map(|i| m[i][j]).collect()).collect()
}

pub fn dense_betti(k: &SimplicialComplex, p: u64) -> [usize; 3] {
    let mut out = [0; 3];
    for a in 0..3 {
        let (d, _, n) = boundary(k, a, p);
        let (d1, _, n1) = boundary(k, a + 1, p);
        out[a] = n - rank(&d, n, p) - rank(&d1, n1, p);
    }
    out
}

/// rank H_a(K₁) → H_a(K₂) = rank[Z_a(K₁) | B_a(K₂)] − rank B_a(K₂).
pub fn dense_image_rank(k1: &SimplicialComplex, k2: &SimplicialComplex, a: usize, p: u64) -> usize {
    let s1 = simplices(k1, a);
    let s2 = simplices(k2, a);
    let (d1, _, n1) = boundary(k1, a, p);
    let z1 = null_space(&d1, n1, p);
    let (d2, rows2, n2) = boundary(k2, a + 1, p);
    // generators as rows of length |C_a(K₂)|
    let embed = |v: &Vec<u64>| {
        let mut w = vec![0u64; s2.len()];
        for (i, s) in s1.iter().enumerate() {
            w[s2.iter().position(|t| t == s).expect("subcomplex")] = v[i];
        }
        w
    };
    let b2: Mat = transpose(&d2, rows2, n2);
    let mut both: Mat = z1.iter().map(embed).collect();
    both.extend(b2.iter().cloned());
    rank(&both, s2.len(), p) - rank(&b2, s2.len(), p)
}

/// rank H^a(K₂) → H^a(K₁) = rank[Z^a(K₂)|_{K₁} | B^a(K₁)] − rank B^a(K₁).
pub fn dense_cohomology_image_rank(k1: &SimplicialComplex, k2: &SimplicialComplex, a: usize, p: u64) -> usize {
    let s1 = simplices(k1, a);
    let s2 = simplices(k2, a);
    // δ^a = (∂_{a+1})ᵀ, so cocycles are the null space of the transpose
    let (d2, rows2, n2) = boundary(k2, a + 1, p);
    let z2 = null_space(&transpose(&d2, rows2, n2), s2.len(), p);
    let restrict = |v: &Vec<u64>| -> Vec<u64> {
        s1.iter()
            .map(|s| v[s2.iter().position(|t| t == s).expect("subcomplex")])
            .collect()
    };
    // coboundaries of K₁: rows of ∂_a(K₁), i.e. δ^{a−1} images
    let (d1, _, _) = boundary(k1, a, p);
    let b1: Mat = d1.clone();
    let mut both: Mat = z2.iter().map(restrict).collect();
    both.extend(b1.iter().cloned());
    rank(&both, s1.len(), p) - rank(&b1, s1.len(), p)
}
