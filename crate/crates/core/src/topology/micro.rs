//! Small explicit complexes with known homology, used as fixtures by the
//! oracle tests and the acceptance suite.

use super::complex::SimplicialComplex;

fn build(
    vertices: &[usize],
    edges: &[[usize; 2]],
    triangles: &[[usize; 3]],
) -> SimplicialComplex {
    SimplicialComplex::from_simplices(vertices.iter().copied(), edges.iter().copied(), triangles.iter().copied())
        .expect("fixture complexes are well formed")
}

pub fn point() -> SimplicialComplex {
    build(&[0], &[], &[])
}

pub fn edge() -> SimplicialComplex {
    build(&[], &[[0, 1]], &[])
}

pub fn hollow_triangle() -> SimplicialComplex {
    build(&[], &[[0, 1], [1, 2], [0, 2]], &[])
}

pub fn filled_triangle() -> SimplicialComplex {
    build(&[], &[], &[[0, 1, 2]])
}

/// Hexagonal cycle on vertices 0..6.
pub fn hexagon() -> SimplicialComplex {
    let e: Vec<[usize; 2]> = (0..6).map(|i| [i, (i + 1) % 6]).collect();
    build(&[], &e, &[])
}

/// Annulus between the hexagon 0..6 and an outer hexagon 6..12; it
/// deformation retracts onto the inner hexagon.
pub fn annulus() -> SimplicialComplex {
    let mut t = Vec::new();
    for i in 0..6 {
        let j = (i + 1) % 6;
        t.push([i, j, 6 + i]);
        t.push([j, 6 + i, 6 + j]);
    }
    build(&[], &[], &t)
}

/// The 6-vertex projective plane (hemi-icosahedron).
pub fn rp2() -> SimplicialComplex {
    let t: [[usize; 3]; 10] = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ];
    build(&[], &[], &t)
}

/// The 7-vertex torus.
pub fn torus7() -> SimplicialComplex {
    let mut t = Vec::new();
    for i in 0..7 {
        t.push([i, (i + 1) % 7, (i + 3) % 7]);
        t.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    build(&[], &[], &t)
}

/// Named inclusion pairs K₁ ⊆ K₂ covering every fixture.
pub fn inclusion_pairs() -> Vec<(&'static str, SimplicialComplex, SimplicialComplex)> {
    let star0 = rp2().induced(|v| v != 5);
    vec![
        ("point_in_edge", point(), edge()),
        ("two_points_in_edge", build(&[0, 1], &[], &[]), edge()),
        ("hollow_in_filled", hollow_triangle(), filled_triangle()),
        ("hollow_in_hollow", hollow_triangle(), hollow_triangle()),
        ("hexagon_in_annulus", hexagon(), annulus()),
        ("annulus_in_annulus", annulus(), annulus()),
        ("rp2_minus_vertex_in_rp2", star0, rp2()),
        ("rp2_in_rp2", rp2(), rp2()),
        ("torus_in_torus", torus7(), torus7()),
        ("torus_edges_in_torus", build(&[], torus7().edges(), &[]), torus7()),
        ("point_in_rp2", point(), rp2()),
    ]
}
