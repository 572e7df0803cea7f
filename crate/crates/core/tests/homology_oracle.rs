mod support;

use collapse_core::topology::micro::{self, inclusion_pairs};
use collapse_core::topology::{homology_dims, image_rank, SimplicialComplex};
use proptest::prelude::*;
use support::dense_oracle::{dense_betti, dense_cohomology_image_rank, dense_image_rank};

const PRIMES: [u64; 3] = [2, 3, 5];

#[test]
fn image_rank_matches_dense_oracle_on_micro_complexes() {
    for (name, k1, k2) in inclusion_pairs() {
        for p in PRIMES {
            for a in 0..3 {
                let fast = image_rank(&k1, &k2, a, p).unwrap();
                assert_eq!(fast, dense_image_rank(&k1, &k2, a, p), "{name} a={a} p={p}");
                assert_eq!(fast, dense_cohomology_image_rank(&k1, &k2, a, p), "{name} a={a} p={p} (cohomology)");
            }
        }
    }
}

#[test]
fn documented_image_ranks() {
    assert_eq!(image_rank(&micro::point(), &micro::edge(), 0, 2).unwrap(), 1);
    assert_eq!(image_rank(&micro::hollow_triangle(), &micro::filled_triangle(), 1, 3).unwrap(), 0);
    assert_eq!(image_rank(&micro::hexagon(), &micro::annulus(), 1, 2).unwrap(), 1);
    assert_eq!(dense_image_rank(&micro::hexagon(), &micro::annulus(), 1, 2), 1);
}

#[test]
fn betti_numbers_match_dense_oracle() {
    let fixtures = [
        micro::point(),
        micro::edge(),
        micro::hollow_triangle(),
        micro::filled_triangle(),
        micro::hexagon(),
        micro::annulus(),
        micro::rp2(),
        micro::torus7(),
    ];
    for k in &fixtures {
        for p in PRIMES {
            assert_eq!(homology_dims(k, p).unwrap(), dense_betti(k, p));
        }
    }
    assert_eq!(dense_betti(&micro::rp2(), 2), [1, 1, 1]);
    assert_eq!(dense_betti(&micro::rp2(), 3), [1, 0, 0]);
    assert_eq!(dense_betti(&micro::hollow_triangle(), 7), [1, 1, 0]);
}

#[test]
fn non_subcomplex_is_a_usage_error() {
    let r = image_rank(&micro::filled_triangle(), &micro::hollow_triangle(), 1, 2);
    assert!(matches!(r, Err(collapse_core::Error::Usage(_))));
}

fn subsets() -> impl Strategy<Value = (u32, u32, u32)> {
    // nested vertex masks V₁ ⊆ V₂ ⊆ V₃ on 7 vertices
    (0u32..128, 0u32..128, 0u32..128).prop_map(|(a, b, c)| (a & b & c, b & c, c))
}

fn induced(k: &SimplicialComplex, mask: u32) -> SimplicialComplex {
    k.induced(|v| mask >> v & 1 == 1)
}

proptest! {
    #[test]
    fn random_induced_pairs_match_oracle((m1, m2, m3) in subsets(), which in 0usize..2, pi in 0usize..3) {
        let k = if which == 0 { micro::torus7() } else { micro::rp2() };
        let p = PRIMES[pi];
        let (k1, k2, k3) = (induced(&k, m1), induced(&k, m2), induced(&k, m3));
        for a in 0..3 {
            let r12 = image_rank(&k1, &k2, a, p).unwrap();
            prop_assert_eq!(r12, dense_image_rank(&k1, &k2, a, p));
            prop_assert_eq!(r12, dense_cohomology_image_rank(&k1, &k2, a, p));
            // functoriality sandwich
            let r13 = image_rank(&k1, &k3, a, p).unwrap();
            let r23 = image_rank(&k2, &k3, a, p).unwrap();
            prop_assert!(r13 <= r12.min(r23));
        }
        // Euler consistency
        let b = homology_dims(&k2, p).unwrap();
        prop_assert_eq!(b[0] as i64 - b[1] as i64 + b[2] as i64, k2.euler_characteristic());
    }
}
