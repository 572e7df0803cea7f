use collapse_core::gh::{gh_oracle_small, natural_coupling, quotient_coupling, FiniteMetric};
use collapse_core::hyperbolic::hyp_distance;
use collapse_core::surfaces::{
    flat_torus_cover, gen_flat_klein, gen_rp2_tube, gen_sphere_tube, sphere_tube_cover, tube_frame, FamilySpec,
    KleinMode, SamplePoint,
};
use collapse_core::topology::{betti_full, h_profile, h_profiles};
use collapse_core::Exec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXEC: Exec = Exec::Parallel;

#[test]
fn tip_to_tip_matches_the_profile_geodesic() {
    let (l, r, h) = (1.0, 0.05, 0.0125);
    let s = gen_sphere_tube(l, r, h, EXEC).unwrap();
    let expected = l * r.cosh() + std::f64::consts::PI * r.sinh();
    assert!((expected - 1.1584).abs() < 1e-3);
    let d = s.dist(0, s.len() - 1);
    assert!(d >= expected - 1e-9 && d <= expected + 3.0 * h, "{d} vs {expected}");
}

#[test]
fn intrinsic_distances_dominate_ambient_ones() {
    let s = gen_sphere_tube(1.0, 0.05, 0.0125, EXEC).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let i = rng.random_range(0..s.len());
        let row = s.metric.row(i);
        let a = s.ambient(i).unwrap();
        for j in 0..s.len() {
            assert!(row[j] >= hyp_distance(&a, &s.ambient(j).unwrap()) - 1e-9);
        }
    }
}

#[test]
fn rp2_middle_ring_is_a_closed_geodesic_of_length_pi_sinh_r() {
    let (r, h) = (0.05, 0.0125);
    let s = gen_rp2_tube(1.0, r, h, EXEC).unwrap();
    let frame = tube_frame();
    let ring: Vec<usize> = (0..s.len())
        .filter(|&i| frame.from_point(&s.ambient(i).unwrap()).t.abs() < 1e-9)
        .collect();
    assert!(ring.len() >= 6);
    // a closed curve of length πR has diameter πR/2
    let diam = ring
        .iter()
        .flat_map(|&i| ring.iter().map(move |&j| (i, j)))
        .map(|(i, j)| s.dist(i, j))
        .fold(0.0, f64::max);
    let half = 0.5 * std::f64::consts::PI * r.sinh();
    assert!(diam <= half + 3.0 * h && diam >= half - 3.0 * h, "{diam} vs {half}");
}

#[test]
fn mesh_homology_of_each_family() {
    let sphere = gen_sphere_tube(1.0, 0.05, 0.0125, EXEC).unwrap();
    let rp2 = gen_rp2_tube(1.0, 0.05, 0.0125, EXEC).unwrap();
    let klein = gen_flat_klein(1.0, 0.05, KleinMode::Circle, 0.0125).unwrap();
    for p in [2, 3, 5] {
        assert_eq!(betti_full(&sphere, p).unwrap(), [1, 0, 1]);
    }
    assert_eq!(betti_full(&rp2, 2).unwrap(), [1, 1, 1]);
    assert_eq!(betti_full(&rp2, 3).unwrap(), [1, 0, 0]);
    assert_eq!(betti_full(&klein, 2).unwrap(), [1, 2, 1]);
    assert_eq!(betti_full(&klein, 3).unwrap(), [1, 1, 0]);
}

#[test]
fn point_collapse_meshes_are_small() {
    let specs = [
        FamilySpec::SphereTube { length: 0.03, radius: 0.003, resolution: 0.001 },
        FamilySpec::Rp2Tube { length: 0.03, radius: 0.003, resolution: 0.001 },
        FamilySpec::FlatTorus { l: 0.03, w: 0.02, resolution: 0.005 },
        FamilySpec::FlatKleinCircle { l: 0.03, w: 0.02, resolution: 0.005 },
    ];
    for spec in specs {
        let s = FamilySpec::PointCollapse { surface: Box::new(spec) }.generate(EXEC).unwrap();
        assert!(s.diameter(EXEC) <= 0.05, "{}", s.label);
    }
}

#[test]
fn quotient_coupling_does_not_increase_hausdorff_distance() {
    let tube = sphere_tube_cover(1.0, 0.05, 0.0125, EXEC).unwrap();
    let torus = flat_torus_cover(1.0, 0.04, 0.01).unwrap();
    for cover in [tube, torus] {
        let up = natural_coupling(&cover, EXEC).unwrap().hausdorff();
        let down = quotient_coupling(cover.clone(), EXEC).unwrap().hausdorff();
        assert!(down <= up + 1e-12, "{}: {down} > {up}", cover.label);
    }
}

#[test]
fn quotient_coupling_reproduces_rp2_profiles() {
    let cover = sphere_tube_cover(1.0, 0.02, 0.005, EXEC).unwrap();
    let q = quotient_coupling(cover, EXEC).unwrap();
    let m = h_profile(&q, 0.0, 0.05, 0.1, 2).unwrap();
    let c = h_profile(&q, 0.5, 0.05, 0.1, 2).unwrap();
    let i = h_profile(&q, 0.25, 0.05, 0.1, 3).unwrap();
    assert!(m.is_conclusive() && c.is_conclusive() && i.is_conclusive());
    assert_eq!((m.h, c.h, i.h), ([1, 1, 0], [1, 0, 0], [1, 1, 0]));
}

#[test]
fn large_balls_at_the_klein_segment_see_the_doubled_core() {
    // δ₂ reaches the Möbius end: the band's core maps to twice the Möbius core
    let s = gen_flat_klein(1.0, 0.02, KleinMode::Segment, 0.005).unwrap();
    let c = natural_coupling(&s, EXEC).unwrap();
    let ps = h_profiles(&c, 0.125, &[(0.1, 0.2)], &[2, 3]).unwrap();
    assert!(ps.iter().all(|p| p.is_conclusive()));
    assert_eq!(ps[0].h, [1, 0, 0]);
    assert_eq!(ps[1].h, [1, 1, 0]);
}

#[test]
fn f_is_field_independent_on_conclusive_cells() {
    let s = gen_sphere_tube(1.0, 0.02, 0.005, EXEC).unwrap();
    let c = natural_coupling(&s, EXEC).unwrap();
    for x in [0.0, 0.3, 0.5, 1.0] {
        let ps = h_profiles(&c, x, &[(0.05, 0.1)], &[2, 3, 5, 7]).unwrap();
        assert!(ps.iter().all(|p| p.is_conclusive() && p.f == ps[0].f && p.h == ps[0].h));
    }
}

fn brute_force_gh(x: &FiniteMetric, y: &FiniteMetric) -> f64 {
    let pairs: Vec<(usize, usize)> = (0..x.len()).flat_map(|a| (0..y.len()).map(move |b| (a, b))).collect();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << pairs.len()) {
        let r: Vec<(usize, usize)> = (0..pairs.len()).filter(|k| mask >> k & 1 == 1).map(|k| pairs[k]).collect();
        let covers = (0..x.len()).all(|a| r.iter().any(|p| p.0 == a)) && (0..y.len()).all(|b| r.iter().any(|p| p.1 == b));
        if covers {
            best = best.min(x.distortion(y, &r));
        }
    }
    0.5 * best
}

#[test]
fn gh_oracle_matches_brute_force_on_paths() {
    let path = |a: f64, b: f64| FiniteMetric::new(3, vec![0.0, a, a + b, a, 0.0, b, a + b, b, 0.0]).unwrap();
    let (x, y) = (path(1.0, 1.0), path(1.0, 0.5));
    let expected = brute_force_gh(&x, &y);
    assert_eq!(gh_oracle_small(&x, &y).unwrap(), expected);
    assert_eq!(expected, 0.25);
    let two = FiniteMetric::new(2, vec![0.0, 2.0, 2.0, 0.0]).unwrap();
    let one = FiniteMetric::new(1, vec![0.0]).unwrap();
    assert_eq!(gh_oracle_small(&two, &one).unwrap(), 1.0);
    assert_eq!(gh_oracle_small(&x, &x).unwrap(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..30 {
        let pts = |rng: &mut ChaCha8Rng, n: usize| {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
            FiniteMetric::from_fn(n, |i, j| (v[i] - v[j]).abs()).unwrap()
        };
        let (a, b) = (pts(&mut rng, 3), pts(&mut rng, 4));
        assert_eq!(gh_oracle_small(&a, &b).unwrap(), brute_force_gh(&a, &b));
    }
}

#[test]
fn sample_points_carry_their_geometry() {
    let s = gen_sphere_tube(1.0, 0.05, 0.0125, EXEC).unwrap();
    assert!(s.points.iter().all(|p| matches!(p, SamplePoint::Tube { .. })));
}
