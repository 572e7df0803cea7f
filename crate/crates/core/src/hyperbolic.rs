//! Hyperbolic plane and space (curvature −1) in the hyperboloid model.
//!
//! Points are stored on the upper sheet `−x₀² + |x|² = −1` of Minkowski
//! space; the Klein chart `k = x / x₀` is the input/output coordinate system.
//! In the Klein chart geodesics are affine chords of the unit ball, which is
//! what makes convexity checks and the Fermi-coordinate tube meshes cheap.
//!
//! The dimension is a const parameter (`2` or `3`); mixing dimensions is a
//! type error rather than a runtime one.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Minimum gap `1 − |k|` accepted for Klein coordinates.
pub const KLEIN_MARGIN: f64 = 1e-12;

/// Slack allowed in the triangle inequalities fed to [`comparison_angle`].
pub const ANGLE_DOMAIN_TOL: f64 = 1e-9;

/// A vector of Minkowski space `R^{1,N}`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Mink<const N: usize> {
    t: f64,
    x: [f64; N],
}

impl<const N: usize> Mink<N> {
    fn zero() -> Self {
        Mink { t: 0.0, x: [0.0; N] }
    }

    fn spatial(x: [f64; N]) -> Self {
        Mink { t: 0.0, x }
    }

    fn dot(&self, o: &Self) -> f64 {
        let mut s = -self.t * o.t;
        for i in 0..N {
            s += self.x[i] * o.x[i];
        }
        s
    }

    fn scale(&self, a: f64) -> Self {
        let mut x = self.x;
        x.iter_mut().for_each(|v| *v *= a);
        Mink { t: self.t * a, x }
    }

    fn add(&self, o: &Self) -> Self {
        let mut x = self.x;
        for i in 0..N {
            x[i] += o.x[i];
        }
        Mink { t: self.t + o.t, x }
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1.0))
    }

    fn axpy(&self, a: f64, o: &Self) -> Self {
        self.add(&o.scale(a))
    }
}

/// A point of hyperbolic `N`-space, `N ∈ {2, 3}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint<const N: usize> {
    v: Mink<N>,
}

fn check_dim<const N: usize>() -> Result<()> {
    if N == 2 || N == 3 {
        Ok(())
    } else {
        Err(Error::usage(format!("hyperbolic dimension must be 2 or 3, got {N}")))
    }
}

impl<const N: usize> HPoint<N> {
    pub fn origin() -> Self {
        HPoint {
            v: Mink { t: 1.0, x: [0.0; N] },
        }
    }

    /// Builds a point from Klein-chart coordinates (open unit ball).
    pub fn from_klein(k: [f64; N]) -> Result<Self> {
        check_dim::<N>()?;
        if k.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("non-finite Klein coordinate".into()));
        }
        let norm = k.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1.0 - KLEIN_MARGIN {
            return Err(Error::Domain(format!(
                "Klein coordinates must lie in the open unit ball (|k| = {norm})"
            )));
        }
        let t = 1.0 / ((1.0 - norm) * (1.0 + norm)).sqrt();
        let mut x = k;
        x.iter_mut().for_each(|c| *c *= t);
        Ok(HPoint { v: Mink { t, x } })
    }

    /// Builds a point from hyperboloid coordinates, renormalising onto the
    /// upper sheet. Fails for non-timelike input.
    pub fn from_hyperboloid(t: f64, x: [f64; N]) -> Result<Self> {
        check_dim::<N>()?;
        Self::normalize(Mink { t, x })
            .ok_or_else(|| Error::Domain("vector is not future timelike".into()))
    }

    fn normalize(v: Mink<N>) -> Option<Self> {
        let q = -v.dot(&v);
        if !(q > 0.0) || v.t <= 0.0 || !q.is_finite() {
            return None;
        }
        Some(HPoint { v: v.scale(1.0 / q.sqrt()) })
    }

    pub fn klein(&self) -> [f64; N] {
        let mut k = self.v.x;
        k.iter_mut().for_each(|c| *c /= self.v.t);
        k
    }

    /// Hyperboloid coordinates `(x₀, x)`.
    pub fn hyperboloid(&self) -> (f64, [f64; N]) {
        (self.v.t, self.v.x)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let c = -self.v.dot(&other.v);
        if c < 2.0 {
            // chord form: |p − q|²_M = 4 sinh²(d/2), stable for close points
            let d = self.v.sub(&other.v);
            let m = d.dot(&d).max(0.0);
            2.0 * (m.sqrt() / 2.0).asinh()
        } else {
            c.acosh()
        }
    }
}

/// Hyperbolic distance between two points.
pub fn hyp_distance<const N: usize>(p: &HPoint<N>, q: &HPoint<N>) -> f64 {
    p.distance(q)
}

/// The point at arclength fraction `s` along the geodesic from `p` to `q`.
pub fn geodesic_point<const N: usize>(p: &HPoint<N>, q: &HPoint<N>, s: f64) -> HPoint<N> {
    let d = p.distance(q);
    if d == 0.0 {
        return *p;
    }
    if s == 0.0 {
        return *p;
    }
    if s == 1.0 {
        return *q;
    }
    let sd = d.sinh();
    let a = ((1.0 - s) * d).sinh() / sd;
    let b = (s * d).sinh() / sd;
    HPoint::normalize(p.v.scale(a).axpy(b, &q.v)).unwrap_or(*p)
}

/// Geodesic reflection through `center` (the point symmetry of H^N).
pub fn point_reflection<const N: usize>(center: &HPoint<N>, p: &HPoint<N>) -> HPoint<N> {
    let c = center.v;
    let pc = p.v.dot(&c);
    let v = p.v.scale(-1.0).axpy(-2.0 * pc, &c);
    HPoint::normalize(v).unwrap_or(*center)
}

/// A totally geodesic subspace through `base` spanned by 1 or 2 Klein-chart
/// directions.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicSubspace<const N: usize> {
    base: HPoint<N>,
    directions: Vec<[f64; N]>,
    basis: Vec<Mink<N>>,
    gram_inv: DMatrix<f64>,
}

impl<const N: usize> GeodesicSubspace<N> {
    pub fn new(base: HPoint<N>, directions: Vec<[f64; N]>) -> Result<Self> {
        if directions.is_empty() || directions.len() > 2 || directions.len() >= N {
            return Err(Error::usage(format!(
                "a proper geodesic subspace of H^{N} needs 1..{} directions, got {}",
                N - 1,
                directions.len()
            )));
        }
        let mut basis = vec![base.v];
        basis.extend(directions.iter().map(|d| Mink::spatial(*d)));
        let k = basis.len();
        let gram = DMatrix::from_fn(k, k, |i, j| basis[i].dot(&basis[j]));
        // Euclidean independence of the directions
        let eg = DMatrix::from_fn(k - 1, k - 1, |i, j| {
            (0..N).map(|c| directions[i][c] * directions[j][c]).sum::<f64>()
        });
        let scale: f64 = (0..k - 1).map(|i| eg[(i, i)]).product();
        if scale <= 0.0 || eg.determinant() <= 1e-12 * scale {
            return Err(Error::usage("subspace directions are linearly dependent"));
        }
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::usage("degenerate geodesic subspace"))?;
        Ok(GeodesicSubspace {
            base,
            directions,
            basis,
            gram_inv,
        })
    }

    /// The geodesic line through two distinct points.
    pub fn line(p: &HPoint<N>, q: &HPoint<N>) -> Result<Self> {
        let (a, b) = (p.klein(), q.klein());
        let mut d = [0.0; N];
        for i in 0..N {
            d[i] = b[i] - a[i];
        }
        Self::new(*p, vec![d])
    }

    /// The geodesic line through the origin along a coordinate axis.
    pub fn axis(coordinate: usize) -> Result<Self> {
        if coordinate >= N {
            return Err(Error::usage("axis index out of range"));
        }
        let mut d = [0.0; N];
        d[coordinate] = 1.0;
        Self::new(HPoint::origin(), vec![d])
    }

    pub fn base(&self) -> &HPoint<N> {
        &self.base
    }

    pub fn directions(&self) -> &[[f64; N]] {
        &self.directions
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    /// Klein-chart point `base + Σ sᵢ dirᵢ`, if it lies in the ball.
    pub fn klein_point(&self, coeffs: &[f64]) -> Result<HPoint<N>> {
        let mut k = self.base.klein();
        for (d, s) in self.directions.iter().zip(coeffs) {
            for i in 0..N {
                k[i] += s * d[i];
            }
        }
        HPoint::from_klein(k)
    }
}

/// Nearest point of `sub` to `p` (the Busemann–Feller projection).
pub fn project_to_geodesic<const N: usize>(p: &HPoint<N>, sub: &GeodesicSubspace<N>) -> HPoint<N> {
    let k = sub.basis.len();
    let rhs = DVector::from_fn(k, |i, _| sub.basis[i].dot(&p.v));
    let c = &sub.gram_inv * rhs;
    let mut v = Mink::zero();
    for i in 0..k {
        v = v.axpy(c[i], &sub.basis[i]);
    }
    // the basis vectors are only defined up to sign in the time component
    if v.t < 0.0 {
        v = v.scale(-1.0);
    }
    HPoint::normalize(v).unwrap_or(sub.base)
}

/// Fermi coordinates around a geodesic axis: signed arclength `t` of the
/// foot, distance `r` to the axis and angle `theta` about it (in H² the angle
/// is `0` or `π` and records the side).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FermiCoords {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
}

/// Orthonormal Minkowski frame adapted to an axis: base point, unit tangent
/// and one or two unit normals, all invariant under translation along the axis.
#[derive(Clone, Debug)]
pub struct FermiFrame<const N: usize> {
    b: Mink<N>,
    u: Mink<N>,
    normals: Vec<Mink<N>>,
}

impl<const N: usize> FermiFrame<N> {
    pub fn new(axis: &GeodesicSubspace<N>) -> Result<Self> {
        if axis.dimension() != 1 {
            return Err(Error::usage("Fermi coordinates need a 1-dimensional axis"));
        }
        let b = axis.base.v;
        let d = Mink::spatial(axis.directions[0]);
        let u = d.axpy(d.dot(&b), &b);
        let u = u.scale(1.0 / u.dot(&u).sqrt());
        let mut normals: Vec<Mink<N>> = Vec::new();
        for c in 0..N {
            if normals.len() == N - 1 {
                break;
            }
            let mut e = [0.0; N];
            e[c] = 1.0;
            let mut w = Mink::spatial(e);
            w = w.axpy(w.dot(&b), &b);
            w = w.axpy(-w.dot(&u), &u);
            for n in &normals {
                w = w.axpy(-w.dot(n), n);
            }
            let nn = w.dot(&w);
            if nn > 1e-8 {
                normals.push(w.scale(1.0 / nn.sqrt()));
            }
        }
        if normals.len() != N - 1 {
            return Err(Error::usage("could not complete the Fermi frame"));
        }
        Ok(FermiFrame { b, u, normals })
    }

    fn axis_point(&self, t: f64) -> Mink<N> {
        self.b.scale(t.cosh()).axpy(t.sinh(), &self.u)
    }

    fn axis_tangent(&self, t: f64) -> Mink<N> {
        self.b.scale(t.sinh()).axpy(t.cosh(), &self.u)
    }

    fn normal(&self, theta: f64) -> Mink<N> {
        if N == 2 {
            self.normals[0].scale(theta.cos().signum())
        } else {
            self.normals[0]
                .scale(theta.cos())
                .axpy(theta.sin(), &self.normals[1])
        }
    }

    /// The point of the axis at signed arclength `t` from its base.
    pub fn on_axis(&self, t: f64) -> HPoint<N> {
        HPoint::normalize(self.axis_point(t)).expect("axis point is timelike")
    }

    pub fn to_point(&self, c: FermiCoords) -> HPoint<N> {
        let v = self
            .axis_point(c.t)
            .scale(c.r.cosh())
            .axpy(c.r.sinh(), &self.normal(c.theta));
        HPoint::normalize(v).expect("Fermi point is timelike")
    }

    pub fn from_point(&self, p: &HPoint<N>) -> FermiCoords {
        let alpha = -p.v.dot(&self.b);
        let beta = p.v.dot(&self.u);
        let t = 0.5 * ((alpha + beta) / (alpha - beta)).ln();
        let comps: Vec<f64> = self.normals.iter().map(|n| p.v.dot(n)).collect();
        let s = comps.iter().map(|c| c * c).sum::<f64>().sqrt();
        let r = s.asinh();
        let theta = if s < 1e-15 {
            0.0
        } else if N == 2 {
            if comps[0] >= 0.0 {
                0.0
            } else {
                std::f64::consts::PI
            }
        } else {
            comps[1].atan2(comps[0]).rem_euclid(std::f64::consts::TAU)
        };
        FermiCoords { t, r, theta }
    }

    /// Point of the geodesic sphere of radius `r` about the axis point at `t`.
    /// `phi` is the polar angle from the axis direction `outward` (`±1`);
    /// at `phi = π/2` this coincides with `to_point(t, r, theta)`.
    pub fn sphere_point(&self, t: f64, r: f64, phi: f64, theta: f64, outward: f64) -> HPoint<N> {
        let dir = self
            .axis_tangent(t)
            .scale(outward * phi.cos())
            .axpy(phi.sin(), &self.normal(theta));
        let v = self.axis_point(t).scale(r.cosh()).axpy(r.sinh(), &dir);
        HPoint::normalize(v).expect("sphere point is timelike")
    }
}

pub fn fermi_from_point<const N: usize>(
    axis: &GeodesicSubspace<N>,
    p: &HPoint<N>,
) -> Result<FermiCoords> {
    Ok(FermiFrame::new(axis)?.from_point(p))
}

pub fn fermi_to_point<const N: usize>(
    axis: &GeodesicSubspace<N>,
    c: FermiCoords,
) -> Result<HPoint<N>> {
    Ok(FermiFrame::new(axis)?.to_point(c))
}

/// Angle opposite the side `c` in the hyperbolic comparison triangle with
/// sides `a`, `b`, `c`.
///
/// Uses the half-angle form of the hyperbolic law of cosines,
/// `sin²(λ/2) = sinh((c+a−b)/2)·sinh((c−a+b)/2) / (sinh a · sinh b)`,
/// which stays accurate for tiny triangles.
pub fn comparison_angle(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || c < 0.0 || !c.is_finite() {
        return Err(Error::Domain(format!(
            "comparison angle needs a, b > 0 and c ≥ 0 (a={a}, b={b}, c={c})"
        )));
    }
    if c > a + b + ANGLE_DOMAIN_TOL || c < (a - b).abs() - ANGLE_DOMAIN_TOL {
        return Err(Error::Domain(format!(
            "side {c} violates the triangle inequality with {a}, {b}"
        )));
    }
    let c = c.clamp((a - b).abs(), a + b);
    let num = ((c + a - b) / 2.0).sinh() * ((c - a + b) / 2.0).sinh();
    let s2 = (num / (a.sinh() * b.sinh())).clamp(0.0, 1.0);
    Ok(2.0 * s2.sqrt().asin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_point3(rng: &mut ChaCha8Rng, radius: f64) -> HPoint<3> {
        loop {
            let k = [
                rng.random_range(-radius..radius),
                rng.random_range(-radius..radius),
                rng.random_range(-radius..radius),
            ];
            if k.iter().map(|c| c * c).sum::<f64>() < radius * radius {
                return HPoint::from_klein(k).unwrap();
            }
        }
    }

    /// Arclength of the Klein-chart affine segment under the chart metric
    /// `ds² = |dx|²/(1−|x|²) + (x·dx)²/(1−|x|²)²`, by composite Simpson.
    fn klein_arclength<const N: usize>(a: [f64; N], b: [f64; N], steps: usize) -> f64 {
        let speed = |s: f64| {
            let mut x = [0.0; N];
            let mut dx = [0.0; N];
            for i in 0..N {
                x[i] = a[i] + s * (b[i] - a[i]);
                dx[i] = b[i] - a[i];
            }
            let x2: f64 = x.iter().map(|v| v * v).sum();
            let dx2: f64 = dx.iter().map(|v| v * v).sum();
            let xdx: f64 = x.iter().zip(&dx).map(|(u, v)| u * v).sum();
            let g = 1.0 - x2;
            (dx2 / g + xdx * xdx / (g * g)).sqrt()
        };
        let n = steps * 2;
        let h = 1.0 / n as f64;
        let mut acc = speed(0.0) + speed(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * speed(i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn klein_round_trip_and_margin() {
        let k = [0.3, -0.4, 0.5];
        let p = HPoint::from_klein(k).unwrap();
        let back = p.klein();
        for i in 0..3 {
            assert!((back[i] - k[i]).abs() < 1e-12);
        }
        assert!(HPoint::from_klein([1.0, 0.0]).is_err());
        assert!(HPoint::from_klein([1.0 - 1e-13, 0.0]).is_err());
        assert!(HPoint::from_klein([1.0 - 1e-9, 0.0]).is_ok());
        assert!(HPoint::<4>::from_klein([0.0; 4]).is_err());
    }

    #[test]
    fn distance_from_origin_matches_integrated_chart_metric() {
        let o = HPoint::<3>::origin();
        let q = HPoint::from_klein([0.5, 0.0, 0.0]).unwrap();
        let oracle = klein_arclength([0.0; 3], [0.5, 0.0, 0.0], 2000);
        assert!((oracle - 0.5f64.atanh()).abs() < 1e-8);
        assert!((hyp_distance(&o, &q) - oracle).abs() < 1e-8);
        assert!((hyp_distance(&o, &q) - 0.549306144334).abs() < 1e-9);
        assert_eq!(hyp_distance(&q, &q), 0.0);
    }

    #[test]
    fn affine_segments_are_geodesics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = random_point3(&mut rng, 0.8);
            let q = random_point3(&mut rng, 0.8);
            let l = klein_arclength(p.klein(), q.klein(), 4000);
            assert!((l - hyp_distance(&p, &q)).abs() < 1e-7, "{l}");
        }
    }

    #[test]
    fn metric_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let p = random_point3(&mut rng, 0.9);
            let q = random_point3(&mut rng, 0.9);
            let r = random_point3(&mut rng, 0.9);
            let (pq, qr, pr) = (p.distance(&q), q.distance(&r), p.distance(&r));
            assert!((pq - q.distance(&p)).abs() < 1e-12);
            assert!(pq + qr - pr >= -1e-10);
            assert!(pq > 0.0);
        }
    }

    #[test]
    fn geodesic_points() {
        let o = HPoint::<3>::origin();
        let q = HPoint::from_klein([0.8, 0.0, 0.0]).unwrap();
        assert_eq!(geodesic_point(&o, &q, 0.0), o);
        assert_eq!(geodesic_point(&o, &q, 1.0), q);
        let m = geodesic_point(&o, &q, 0.5);
        // bisection oracle along the affine segment
        let target = 0.5 * hyp_distance(&o, &q);
        let (mut lo, mut hi) = (0.0, 0.8);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let d = hyp_distance(&o, &HPoint::from_klein([mid, 0.0, 0.0]).unwrap());
            if d < target {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((m.klein()[0] - lo).abs() < 1e-9);
        assert!((m.klein()[0] - 0.5).abs() < 1e-12);
        assert!((hyp_distance(&o, &m) - hyp_distance(&m, &q)).abs() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = random_point3(&mut rng, 0.9);
            let q = random_point3(&mut rng, 0.9);
            let s = rng.random_range(0.0..1.0);
            let g = geodesic_point(&p, &q, s);
            assert!((hyp_distance(&p, &g) - s * hyp_distance(&p, &q)).abs() < 1e-9);
            // stays on the chord [p, q]
            let (a, b, x) = (p.klein(), q.klein(), g.klein());
            let ab: Vec<f64> = (0..3).map(|i| b[i] - a[i]).collect();
            let ax: Vec<f64> = (0..3).map(|i| x[i] - a[i]).collect();
            let cross = [
                ab[1] * ax[2] - ab[2] * ax[1],
                ab[2] * ax[0] - ab[0] * ax[2],
                ab[0] * ax[1] - ab[1] * ax[0],
            ];
            assert!(cross.iter().all(|c| c.abs() < 1e-9));
        }
        assert_eq!(geodesic_point(&q, &q, 0.3), q);
    }

    #[test]
    fn projection_examples() {
        let l = GeodesicSubspace::<3>::axis(0).unwrap();
        let p = HPoint::from_klein([0.0, 0.5, 0.0]).unwrap();
        let f = project_to_geodesic(&p, &l);
        assert!(hyp_distance(&f, &HPoint::origin()) < 1e-12);
        let on = HPoint::from_klein([0.3, 0.0, 0.0]).unwrap();
        assert!(hyp_distance(&project_to_geodesic(&on, &l), &on) < 1e-12);
    }

    #[test]
    fn projection_minimises_distance_over_the_line() {
        let l = GeodesicSubspace::<3>::axis(0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p = random_point3(&mut rng, 0.9);
            let foot = hyp_distance(&p, &project_to_geodesic(&p, &l));
            for i in 0..1000 {
                let x = -0.999 + 1.998 * i as f64 / 999.0;
                let z = HPoint::from_klein([x, 0.0, 0.0]).unwrap();
                assert!(foot <= hyp_distance(&p, &z) + 1e-9);
            }
        }
    }

    #[test]
    fn projection_onto_plane_is_nearest() {
        let base = HPoint::from_klein([0.1, -0.2, 0.05]).unwrap();
        let plane = GeodesicSubspace::new(base, vec![[1.0, 0.2, 0.0], [0.0, 0.3, 1.0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let p = random_point3(&mut rng, 0.8);
            let proj = project_to_geodesic(&p, &plane);
            let d = hyp_distance(&p, &proj);
            for _ in 0..300 {
                let s = [rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)];
                if let Ok(z) = plane.klein_point(&s) {
                    assert!(d <= hyp_distance(&p, &z) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn subspace_validation() {
        let o = HPoint::<3>::origin();
        assert!(GeodesicSubspace::new(o, vec![[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]).is_err());
        assert!(GeodesicSubspace::new(o, vec![]).is_err());
        assert!(GeodesicSubspace::<2>::new(HPoint::origin(), vec![[1.0, 0.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn fermi_examples() {
        let axis = GeodesicSubspace::<3>::axis(0).unwrap();
        let frame = FermiFrame::new(&axis).unwrap();
        let on = frame.on_axis(0.3);
        let c = fermi_from_point(&axis, &on).unwrap();
        assert!((c.t - 0.3).abs() < 1e-12 && c.r.abs() < 1e-12 && c.theta == 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let p = random_point3(&mut rng, 0.9);
            let c = frame.from_point(&p);
            let back = frame.to_point(c);
            assert!(hyp_distance(&p, &back) < 1e-9);
            let foot = project_to_geodesic(&p, &axis);
            assert!((c.r - hyp_distance(&p, &foot)).abs() < 1e-9);
        }

        // induced tube metric cosh²r dt² to second order
        let r0 = 0.1;
        let p = frame.to_point(FermiCoords { t: 0.2, r: r0, theta: 1.0 });
        let q = frame.to_point(FermiCoords { t: 0.21, r: r0, theta: 1.0 });
        assert!((hyp_distance(&p, &q) - r0.cosh() * 0.01).abs() < 1e-5);
        let q = frame.to_point(FermiCoords { t: 0.2, r: r0, theta: 1.001 });
        assert!((hyp_distance(&p, &q) - r0.sinh() * 0.001).abs() < 1e-8);
    }

    #[test]
    fn fermi_on_a_tilted_axis() {
        let a = HPoint::from_klein([0.2, 0.1, -0.3]).unwrap();
        let b = HPoint::from_klein([-0.4, 0.5, 0.1]).unwrap();
        let axis = GeodesicSubspace::line(&a, &b).unwrap();
        let frame = FermiFrame::new(&axis).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let p = random_point3(&mut rng, 0.9);
            let c = frame.from_point(&p);
            assert!(hyp_distance(&frame.to_point(c), &p) < 1e-9);
            let foot = project_to_geodesic(&p, &axis);
            assert!((hyp_distance(&foot, &a) - c.t.abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn sphere_points_meet_the_cylinder() {
        let axis = GeodesicSubspace::<3>::axis(0).unwrap();
        let frame = FermiFrame::new(&axis).unwrap();
        let c = frame.to_point(FermiCoords { t: 0.5, r: 0.05, theta: 2.0 });
        let s = frame.sphere_point(0.5, 0.05, PI / 2.0, 2.0, 1.0);
        assert!(hyp_distance(&c, &s) < 1e-12);
        let tip = frame.sphere_point(0.5, 0.05, 0.0, 0.0, 1.0);
        assert!((hyp_distance(&tip, &HPoint::origin()) - 0.55).abs() < 1e-12);
        assert!((hyp_distance(&tip, &frame.on_axis(0.5)) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn point_reflection_properties() {
        let o = HPoint::<3>::origin();
        let p = HPoint::from_klein([0.3, 0.2, 0.0]).unwrap();
        let s = point_reflection(&o, &p).klein();
        assert!((s[0] + 0.3).abs() < 1e-12 && (s[1] + 0.2).abs() < 1e-12 && s[2].abs() < 1e-12);
        assert_eq!(point_reflection(&o, &o), o);

        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let c = random_point3(&mut rng, 0.5);
        for _ in 0..100 {
            let p = random_point3(&mut rng, 0.8);
            let q = random_point3(&mut rng, 0.8);
            let sp = point_reflection(&c, &p);
            let sq = point_reflection(&c, &q);
            assert!(hyp_distance(&point_reflection(&c, &sp), &p) < 1e-12);
            assert!((hyp_distance(&sp, &sq) - hyp_distance(&p, &q)).abs() < 1e-9);
            assert!(hyp_distance(&geodesic_point(&p, &sp, 0.5), &c) < 1e-9);
        }
    }

    #[test]
    fn comparison_angle_degenerate_and_small() {
        assert!((comparison_angle(0.3, 0.5, 0.8).unwrap() - PI).abs() < 1e-12);
        assert!(comparison_angle(0.3, 0.5, 0.2).unwrap().abs() < 1e-12);
        assert!(comparison_angle(0.3, 0.5, 0.9).is_err());
        assert!(comparison_angle(0.3, 0.5, 0.1).is_err());
        assert!(comparison_angle(0.0, 0.5, 0.5).is_err());
        let e = comparison_angle(1e-4, 1e-4, 1e-4).unwrap();
        assert!((e - PI / 3.0).abs() < 1e-6);
    }

    /// Places the triangle explicitly on the hyperboloid: x at the origin, y
    /// at distance `a` along the first axis, z at distance `b` in direction
    /// `ψ`; bisects `ψ` until `d(y, z) = c` and returns it.
    fn constructed_angle(a: f64, b: f64, c: f64) -> f64 {
        let frame = FermiFrame::new(&GeodesicSubspace::<2>::axis(0).unwrap()).unwrap();
        let y = frame.on_axis(a);
        let z_at = |psi: f64| {
            HPoint::from_klein([b.tanh() * psi.cos(), b.tanh() * psi.sin()]).unwrap()
        };
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hyp_distance(&y, &z_at(mid)) < c {
                lo = mid
            } else {
                hi = mid
            }
        }
        lo
    }

    #[test]
    fn comparison_angle_matches_constructed_triangle() {
        let eq = comparison_angle(1.0, 1.0, 1.0).unwrap();
        assert!((eq - constructed_angle(1.0, 1.0, 1.0)).abs() < 1e-6);
        assert!((eq - 0.918_797_872).abs() < 1e-8);
        assert!(eq < PI / 3.0);
        for &(a, b, c) in &[(0.3, 0.7, 0.6), (2.0, 1.5, 1.0), (0.05, 0.08, 0.1)] {
            let l = comparison_angle(a, b, c).unwrap();
            assert!((l - constructed_angle(a, b, c)).abs() < 1e-6);
        }
    }
}
