//! Boundaries of tubes around a geodesic segment in H³ ("capsules") and
//! their central-symmetry quotients.
//!
//! The segment has length ℓ, is centred at the origin and lies on the
//! x-axis. Its r-neighbourhood has boundary made of a flat cylinder with
//! metric cosh²r dt² + sinh²r dθ² and two hemispheres of the geodesic sphere
//! of radius r, which are round of radius R = sinh r. Both pieces meet along
//! seam circles of length 2πR.

use super::metric::{Graph, MetricOracle, SurfaceMetric};
use super::quotient::quotient_by_group;
use super::{tube_frame, GroupAction, MetricKind, Projection, SampledSurface, SamplePoint};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hyperbolic::{hyp_distance, HPoint};
use crate::topology::SimplicialComplex;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Edges join every pair of vertices whose intrinsic distance is at most
/// this many mesh lengths; graph distances are exact below that radius.
const CONNECT_FACTOR: f64 = 5.0;
/// Declared bound on graph-minus-intrinsic distance, in mesh lengths.
const BUDGET_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CapsulePoint {
    /// Cylinder point at axis parameter `t ∈ [−ℓ/2, ℓ/2]`.
    Cyl { t: f64, theta: f64 },
    /// Cap point at `end = ±1`, polar angle `phi ∈ [0, π/2]` from the tip.
    Cap { end: i8, phi: f64, theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capsule {
    pub length: f64,
    pub radius: f64,
}

fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    y.min(TAU - y)
}

fn unit(phi: f64, theta: f64) -> [f64; 3] {
    [phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos()]
}

fn sphere_angle(a: [f64; 3], b: [f64; 3]) -> f64 {
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let s = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    s.atan2(c)
}

/// Minimum of a 2π-periodic function: coarse sampling then golden section.
fn minimize_periodic(f: impl Fn(f64) -> f64) -> f64 {
    const SAMPLES: usize = 64;
    let step = TAU / SAMPLES as f64;
    let (mut best_x, mut best) = (0.0, f64::INFINITY);
    for k in 0..SAMPLES {
        let x = k as f64 * step;
        let v = f(x);
        if v < best {
            best = v;
            best_x = x;
        }
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best_x - step, best_x + step);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-11 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    best.min(fc).min(fd)
}

impl Capsule {
    pub fn new(length: f64, radius: f64) -> Result<Self> {
        if !(length > 0.0 && radius > 0.0) {
            return Err(Error::config("capsule needs positive length and radius"));
        }
        Ok(Capsule { length, radius })
    }

    /// Radius of the round caps and of the cylinder's cross-section circle.
    pub fn cap_radius(&self) -> f64 {
        self.radius.sinh()
    }

    pub fn ambient(&self, p: CapsulePoint) -> HPoint<3> {
        let frame = tube_frame();
        self.ambient_in(&frame, p)
    }

    fn ambient_in(&self, frame: &crate::hyperbolic::FermiFrame<3>, p: CapsulePoint) -> HPoint<3> {
        match p {
            CapsulePoint::Cyl { t, theta } => frame.to_point(crate::hyperbolic::FermiCoords {
                t,
                r: self.radius,
                theta,
            }),
            CapsulePoint::Cap { end, phi, theta } => {
                let e = end as f64;
                frame.sphere_point(0.5 * e * self.length, self.radius, phi, theta, e)
            }
        }
    }

    /// Arclength along a meridian from the tip of the `−1` cap; this is the
    /// intrinsic distance to that tip and hence 1-Lipschitz.
    pub fn meridian(&self, p: CapsulePoint) -> f64 {
        let r = self.cap_radius();
        match p {
            CapsulePoint::Cap { end: -1, phi, .. } => r * phi,
            CapsulePoint::Cyl { t, .. } => r * FRAC_PI_2 + (t + 0.5 * self.length) * self.radius.cosh(),
            CapsulePoint::Cap { phi, .. } => r * PI + self.length * self.radius.cosh() - r * phi,
        }
    }

    fn cyl(&self, t1: f64, th1: f64, t2: f64, th2: f64) -> f64 {
        ((t1 - t2) * self.radius.cosh()).hypot(self.cap_radius() * wrap_angle(th1 - th2))
    }

    fn seam_to_cap(&self, psi: f64, phi: f64, theta: f64) -> f64 {
        self.cap_radius() * sphere_angle(unit(FRAC_PI_2, psi), unit(phi, theta))
    }

    /// Exact intrinsic distance on the capsule.
    pub fn distance(&self, p: CapsulePoint, q: CapsulePoint) -> f64 {
        use CapsulePoint::*;
        let half = 0.5 * self.length;
        match (p, q) {
            // Any detour through a cap can be replaced by a seam arc of the
            // same length, and the flat strip is convex.
            (Cyl { t: t1, theta: a }, Cyl { t: t2, theta: b }) => self.cyl(t1, a, t2, b),
            (Cap { end: e1, phi: f1, theta: a }, Cap { end: e2, phi: f2, theta: b }) if e1 == e2 => {
                self.cap_radius() * sphere_angle(unit(f1, a), unit(f2, b))
            }
            (Cap { end, phi, theta }, Cyl { t, theta: b }) | (Cyl { t, theta: b }, Cap { end, phi, theta }) => {
                let ts = end as f64 * half;
                minimize_periodic(|psi| self.seam_to_cap(psi, phi, theta) + self.cyl(ts, psi, t, b))
            }
            (Cap { end: e1, phi: f1, theta: a }, Cap { phi: f2, theta: b, .. }) => {
                let (t1, t2) = (e1 as f64 * half, -(e1 as f64) * half);
                minimize_periodic(|psi1| {
                    self.seam_to_cap(psi1, f1, a)
                        + minimize_periodic(|psi2| self.cyl(t1, psi1, t2, psi2) + self.seam_to_cap(psi2, f2, b))
                })
            }
        }
    }

    /// Distance between the two cap tips, along any meridian.
    pub fn tip_distance(&self) -> f64 {
        self.length * self.radius.cosh() + PI * self.cap_radius()
    }
}

/// Exact intrinsic distance on the capsule of length `length` and radius `radius`.
pub fn capsule_distance(length: f64, radius: f64, p: CapsulePoint, q: CapsulePoint) -> Result<f64> {
    Ok(Capsule::new(length, radius)?.distance(p, q))
}

/// Ring layout of the capsule mesh: ring 0 and ring `g_max` are the tips,
/// rings `m` and `m + n_t` the seams.
struct Rings {
    m: usize,
    n_t: usize,
    n_theta: usize,
    g_max: usize,
}

impl Rings {
    fn vertex(&self, g: usize, j: usize) -> usize {
        if g == 0 {
            0
        } else if g == self.g_max {
            1 + (self.g_max - 1) * self.n_theta
        } else {
            1 + (g - 1) * self.n_theta + j % self.n_theta
        }
    }

    fn len(&self) -> usize {
        2 + (self.g_max - 1) * self.n_theta
    }

    fn ring_size(&self, g: usize) -> usize {
        if g == 0 || g == self.g_max {
            1
        } else {
            self.n_theta
        }
    }

    fn point(&self, cap: &Capsule, g: usize, j: usize) -> CapsulePoint {
        let theta = TAU * j as f64 / self.n_theta as f64;
        let dphi = FRAC_PI_2 / self.m as f64;
        let half = 0.5 * cap.length;
        if g < self.m {
            CapsulePoint::Cap {
                end: -1,
                phi: g as f64 * dphi,
                theta: if g == 0 { 0.0 } else { theta },
            }
        } else if g <= self.m + self.n_t {
            let k = g - self.m;
            // measured from the nearer end so that mirrored rings are exact negatives
            let t = if 2 * k <= self.n_t {
                -half + k as f64 * cap.length / self.n_t as f64
            } else {
                half - (self.n_t - k) as f64 * cap.length / self.n_t as f64
            };
            CapsulePoint::Cyl { t, theta }
        } else {
            let k = self.g_max - g;
            CapsulePoint::Cap {
                end: 1,
                phi: k as f64 * dphi,
                theta: if g == self.g_max { 0.0 } else { theta },
            }
        }
    }

    /// Triangles; quads below the middle ring use one diagonal and those
    /// above it the other, so the mesh is invariant under (g, j) ↦ (G − g, j + n/2).
    fn triangles(&self) -> Vec<[usize; 3]> {
        let n = self.n_theta;
        let mut tris = Vec::new();
        for j in 0..n {
            tris.push([0, self.vertex(1, j), self.vertex(1, j + 1)]);
            let g = self.g_max - 1;
            tris.push([self.vertex(g, j), self.vertex(g, j + 1), self.vertex(self.g_max, 0)]);
        }
        for g in 1..self.g_max - 1 {
            for j in 0..n {
                let (a, b) = (self.vertex(g, j), self.vertex(g, j + 1));
                let (c, d) = (self.vertex(g + 1, j), self.vertex(g + 1, j + 1));
                if 2 * (g + 1) <= self.g_max {
                    tris.push([a, b, d]);
                    tris.push([a, c, d]);
                } else {
                    tris.push([a, b, c]);
                    tris.push([b, c, d]);
                }
            }
        }
        tris
    }

    fn central_symmetry(&self) -> Vec<usize> {
        let mut perm = vec![0; self.len()];
        for g in 0..=self.g_max {
            for j in 0..self.ring_size(g) {
                perm[self.vertex(g, j)] = self.vertex(self.g_max - g, j + self.n_theta / 2);
            }
        }
        perm
    }
}

fn ceil_even(x: f64) -> usize {
    let n = (x - 1e-9).ceil().max(1.0) as usize;
    n + n % 2
}

fn check_tube_params(length: f64, radius: f64, h: f64) -> Result<()> {
    if !(length > 0.0 && radius > 0.0 && h > 0.0) {
        return Err(Error::config("tube needs positive length, radius and resolution"));
    }
    if radius > length / 10.0 * (1.0 + 1e-12) {
        return Err(Error::config(format!("tube radius {radius} exceeds length/10")));
    }
    if h > radius / 3.0 * (1.0 + 1e-12) {
        return Err(Error::config(format!(
            "resolution {h} too coarse for tube radius {radius} (need h ≤ r/3)"
        )));
    }
    Ok(())
}

/// The capsule mesh with its central symmetry as a ℤ₂ action.
pub fn sphere_tube_cover(length: f64, radius: f64, h: f64, exec: Exec) -> Result<SampledSurface> {
    check_tube_params(length, radius, h)?;
    let cap = Capsule::new(length, radius)?;
    let big_r = cap.cap_radius();
    let rings = {
        let n_theta = ceil_even(TAU * big_r / h).max(6);
        let n_t = ceil_even(length * radius.cosh() / h);
        let m = ((FRAC_PI_2 * big_r / h) - 1e-9).ceil().max(1.0) as usize;
        Rings {
            m,
            n_t,
            n_theta,
            g_max: 2 * m + n_t,
        }
    };
    let frame = tube_frame();
    let mut coords = Vec::with_capacity(rings.len());
    let mut ring_of = Vec::with_capacity(rings.len());
    for g in 0..=rings.g_max {
        for j in 0..rings.ring_size(g) {
            debug_assert_eq!(coords.len(), rings.vertex(g, j));
            coords.push(rings.point(&cap, g, j));
            ring_of.push(g);
        }
    }
    let ambient: Vec<HPoint<3>> = exec.map(&coords, |&c| cap.ambient_in(&frame, c));
    let tris = rings.triangles();
    let tri = SimplicialComplex::from_triangles(tris)?;

    // Seam vertices are shared by construction; make sure the cap and
    // cylinder parametrisations agree there.
    for (g, end) in [(rings.m, -1i8), (rings.m + rings.n_t, 1)] {
        for j in 0..rings.n_theta {
            let theta = TAU * j as f64 / rings.n_theta as f64;
            let from_cap = cap.ambient_in(
                &frame,
                CapsulePoint::Cap {
                    end,
                    phi: FRAC_PI_2,
                    theta,
                },
            );
            if hyp_distance(&from_cap, &ambient[rings.vertex(g, j)]) > 1e-9 {
                return Err(Error::construction(format!("cap/cylinder seam mismatch at ring {g}")));
            }
        }
    }

    let connect = CONNECT_FACTOR * h;
    let merid: Vec<f64> = (0..=rings.g_max).map(|g| cap.meridian(rings.point(&cap, g, 0))).collect();
    let edges: Vec<Vec<(usize, usize, f64)>> = exec.map_range(coords.len(), |v| {
        let g = ring_of[v];
        let mut out = Vec::new();
        for g2 in g..=rings.g_max {
            if merid[g2] - merid[g] > connect {
                break;
            }
            for j2 in 0..rings.ring_size(g2) {
                let w = rings.vertex(g2, j2);
                if w <= v || hyp_distance(&ambient[v], &ambient[w]) > connect {
                    continue;
                }
                let d = cap.distance(coords[v], coords[w]);
                if d <= connect {
                    out.push((v, w, d));
                }
            }
        }
        out
    });
    let mut edge_list: Vec<(usize, usize, f64)> = edges.into_iter().flatten().collect();
    for e in tri.edges() {
        edge_list.push((e[0], e[1], cap.distance(coords[e[0]], coords[e[1]])));
    }
    let graph = Graph::from_edges(coords.len(), edge_list);

    let points = coords
        .iter()
        .zip(&ambient)
        .map(|(&c, &a)| SamplePoint::Tube { coords: c, ambient: a })
        .collect();
    Ok(SampledSurface {
        label: format!("sphere_tube(l={length},r={radius},h={h})"),
        param: radius,
        resolution: h,
        points,
        tri,
        metric: MetricOracle::new(SurfaceMetric::Graph(graph)),
        metric_kind: MetricKind::GraphApprox,
        error_budget: BUDGET_FACTOR * h,
        exact_radius: connect,
        action: Some(GroupAction::z2(rings.central_symmetry())),
        symmetry_reps: (0..=rings.g_max).map(|g| rings.vertex(g, 0)).collect(),
        projection: Projection::TubeAxis { length, fold: false },
    })
}

/// Boundary of the r-neighbourhood of a geodesic segment of length ℓ in H³:
/// a CBB(−1) sphere collapsing to a segment as r → 0.
pub fn gen_sphere_tube(length: f64, radius: f64, h: f64, exec: Exec) -> Result<SampledSurface> {
    let mut s = sphere_tube_cover(length, radius, h, exec)?;
    s.action = None;
    Ok(s)
}

/// The capsule modulo the point reflection through its centre: a projective
/// plane collapsing to a segment of length ℓ/2.
pub fn gen_rp2_tube(length: f64, radius: f64, h: f64, exec: Exec) -> Result<SampledSurface> {
    let cover = sphere_tube_cover(length, radius, h, exec)?;
    let mut q = quotient_by_group(&cover, exec)?;
    q.label = format!("rp2_tube(l={length},r={radius},h={h})");
    q.projection = Projection::TubeAxis { length, fold: true };
    Ok(q)
}

/// A fixed fat capsule used as a non-collapsing control; it is its own limit.
pub fn gen_no_collapse(length: f64, radius: f64, h: f64, exec: Exec) -> Result<SampledSurface> {
    let mut s = gen_sphere_tube(length, radius, h, exec)?;
    s.label = format!("no_collapse(l={length},r={radius},h={h})");
    s.projection = Projection::Identity;
    Ok(s)
}
