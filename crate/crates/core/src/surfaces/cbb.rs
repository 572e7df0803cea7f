//! Spot check of the CBB(−1) hinge condition: comparison angles must not
//! increase when both sides of a hinge are lengthened.

use super::metric::SurfaceMetric;
use super::SampledSurface;
use crate::hyperbolic::comparison_angle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Angles near 0 or π are only resolved to about √ε by the law of cosines.
const ANGLE_FLOOR: f64 = 1e-6;

/// A length space with enough structure to sample hinges.
pub trait HingeSpace: Sync {
    type Point: Clone + Send + Sync;
    fn num_vertices(&self) -> usize;
    fn vertex(&self, i: usize) -> Self::Point;
    fn distance(&self, p: &Self::Point, q: &Self::Point) -> f64;
    /// Points on one shortest path from vertex `i` to vertex `j`, as close as
    /// the space allows to the requested arclengths from `i`.
    fn path_points(&self, i: usize, j: usize, arclengths: &[f64]) -> Option<Vec<Self::Point>>;
    /// Upper bound on the error of reported distances.
    fn error_budget(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfacePoint {
    Vertex(usize),
    Chart([f64; 2]),
}

impl HingeSpace for SampledSurface {
    type Point = SurfacePoint;

    fn num_vertices(&self) -> usize {
        self.len()
    }

    fn vertex(&self, i: usize) -> SurfacePoint {
        match self.metric.metric() {
            SurfaceMetric::Flat { coords, .. } => SurfacePoint::Chart(coords[i]),
            _ => SurfacePoint::Vertex(i),
        }
    }

    fn distance(&self, p: &SurfacePoint, q: &SurfacePoint) -> f64 {
        match (p, q, self.metric.metric()) {
            (SurfacePoint::Vertex(a), SurfacePoint::Vertex(b), _) => self.dist(*a, *b),
            (SurfacePoint::Chart(a), SurfacePoint::Chart(b), SurfaceMetric::Flat { kind, .. }) => kind.distance(*a, *b),
            _ => f64::NAN,
        }
    }

    fn path_points(&self, i: usize, j: usize, arclengths: &[f64]) -> Option<Vec<SurfacePoint>> {
        match self.metric.metric() {
            SurfaceMetric::Flat { kind, coords } => {
                let (p, q) = (coords[i], kind.nearest_lift(coords[i], coords[j]));
                let d = (q[0] - p[0]).hypot(q[1] - p[1]);
                Some(
                    arclengths
                        .iter()
                        .map(|&a| {
                            let s = (a / d).min(1.0);
                            SurfacePoint::Chart([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])])
                        })
                        .collect(),
                )
            }
            SurfaceMetric::Graph(_) => {
                let path = self.metric.path(i, j)?;
                let row = self.metric.row(i);
                Some(
                    arclengths
                        .iter()
                        .map(|&a| {
                            let v = *path
                                .iter()
                                .min_by(|&&u, &&w| (row[u] - a).abs().total_cmp(&(row[w] - a).abs()))
                                .expect("paths are nonempty");
                            SurfacePoint::Vertex(v)
                        })
                        .collect(),
                )
            }
            SurfaceMetric::Dense { .. } => None,
        }
    }

    fn error_budget(&self) -> f64 {
        self.error_budget
    }
}

/// A flat cone of total angle `angle`, sampled on a polar grid; for
/// `angle > 2π` it has a saddle vertex and is not CBB(κ) for any κ.
#[derive(Debug, Clone)]
pub struct ConeSurface {
    pub angle: f64,
    pub points: Vec<[f64; 2]>,
}

/// Polar grid on the cone of total angle `angle` out to radius `radius`.
pub fn saddle_cone(angle: f64, radius: f64, rings: usize, spokes: usize) -> ConeSurface {
    let mut points = vec![[0.0, 0.0]];
    for k in 1..=rings {
        for s in 0..spokes {
            points.push([radius * k as f64 / rings as f64, angle * s as f64 / spokes as f64]);
        }
    }
    ConeSurface { angle, points }
}

impl ConeSurface {
    fn angular_gap(&self, a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(self.angle);
        d.min(self.angle - d)
    }

    fn signed_gap(&self, from: f64, to: f64) -> f64 {
        let d = (to - from).rem_euclid(self.angle);
        if d <= self.angle - d {
            d
        } else {
            d - self.angle
        }
    }
}

impl HingeSpace for ConeSurface {
    type Point = [f64; 2];

    fn num_vertices(&self) -> usize {
        self.points.len()
    }

    fn vertex(&self, i: usize) -> [f64; 2] {
        self.points[i]
    }

    fn distance(&self, p: &[f64; 2], q: &[f64; 2]) -> f64 {
        let gap = self.angular_gap(p[1], q[1]);
        if gap >= PI {
            p[0] + q[0]
        } else {
            (p[0] * p[0] + q[0] * q[0] - 2.0 * p[0] * q[0] * gap.cos()).max(0.0).sqrt()
        }
    }

    fn path_points(&self, i: usize, j: usize, arclengths: &[f64]) -> Option<Vec<[f64; 2]>> {
        let (p, q) = (self.points[i], self.points[j]);
        let d = self.distance(&p, &q);
        let gap = self.signed_gap(p[1], q[1]);
        Some(
            arclengths
                .iter()
                .map(|&a| {
                    let a = a.min(d);
                    if gap.abs() >= PI {
                        // through the apex
                        if a <= p[0] {
                            [p[0] - a, p[1]]
                        } else {
                            [a - p[0], q[1]]
                        }
                    } else {
                        // develop with p on the positive axis
                        let (qx, qy) = (q[0] * gap.cos(), q[0] * gap.sin());
                        let s = if d > 0.0 { a / d } else { 0.0 };
                        let (x, y) = (p[0] + s * (qx - p[0]), s * qy);
                        [x.hypot(y), (p[1] + y.atan2(x)).rem_euclid(self.angle)]
                    }
                })
                .collect(),
        )
    }

    fn error_budget(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CbbConfig {
    pub trials: usize,
    /// Smallest hinge side considered.
    pub min_scale: f64,
    /// Largest hinge side considered.
    pub max_scale: f64,
    pub seed: u64,
    /// Angle tolerance; defaults to 5·budget/min_scale.
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CbbStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HingeViolation {
    pub vertex: usize,
    pub small: (f64, f64, f64),
    pub large: (f64, f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CbbReport {
    pub hinges: usize,
    pub violations: Vec<HingeViolation>,
    pub tolerance: f64,
    pub status: CbbStatus,
}

impl CbbReport {
    pub fn violation_fraction(&self) -> f64 {
        if self.hinges == 0 {
            0.0
        } else {
            self.violations.len() as f64 / self.hinges as f64
        }
    }
}

fn angle(a: f64, b: f64, c: f64) -> f64 {
    let c = c.clamp((a - b).abs(), a + b);
    comparison_angle(a, b, c).unwrap_or(if c >= a + b { PI } else { 0.0 })
}

/// Samples hinges at two nested scales and reports where the comparison
/// angle grows by more than the tolerance.
pub fn cbb_spotcheck<S: HingeSpace>(space: &S, cfg: &CbbConfig) -> CbbReport {
    let tolerance = cfg
        .tolerance
        .unwrap_or(5.0 * space.error_budget() / cfg.min_scale)
        + ANGLE_FLOOR;
    let n = space.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut hinges = 0;
    let mut violations = Vec::new();
    let lo = 2.0 * cfg.min_scale;
    for _ in 0..cfg.trials {
        let x = rng.random_range(0..n);
        let px = space.vertex(x);
        let pick = |rng: &mut ChaCha8Rng| {
            (0..200).find_map(|_| {
                let y = rng.random_range(0..n);
                let d = space.distance(&px, &space.vertex(y));
                (d >= lo && d <= cfg.max_scale).then_some((y, d))
            })
        };
        let (Some((y, dy)), Some((z, dz))) = (pick(&mut rng), pick(&mut rng)) else {
            continue;
        };
        let (Some(ys), Some(zs)) = (
            space.path_points(x, y, &[cfg.min_scale, dy]),
            space.path_points(x, z, &[cfg.min_scale, dz]),
        ) else {
            continue;
        };
        let side = |p: &S::Point| space.distance(&px, p);
        let (a1, a2, b1, b2) = (side(&ys[0]), side(&ys[1]), side(&zs[0]), side(&zs[1]));
        if !(a1 > 0.0 && b1 > 0.0 && a1 <= a2 && b1 <= b2) {
            continue;
        }
        hinges += 1;
        let small = angle(a1, b1, space.distance(&ys[0], &zs[0]));
        let large = angle(a2, b2, space.distance(&ys[1], &zs[1]));
        if large > small + tolerance {
            violations.push(HingeViolation {
                vertex: x,
                small: (a1, b1, small),
                large: (a2, b2, large),
            });
        }
    }
    let status = if hinges * 2 < cfg.trials {
        CbbStatus::Inconclusive
    } else if violations.is_empty() {
        CbbStatus::Pass
    } else {
        CbbStatus::Fail
    };
    CbbReport {
        hinges,
        violations,
        tolerance,
        status,
    }
}
