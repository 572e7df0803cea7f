//! Collapsing surface families as finite metric samples with triangulations.

mod cbb;
mod double_cover;
mod dump;
mod flat;
pub mod metric;
mod quotient;
mod tube;

pub use cbb::{
    cbb_spotcheck, saddle_cone, CbbConfig, CbbReport, CbbStatus, ConeSurface, HingeSpace, HingeViolation, SurfacePoint,
};
pub use double_cover::gen_double_cover;
pub use dump::{dump_surface, SurfaceDump};
pub use flat::{flat_torus_cover, gen_flat_klein, gen_flat_torus, KleinMode};
pub use metric::{FlatKind, Graph, MetricOracle, SurfaceMetric};
pub use quotient::{quotient_by_group, quotient_with_orbits};
pub use tube::{
    capsule_distance, gen_no_collapse, gen_rp2_tube, gen_sphere_tube, sphere_tube_cover, Capsule, CapsulePoint,
};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hyperbolic::{HPoint, FermiFrame, GeodesicSubspace};
use crate::topology::SimplicialComplex;
use serde::{Deserialize, Serialize};

/// Where a sample lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplePoint {
    /// Chart coordinates of a flat quotient.
    Chart([f64; 2]),
    /// A point of a tube surface in H³ (for quotients: a chosen lift).
    Tube { coords: CapsulePoint, ambient: HPoint<3> },
    /// A point of a doubled hyperbolic polygon: position and copy (0 or 1).
    Doubled { point: HPoint<2>, copy: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Exact,
    GraphApprox,
}

/// How a surface maps onto its limit space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    /// Nearest-point projection to the axis segment of length `length`,
    /// reported as arclength from one end; `fold` composes with the quotient of
    /// the segment by its reflection, giving the distance to the midpoint.
    TubeAxis { length: f64, fold: bool },
    /// The `u` coordinate on a circle of length `l`; `fold` composes with
    /// `u ↦ min(u, l − u)`.
    UCoord { l: f64, fold: bool },
    /// Everything maps to a single point.
    Constant,
    /// The surface is its own limit.
    Identity,
}

/// A finite group acting on the vertices; `elements[0]` is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAction {
    pub elements: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn z2(involution: Vec<usize>) -> Self {
        let id = (0..involution.len()).collect();
        GroupAction {
            elements: vec![id, involution],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// A sampled surface: vertices, triangulation and intrinsic distances.
#[derive(Debug, Clone)]
pub struct SampledSurface {
    pub label: String,
    /// The collapse parameter this sample was generated for.
    pub param: f64,
    /// Target mesh edge length.
    pub resolution: f64,
    pub points: Vec<SamplePoint>,
    pub tri: SimplicialComplex,
    pub metric: MetricOracle,
    pub metric_kind: MetricKind,
    /// Upper bound on (reported − true) distance for any pair.
    pub error_budget: f64,
    /// Reported distances are exact for pairs at true distance ≤ this.
    pub exact_radius: f64,
    pub action: Option<GroupAction>,
    /// Vertices whose distance rows cover all pairs up to symmetries that
    /// preserve both the metric and the projection.
    pub symmetry_reps: Vec<usize>,
    pub projection: Projection,
}

impl SampledSurface {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.metric.dist(i, j)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.tri.euler_characteristic()
    }

    /// Ambient H³ position, for tube surfaces.
    pub fn ambient(&self, i: usize) -> Option<HPoint<3>> {
        match self.points[i] {
            SamplePoint::Tube { ambient, .. } => Some(ambient),
            _ => None,
        }
    }

    /// Largest distance between samples.
    pub fn diameter(&self, exec: Exec) -> f64 {
        let reps = &self.symmetry_reps;
        exec.map(reps, |&s| self.metric.compute_row(s).into_iter().fold(0.0, f64::max))
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Checks the structural invariants: closed-surface triangulation,
    /// symmetric zero-diagonal distances and isometric simplicial action.
    /// Distances are checked on rows from `sample_rows` sources.
    pub fn validate(&self, sample_rows: usize) -> Result<()> {
        let n = self.len();
        if self.tri.vertices().len() != n || self.tri.vertices().iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::construction("triangulation vertices must be 0..n"));
        }
        self.tri.check_closed_surface()?;
        let tol = if self.metric.is_exact() { 1e-9 } else { self.error_budget.max(1e-9) };
        let step = (n / sample_rows.max(1)).max(1);
        let rows: Vec<usize> = (0..n).step_by(step).collect();
        for &i in &rows {
            let ri = self.metric.row(i);
            if ri[i].abs() > 1e-12 {
                return Err(Error::data(format!("nonzero diagonal at {i}")));
            }
            for &j in &rows {
                if (ri[j] - self.metric.row(j)[i]).abs() > 1e-9 {
                    return Err(Error::data(format!("asymmetric distance at ({i},{j})")));
                }
                for &k in &rows {
                    if ri[k] > ri[j] + self.metric.row(j)[k] + tol {
                        return Err(Error::data(format!("triangle inequality fails at ({i},{j},{k})")));
                    }
                }
            }
        }
        if let Some(action) = &self.action {
            quotient::check_action(self, action, &rows)?;
        }
        Ok(())
    }

    /// The natural map to the limit parameter for vertex `i`.
    pub fn project(&self, i: usize) -> f64 {
        match self.projection {
            Projection::TubeAxis { length, fold } => {
                let t = match self.points[i] {
                    SamplePoint::Tube { ambient, .. } => tube_frame().from_point(&ambient).t,
                    _ => unreachable!("tube projection on a non-tube sample"),
                };
                let t = t.clamp(-0.5 * length, 0.5 * length);
                if fold {
                    t.abs()
                } else {
                    t + 0.5 * length
                }
            }
            Projection::UCoord { l, fold } => {
                let u = match self.points[i] {
                    SamplePoint::Chart(c) => c[0].rem_euclid(l),
                    _ => unreachable!("chart projection on a non-chart sample"),
                };
                let u = if u >= l { 0.0 } else { u };
                if fold {
                    u.min(l - u)
                } else {
                    u
                }
            }
            Projection::Constant => 0.0,
            Projection::Identity => i as f64,
        }
    }
}

/// Fermi frame about the x-axis of H³, the axis of every tube surface.
pub fn tube_frame() -> FermiFrame<3> {
    FermiFrame::new(&GeodesicSubspace::axis(0).expect("x-axis")).expect("frame about the x-axis")
}

/// Scenario-level description of a surface family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    SphereTube { length: f64, radius: f64, resolution: f64 },
    Rp2Tube { length: f64, radius: f64, resolution: f64 },
    FlatTorus { l: f64, w: f64, resolution: f64 },
    FlatKleinCircle { l: f64, w: f64, resolution: f64 },
    FlatKleinSegment { l: f64, w: f64, resolution: f64 },
    DoubleCover { polygon: Vec<[f64; 2]>, resolution: f64 },
    NoCollapse { length: f64, radius: f64, resolution: f64 },
    /// A small closed surface collapsing to a point; the collapse parameter
    /// is the surface's own resolution.
    PointCollapse { surface: Box<FamilySpec> },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::SphereTube { .. } => "sphere_tube",
            FamilySpec::Rp2Tube { .. } => "rp2_tube",
            FamilySpec::FlatTorus { .. } => "flat_torus",
            FamilySpec::FlatKleinCircle { .. } => "flat_klein_circle",
            FamilySpec::FlatKleinSegment { .. } => "flat_klein_segment",
            FamilySpec::DoubleCover { .. } => "double_cover",
            FamilySpec::NoCollapse { .. } => "no_collapse",
            FamilySpec::PointCollapse { .. } => "point_collapse",
        }
    }

    pub fn resolution(&self) -> f64 {
        match self {
            FamilySpec::SphereTube { resolution, .. }
            | FamilySpec::Rp2Tube { resolution, .. }
            | FamilySpec::FlatTorus { resolution, .. }
            | FamilySpec::FlatKleinCircle { resolution, .. }
            | FamilySpec::FlatKleinSegment { resolution, .. }
            | FamilySpec::DoubleCover { resolution, .. }
            | FamilySpec::NoCollapse { resolution, .. } => *resolution,
            FamilySpec::PointCollapse { surface } => surface.resolution(),
        }
    }

    /// The collapse parameter: tube radius, flat width, or the resolution
    /// for families that do not collapse along a geometric parameter.
    pub fn collapse_param(&self) -> f64 {
        match self {
            FamilySpec::SphereTube { radius, .. } | FamilySpec::Rp2Tube { radius, .. } => *radius,
            FamilySpec::FlatTorus { w, .. }
            | FamilySpec::FlatKleinCircle { w, .. }
            | FamilySpec::FlatKleinSegment { w, .. } => *w,
            FamilySpec::NoCollapse { radius, .. } => *radius,
            FamilySpec::DoubleCover { resolution, .. } => *resolution,
            FamilySpec::PointCollapse { surface } => surface.resolution(),
        }
    }

    /// A copy with the collapse parameter replaced.
    pub fn with_collapse_param(&self, p: f64) -> FamilySpec {
        let mut s = self.clone();
        match &mut s {
            FamilySpec::SphereTube { radius, .. } | FamilySpec::Rp2Tube { radius, .. } => *radius = p,
            FamilySpec::FlatTorus { w, .. }
            | FamilySpec::FlatKleinCircle { w, .. }
            | FamilySpec::FlatKleinSegment { w, .. } => *w = p,
            // the no-collapse control is a constant sequence
            FamilySpec::NoCollapse { .. } => {}
            FamilySpec::DoubleCover { resolution, .. } => *resolution = p,
            FamilySpec::PointCollapse { surface } => **surface = surface.with_resolution(p),
        }
        s
    }

    /// A copy with the mesh resolution replaced.
    pub fn with_resolution(&self, h: f64) -> FamilySpec {
        let mut s = self.clone();
        match &mut s {
            FamilySpec::SphereTube { resolution, .. }
            | FamilySpec::Rp2Tube { resolution, .. }
            | FamilySpec::FlatTorus { resolution, .. }
            | FamilySpec::FlatKleinCircle { resolution, .. }
            | FamilySpec::FlatKleinSegment { resolution, .. }
            | FamilySpec::DoubleCover { resolution, .. }
            | FamilySpec::NoCollapse { resolution, .. } => *resolution = h,
            FamilySpec::PointCollapse { surface } => **surface = surface.with_resolution(h),
        }
        s
    }

    pub fn generate(&self, exec: Exec) -> Result<SampledSurface> {
        match self {
            FamilySpec::SphereTube {
                length,
                radius,
                resolution,
            } => gen_sphere_tube(*length, *radius, *resolution, exec),
            FamilySpec::Rp2Tube {
                length,
                radius,
                resolution,
            } => gen_rp2_tube(*length, *radius, *resolution, exec),
            FamilySpec::FlatTorus { l, w, resolution } => gen_flat_torus(*l, *w, *resolution),
            FamilySpec::FlatKleinCircle { l, w, resolution } => {
                gen_flat_klein(*l, *w, KleinMode::Circle, *resolution)
            }
            FamilySpec::FlatKleinSegment { l, w, resolution } => {
                gen_flat_klein(*l, *w, KleinMode::Segment, *resolution)
            }
            FamilySpec::DoubleCover { polygon, resolution } => gen_double_cover(polygon, *resolution, exec),
            FamilySpec::NoCollapse {
                length,
                radius,
                resolution,
            } => gen_no_collapse(*length, *radius, *resolution, exec),
            FamilySpec::PointCollapse { surface } => {
                if matches!(**surface, FamilySpec::PointCollapse { .. } | FamilySpec::NoCollapse { .. }) {
                    return Err(Error::config("point collapse needs a plain surface family"));
                }
                let mut s = surface.generate(exec)?;
                s.label = format!("point_collapse[{}]", s.label);
                s.param = s.resolution;
                // any symmetry of the surface preserves a constant map
                s.projection = Projection::Constant;
                Ok(s)
            }
        }
    }
}
