//! Couplings between a sampled surface and its limit, Hausdorff distances
//! inside them, metric balls and small Gromov–Hausdorff oracles.

mod finite;

pub use finite::{gh_oracle_equivariant, gh_oracle_small, gh_upper_bound, FiniteMetric, ORACLE_MAX_PAIRS};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hyperbolic::hyp_distance;
use crate::surfaces::{quotient_with_orbits, tube_frame, Projection, SampledSurface};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Ball membership excludes points within this of the radius.
pub const BALL_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitKind {
    Segment { length: f64 },
    Circle { length: f64 },
    Point,
    /// A non-collapsed limit: the surface itself, parametrised by vertex index.
    Surface { euler_characteristic: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointTag {
    Endpoint,
    Interior,
}

/// The limit space X, with an optional ℤ₂ action (reflection of the segment,
/// or u ↦ −u on the circle).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitSpace {
    kind: LimitKind,
    reflection: bool,
}

impl LimitSpace {
    pub fn new(kind: LimitKind) -> Result<Self> {
        match kind {
            LimitKind::Segment { length } | LimitKind::Circle { length } if !(length > 0.0) => {
                Err(Error::usage("limit length must be positive"))
            }
            _ => Ok(LimitSpace {
                kind,
                reflection: false,
            }),
        }
    }

    pub fn with_reflection(mut self) -> Self {
        self.reflection = true;
        self
    }

    pub fn kind(&self) -> LimitKind {
        self.kind
    }

    pub fn has_reflection(&self) -> bool {
        self.reflection
    }

    /// Image of `x` under the ℤ₂ action.
    pub fn reflect(&self, x: f64) -> f64 {
        match self.kind {
            LimitKind::Segment { length } => length - x,
            LimitKind::Circle { length } => (-x).rem_euclid(length),
            _ => x,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self.kind {
            LimitKind::Segment { length } => (0.0..=length).contains(&x),
            LimitKind::Circle { length } => (0.0..length).contains(&x),
            LimitKind::Point => x == 0.0,
            LimitKind::Surface { .. } => x >= 0.0 && x.fract() == 0.0,
        }
    }

    /// Distance on a one-dimensional or point limit.
    ///
    /// # Panics
    /// For surface limits, whose metric lives on the surface itself.
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            LimitKind::Segment { .. } => (x - y).abs(),
            LimitKind::Circle { length } => {
                let d = (x - y).rem_euclid(length);
                d.min(length - d)
            }
            LimitKind::Point => 0.0,
            LimitKind::Surface { .. } => panic!("surface limits measure distance on the surface"),
        }
    }

    pub fn tag(&self, x: f64) -> PointTag {
        match self.kind {
            LimitKind::Segment { length } if x <= 1e-12 || x >= length - 1e-12 => PointTag::Endpoint,
            _ => PointTag::Interior,
        }
    }

    /// Uniform samples with gap at most `h` (for segments including both ends).
    pub fn grid(&self, h: f64) -> Vec<f64> {
        match self.kind {
            LimitKind::Segment { length } => {
                let n = ((length / h) - 1e-9).ceil().max(1.0) as usize;
                (0..=n).map(|k| length * k as f64 / n as f64).collect()
            }
            LimitKind::Circle { length } => {
                let n = ((length / h) - 1e-9).ceil().max(1.0) as usize;
                (0..n).map(|k| length * k as f64 / n as f64).collect()
            }
            LimitKind::Point => vec![0.0],
            LimitKind::Surface { .. } => Vec::new(),
        }
    }

    /// The limit a generator's surfaces collapse to under its natural map.
    pub fn natural(s: &SampledSurface) -> LimitSpace {
        let kind = match s.projection {
            Projection::TubeAxis { length, fold: false } => LimitKind::Segment { length },
            Projection::TubeAxis { length, fold: true } => LimitKind::Segment { length: 0.5 * length },
            Projection::UCoord { l, fold: false } => LimitKind::Circle { length: l },
            Projection::UCoord { l, fold: true } => LimitKind::Segment { length: 0.5 * l },
            Projection::Constant => LimitKind::Point,
            Projection::Identity => LimitKind::Surface {
                euler_characteristic: s.euler_characteristic(),
            },
        };
        let limit = LimitSpace::new(kind).expect("generators produce positive lengths");
        if s.action.is_some() && matches!(s.projection, Projection::TubeAxis { fold: false, .. } | Projection::UCoord { fold: false, .. }) {
            limit.with_reflection()
        } else {
            limit
        }
    }
}

/// A map from surface vertices to limit parameters with its measured quality.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostIsometry {
    pub map: Vec<f64>,
    /// sup |d_X(f p, f q) − d(p, q)|.
    pub distortion: f64,
    /// sup over a limit grid of the distance to the image.
    pub codensity: f64,
    /// sup (d_X(f p, f q) − d(p, q))⁺: how far f is from 1-Lipschitz.
    pub expansion: f64,
}

/// Measures distortion and expansion of `map` from the surface's symmetry
/// representatives, and codensity on a grid of gap `s.resolution`.
pub fn measure_map(s: &SampledSurface, limit: &LimitSpace, map: Vec<f64>, exec: Exec) -> AlmostIsometry {
    let per_rep: Vec<(f64, f64)> = exec.map(&s.symmetry_reps, |&p| {
        let row = s.metric.compute_row(p);
        row.iter().enumerate().fold((0.0f64, 0.0f64), |(dis, exp), (q, &d)| {
            let dx = limit.distance(map[p], map[q]);
            (dis.max((dx - d).abs()), exp.max(dx - d))
        })
    });
    let distortion = per_rep.iter().map(|r| r.0).fold(0.0, f64::max);
    let expansion = per_rep.iter().map(|r| r.1).fold(0.0, f64::max);
    let codensity = limit
        .grid(s.resolution)
        .iter()
        .map(|&x| map.iter().map(|&y| limit.distance(x, y)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    AlmostIsometry {
        map,
        distortion,
        codensity,
        expansion,
    }
}

/// The generator's natural map to its limit: nearest-point projection to the
/// axis for tubes, the u-coordinate for flat surfaces, constant for point
/// collapse.
pub fn natural_projection(s: &SampledSurface, exec: Exec) -> Result<(LimitSpace, AlmostIsometry)> {
    if s.projection == Projection::Identity {
        return Err(Error::usage("the identity projection has no one-dimensional limit; use identity_coupling"));
    }
    let limit = LimitSpace::natural(s);
    let map = exec.map_range(s.len(), |i| s.project(i));
    let f = measure_map(s, &limit, map, exec);
    Ok((limit, f))
}

#[derive(Debug, Clone)]
enum CouplingKind {
    /// d(p, x) = ε + min_p' [d(p, p') + d_X(f p', x)].
    FromMap(AlmostIsometry),
    /// The surface is the limit: d(p, x) = ε + d(p, x).
    Identity,
    /// Ambient H³ distance from a tube vertex to the axis point at x.
    Ambient { length: f64 },
    /// Orbit minimum of a coupling on a double cover.
    Quotient {
        cover: Box<CouplingMetric<'static>>,
        orbit_of: Vec<usize>,
    },
}

/// A metric on X_i ⊔ X extending both metrics, given by its cross distances.
#[derive(Debug, Clone)]
pub struct CouplingMetric<'a> {
    surface: SurfaceRef<'a>,
    limit: LimitSpace,
    kind: CouplingKind,
    epsilon: f64,
    exec: Exec,
}

#[derive(Debug, Clone)]
enum SurfaceRef<'a> {
    Borrowed(&'a SampledSurface),
    Owned(Box<SampledSurface>),
}

impl std::ops::Deref for SurfaceRef<'_> {
    type Target = SampledSurface;
    fn deref(&self) -> &SampledSurface {
        match self {
            SurfaceRef::Borrowed(s) => s,
            SurfaceRef::Owned(s) => s,
        }
    }
}

/// The standard coupling induced by an almost-isometry `f` with slack `ε`.
pub fn coupling_from_map<'a>(
    s: &'a SampledSurface,
    limit: LimitSpace,
    f: AlmostIsometry,
    epsilon: f64,
    exec: Exec,
) -> Result<CouplingMetric<'a>> {
    if f.map.len() != s.len() {
        return Err(Error::usage("map length differs from the number of vertices"));
    }
    if epsilon < f.distortion / 2.0 + 1e-12 {
        return Err(Error::usage(format!(
            "coupling slack {epsilon} is below distortion/2 = {}; the triangle inequality may fail",
            f.distortion / 2.0
        )));
    }
    Ok(CouplingMetric {
        surface: SurfaceRef::Borrowed(s),
        limit,
        kind: CouplingKind::FromMap(f),
        epsilon,
        exec,
    })
}

/// The default slack: distortion/2 plus one mesh length.
pub fn default_epsilon(s: &SampledSurface, f: &AlmostIsometry) -> f64 {
    f.distortion / 2.0 + s.resolution
}

/// Natural projection plus [`coupling_from_map`] with the default slack.
pub fn natural_coupling(s: &SampledSurface, exec: Exec) -> Result<CouplingMetric<'_>> {
    if s.projection == Projection::Identity {
        return identity_coupling(s, s.resolution, exec);
    }
    let (limit, f) = natural_projection(s, exec)?;
    let eps = default_epsilon(s, &f);
    coupling_from_map(s, limit, f, eps, exec)
}

/// Coupling of a surface with itself: d(p, x) = ε + d(p, x).
pub fn identity_coupling(s: &SampledSurface, epsilon: f64, exec: Exec) -> Result<CouplingMetric<'_>> {
    if !(epsilon > 0.0) {
        return Err(Error::usage("identity coupling needs a positive slack"));
    }
    Ok(CouplingMetric {
        surface: SurfaceRef::Borrowed(s),
        limit: LimitSpace::natural(s),
        kind: CouplingKind::Identity,
        epsilon,
        exec,
    })
}

/// The semi-metric coupling of a tube surface with its axis segment through
/// ambient H³ distance.
pub fn ambient_coupling(s: &SampledSurface, exec: Exec) -> Result<CouplingMetric<'_>> {
    let Projection::TubeAxis { length, fold: false } = s.projection else {
        return Err(Error::usage("ambient coupling needs an unfolded tube surface"));
    };
    Ok(CouplingMetric {
        surface: SurfaceRef::Borrowed(s),
        limit: LimitSpace::new(LimitKind::Segment { length })?,
        kind: CouplingKind::Ambient { length },
        epsilon: 0.0,
        exec,
    })
}

impl<'a> CouplingMetric<'a> {
    pub fn surface(&self) -> &SampledSurface {
        &self.surface
    }

    pub fn limit(&self) -> &LimitSpace {
        &self.limit
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn map(&self) -> Option<&AlmostIsometry> {
        match &self.kind {
            CouplingKind::FromMap(f) => Some(f),
            _ => None,
        }
    }

    /// Distance between two limit points (vertex indices for surface limits).
    pub fn limit_distance(&self, x: f64, y: f64) -> f64 {
        match self.limit.kind() {
            LimitKind::Surface { .. } => self.surface.dist(x as usize, y as usize),
            _ => self.limit.distance(x, y),
        }
    }

    /// Cross distances d(p, x) for every surface vertex p.
    pub fn cross_row(&self, x: f64) -> Vec<f64> {
        let s = &*self.surface;
        match &self.kind {
            CouplingKind::FromMap(f) => {
                let init: Vec<f64> = f.map.iter().map(|&y| self.epsilon + self.limit.distance(y, x)).collect();
                s.metric.multi_source(&init, self.exec)
            }
            CouplingKind::Identity => s.metric.row(x as usize).iter().map(|d| d + self.epsilon).collect(),
            CouplingKind::Ambient { length } => {
                let axis = tube_frame().on_axis(x - 0.5 * length);
                (0..s.len())
                    .map(|p| hyp_distance(&s.ambient(p).expect("tube vertices carry ambient points"), &axis))
                    .collect()
            }
            CouplingKind::Quotient { cover, orbit_of } => {
                let mut out = vec![f64::INFINITY; s.len()];
                for lift in self.lifts(x) {
                    for (p, d) in cover.cross_row(lift).into_iter().enumerate() {
                        let q = orbit_of[p];
                        out[q] = out[q].min(d);
                    }
                }
                out
            }
        }
    }

    pub fn cross(&self, p: usize, x: f64) -> f64 {
        self.cross_row(x)[p]
    }

    fn lifts(&self, x: f64) -> Vec<f64> {
        let CouplingKind::Quotient { cover, .. } = &self.kind else {
            return vec![x];
        };
        match cover.limit.kind() {
            LimitKind::Segment { length } => vec![0.5 * length - x, 0.5 * length + x],
            LimitKind::Circle { length } => vec![x, (length - x).rem_euclid(length)],
            _ => vec![x],
        }
    }

    /// Extra δ-gap needed before ball topology is trusted: twice the
    /// distance error that can affect balls of radius δ₂, plus the failure of
    /// the map to be 1-Lipschitz.
    pub fn trust_gap(&self, delta2: f64) -> f64 {
        let s = &*self.surface;
        let u = if delta2 - self.epsilon <= s.exact_radius {
            0.0
        } else {
            s.error_budget
        };
        let expansion = match &self.kind {
            CouplingKind::FromMap(f) => f.expansion,
            CouplingKind::Quotient { cover, .. } => cover.map().map_or(0.0, |f| f.expansion),
            _ => 0.0,
        };
        2.0 * u + expansion
    }

    /// Hausdorff distance between the surface and the limit inside the coupling.
    pub fn hausdorff(&self) -> f64 {
        let s = &*self.surface;
        match &self.kind {
            CouplingKind::Identity => self.epsilon,
            CouplingKind::FromMap(f) => {
                // inf over grid x of d(p, x) = ε + min_p' [d(p, p') + gap(f p')]
                let grid = self.limit.grid(s.resolution);
                let gap = |y: f64| grid.iter().map(|&x| self.limit.distance(x, y)).fold(f64::INFINITY, f64::min);
                let init: Vec<f64> = f.map.iter().map(|&y| gap(y)).collect();
                let to_limit = s.metric.multi_source(&init, self.exec).into_iter().fold(0.0, f64::max);
                self.epsilon + to_limit.max(f.codensity)
            }
            _ => {
                let grid = self.limit.grid(s.resolution);
                let rows = self.exec.map(&grid, |&x| self.cross_row(x));
                let from_limit = rows
                    .iter()
                    .map(|r| r.iter().copied().fold(f64::INFINITY, f64::min))
                    .fold(0.0, f64::max);
                let from_surface = (0..s.len())
                    .map(|p| rows.iter().map(|r| r[p]).fold(f64::INFINITY, f64::min))
                    .fold(0.0, f64::max);
                from_limit.max(from_surface)
            }
        }
    }

    /// The metric ball B_x(δ) = { p : d(p, x) < δ }, as sorted vertex indices.
    pub fn ball(&self, x: f64, delta: f64) -> Result<Vec<usize>> {
        if !(delta > 0.0) {
            return Err(Error::usage("ball radius must be positive"));
        }
        Ok(ball_from_row(&self.cross_row(x), delta))
    }

    /// Samples triangle inequalities mixing both blocks and returns the worst
    /// slack (negative means a violation) and the number of triples.
    pub fn audit_triangles(&self, triples: usize, seed: u64) -> (f64, usize) {
        let s = &*self.surface;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<f64> = match self.limit.kind() {
            LimitKind::Surface { .. } => (0..12).map(|_| rng.random_range(0..s.len()) as f64).collect(),
            _ => {
                let grid = self.limit.grid(s.resolution);
                (0..12).map(|_| grid[rng.random_range(0..grid.len())]).collect()
            }
        };
        let ps: Vec<usize> = (0..24).map(|_| rng.random_range(0..s.len())).collect();
        let cross: Vec<Vec<f64>> = self.exec.map(&xs, |&x| self.cross_row(x));
        let dist: Vec<std::sync::Arc<Vec<f64>>> = ps.iter().map(|&p| s.metric.row(p)).collect();
        let mut worst = f64::INFINITY;
        for _ in 0..triples {
            let (i, j) = (rng.random_range(0..ps.len()), rng.random_range(0..ps.len()));
            let (a, b) = (rng.random_range(0..xs.len()), rng.random_range(0..xs.len()));
            let (p, q) = (ps[i], ps[j]);
            let (x, y) = (xs[a], xs[b]);
            let dpq = dist[i][q];
            let dxy = self.limit_distance(x, y);
            let (px, qx, py) = (cross[a][p], cross[a][q], cross[b][p]);
            let slack = match rng.random_range(0..4) {
                0 => dpq + qx - px,
                1 => py + dxy - px,
                2 => px + py - dxy,
                _ => px + qx - dpq,
            };
            worst = worst.min(slack);
        }
        (worst, triples)
    }
}

/// The coupling of a ℤ₂-quotient with the folded limit, obtained from the
/// natural equivariant coupling on the double cover by taking orbit minima
/// over both lifts of the surface vertex and of the limit point.
pub fn quotient_coupling(cover: SampledSurface, exec: Exec) -> Result<CouplingMetric<'static>> {
    let (mut q, orbit_of) = quotient_with_orbits(&cover, exec)?;
    q.projection = match cover.projection {
        Projection::TubeAxis { length, fold: false } => Projection::TubeAxis { length, fold: true },
        Projection::UCoord { l, fold: false } => Projection::UCoord { l, fold: true },
        _ => return Err(Error::usage("quotient coupling needs an unfolded tube or flat cover")),
    };
    let (limit, f) = natural_projection(&cover, exec)?;
    if !limit.has_reflection() {
        return Err(Error::usage("quotient coupling needs a limit with a reflection"));
    }
    let epsilon = default_epsilon(&cover, &f);
    let cover = CouplingMetric {
        surface: SurfaceRef::Owned(Box::new(cover)),
        limit,
        kind: CouplingKind::FromMap(f),
        epsilon,
        exec,
    };
    Ok(CouplingMetric {
        limit: LimitSpace::natural(&q),
        surface: SurfaceRef::Owned(Box::new(q)),
        kind: CouplingKind::Quotient {
            cover: Box::new(cover),
            orbit_of,
        },
        epsilon,
        exec,
    })
}

pub fn ball_from_row(row: &[f64], delta: f64) -> Vec<usize> {
    (0..row.len()).filter(|&p| row[p] < delta - BALL_TIE_TOL).collect()
}

/// The projected ball A_x(δ) = { p : d_X(f p, x) < δ }.
pub fn projected_ball(limit: &LimitSpace, f: &AlmostIsometry, x: f64, delta: f64) -> Vec<usize> {
    (0..f.map.len())
        .filter(|&p| limit.distance(f.map[p], x) < delta - BALL_TIE_TOL)
        .collect()
}

/// Checks A(δ₁/2) ⊆ B(δ₁) ⊆ A((δ₁+δ₂)/2) ⊆ B(δ₂) ⊆ A(2δ₂) vertex by vertex;
/// returns the index of the first failing inclusion.
pub fn sandwich_chain(
    c: &CouplingMetric<'_>,
    f: &AlmostIsometry,
    x: f64,
    delta1: f64,
    delta2: f64,
) -> Result<std::result::Result<(), usize>> {
    let limit = c.limit();
    let sets = [
        projected_ball(limit, f, x, delta1 / 2.0),
        c.ball(x, delta1)?,
        projected_ball(limit, f, x, (delta1 + delta2) / 2.0),
        c.ball(x, delta2)?,
        projected_ball(limit, f, x, 2.0 * delta2),
    ];
    for k in 0..4 {
        let outer: std::collections::HashSet<usize> = sets[k + 1].iter().copied().collect();
        if !sets[k].iter().all(|p| outer.contains(p)) {
            return Ok(Err(k));
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{gen_flat_torus, FamilySpec};

    #[test]
    fn limit_space_basics() {
        let seg = LimitSpace::new(LimitKind::Segment { length: 1.0 }).unwrap();
        assert_eq!(seg.tag(0.0), PointTag::Endpoint);
        assert_eq!(seg.tag(0.5), PointTag::Interior);
        assert_eq!(seg.grid(0.3).len(), 5);
        let c = LimitSpace::new(LimitKind::Circle { length: 1.0 }).unwrap();
        assert!((c.distance(0.1, 0.9) - 0.2).abs() < 1e-15);
        assert!((c.reflect(0.25) - 0.75).abs() < 1e-15);
        assert!(LimitSpace::new(LimitKind::Circle { length: 0.0 }).is_err());
    }

    #[test]
    fn torus_projection_quality() {
        let s = gen_flat_torus(1.0, 0.1, 0.025).unwrap();
        let (limit, f) = natural_projection(&s, Exec::default()).unwrap();
        assert_eq!(limit.kind(), LimitKind::Circle { length: 1.0 });
        assert!(f.distortion <= 0.1 + 1e-12);
        assert!(f.expansion <= 1e-12);
        assert!(f.codensity <= 0.025 + 1e-12);
    }

    #[test]
    fn point_collapse_distortion_is_the_diameter() {
        let spec = FamilySpec::PointCollapse {
            surface: Box::new(FamilySpec::FlatTorus {
                l: 0.04,
                w: 0.02,
                resolution: 0.005,
            }),
        };
        let s = spec.generate(Exec::default()).unwrap();
        let (_, f) = natural_projection(&s, Exec::default()).unwrap();
        assert!((f.distortion - s.diameter(Exec::default())).abs() < 1e-15);
    }

    #[test]
    fn slack_below_half_distortion_is_refused() {
        let s = gen_flat_torus(1.0, 0.1, 0.025).unwrap();
        let (limit, f) = natural_projection(&s, Exec::default()).unwrap();
        let eps = f.distortion / 2.0 - 1e-3;
        assert!(matches!(coupling_from_map(&s, limit, f, eps, Exec::default()), Err(Error::Usage(_))));
    }

    #[test]
    fn torus_ball_is_a_band() {
        let s = gen_flat_torus(1.0, 0.01, 0.0025).unwrap();
        let (limit, f) = natural_projection(&s, Exec::default()).unwrap();
        let c = coupling_from_map(&s, limit, f.clone(), 0.06, Exec::default()).unwrap();
        let x = 0.5;
        let ball = c.ball(x, 0.1).unwrap();
        // f is 1-Lipschitz, so the ball is the band |u − x| < δ − ε
        let expected: Vec<usize> = (0..s.len()).filter(|&p| (f.map[p] - x).abs() < 0.04 - 1e-12).collect();
        assert_eq!(ball, expected);
        assert!(c.ball(x, 0.06).unwrap().is_empty());
        assert_eq!(c.ball(x, 2.0).unwrap().len(), s.len());
        let a = projected_ball(&limit, &f, x, 0.1);
        assert!(a.iter().all(|&p| (f.map[p] - x).abs() < 0.1));
        assert_eq!(a.len(), 80 * 4 - 4);
    }

    #[test]
    fn coupling_audit_and_hausdorff_on_the_torus() {
        let s = gen_flat_torus(1.0, 0.05, 0.0125).unwrap();
        let c = natural_coupling(&s, Exec::default()).unwrap();
        let (worst, n) = c.audit_triangles(20_000, 3);
        assert_eq!(n, 20_000);
        assert!(worst >= -1e-9, "{worst}");
        let h = c.hausdorff();
        assert!(h >= c.epsilon() - 1e-15 && h <= c.epsilon() + c.map().unwrap().codensity + 1e-12);
    }
}
