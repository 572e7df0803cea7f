//! Flat tori and flat Klein bottles on rectangular grids with exact metrics.

use super::metric::{FlatKind, MetricOracle, SurfaceMetric};
use super::quotient::quotient_by_group;
use super::{GroupAction, MetricKind, Projection, SampledSurface, SamplePoint};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::topology::SimplicialComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KleinMode {
    /// Collapses to a circle of length L.
    Circle,
    /// Collapses to a segment of length L/2.
    Segment,
}

fn grid_counts(l: f64, w: f64, h: f64) -> Result<(usize, usize)> {
    if !(l > 0.0 && w > 0.0 && h > 0.0) {
        return Err(Error::config("flat surface needs positive sides and resolution"));
    }
    if w > l * (1.0 + 1e-12) {
        return Err(Error::config(format!("short side {w} exceeds long side {l}")));
    }
    let n_v = (w / h - 1e-9).ceil() as usize;
    if n_v < 4 {
        return Err(Error::config(format!(
            "resolution {h} gives {n_v} < 4 vertices around the short circle of length {w}"
        )));
    }
    let n_u = ((l / h - 1e-9).ceil() as usize).max(4);
    Ok((n_u, n_v))
}

struct Grid {
    n_u: usize,
    n_v: usize,
    l: f64,
    w: f64,
}

impl Grid {
    fn coords(&self) -> Vec<[f64; 2]> {
        let mut c = Vec::with_capacity(self.n_u * self.n_v);
        for i in 0..self.n_u {
            for j in 0..self.n_v {
                c.push([i as f64 * self.l / self.n_u as f64, j as f64 * self.w / self.n_v as f64]);
            }
        }
        c
    }

    /// Triangles of the grid; `index` resolves possibly out-of-range grid
    /// positions and `main_diagonal` picks the diagonal of each quad.
    fn triangles(
        &self,
        index: impl Fn(usize, usize) -> usize,
        main_diagonal: impl Fn(usize, usize) -> bool,
    ) -> Vec<[usize; 3]> {
        let mut tris = Vec::with_capacity(2 * self.n_u * self.n_v);
        for i in 0..self.n_u {
            for j in 0..self.n_v {
                let (a, b) = (index(i, j), index(i + 1, j));
                let (c, d) = (index(i, j + 1), index(i + 1, j + 1));
                if main_diagonal(i, j) {
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

    fn torus_index(&self, i: usize, j: usize) -> usize {
        (i % self.n_u) * self.n_v + j % self.n_v
    }
}

fn flat_surface(
    label: String,
    w: f64,
    h: f64,
    kind: FlatKind,
    coords: Vec<[f64; 2]>,
    tris: Vec<[usize; 3]>,
    reps: Vec<usize>,
    projection: Projection,
) -> Result<SampledSurface> {
    let tri = SimplicialComplex::from_triangles(tris)?;
    Ok(SampledSurface {
        label,
        param: w,
        resolution: h,
        points: coords.iter().map(|&c| SamplePoint::Chart(c)).collect(),
        tri,
        metric: MetricOracle::new(SurfaceMetric::Flat { kind, coords }),
        metric_kind: MetricKind::Exact,
        error_budget: 0.0,
        exact_radius: f64::INFINITY,
        action: None,
        symmetry_reps: reps,
        projection,
    })
}

/// The flat torus ℝ²/⟨(L,0),(0,w)⟩ collapsing to a circle of length L.
pub fn gen_flat_torus(l: f64, w: f64, h: f64) -> Result<SampledSurface> {
    let (n_u, n_v) = grid_counts(l, w, h)?;
    let g = Grid { n_u, n_v, l, w };
    let tris = g.triangles(|i, j| g.torus_index(i, j), |_, _| true);
    flat_surface(
        format!("flat_torus(L={l},w={w},h={h})"),
        w,
        h,
        FlatKind::Torus { l, w },
        g.coords(),
        tris,
        // grid translations preserve both the metric and the u-projection
        vec![0],
        Projection::UCoord { l, fold: false },
    )
}

/// The torus T(L, w) meshed invariantly under σ(u,v) = (−u, v + w/2), with σ
/// as its ℤ₂ action: the oriented double cover of the segment-mode Klein bottle.
pub fn flat_torus_cover(l: f64, w: f64, h: f64) -> Result<SampledSurface> {
    let (n_u, n_v) = grid_counts(l, w, h)?;
    let n_u = n_u + n_u % 2;
    let n_v = (n_v + n_v % 2).max(6);
    let g = Grid { n_u, n_v, l, w };
    let tris = g.triangles(|i, j| g.torus_index(i, j), |i, _| 2 * i < n_u);
    let sigma: Vec<usize> = (0..n_u * n_v)
        .map(|v| {
            let (i, j) = (v / n_v, v % n_v);
            g.torus_index((n_u - i) % n_u, j + n_v / 2)
        })
        .collect();
    let mut s = flat_surface(
        format!("flat_torus_cover(L={l},w={w},h={h})"),
        w,
        h,
        FlatKind::Torus { l, w },
        g.coords(),
        tris,
        (0..n_u).map(|i| i * n_v).collect(),
        Projection::UCoord { l, fold: false },
    )?;
    s.action = Some(GroupAction::z2(sigma));
    Ok(s)
}

/// Flat Klein bottles of width `w` over a base of length `l`.
pub fn gen_flat_klein(l: f64, w: f64, mode: KleinMode, h: f64) -> Result<SampledSurface> {
    match mode {
        KleinMode::Circle => {
            let (n_u, n_v) = grid_counts(l, w, h)?;
            let g = Grid { n_u, n_v, l, w };
            // crossing u = L flips v
            let index = |i: usize, j: usize| {
                if i == n_u {
                    (n_v - j % n_v) % n_v
                } else {
                    g.torus_index(i, j)
                }
            };
            let tris = g.triangles(index, |_, _| true);
            flat_surface(
                format!("flat_klein_circle(L={l},w={w},h={h})"),
                w,
                h,
                FlatKind::KleinCircle { l, w },
                g.coords(),
                tris,
                (0..n_v).collect(),
                Projection::UCoord { l, fold: false },
            )
        }
        KleinMode::Segment => {
            let cover = flat_torus_cover(l, w, h)?;
            let mut q = quotient_by_group(&cover, Exec::Sequential)?;
            let coords: Vec<[f64; 2]> = q
                .points
                .iter()
                .map(|p| match p {
                    SamplePoint::Chart(c) => *c,
                    _ => unreachable!("flat cover has chart samples"),
                })
                .collect();
            q.metric = MetricOracle::new(SurfaceMetric::Flat {
                kind: FlatKind::KleinSegment { l, w },
                coords: coords.clone(),
            });
            q.label = format!("flat_klein_segment(L={l},w={w},h={h})");
            q.projection = Projection::UCoord { l, fold: true };
            // v-translations commute with σ and fix the projection
            q.symmetry_reps = (0..q.len()).filter(|&v| coords[v][1] == 0.0).collect();
            Ok(q)
        }
    }
}
