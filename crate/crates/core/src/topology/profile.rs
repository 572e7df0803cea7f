//! h-profiles: image ranks of homology maps between nested metric balls.

use super::complex::SimplicialComplex;
use super::field::is_prime;
use super::homology::{homology_dims, image_rank};
use crate::error::{Error, Result};
use crate::gh::{ball_from_row, CouplingMetric};
use crate::surfaces::SampledSurface;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Conclusive,
    /// One of the balls has no vertices.
    InconclusiveEmptyBall,
    /// δ₂ − δ₁ does not exceed the coupling's trust gap.
    InconclusiveGap,
}

impl CellStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellStatus::Conclusive => "conclusive",
            CellStatus::InconclusiveEmptyBall => "inconclusive_empty_ball",
            CellStatus::InconclusiveGap => "inconclusive_gap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HProfile {
    pub h: [usize; 3],
    /// h⁰ − h¹ + h².
    pub f: i64,
    pub field_p: u64,
    pub basepoint: f64,
    pub deltas: (f64, f64),
    pub collapse_param: f64,
    pub status: CellStatus,
}

impl HProfile {
    pub fn is_conclusive(&self) -> bool {
        self.status == CellStatus::Conclusive
    }
}

/// The full subcomplex of the surface mesh on the vertex set `v`.
pub fn induced_subcomplex(s: &SampledSurface, v: &[usize]) -> SimplicialComplex {
    let mut keep = vec![false; s.len()];
    for &i in v {
        keep[i] = true;
    }
    s.tri.induced(|i| keep[i])
}

/// Homology of the whole surface mesh.
pub fn betti_full(s: &SampledSurface, p: u64) -> Result<[usize; 3]> {
    homology_dims(&s.tri, p)
}

/// Profile at limit point `x` for one δ-pair and field.
pub fn h_profile(c: &CouplingMetric<'_>, x: f64, delta1: f64, delta2: f64, p: u64) -> Result<HProfile> {
    let mut out = h_profiles(c, x, &[(delta1, delta2)], &[p])?;
    Ok(out.remove(0))
}

/// Profiles at `x` for every δ-pair and field (pair-major order), sharing one
/// cross-distance row.
pub fn h_profiles(c: &CouplingMetric<'_>, x: f64, deltas: &[(f64, f64)], fields: &[u64]) -> Result<Vec<HProfile>> {
    for &(d1, d2) in deltas {
        if !(d1 > 0.0 && d1 < d2) {
            return Err(Error::usage(format!("need 0 < δ₁ < δ₂, got ({d1}, {d2})")));
        }
    }
    if let Some(&p) = fields.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::usage(format!("{p} is not a prime")));
    }
    let s = c.surface();
    let row = c.cross_row(x);
    let mut out = Vec::with_capacity(deltas.len() * fields.len());
    for &(d1, d2) in deltas {
        let (b1, b2) = (ball_from_row(&row, d1), ball_from_row(&row, d2));
        let status = if b1.is_empty() || b2.is_empty() {
            CellStatus::InconclusiveEmptyBall
        } else if d2 - d1 <= c.trust_gap(d2) {
            CellStatus::InconclusiveGap
        } else {
            CellStatus::Conclusive
        };
        let (k1, k2) = (induced_subcomplex(s, &b1), induced_subcomplex(s, &b2));
        for &p in fields {
            let h = if status == CellStatus::InconclusiveEmptyBall {
                [0; 3]
            } else {
                [
                    image_rank(&k1, &k2, 0, p)?,
                    image_rank(&k1, &k2, 1, p)?,
                    image_rank(&k1, &k2, 2, p)?,
                ]
            };
            out.push(HProfile {
                h,
                f: h[0] as i64 - h[1] as i64 + h[2] as i64,
                field_p: p,
                basepoint: x,
                deltas: (d1, d2),
                collapse_param: s.param,
                status,
            });
        }
    }
    Ok(out)
}
