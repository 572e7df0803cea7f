//! JSON dump of a sampled surface (distances are recomputed, not stored).

use super::{MetricKind, SampledSurface, SamplePoint};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDump {
    pub label: String,
    pub metric_kind: MetricKind,
    pub error_budget: f64,
    /// Chart coordinates, Klein coordinates in H³ or in H² (with copy index).
    pub points: Vec<Vec<f64>>,
    pub triangles: Vec<[usize; 3]>,
    pub group: Option<Vec<Vec<usize>>>,
}

pub fn dump_surface(s: &SampledSurface) -> SurfaceDump {
    let points = s
        .points
        .iter()
        .map(|p| match p {
            SamplePoint::Chart(c) => c.to_vec(),
            SamplePoint::Tube { ambient, .. } => ambient.klein().to_vec(),
            SamplePoint::Doubled { point, copy } => {
                let k = point.klein();
                vec![k[0], k[1], *copy as f64]
            }
        })
        .collect();
    SurfaceDump {
        label: s.label.clone(),
        metric_kind: s.metric_kind,
        error_budget: s.error_budget,
        points,
        triangles: s.tri.triangles().to_vec(),
        group: s.action.as_ref().map(|a| a.elements.clone()),
    }
}
