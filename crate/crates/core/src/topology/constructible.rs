//! Constructible functions on the limit space and their Euler integrals.

use super::profile::HProfile;
use crate::error::{Error, Result};
use crate::gh::{LimitKind, LimitSpace, PointTag};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructibleFunction {
    /// Constant `interior` on the open segment, with its own endpoint values.
    Segment { interior: i64, endpoints: (i64, i64) },
    Circle { value: i64 },
    Point { value: i64 },
    /// Constant on a closed surface with the given Euler characteristic.
    Surface { value: i64, euler_characteristic: i64 },
}

/// ∫ F dχ: the sum over strata of value × Euler characteristic.
pub fn euler_integral(f: &ConstructibleFunction) -> i64 {
    match *f {
        ConstructibleFunction::Segment {
            interior,
            endpoints: (a, b),
        } => interior + (a - interior) + (b - interior),
        ConstructibleFunction::Circle { .. } => 0,
        ConstructibleFunction::Point { value } => value,
        ConstructibleFunction::Surface {
            value,
            euler_characteristic,
        } => value * euler_characteristic,
    }
}

fn common_value(profiles: &[&HProfile], what: &str) -> Result<i64> {
    let first = profiles
        .first()
        .ok_or_else(|| Error::Assembly(format!("no conclusive {what} profiles")))?;
    let bad: Vec<String> = profiles
        .iter()
        .filter(|p| p.f != first.f)
        .map(|p| format!("x={} (F={})", p.basepoint, p.f))
        .collect();
    if bad.is_empty() {
        Ok(first.f)
    } else {
        Err(Error::Assembly(format!(
            "{what} values disagree: x={} has F={}, but {}",
            first.basepoint,
            first.f,
            bad.join(", ")
        )))
    }
}

/// Assembles conclusive profiles (one δ-pair, field and collapse parameter)
/// into a constructible function on `limit`. Inconclusive profiles are ignored.
pub fn assemble_constructible(profiles: &[HProfile], limit: &LimitSpace) -> Result<ConstructibleFunction> {
    let conclusive: Vec<&HProfile> = profiles.iter().filter(|p| p.is_conclusive()).collect();
    if let Some(first) = conclusive.first() {
        if conclusive
            .iter()
            .any(|p| p.deltas != first.deltas || p.field_p != first.field_p || p.collapse_param != first.collapse_param)
        {
            return Err(Error::Assembly(
                "profiles mix δ-pairs, fields or collapse parameters".into(),
            ));
        }
    }
    let by_tag = |tag: PointTag| -> Vec<&HProfile> {
        conclusive
            .iter()
            .copied()
            .filter(|p| limit.tag(p.basepoint) == tag)
            .collect()
    };
    match limit.kind() {
        LimitKind::Segment { length } => {
            let interior = common_value(&by_tag(PointTag::Interior), "interior")?;
            let end = |x: f64| -> Result<i64> {
                let at: Vec<&HProfile> = conclusive
                    .iter()
                    .copied()
                    .filter(|p| (p.basepoint - x).abs() <= 1e-12)
                    .collect();
                common_value(&at, &format!("endpoint {x}"))
            };
            Ok(ConstructibleFunction::Segment {
                interior,
                endpoints: (end(0.0)?, end(length)?),
            })
        }
        LimitKind::Circle { .. } => Ok(ConstructibleFunction::Circle {
            value: common_value(&conclusive, "circle")?,
        }),
        LimitKind::Point => Ok(ConstructibleFunction::Point {
            value: common_value(&conclusive, "point")?,
        }),
        LimitKind::Surface {
            euler_characteristic,
        } => Ok(ConstructibleFunction::Surface {
            value: common_value(&conclusive, "surface")?,
            euler_characteristic,
        }),
    }
}
