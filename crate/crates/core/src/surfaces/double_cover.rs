//! The double DK of a convex hyperbolic polygon K: two copies glued along
//! their boundary, a sphere with a CBB(−1) metric.

use super::metric::{Graph, MetricOracle, SurfaceMetric};
use super::{MetricKind, Projection, SampledSurface, SamplePoint};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hyperbolic::{hyp_distance, HPoint};
use crate::topology::SimplicialComplex;
use std::collections::HashMap;

const CONNECT_FACTOR: f64 = 3.0;
const BUDGET_FACTOR: f64 = 3.0;

fn check_convex(poly: &[[f64; 2]]) -> Result<()> {
    if poly.len() < 3 {
        return Err(Error::config("a polygon needs at least 3 vertices"));
    }
    let n = poly.len();
    let mut sign = 0.0;
    for i in 0..n {
        let (a, b, c) = (poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if cross.abs() < 1e-12 || (sign != 0.0 && cross.signum() != sign) {
            return Err(Error::config("polygon vertices are not in strictly convex position"));
        }
        sign = cross.signum();
    }
    Ok(())
}

/// Doubles the convex polygon with Klein-chart vertices `polygon`.
pub fn gen_double_cover(polygon: &[[f64; 2]], h: f64, exec: Exec) -> Result<SampledSurface> {
    check_convex(polygon)?;
    if h <= 0.0 {
        return Err(Error::config("resolution must be positive"));
    }
    let verts: Vec<HPoint<2>> = polygon.iter().map(|&k| HPoint::from_klein(k)).collect::<Result<_>>()?;
    let k = polygon.len();
    let centre = {
        let mut c = [0.0; 2];
        for p in polygon {
            c[0] += p[0] / k as f64;
            c[1] += p[1] / k as f64;
        }
        c
    };
    let centre_h = HPoint::from_klein(centre)?;
    let longest = (0..k)
        .map(|i| hyp_distance(&centre_h, &verts[i]).max(hyp_distance(&verts[i], &verts[(i + 1) % k])))
        .fold(0.0, f64::max);
    let n = ((longest / h) - 1e-9).ceil().max(1.0) as usize;

    // Klein-affine subdivision of each fan triangle; Klein segments are geodesics.
    let mut index: HashMap<(u64, u64), usize> = HashMap::new();
    let mut klein: Vec<[f64; 2]> = Vec::new();
    let mut boundary: Vec<bool> = Vec::new();
    let mut local_tris: Vec<[usize; 3]> = Vec::new();
    for f in 0..k {
        let (p, q) = (polygon[f], polygon[(f + 1) % k]);
        let mut id = |a: usize, b: usize| -> usize {
            let (sa, sb) = (a as f64 / n as f64, b as f64 / n as f64);
            let pt = [
                centre[0] + sa * (p[0] - centre[0]) + sb * (q[0] - centre[0]),
                centre[1] + sa * (p[1] - centre[1]) + sb * (q[1] - centre[1]),
            ];
            let key = (pt[0].to_bits(), pt[1].to_bits());
            *index.entry(key).or_insert_with(|| {
                klein.push(pt);
                boundary.push(a + b == n);
                klein.len() - 1
            })
        };
        for a in 0..n {
            for b in 0..n - a {
                local_tris.push([id(a, b), id(a + 1, b), id(a, b + 1)]);
                if a + b + 1 < n {
                    local_tris.push([id(a + 1, b), id(a + 1, b + 1), id(a, b + 1)]);
                }
            }
        }
    }
    let m = klein.len();
    // copy 1 reuses boundary vertices and duplicates the interior
    let mut twin = vec![0usize; m];
    let mut next = m;
    for v in 0..m {
        twin[v] = if boundary[v] {
            v
        } else {
            next += 1;
            next - 1
        };
    }
    let total = next;
    let mut tris = local_tris.clone();
    tris.extend(local_tris.iter().map(|t| [twin[t[0]], twin[t[1]], twin[t[2]]]));
    let tri = SimplicialComplex::from_triangles(tris)?;

    let hp: Vec<HPoint<2>> = klein.iter().map(|&c| HPoint::from_klein(c)).collect::<Result<_>>()?;
    let connect = CONNECT_FACTOR * h;
    let copy0: Vec<Vec<(usize, usize, f64)>> = exec.map_range(m, |v| {
        (v + 1..m)
            .filter_map(|w| {
                let d = hyp_distance(&hp[v], &hp[w]);
                (d <= connect).then_some((v, w, d))
            })
            .collect()
    });
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (v, w, d) in copy0.into_iter().flatten() {
        edges.push((v, w, d));
        edges.push((twin[v], twin[w], d));
    }
    let mut base_of = vec![0usize; total];
    for v in 0..m {
        base_of[v] = v;
        base_of[twin[v]] = v;
    }
    for e in tri.edges() {
        edges.push((e[0], e[1], hyp_distance(&hp[base_of[e[0]]], &hp[base_of[e[1]]])));
    }
    let mut points = vec![SamplePoint::Chart([0.0; 2]); total];
    for v in 0..m {
        points[v] = SamplePoint::Doubled { point: hp[v], copy: 0 };
        if !boundary[v] {
            points[twin[v]] = SamplePoint::Doubled { point: hp[v], copy: 1 };
        }
    }
    Ok(SampledSurface {
        label: format!("double_cover(k={k},h={h})"),
        param: h,
        resolution: h,
        points,
        tri,
        metric: MetricOracle::new(SurfaceMetric::Graph(Graph::from_edges(total, edges))),
        metric_kind: MetricKind::GraphApprox,
        error_budget: BUDGET_FACTOR * h,
        // pairs on opposite copies are joined only through boundary vertices
        exact_radius: 0.0,
        action: None,
        symmetry_reps: (0..total).collect(),
        projection: Projection::Identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(s: f64) -> Vec<[f64; 2]> {
        vec![[s, 0.0], [0.0, s], [-s, 0.0], [0.0, -s]]
    }

    #[test]
    fn double_is_a_sphere() {
        let s = gen_double_cover(&square(0.4), 0.1, Exec::default()).unwrap();
        s.validate(30).unwrap();
        assert_eq!(s.euler_characteristic(), 2);
    }

    #[test]
    fn centre_twins_are_twice_the_inradius_apart() {
        let h = 0.05;
        let s = gen_double_cover(&square(0.4), h, Exec::default()).unwrap();
        let c0 = (0..s.len())
            .find(|&v| matches!(s.points[v], SamplePoint::Doubled { point, copy: 0 } if point.klein() == [0.0, 0.0]))
            .unwrap();
        let c1 = (0..s.len())
            .find(|&v| matches!(s.points[v], SamplePoint::Doubled { point, copy: 1 } if point.klein() == [0.0, 0.0]))
            .unwrap();
        // inradius: distance from the origin to the edge midpoint, a diameter
        let mid = (0.2f64 * 0.2 + 0.2 * 0.2).sqrt();
        let expected = 2.0 * mid.atanh();
        let d = s.dist(c0, c1);
        assert!(d >= expected - 1e-9 && d <= expected + 3.0 * h, "{d} vs {expected}");
    }

    #[test]
    fn boundary_vertices_are_shared() {
        let s = gen_double_cover(&square(0.4), 0.1, Exec::default()).unwrap();
        let at_corner = |v: usize| match s.points[v] {
            SamplePoint::Doubled { point, .. } => {
                let k = point.klein();
                (k[0] - 0.4).abs() < 1e-9 && k[1].abs() < 1e-9
            }
            _ => false,
        };
        let corner = (0..s.len()).find(|&v| at_corner(v)).unwrap();
        let twins = (0..s.len()).filter(|&v| at_corner(v)).count();
        assert_eq!(twins, 1);
        assert_eq!(s.dist(corner, corner), 0.0);
    }

    #[test]
    fn non_convex_polygon_is_rejected() {
        let poly = vec![[0.4, 0.0], [0.0, 0.05], [0.0, 0.4], [-0.4, 0.0], [0.0, -0.4]];
        assert!(matches!(gen_double_cover(&poly, 0.1, Exec::default()), Err(Error::Config(_))));
    }
}
