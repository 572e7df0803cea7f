//! Scenario runner: reads scenario files, runs generation → coupling →
//! profiles → assembly → Euler integral, and writes CSV/JSON reports.

pub mod report;
pub mod runner;
pub mod scenario;

pub use runner::{run_scenario, Report, RunOptions};
pub use scenario::Scenario;

/// Failures classified by exit code: configuration problems exit 2.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

/// Scenario files shipped with the binary, in suite order.
pub const BUNDLED: [(&str, &str); 10] = [
    ("sphere_to_segment", include_str!("../scenarios/sphere_to_segment.json")),
    ("torus_to_circle", include_str!("../scenarios/torus_to_circle.json")),
    ("rp2_to_segment", include_str!("../scenarios/rp2_to_segment.json")),
    ("klein_circle", include_str!("../scenarios/klein_circle.json")),
    ("klein_segment", include_str!("../scenarios/klein_segment.json")),
    ("no_collapse", include_str!("../scenarios/no_collapse.json")),
    ("point_sphere", include_str!("../scenarios/point_sphere.json")),
    ("point_torus", include_str!("../scenarios/point_torus.json")),
    ("point_rp2", include_str!("../scenarios/point_rp2.json")),
    ("point_klein", include_str!("../scenarios/point_klein.json")),
];

pub fn bundled() -> Vec<Scenario> {
    BUNDLED
        .iter()
        .map(|(name, text)| Scenario::from_json(text).unwrap_or_else(|e| panic!("bundled scenario {name}: {e}")))
        .collect()
}
