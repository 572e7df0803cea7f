//! generation → coupling → profiles → assembly → Euler integral.

use collapse_core::gh::{natural_coupling, LimitKind, LimitSpace, PointTag};
use collapse_core::topology::{assemble_constructible, betti_full, euler_integral, h_profiles, ConstructibleFunction, HProfile};
use collapse_core::{Error, Exec};
use std::collections::BTreeMap;

use crate::scenario::Scenario;
use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    /// The scenario's verified δ-pairs.
    Verified,
    /// The paper-safe pairs, reported only.
    PaperSafe,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Overrides the scenario's fields.
    pub fields: Option<Vec<u64>>,
    pub exec: Exec,
    /// Skip the paper-safe grid.
    pub relaxed_only: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            fields: None,
            exec: Exec::default(),
            relaxed_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    /// Index into the schedule.
    pub i: usize,
    pub i_param: f64,
    pub tag: PointTag,
    pub grid: Grid,
    pub profile: HProfile,
}

/// One assembled constructible function per (i, δ-pair, p).
#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    pub i_param: f64,
    pub deltas: (f64, f64),
    pub field_p: u64,
    pub result: Result<(ConstructibleFunction, i64), String>,
}

/// Facts about the mesh at one schedule entry.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshInfo {
    pub i_param: f64,
    pub vertices: usize,
    pub euler_characteristic: i64,
    pub epsilon: f64,
    pub hausdorff: f64,
    pub limit: LimitSpace,
    /// betti_full per field.
    pub betti: BTreeMap<u64, [usize; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub cells: Vec<Cell>,
    pub assemblies: Vec<Assembly>,
    pub meshes: Vec<MeshInfo>,
    pub chi_expected: i64,
    /// Expectation mismatches, one line each.
    pub mismatches: Vec<String>,
}

impl Report {
    pub fn verified_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.grid == Grid::Verified)
    }

    /// The common ∫F dχ over successful assemblies, if they agree.
    pub fn chi_integral(&self) -> Option<i64> {
        let mut vals = self.assemblies.iter().filter_map(|a| a.result.as_ref().ok().map(|r| r.1));
        let first = vals.next()?;
        vals.all(|v| v == first).then_some(first)
    }

    /// Every assembly succeeded with ∫F dχ = χ, and there was at least one.
    pub fn chi_matches(&self) -> bool {
        !self.assemblies.is_empty()
            && self
                .assemblies
                .iter()
                .all(|a| matches!(a.result, Ok((_, v)) if v == self.chi_expected))
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.chi_matches()
    }
}

fn core_error(e: Error) -> RunError {
    match e {
        Error::Usage(m) | Error::Config(m) => RunError::Config(m),
        other => RunError::Runtime(other.to_string()),
    }
}

pub fn run_scenario(sc: &Scenario, opts: &RunOptions) -> Result<Report, RunError> {
    sc.validate()?;
    let mut fields = opts.fields.clone().unwrap_or_else(|| sc.fields.clone());
    fields.sort_unstable();
    fields.dedup();
    if let Some(p) = fields.iter().find(|&&p| !collapse_core::topology::is_prime(p)) {
        return Err(RunError::Config(format!("field size {p} is not a prime")));
    }
    let mut cells = Vec::new();
    let mut meshes = Vec::new();
    let mut basepoints = sc.basepoints.clone();
    basepoints.sort_by(f64::total_cmp);
    basepoints.dedup();

    for (i, &param) in sc.schedule.iter().enumerate() {
        let surface = sc.family_at(param).generate(opts.exec).map_err(core_error)?;
        let coupling = natural_coupling(&surface, opts.exec).map_err(core_error)?;
        let limit = *coupling.limit();
        for &x in &basepoints {
            let ok = match limit.kind() {
                LimitKind::Surface { .. } => x >= 0.0 && x.fract() == 0.0 && (x as usize) < surface.len(),
                _ => limit.contains(x),
            };
            if !ok {
                return Err(RunError::Config(format!(
                    "basepoint {x} is not in the limit {:?} at parameter {param}",
                    limit.kind()
                )));
            }
        }
        let mut grids = vec![(Grid::Verified, &sc.delta_pairs)];
        if !opts.relaxed_only && !sc.paper_safe_delta_pairs.is_empty() {
            grids.push((Grid::PaperSafe, &sc.paper_safe_delta_pairs));
        }
        for (grid, pairs) in grids {
            let per_point = opts.exec.map(&basepoints, |&x| h_profiles(&coupling, x, pairs, &fields));
            for (k, profiles) in per_point.into_iter().enumerate() {
                let tag = limit.tag(basepoints[k]);
                for profile in profiles.map_err(core_error)? {
                    cells.push(Cell {
                        i,
                        i_param: param,
                        tag,
                        grid,
                        profile,
                    });
                }
            }
        }
        let mut betti = BTreeMap::new();
        for &p in &fields {
            betti.insert(p, betti_full(&surface, p).map_err(core_error)?);
        }
        meshes.push(MeshInfo {
            i_param: param,
            vertices: surface.len(),
            euler_characteristic: surface.euler_characteristic(),
            epsilon: coupling.epsilon(),
            hausdorff: coupling.hausdorff(),
            limit,
            betti,
        });
    }
    // deterministic order: i, basepoint, grid, δ-pair (as listed), p
    cells.sort_by(|a, b| {
        (a.i, a.profile.basepoint, a.grid == Grid::PaperSafe)
            .partial_cmp(&(b.i, b.profile.basepoint, b.grid == Grid::PaperSafe))
            .expect("finite keys")
    });

    let chi_expected = sc
        .expect
        .as_ref()
        .and_then(|e| e.chi)
        .unwrap_or(meshes[0].euler_characteristic);

    let mut assemblies = Vec::new();
    for (i, &param) in sc.schedule.iter().enumerate() {
        for &deltas in &sc.delta_pairs {
            for &p in &fields {
                let group: Vec<HProfile> = cells
                    .iter()
                    .filter(|c| c.i == i && c.grid == Grid::Verified && c.profile.deltas == deltas && c.profile.field_p == p)
                    .map(|c| c.profile.clone())
                    .collect();
                if !group.iter().any(|g| g.is_conclusive()) {
                    continue;
                }
                let result = assemble_constructible(&group, &meshes[i].limit)
                    .map(|f| (f, euler_integral(&f)))
                    .map_err(|e| e.to_string());
                assemblies.push(Assembly {
                    i_param: param,
                    deltas,
                    field_p: p,
                    result,
                });
            }
        }
    }

    let mut report = Report {
        scenario: sc.name.clone(),
        cells,
        assemblies,
        meshes,
        chi_expected,
        mismatches: Vec::new(),
    };
    report.mismatches = check_expectations(sc, &report);
    Ok(report)
}

fn check_expectations(sc: &Scenario, r: &Report) -> Vec<String> {
    let mut out = Vec::new();
    let conclusive: Vec<&Cell> = r.verified_cells().filter(|c| c.profile.is_conclusive()).collect();
    if conclusive.is_empty() {
        out.push("no conclusive cells on the verified grid".to_string());
    }
    let describe = |c: &Cell| {
        let p = &c.profile;
        format!(
            "i_param={} x={} deltas=({}, {}) p={}",
            c.i_param, p.basepoint, p.deltas.0, p.deltas.1, p.field_p
        )
    };
    if let Some(e) = &sc.expect {
        for c in &conclusive {
            let p = &c.profile;
            for rule in e.h.iter().filter(|rule| rule.applies(c.tag, p.basepoint, p.field_p)) {
                if p.h != rule.h {
                    out.push(format!("{}: h = {:?}, expected {:?}", describe(c), p.h, rule.h));
                }
            }
            if e.h_equals_betti {
                let betti = r.meshes[c.i].betti[&p.field_p];
                if p.h != betti {
                    out.push(format!("{}: h = {:?}, expected betti {:?}", describe(c), p.h, betti));
                }
            }
        }
    }
    // conclusive paper-safe cells must agree with verified ones at the same point
    for c in r.cells.iter().filter(|c| c.grid == Grid::PaperSafe && c.profile.is_conclusive()) {
        let p = &c.profile;
        if let Some(v) = conclusive
            .iter()
            .find(|v| v.i == c.i && v.profile.basepoint == p.basepoint && v.profile.field_p == p.field_p)
        {
            if v.profile.h != p.h {
                out.push(format!("{} (paper-safe): h = {:?}, verified grid gives {:?}", describe(c), p.h, v.profile.h));
            }
        }
    }
    for a in &r.assemblies {
        let at = format!("i_param={} deltas=({}, {}) p={}", a.i_param, a.deltas.0, a.deltas.1, a.field_p);
        match &a.result {
            Ok((_, v)) if *v != r.chi_expected => {
                out.push(format!("{at}: ∫F dχ = {v}, expected χ = {}", r.chi_expected))
            }
            Err(e) => out.push(format!("{at}: {e}")),
            _ => {}
        }
    }
    if r.assemblies.is_empty() {
        out.push("no δ-pair and field had conclusive cells to assemble".to_string());
    }
    out
}
