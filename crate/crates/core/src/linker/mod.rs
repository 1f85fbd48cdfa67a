//! Constructive linking through a good family.
//!
//! The pipeline carves one block per source out of its out-neighbourhood,
//! builds a good family on the blocks, orders the family along Hamiltonian
//! paths of an auxiliary digraph, routes a minimum disjoint path system from an
//! origin set to the sinks, frees room in the plain sets and finally walks
//! every source down the chain to its origin vertex. Every stage either
//! succeeds with audited output or reports a [`StageFailure`]; with the exact
//! fallback enabled the verdict then comes from the exhaustive search.

mod assemble;
mod aux;
mod freeing;
mod origin;
mod reroute;

use std::fmt;

use serde::Serialize;
use serde_json::json;

pub use assemble::{assemble_final_paths, link_within_subdivision};
pub use aux::{build_aux_digraph, hamiltonian_path_semicomplete, AuxiliaryDigraph};
pub use freeing::{free_nonsubdivision_sets, FreeAction, FreeStep};
pub use origin::{build_menger_system, discard_tail_and_choose_origin, AssemblyCase, DiscardFilter, OriginRule};
pub use reroute::{check_subdivision_bounds, reroute_improve, BoundsReport, Reroute, RerouteKind, SubdivisionBound};

use crate::error::{Error, Result};
use crate::family::{build_good_family, FamilyConfig, GoodFamily, Label, WSize};
use crate::flow::PathSystem;
use crate::oracle::{find_linkage_exact, validate_path_system, LinkageInstance, LinkageStatus, LinkageVerdict};
use crate::tournament::{Path, Tournament, Vertex, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fallback {
    Exact,
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkerConfig {
    pub family: FamilyConfig,
    /// A plain set met by at least this many system vertices gets freed.
    pub free_threshold: usize,
    /// Allowed branch vertices of one subdivision on the system.
    pub bound_subdiv: u128,
    /// Allowed blocked connectors at one free branch vertex.
    pub bound_paths: u128,
    pub fallback: Fallback,
    pub budget: u64,
}

impl LinkerConfig {
    /// Desk-scale family sizes with the remaining constants at their usual values.
    pub fn desk(k: usize) -> Self {
        let k3 = (k as u128).pow(3);
        LinkerConfig {
            family: FamilyConfig::desk(k),
            free_threshold: 5 * k * k,
            bound_subdiv: 10_000 * k3,
            bound_paths: 10u128.pow(13) * k3 * k as u128,
            fallback: Fallback::Exact,
            budget: crate::oracle::DEFAULT_BUDGET,
        }
    }
}

/// A stage that could not meet its precondition, with the vertices that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageFailure {
    pub stage: &'static str,
    pub detail: String,
    pub witness: Vec<Vertex>,
}

impl StageFailure {
    pub(crate) fn new(stage: &'static str, detail: impl Into<String>) -> Self {
        StageFailure {
            stage,
            detail: detail.into(),
            witness: Vec::new(),
        }
    }
}

impl fmt::Display for StageFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.detail)
    }
}

impl std::error::Error for StageFailure {}

/// Everything the later stages need, filled in as the pipeline advances.
#[derive(Debug, Clone, Serialize)]
pub struct LinkerState {
    pub family: GoodFamily,
    pub aux: AuxiliaryDigraph,
    pub ps_order: Vec<usize>,
    pub pns_order: Vec<usize>,
    pub rule: OriginRule,
    pub case: AssemblyCase,
    pub discard: Option<DiscardFilter>,
    /// Family sets after the discard step.
    pub sets: Vec<VertexSet>,
    pub origin: VertexSet,
    pub special: Option<Vertex>,
    pub system: Option<PathSystem>,
    /// Per index, the trimmed set minus the system's vertices.
    pub free_ledger: Vec<VertexSet>,
    pub freeing_log: Vec<FreeStep>,
}

impl LinkerState {
    pub(crate) fn refresh_free_ledger(&mut self) {
        let used = self.system.as_ref().map(PathSystem::union);
        self.free_ledger = self
            .sets
            .iter()
            .map(|s| match &used {
                Some(u) => s.difference(u),
                None => s.clone(),
            })
            .collect();
    }

    pub(crate) fn system(&self) -> std::result::Result<&PathSystem, StageFailure> {
        self.system
            .as_ref()
            .ok_or_else(|| StageFailure::new("state", "no path system yet"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Constructive,
    Exact,
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageRecord {
    pub stage: &'static str,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkTrace {
    pub stages: Vec<StageRecord>,
    pub failure: Option<StageFailure>,
    pub method: Method,
}

impl LinkTrace {
    fn record(&mut self, stage: &'static str, detail: serde_json::Value) {
        self.stages.push(StageRecord { stage, detail });
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkReport {
    pub verdict: LinkageVerdict,
    pub trace: LinkTrace,
}

/// Pairwise disjoint blocks `W_i ⊆ N⁺(x_i) ∖ (X ∪ Y)` of `size` vertices, filled round-robin by lowest id.
pub fn carve_blocks(tour: &Tournament, inst: &LinkageInstance, size: u128) -> std::result::Result<Vec<VertexSet>, StageFailure> {
    let n = tour.order();
    let k = inst.k();
    let terminals = inst.endpoints(n);
    if size > n as u128 {
        return Err(StageFailure::new("carve", format!("blocks of {size} vertices exceed the {n} available")));
    }
    let size = size as usize;
    let mut taken = terminals.clone();
    let mut blocks = vec![VertexSet::new(n); k];
    let mut cursors: Vec<_> = inst.pairs().iter().map(|&(x, _)| tour.out_set(x).iter()).collect();
    for _ in 0..size {
        for i in 0..k {
            let next = cursors[i].by_ref().find(|&v| !taken.contains(v));
            match next {
                Some(v) => {
                    taken.insert(v);
                    blocks[i].insert(v);
                }
                None => {
                    let x = inst.pairs()[i].0;
                    return Err(StageFailure {
                        stage: "carve",
                        detail: format!(
                            "source {x} has only {} spare out-neighbours, {size} needed",
                            blocks[i].len()
                        ),
                        witness: vec![x],
                    });
                }
            }
        }
    }
    Ok(blocks)
}

fn block_size(cfg: &LinkerConfig, k: usize) -> u128 {
    match cfg.family.w_size {
        WSize::Fixed(s) => s as u128,
        WSize::Asymptotic => FamilyConfig::asymptotic_w_size(k, cfg.family.ell),
    }
}

fn constructive(
    tour: &Tournament,
    inst: &LinkageInstance,
    cfg: &LinkerConfig,
    trace: &mut LinkTrace,
) -> std::result::Result<Vec<Path>, StageFailure> {
    let n = tour.order();
    let k = inst.k();
    let xs = VertexSet::from_iter_in(n, inst.pairs().iter().map(|p| p.0));
    let ys = VertexSet::from_iter_in(n, inst.pairs().iter().map(|p| p.1));

    let blocks = carve_blocks(tour, inst, block_size(cfg, k))?;
    trace.record("carve", json!({ "block_size": blocks[0].len(), "blocks": k }));

    let family = build_good_family(tour, &blocks, &cfg.family).map_err(|e| StageFailure::new("good-family", e.to_string()))?;
    trace.record(
        "good-family",
        json!({
            "labels": family.labels,
            "sizes": family.sets.iter().map(VertexSet::len).collect::<Vec<_>>(),
            "stats": family.stats,
        }),
    );

    let aux = build_aux_digraph(tour, &family).map_err(|e| StageFailure::new("aux", e.to_string()))?;
    let ps_order = aux
        .hamiltonian_path(&aux.indices_labelled(Label::Subdivision))
        .map_err(|e| StageFailure::new("aux", e.to_string()))?;
    let pns_order = aux
        .hamiltonian_path(&aux.indices_labelled(Label::NonSubdivision))
        .map_err(|e| StageFailure::new("aux", e.to_string()))?;
    trace.record(
        "aux",
        json!({ "edges": aux.edges, "majority_resolved": aux.majority_resolved, "ps": ps_order, "pns": pns_order }),
    );

    let mut state = discard_tail_and_choose_origin(tour, family, aux, ps_order, pns_order)?;
    trace.record(
        "origin",
        json!({
            "rule": state.rule,
            "case": state.case,
            "discard": state.discard,
            "origin": state.origin,
            "special": state.special,
        }),
    );

    let mut system = build_menger_system(tour, &state, &xs, &ys)?;
    let initial_total = system.total_vertices();
    let mut reroutes = 0;
    'improve: loop {
        for sub in state.family.subdivisions.iter().flatten() {
            if let Some(r) = reroute_improve(tour, &system, sub) {
                system = r.system;
                reroutes += 1;
                continue 'improve;
            }
        }
        break;
    }
    trace.record(
        "menger",
        json!({ "total_vertices": system.total_vertices(), "initial_total": initial_total, "reroutes": reroutes }),
    );
    state.system = Some(system);
    state.refresh_free_ledger();

    let bounds = check_subdivision_bounds(tour, &state, cfg.bound_subdiv, cfg.bound_paths);
    trace.record("bounds", serde_json::to_value(&bounds).unwrap_or_default());
    if !bounds.within {
        return Err(StageFailure::new("bounds", "a subdivision exceeds its intersection bounds"));
    }

    let state = free_nonsubdivision_sets(tour, state, cfg.free_threshold)?;
    trace.record(
        "freeing",
        json!({
            "steps": state.freeing_log,
            "special": state.special,
            "free": state.free_ledger.iter().map(VertexSet::len).collect::<Vec<_>>(),
        }),
    );

    let paths = assemble_final_paths(tour, &state, inst)?;
    let check = validate_path_system(tour, inst, &paths);
    if !check.valid {
        return Err(StageFailure::new(
            "validation",
            check.violation.unwrap_or_else(|| "assembled paths rejected".into()),
        ));
    }
    trace.record(
        "assembly",
        json!({ "lengths": paths.iter().map(Path::len).collect::<Vec<_>>() }),
    );
    Ok(paths)
}

/// Links `x[i]` to `y[i]` for every `i`, constructively when the pipeline's preconditions hold.
///
/// A `Linked` verdict always carries paths that passed validation.
pub fn link(tour: &Tournament, x: &[Vertex], y: &[Vertex], cfg: &LinkerConfig) -> Result<LinkReport> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::domain("sources and sinks must be non-empty lists of equal length"));
    }
    let inst = LinkageInstance::new(tour.order(), x.iter().copied().zip(y.iter().copied()).collect())?;
    let mut trace = LinkTrace {
        stages: Vec::new(),
        failure: None,
        method: Method::Constructive,
    };
    match constructive(tour, &inst, cfg, &mut trace) {
        Ok(paths) => Ok(LinkReport {
            verdict: LinkageVerdict {
                status: LinkageStatus::Linked,
                paths: Some(paths),
                nodes_explored: 0,
            },
            trace,
        }),
        Err(failure) => {
            trace.failure = Some(failure);
            let verdict = match cfg.fallback {
                Fallback::Exact => {
                    trace.method = Method::Exact;
                    find_linkage_exact(tour, &inst, cfg.budget)?
                }
                Fallback::None => {
                    trace.method = Method::None;
                    LinkageVerdict {
                        status: LinkageStatus::Unknown,
                        paths: None,
                        nodes_explored: 0,
                    }
                }
            };
            Ok(LinkReport { verdict, trace })
        }
    }
}
