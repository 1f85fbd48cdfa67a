use serde::Serialize;

use super::{AuxiliaryDigraph, LinkerState, StageFailure};
use crate::error::Error;
use crate::family::GoodFamily;
use crate::flow::{min_cost_disjoint_system, PathSystem};
use crate::tournament::{Tournament, VertexSet};

/// Which origin rule applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OriginRule {
    /// No subdivision sets: origin in the last plain set.
    PlainOnly,
    /// No plain sets: origin in the last subdivision set, no special vertex.
    SubdivisionOnly,
    /// Edge from the last subdivision set to the last plain set.
    SubdivisionToPlain,
    /// Edge from the last plain set to the last subdivision set.
    PlainToSubdivision,
}

/// Where the origin lives, which decides how the final paths are assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssemblyCase {
    /// Origin inside the last plain set.
    PlainTail,
    /// Origin inside the last subdivision set.
    SubdivisionTail,
}

/// Filter applied to the last plain set against the last subdivision set `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscardFilter {
    /// Drop vertices with fewer than `|S|/2` in-neighbours in `S`.
    FewInNeighbours,
    /// Drop vertices with fewer than `|S|/2` out-neighbours in `S`.
    FewOutNeighbours,
}

/// Trims the last plain set, picks the special vertex and the origin.
///
/// The special vertex is the vertex of the first plain set with the most
/// out-neighbours inside it (lowest id on ties). The origin is the lowest
/// `k + 1` ids of the chosen tail set, or `k` without a special vertex.
pub fn discard_tail_and_choose_origin(
    tour: &Tournament,
    family: GoodFamily,
    aux: AuxiliaryDigraph,
    ps_order: Vec<usize>,
    pns_order: Vec<usize>,
) -> Result<LinkerState, StageFailure> {
    let k = family.k();
    let n = tour.order();
    let mut sets = family.sets.clone();
    let (rule, case, discard) = match (ps_order.last(), pns_order.last()) {
        (None, None) => return Err(StageFailure::new("origin", Error::domain("empty family").to_string())),
        (None, Some(_)) => (OriginRule::PlainOnly, AssemblyCase::PlainTail, None),
        (Some(_), None) => (OriginRule::SubdivisionOnly, AssemblyCase::SubdivisionTail, None),
        (Some(&ir), Some(&jt)) => {
            if aux.has_edge(ir, jt) {
                (
                    OriginRule::SubdivisionToPlain,
                    AssemblyCase::PlainTail,
                    Some(DiscardFilter::FewInNeighbours),
                )
            } else {
                (
                    OriginRule::PlainToSubdivision,
                    AssemblyCase::SubdivisionTail,
                    Some(DiscardFilter::FewOutNeighbours),
                )
            }
        }
    };
    if let (Some(filter), Some(&ir), Some(&jt)) = (discard, ps_order.last(), pns_order.last()) {
        let target = &family.sets[ir];
        let keep = VertexSet::from_iter_in(
            n,
            sets[jt].iter().filter(|&u| {
                let hits = match filter {
                    DiscardFilter::FewInNeighbours => tour.in_set(u).intersection_len(target),
                    DiscardFilter::FewOutNeighbours => tour.out_set(u).intersection_len(target),
                };
                2 * hits >= target.len()
            }),
        );
        if 2 * keep.len() < sets[jt].len() {
            return Err(StageFailure::new(
                "origin",
                format!("discard kept {} of {} vertices", keep.len(), sets[jt].len()),
            ));
        }
        sets[jt] = keep;
    }

    let special = pns_order.first().map(|&j1| {
        let s = &sets[j1];
        s.iter()
            .max_by_key(|&u| (tour.out_set(u).intersection_len(s), std::cmp::Reverse(u)))
            .expect("plain sets are non-empty")
    });
    let size = if special.is_some() { k + 1 } else { k };
    let tail = match case {
        AssemblyCase::PlainTail => *pns_order.last().unwrap(),
        AssemblyCase::SubdivisionTail => *ps_order.last().unwrap(),
    };
    let pool: Vec<usize> = sets[tail].iter().filter(|&u| Some(u) != special).collect();
    if pool.len() < size {
        return Err(StageFailure::new(
            "origin",
            format!("set {tail} offers {} origin vertices, {size} needed", pool.len()),
        ));
    }
    let origin = VertexSet::from_iter_in(n, pool[..size].iter().copied());

    let mut state = LinkerState {
        family,
        aux,
        ps_order,
        pns_order,
        rule,
        case,
        discard,
        sets,
        origin,
        special,
        system: None,
        free_ledger: Vec::new(),
        freeing_log: Vec::new(),
    };
    state.refresh_free_ledger();
    Ok(state)
}

/// Minimum-size disjoint paths from the origin to `Y` and the special vertex, avoiding `X`.
pub fn build_menger_system(
    tour: &Tournament,
    state: &LinkerState,
    xs: &VertexSet,
    ys: &VertexSet,
) -> Result<PathSystem, StageFailure> {
    let count = state.origin.len();
    match min_cost_disjoint_system(tour, &state.origin, ys, state.special, xs, count) {
        Ok(sys) => Ok(sys),
        Err(Error::Infeasible { needed, separator }) => Err(StageFailure {
            stage: "menger",
            detail: format!("only a separator of {} vertices blocks {needed} paths", separator.len()),
            witness: separator,
        }),
        Err(e) => Err(StageFailure::new("menger", e.to_string())),
    }
}
