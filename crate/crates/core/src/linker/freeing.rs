use serde::Serialize;

use super::{LinkerState, StageFailure};
use crate::family::Label;
use crate::flow::PathSystem;
use crate::tournament::{Path, Tournament, Vertex, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreeAction {
    /// Few enough system vertices in the set; nothing to do.
    Light,
    /// The heaviest path was the special one and now stops at its first hit.
    Truncated,
    /// The special path took over the heaviest path's tail through the domination chain.
    Bypass,
    /// Fewer than two hits on any path, or no free vertex for the bypass.
    Stuck,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeStep {
    /// Position in the plain-set order, starting at 1.
    pub q: usize,
    pub set: usize,
    pub action: FreeAction,
    /// System vertices inside the set before the step.
    pub met: usize,
    pub free_after: usize,
}

fn union_of(paths: &[Vec<Vertex>], n: usize) -> VertexSet {
    VertexSet::from_iter_in(n, paths.iter().flatten().copied())
}

/// Hits of every path on `targets`, in path order; returns the path with the most.
fn heaviest(paths: &[Vec<Vertex>], targets: &VertexSet) -> (usize, Vec<usize>) {
    paths
        .iter()
        .enumerate()
        .map(|(i, p)| (i, (0..p.len()).filter(|&pos| targets.contains(p[pos])).collect::<Vec<_>>()))
        .fold((0, Vec::new()), |best, cur| if cur.1.len() > best.1.len() { cur } else { best })
}

/// Walks the plain sets in order and frees vertices in each, moving the special vertex forward.
///
/// At the first set the heavy path is measured against the special vertex's
/// out-neighbourhood; later sets are treated once the system meets them in at
/// least `free_threshold` vertices. The walk stops before the last plain set
/// when the origin lives there. Afterwards the `q`-th plain set must keep at
/// least `q` vertices off the system.
pub fn free_nonsubdivision_sets(
    tour: &Tournament,
    mut state: LinkerState,
    free_threshold: usize,
) -> Result<LinkerState, StageFailure> {
    let n = tour.order();
    let sys = state.system()?.clone();
    let Some(mut special) = state.special else {
        return Ok(state);
    };
    let order = state.pns_order.clone();
    let t = order.len();
    let steps = match state.case {
        super::AssemblyCase::PlainTail => t - 1,
        super::AssemblyCase::SubdivisionTail => t,
    };
    let before_sub: Vec<usize> = sub_hits(&state, &sys.union());
    let mut paths: Vec<Vec<Vertex>> = sys.paths.iter().map(|p| p.vertices().to_vec()).collect();
    let mut z = 0;
    for q in 0..steps {
        let set = &state.sets[order[q]];
        let used = union_of(&paths, n);
        let met = set.intersection_len(&used);
        let heavy = if q == 0 { met + 2 > set.len() } else { met >= free_threshold };
        let mut action = FreeAction::Light;
        if heavy {
            let targets = if q == 0 { set.intersection(tour.out_set(special)) } else { set.clone() };
            let sp = paths
                .iter()
                .position(|p| p.last() == Some(&special))
                .expect("special path present");
            let (pi, hits) = heaviest(&paths, &targets);
            action = FreeAction::Stuck;
            if hits.len() >= 2 || (pi == sp && !hits.is_empty()) {
                let first = hits[0];
                if pi == sp {
                    paths[pi].truncate(first + 1);
                    special = paths[pi][first];
                    z = q;
                    action = FreeAction::Truncated;
                } else if let Some(replaced) = bypass(&paths, sp, pi, &hits, &order[(z + 1).min(q)..q], &state.sets, n) {
                    special = paths[pi][first];
                    paths = replaced;
                    z = q;
                    action = FreeAction::Bypass;
                }
            }
        }
        let free_after = set.len() - set.intersection_len(&union_of(&paths, n));
        state.freeing_log.push(FreeStep {
            q: q + 1,
            set: order[q],
            action,
            met,
            free_after,
        });
    }

    let system = PathSystem {
        paths: paths.into_iter().map(Path::new).collect(),
        sources: sys.sources.clone(),
        sinks: sys.sinks.clone(),
        special: Some(special),
    };
    system
        .validate(tour)
        .map_err(|e| StageFailure::new("freeing", format!("rewired system invalid: {e}")))?;
    if sub_hits(&state, &system.union()).iter().zip(&before_sub).any(|(a, b)| a > b) {
        return Err(StageFailure::new("freeing", "a subdivision set gained system vertices"));
    }
    state.special = Some(special);
    state.system = Some(system);
    state.refresh_free_ledger();
    for (q, &j) in order.iter().enumerate().take(steps) {
        if state.free_ledger[j].len() < q + 1 {
            return Err(StageFailure {
                stage: "freeing",
                detail: format!(
                    "plain set {j} at position {} keeps {} free vertices",
                    q + 1,
                    state.free_ledger[j].len()
                ),
                witness: state.sets[j].to_vec(),
            });
        }
    }
    Ok(state)
}

fn sub_hits(state: &LinkerState, used: &VertexSet) -> Vec<usize> {
    state
        .sets
        .iter()
        .zip(&state.family.labels)
        .filter(|(_, l)| **l == Label::Subdivision)
        .map(|(s, _)| s.intersection_len(used))
        .collect()
}

/// Special path `sp` continues through one free vertex of each `chain` set into the last hit of
/// path `pi`; path `pi` stops at its first hit and becomes the special path.
fn bypass(
    paths: &[Vec<Vertex>],
    sp: usize,
    pi: usize,
    hits: &[usize],
    chain: &[usize],
    sets: &[VertexSet],
    n: usize,
) -> Option<Vec<Vec<Vertex>>> {
    let (first, last) = (hits[0], *hits.last().unwrap());
    let new_special: Vec<Vertex> = paths[pi][..=first].to_vec();
    let tail = &paths[pi][last..];
    let mut occupied = VertexSet::from_iter_in(n, new_special.iter().chain(tail).chain(&paths[sp]).copied());
    for (i, p) in paths.iter().enumerate() {
        if i != sp && i != pi {
            occupied.union_with(&VertexSet::from_iter_in(n, p.iter().copied()));
        }
    }
    let mut rerouted = paths[sp].clone();
    for &j in chain {
        let f = sets[j].iter().find(|&v| !occupied.contains(v))?;
        occupied.insert(f);
        rerouted.push(f);
    }
    rerouted.extend_from_slice(tail);
    let mut out = paths.to_vec();
    out[sp] = rerouted;
    out[pi] = new_special;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bypass_hands_the_tail_to_the_special_path() {
        let n = 40;
        let paths = vec![vec![10, 11], vec![0, 20, 21, 22, 5]];
        let sets = vec![VertexSet::from_iter_in(n, [11, 30, 31])];
        let out = bypass(&paths, 0, 1, &[1, 3], &[0], &sets, n).unwrap();
        assert_eq!(out[0], vec![10, 11, 30, 22, 5]);
        assert_eq!(out[1], vec![0, 20]);
    }

    #[test]
    fn bypass_needs_a_free_chain_vertex() {
        let n = 40;
        let paths = vec![vec![10, 11], vec![0, 20, 21, 22, 5]];
        let sets = vec![VertexSet::from_iter_in(n, [11, 0])];
        assert!(bypass(&paths, 0, 1, &[1, 3], &[0], &sets, n).is_none());
    }
}
