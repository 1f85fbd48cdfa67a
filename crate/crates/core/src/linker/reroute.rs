use std::collections::BTreeMap;

use serde::Serialize;

use super::LinkerState;
use crate::chains::{multi_order_monotone_subset, Direction};
use crate::family::{Label, Subdivision};
use crate::flow::PathSystem;
use crate::tournament::{Path, Tournament, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RerouteKind {
    /// A free connector replaces a longer stretch of one path.
    Shortcut,
    /// Two paths trade tails through connectors that each meet the other path once.
    TwoPath,
    /// Three paths rewired through a monotone chain of nested connectors; the
    /// case number follows the chain's direction in the two orderings.
    ThreePath { case: u8 },
}

#[derive(Debug, Clone, Serialize)]
pub struct Reroute {
    pub system: PathSystem,
    pub kind: RerouteKind,
}

/// Where each system vertex sits: (path, position).
fn locate(paths: &[Vec<Vertex>], n: usize) -> Vec<Option<(usize, usize)>> {
    let mut at = vec![None; n];
    for (i, p) in paths.iter().enumerate() {
        for (pos, &v) in p.iter().enumerate() {
            at[v] = Some((i, pos));
        }
    }
    at
}

fn accept(tour: &Tournament, system: &PathSystem, paths: Vec<Vec<Vertex>>) -> Option<PathSystem> {
    let candidate = PathSystem {
        paths: paths.into_iter().map(Path::new).collect(),
        sources: system.sources.clone(),
        sinks: system.sinks.clone(),
        special: system.special,
    };
    let same_ends = {
        let ends = |s: &PathSystem| {
            let mut e: Vec<(Vertex, Vertex)> = Vec::new();
            let mut starts: Vec<Vertex> = s.paths.iter().filter_map(Path::initial).collect();
            let mut stops: Vec<Vertex> = s.paths.iter().filter_map(Path::terminal).collect();
            starts.sort_unstable();
            stops.sort_unstable();
            e.extend(starts.into_iter().zip(stops));
            e
        };
        ends(&candidate) == ends(system)
    };
    (same_ends && candidate.validate(tour).is_ok() && candidate.total_vertices() < system.total_vertices())
        .then_some(candidate)
}

/// Looks for a strictly smaller system using the connectors of `sub`.
///
/// Tries, in order: a free connector between two branch vertices met by one
/// path; two nested connectors that each meet a single other path; and three
/// nested connectors whose interiors lie on two other paths, chained
/// monotonically in both paths' orders. Any returned system keeps the sources,
/// sinks and special vertex, passes validation and is strictly smaller.
pub fn reroute_improve(tour: &Tournament, system: &PathSystem, sub: &Subdivision) -> Option<Reroute> {
    let n = tour.order();
    let paths: Vec<Vec<Vertex>> = system.paths.iter().map(|p| p.vertices().to_vec()).collect();
    let at = locate(&paths, n);
    let branch: Vec<bool> = {
        let mut b = vec![false; n];
        for &v in &sub.branch {
            b[v] = true;
        }
        b
    };

    for (qi, q) in paths.iter().enumerate() {
        let hits: Vec<usize> = (0..q.len()).filter(|&pos| branch[q[pos]]).collect();
        if hits.len() < 2 {
            continue;
        }
        if let Some(r) = shortcut(tour, system, &paths, &at, qi, &hits, sub) {
            return Some(r);
        }
        if let Some(r) = nested(tour, system, &paths, &at, qi, &hits, sub) {
            return Some(r);
        }
    }
    None
}

fn shortcut(
    tour: &Tournament,
    system: &PathSystem,
    paths: &[Vec<Vertex>],
    at: &[Option<(usize, usize)>],
    qi: usize,
    hits: &[usize],
    sub: &Subdivision,
) -> Option<Reroute> {
    let q = &paths[qi];
    let mut best: Option<(usize, usize, usize)> = None;
    for (a, &pa) in hits.iter().enumerate() {
        for &pb in &hits[a + 1..] {
            let Some(c) = sub.connector(q[pa], q[pb]) else { continue };
            if c.interior().iter().any(|&w| at[w].is_some()) {
                continue;
            }
            let saving = (pb - pa - 1).saturating_sub(c.interior().len());
            if saving > 0 && best.is_none_or(|b| saving > b.2) {
                best = Some((pa, pb, saving));
            }
        }
    }
    let (pa, pb, _) = best?;
    let c = sub.connector(q[pa], q[pb])?;
    let mut new_q = q[..=pa].to_vec();
    new_q.extend_from_slice(c.interior());
    new_q.extend_from_slice(&q[pb..]);
    let mut out = paths.to_vec();
    out[qi] = new_q;
    accept(tour, system, out).map(|system| Reroute {
        system,
        kind: RerouteKind::Shortcut,
    })
}

/// A nested connector `P_i` from the `i`-th hit to the `i`-th last hit, with
/// the system positions of its interior vertices.
struct Nest {
    from: usize,
    to: usize,
    interior: Vec<Vertex>,
    slots: Vec<Option<(usize, usize)>>,
}

fn nested(
    tour: &Tournament,
    system: &PathSystem,
    paths: &[Vec<Vertex>],
    at: &[Option<(usize, usize)>],
    qi: usize,
    hits: &[usize],
    sub: &Subdivision,
) -> Option<Reroute> {
    let q = &paths[qi];
    let m = hits.len();
    let nests: Vec<Nest> = (0..m / 2)
        .filter_map(|i| {
            let (from, to) = (hits[i], hits[m - 1 - i]);
            let c = sub.connector(q[from], q[to])?;
            let interior = c.interior().to_vec();
            let slots = interior.iter().map(|&w| at[w]).collect();
            Some(Nest {
                from,
                to,
                interior,
                slots,
            })
        })
        .collect();

    // single blocked interior vertex on one other path
    let mut singles: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    // two blocked interior vertices on two distinct other paths
    let mut doubles: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (idx, nest) in nests.iter().enumerate() {
        let blocked: Vec<(usize, (usize, usize))> = nest
            .slots
            .iter()
            .enumerate()
            .filter_map(|(s, slot)| slot.map(|x| (s, x)))
            .collect();
        match blocked.as_slice() {
            [(s, (p, _))] if *p != qi => singles.entry(*p).or_default().push((idx, *s)),
            [(_, (pm, _)), (_, (pn, _))] if *pm != qi && *pn != qi && pm != pn => {
                doubles.entry((*pm, *pn)).or_default().push(idx)
            }
            _ => {}
        }
    }

    for (&mi, members) in &singles {
        for &(alpha, sa) in members {
            for &(beta, sb) in members {
                if alpha == beta {
                    continue;
                }
                let (na, nb) = (&nests[alpha], &nests[beta]);
                let (pa, pb) = (na.slots[sa].unwrap().1, nb.slots[sb].unwrap().1);
                if pb >= pa {
                    continue;
                }
                let m_path = &paths[mi];
                // path through alpha up to its blocked vertex, then along M
                let mut new_m = q[..=na.from].to_vec();
                new_m.extend_from_slice(&na.interior[..sa]);
                new_m.extend_from_slice(&m_path[pa..]);
                // M up to beta's blocked vertex, then beta's remainder and the tail of Q
                let mut new_q = m_path[..=pb].to_vec();
                new_q.extend_from_slice(&nb.interior[sb + 1..]);
                new_q.extend_from_slice(&q[nb.to..]);
                let mut out = paths.to_vec();
                out[mi] = new_m;
                out[qi] = new_q;
                if let Some(system) = accept(tour, system, out) {
                    return Some(Reroute {
                        system,
                        kind: RerouteKind::TwoPath,
                    });
                }
            }
        }
    }

    for (&(mi, ni), members) in &doubles {
        if members.len() < 3 {
            continue;
        }
        let second = |idx: usize| nests[idx].slots[0].unwrap().1;
        let third = |idx: usize| nests[idx].slots[1].unwrap().1;
        let orderings = vec![
            members.iter().map(|&i| second(i)).collect::<Vec<_>>(),
            members.iter().map(|&i| third(i)).collect::<Vec<_>>(),
        ];
        let Ok(chain) = multi_order_monotone_subset(members, &orderings) else {
            continue;
        };
        if chain.items.len() < 3 {
            continue;
        }
        let case = match (chain.directions[0], chain.directions[1]) {
            (Direction::Increasing, Direction::Increasing) => 1,
            (Direction::Increasing, Direction::Decreasing) => 2,
            (Direction::Decreasing, Direction::Increasing) => 3,
            (Direction::Decreasing, Direction::Decreasing) => 4,
        };
        let trio = &chain.items[..3];
        for perm in PERMUTATIONS {
            let (a, b, c) = (trio[perm[0]], trio[perm[1]], trio[perm[2]]);
            for template in [three_path_forward, three_path_crossed] {
                let out = template(paths, qi, mi, ni, &nests[a], &nests[b], &nests[c]);
                if let Some(system) = out.and_then(|o| accept(tour, system, o)) {
                    return Some(Reroute {
                        system,
                        kind: RerouteKind::ThreePath { case },
                    });
                }
            }
        }
    }
    None
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// M' = Q to `a`'s start, into M at `a`'s second vertex; N' = M to `b`'s second
/// vertex, into N at its third; Q' = N to `c`'s third vertex, into Q at `c`'s end.
fn three_path_forward(
    paths: &[Vec<Vertex>],
    qi: usize,
    mi: usize,
    ni: usize,
    a: &Nest,
    b: &Nest,
    c: &Nest,
) -> Option<Vec<Vec<Vertex>>> {
    let (q, m, nn) = (&paths[qi], &paths[mi], &paths[ni]);
    let (am, bm) = (a.slots[0]?.1, b.slots[0]?.1);
    let (bn, cn) = (b.slots[1]?.1, c.slots[1]?.1);
    if bm >= am || cn >= bn {
        return None;
    }
    let mut new_m = q[..=a.from].to_vec();
    new_m.extend_from_slice(&m[am..]);
    let mut new_n = m[..=bm].to_vec();
    new_n.extend_from_slice(&nn[bn..]);
    let mut new_q = nn[..=cn].to_vec();
    new_q.extend_from_slice(&q[c.to..]);
    let mut out = paths.to_vec();
    out[mi] = new_m;
    out[ni] = new_n;
    out[qi] = new_q;
    Some(out)
}

/// Q' = N to `a`'s third vertex, into Q at `a`'s end; M' = Q to `b`'s start,
/// into M at its second vertex; N' = M to `c`'s second vertex, into N at its third.
fn three_path_crossed(
    paths: &[Vec<Vertex>],
    qi: usize,
    mi: usize,
    ni: usize,
    a: &Nest,
    b: &Nest,
    c: &Nest,
) -> Option<Vec<Vec<Vertex>>> {
    let (q, m, nn) = (&paths[qi], &paths[mi], &paths[ni]);
    let (an, cn) = (a.slots[1]?.1, c.slots[1]?.1);
    let (bm, cm) = (b.slots[0]?.1, c.slots[0]?.1);
    if an >= cn || cm >= bm {
        return None;
    }
    let mut new_q = nn[..=an].to_vec();
    new_q.extend_from_slice(&q[a.to..]);
    let mut new_m = q[..=b.from].to_vec();
    new_m.extend_from_slice(&m[bm..]);
    let mut new_n = m[..=cm].to_vec();
    new_n.extend_from_slice(&nn[cn..]);
    let mut out = paths.to_vec();
    out[qi] = new_q;
    out[mi] = new_m;
    out[ni] = new_n;
    Some(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SubdivisionBound {
    pub index: usize,
    /// Branch vertices lying on the system.
    pub branch_on_system: usize,
    /// Largest number, over free branch vertices `x`, of connectors between `x`
    /// and another free branch vertex that meet the system.
    pub max_blocked_connectors: usize,
    pub within: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub bound_subdiv: u128,
    pub bound_paths: u128,
    pub entries: Vec<SubdivisionBound>,
    pub within: bool,
}

/// Counts how much of every subdivision the current system touches.
pub fn check_subdivision_bounds(tour: &Tournament, state: &LinkerState, bound_subdiv: u128, bound_paths: u128) -> BoundsReport {
    let n = tour.order();
    let used = state
        .system
        .as_ref()
        .map(PathSystem::union)
        .unwrap_or_else(|| crate::tournament::VertexSet::new(n));
    let mut entries = Vec::new();
    for (index, sub) in state.family.subdivisions.iter().enumerate() {
        let Some(sub) = sub else { continue };
        debug_assert_eq!(state.family.labels[index], Label::Subdivision);
        let on: usize = sub.branch.iter().filter(|&&v| used.contains(v)).count();
        let free: Vec<Vertex> = sub.branch.iter().copied().filter(|&v| !used.contains(v)).collect();
        let blocked = |a: Vertex, b: Vertex| {
            sub.connector(a, b)
                .is_some_and(|p| p.interior().iter().any(|&w| used.contains(w)))
        };
        let max_blocked = free
            .iter()
            .map(|&x| free.iter().filter(|&&y| y != x).map(|&y| blocked(x, y) as usize + blocked(y, x) as usize).sum())
            .max()
            .unwrap_or(0);
        let within = on as u128 <= bound_subdiv && max_blocked as u128 <= bound_paths;
        entries.push(SubdivisionBound {
            index,
            branch_on_system: on,
            max_blocked_connectors: max_blocked,
            within,
        });
    }
    BoundsReport {
        bound_subdiv,
        bound_paths,
        within: entries.iter().all(|e| e.within),
        entries,
    }
}
