use super::{AssemblyCase, LinkerState, StageFailure};
use crate::family::Subdivision;
use crate::oracle::LinkageInstance;
use crate::tournament::{Path, Tournament, Vertex, VertexSet};

/// Disjoint paths inside `sub` joining each pair, avoiding `forbidden`.
///
/// A pair uses its own connector when that is unblocked, otherwise the lowest
/// free hub `w` with both connectors `u → w` and `w → v` unblocked. Endpoints
/// must be branch vertices; they may lie in `forbidden`, interiors and hubs may not.
pub fn link_within_subdivision(
    tour: &Tournament,
    sub: &Subdivision,
    pairs: &[(Vertex, Vertex)],
    forbidden: &VertexSet,
) -> Result<Vec<Path>, StageFailure> {
    let n = tour.order();
    let branch = VertexSet::from_iter_in(n, sub.branch.iter().copied());
    let mut ends = VertexSet::new(n);
    for &(u, v) in pairs {
        if !branch.contains(u) || !branch.contains(v) {
            return Err(StageFailure {
                stage: "link-within",
                detail: format!("pair ({u}, {v}) is not on branch vertices"),
                witness: vec![u, v],
            });
        }
        let fresh_u = ends.insert(u);
        if u != v && !ends.insert(v) || !fresh_u {
            return Err(StageFailure {
                stage: "link-within",
                detail: format!("pair ({u}, {v}) shares an endpoint"),
                witness: vec![u, v],
            });
        }
    }
    let mut consumed = VertexSet::new(n);
    let open = |w: Vertex, consumed: &VertexSet| !forbidden.contains(w) && !ends.contains(w) && !consumed.contains(w);
    let clear = |p: &Path, consumed: &VertexSet| p.interior().iter().all(|&w| open(w, consumed));
    let mut out = Vec::with_capacity(pairs.len());
    for &(u, v) in pairs {
        let route = if u == v {
            Some(vec![u])
        } else {
            let direct = sub.connector(u, v).filter(|p| clear(p, &consumed)).map(|p| p.vertices().to_vec());
            direct.or_else(|| {
                sub.branch.iter().copied().find_map(|w| {
                    if !open(w, &consumed) {
                        return None;
                    }
                    let (a, b) = (sub.connector(u, w)?, sub.connector(w, v)?);
                    (clear(a, &consumed) && clear(b, &consumed)).then(|| {
                        let mut p = a.vertices().to_vec();
                        p.extend_from_slice(&b.vertices()[1..]);
                        p
                    })
                })
            })
        };
        let Some(route) = route else {
            return Err(StageFailure {
                stage: "link-within",
                detail: format!("no free connector or hub for ({u}, {v})"),
                witness: vec![u, v],
            });
        };
        for &w in &route {
            consumed.insert(w);
        }
        out.push(Path::new(route));
    }
    Ok(out)
}

struct Assembler<'a> {
    tour: &'a Tournament,
    state: &'a LinkerState,
    used: VertexSet,
    prefix: Vec<Vec<Vertex>>,
}

impl Assembler<'_> {
    fn fail(&self, detail: impl Into<String>) -> StageFailure {
        StageFailure::new("assembly", detail)
    }

    /// Lowest unused free vertex of set `j` satisfying `pred`.
    fn pick(&self, j: usize, pred: impl Fn(Vertex) -> bool) -> Option<Vertex> {
        self.state.free_ledger[j].iter().find(|&v| !self.used.contains(v) && pred(v))
    }

    fn has_free_out(&self, u: Vertex, j: usize) -> bool {
        self.pick(j, |b| self.tour.has_edge(u, b)).is_some()
    }

    fn extend(&mut self, i: usize, vs: &[Vertex]) {
        for &v in vs {
            self.used.insert(v);
            self.prefix[i].push(v);
        }
    }

    /// Walks pair `i` through one free vertex of every plain set in `chain`.
    fn walk_plain(&mut self, i: usize, chain: &[usize], then: Option<usize>) -> Result<(), StageFailure> {
        for (p, &j) in chain.iter().enumerate() {
            let cur = *self.prefix[i].last().unwrap();
            let last = p + 1 == chain.len();
            let f = self
                .pick(j, |f| self.tour.has_edge(cur, f) && (!last || then.is_none_or(|s| self.has_free_out(f, s))))
                .ok_or_else(|| self.fail(format!("plain set {j} has no free vertex for pair {i}")))?;
            self.extend(i, &[f]);
        }
        if let Some(s) = then {
            let cur = *self.prefix[i].last().unwrap();
            let b = self
                .pick(s, |b| self.tour.has_edge(cur, b))
                .ok_or_else(|| self.fail(format!("no free entry into set {s} for pair {i}")))?;
            self.extend(i, &[b]);
        }
        Ok(())
    }

    /// Moves every head through the subdivision chain and links it to its target in the last set.
    /// Pairs in `late` already sit in the last set and join only there.
    fn walk_subdivisions(&mut self, late: &[usize], targets: &[Option<Vertex>]) -> Result<(), StageFailure> {
        let ps = self.state.ps_order.clone();
        let mut heads: Vec<usize> = Vec::new();
        for (p, &set) in ps.iter().enumerate() {
            if p + 1 == ps.len() {
                heads.extend_from_slice(late);
            }
            let x = self.prefix[set][0];
            let a = self
                .pick(set, |a| self.tour.has_edge(x, a))
                .ok_or_else(|| self.fail(format!("no free entry vertex in subdivision set {set}")))?;
            self.extend(set, &[a]);
            heads.push(set);
            let state = self.state;
            let sub = state.family.subdivisions[set]
                .as_ref()
                .ok_or_else(|| self.fail(format!("set {set} carries no subdivision")))?;
            let mut pairs = Vec::with_capacity(heads.len());
            let mut exits = Vec::with_capacity(heads.len());
            if p + 1 < ps.len() {
                let next = ps[p + 1];
                for &i in &heads {
                    let h = *self.prefix[i].last().unwrap();
                    let own = self.pick(next, |b| self.tour.has_edge(h, b));
                    let (stone, b) = match own {
                        Some(b) => (h, b),
                        None => {
                            let stone = self
                                .pick(set, |s| self.has_free_out(s, next))
                                .ok_or_else(|| self.fail(format!("no stepping stone out of set {set}")))?;
                            let b = self.pick(next, |b| self.tour.has_edge(stone, b)).unwrap();
                            (stone, b)
                        }
                    };
                    self.used.insert(stone);
                    self.used.insert(b);
                    pairs.push((h, stone));
                    exits.push(Some(b));
                }
            } else {
                for &i in &heads {
                    let h = *self.prefix[i].last().unwrap();
                    let t = targets[i].ok_or_else(|| self.fail(format!("pair {i} has no target")))?;
                    pairs.push((h, t));
                    exits.push(None);
                }
            }
            let links = link_within_subdivision(self.tour, sub, &pairs, &self.used)?;
            for ((&i, link), exit) in heads.iter().zip(&links).zip(&exits) {
                let tail: Vec<Vertex> = link.vertices()[1..].iter().copied().chain(*exit).collect();
                self.extend(i, &tail);
            }
        }
        Ok(())
    }
}

/// Joins every source to the origin vertex whose system path reaches its sink, then follows that path.
pub fn assemble_final_paths(tour: &Tournament, state: &LinkerState, inst: &LinkageInstance) -> Result<Vec<Path>, StageFailure> {
    let k = inst.k();
    let sys = state.system()?;
    let mut used = sys.union();
    let mut z = vec![0; k];
    let mut q_paths = Vec::with_capacity(k);
    for (i, &(x, y)) in inst.pairs().iter().enumerate() {
        used.insert(x);
        used.insert(y);
        let qi = sys
            .path_ending_at(y)
            .ok_or_else(|| StageFailure::new("assembly", format!("no system path ends at sink {y}")))?;
        z[i] = sys.paths[qi].initial().unwrap();
        q_paths.push(qi);
    }
    let mut asm = Assembler {
        tour,
        state,
        used,
        prefix: inst.pairs().iter().map(|&(x, _)| vec![x]).collect(),
    };
    let pns = &state.pns_order;
    let ps = &state.ps_order;
    match state.case {
        AssemblyCase::PlainTail => {
            let t = pns.len();
            for q in 0..t {
                let i = pns[q];
                asm.walk_plain(i, &pns[q..t - 1], None)?;
                let cur = *asm.prefix[i].last().unwrap();
                if !tour.has_edge(cur, z[i]) {
                    return Err(asm.fail(format!("no edge from {cur} to origin vertex {}", z[i])));
                }
                asm.prefix[i].push(z[i]);
            }
            if let Some(&ir) = ps.last() {
                let mut proxies = vec![None; k];
                for &i in ps {
                    let zi = z[i];
                    let proxy = asm
                        .pick(ir, |u| tour.has_edge(u, zi))
                        .ok_or_else(|| asm.fail(format!("origin vertex {zi} has no free in-neighbour in set {ir}")))?;
                    asm.used.insert(proxy);
                    proxies[i] = Some(proxy);
                }
                asm.walk_subdivisions(&[], &proxies)?;
                for &i in ps {
                    asm.prefix[i].push(z[i]);
                }
            }
        }
        AssemblyCase::SubdivisionTail => {
            let ir = *ps.last().ok_or_else(|| asm.fail("no subdivision set holds the origin"))?;
            let t = pns.len();
            for q in 0..t {
                asm.walk_plain(pns[q], &pns[q..t], Some(ir))?;
            }
            let targets: Vec<Option<Vertex>> = z.iter().copied().map(Some).collect();
            asm.walk_subdivisions(pns, &targets)?;
        }
    }
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut p = std::mem::take(&mut asm.prefix[i]);
        if p.last() != Some(&z[i]) {
            return Err(StageFailure::new("assembly", format!("pair {i} did not reach its origin vertex")));
        }
        p.extend_from_slice(&sys.paths[q_paths[i]].vertices()[1..]);
        out.push(Path::new(p));
    }
    Ok(out)
}
