//! Exact search for vertex-disjoint paths with prescribed endpoint pairs.
//!
//! Pairs are routed one at a time, hardest first, enumerating simple paths by
//! depth-first search. Two prunings keep the search small: every pending pair
//! must stay connected in the residual graph, and no minimum cut of a pending
//! pair may be forced to carry more paths than it has vertices.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::min_cut_within;
use crate::tournament::{rng_from_seed, Path, Tournament, Vertex, VertexSet};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Disjoint endpoint pairs `(x_i, y_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LinkageInstance {
    pairs: Vec<(Vertex, Vertex)>,
}

impl LinkageInstance {
    pub fn new(n: usize, pairs: Vec<(Vertex, Vertex)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::domain("a linkage instance needs at least one pair"));
        }
        let mut seen = VertexSet::new(n);
        for &(x, y) in &pairs {
            for v in [x, y] {
                if v >= n {
                    return Err(Error::domain(format!("vertex {v} out of range 0..{n}")));
                }
                if !seen.insert(v) {
                    return Err(Error::domain(format!("endpoint {v} used twice")));
                }
            }
        }
        Ok(LinkageInstance { pairs })
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn endpoints(&self, n: usize) -> VertexSet {
        VertexSet::from_iter_in(n, self.pairs.iter().flat_map(|&(x, y)| [x, y]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkageStatus {
    Linked,
    NotLinked,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkageVerdict {
    pub status: LinkageStatus,
    /// Present exactly when `status` is `Linked`; path `i` runs `x_i → y_i`.
    pub paths: Option<Vec<Path>>,
    pub nodes_explored: u64,
}

struct Search<'a> {
    tour: &'a Tournament,
    pairs: &'a [(Vertex, Vertex)],
    budget: u64,
    nodes: u64,
    exhausted: bool,
    routed: Vec<Option<Path>>,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
        }
        !self.exhausted
    }

    /// BFS distance from `x` to `y` with interior in `free`.
    fn distance(&self, x: Vertex, y: Vertex, free: &VertexSet) -> Option<usize> {
        if self.tour.has_edge(x, y) {
            return Some(1);
        }
        let mut frontier = self.tour.out_set(x).intersection(free);
        let mut seen = frontier.clone();
        let mut d = 2;
        while !frontier.is_empty() {
            if !frontier.is_disjoint(self.tour.in_set(y)) {
                return Some(d);
            }
            let mut next = VertexSet::new(self.tour.order());
            for u in frontier.iter() {
                next.union_with(self.tour.out_set(u));
            }
            next.intersect_with(free);
            next.difference_with(&seen);
            seen.union_with(&next);
            frontier = next;
            d += 1;
        }
        None
    }

    fn reaches(&self, x: Vertex, y: Vertex, free: &VertexSet) -> bool {
        self.tour.has_edge(x, y) || {
            let mut within = free.clone();
            within.remove(y);
            let r = self.tour.reachable_within(x, &within);
            !r.is_disjoint(self.tour.in_set(y))
        }
    }

    /// Some minimum cut of a pending pair must carry more paths than it has vertices.
    fn cut_overloaded(&self, pending: &[usize], free: &VertexSet) -> bool {
        if pending.len() < 2 {
            return false;
        }
        for &j in pending {
            let (x, y) = self.pairs[j];
            let Some(cut) = min_cut_within(self.tour, x, y, free) else {
                continue;
            };
            let mut rest = free.clone();
            for &c in &cut {
                rest.remove(c);
            }
            let separated = pending
                .iter()
                .filter(|&&i| {
                    let (a, b) = self.pairs[i];
                    !self.reaches(a, b, &rest)
                })
                .count();
            if separated > cut.len() {
                return true;
            }
        }
        false
    }

    /// Returns `true` once every pair is routed.
    fn solve(&mut self, pending: &mut Vec<usize>, free: &mut VertexSet) -> bool {
        if pending.is_empty() {
            return true;
        }
        if !self.tick() {
            return false;
        }
        let mut hardest = None;
        for (pos, &i) in pending.iter().enumerate() {
            let (x, y) = self.pairs[i];
            match self.distance(x, y, free) {
                None => return false,
                Some(d) => {
                    if hardest.is_none_or(|(bd, _)| d > bd) {
                        hardest = Some((d, pos));
                    }
                }
            }
        }
        if self.cut_overloaded(pending, free) {
            return false;
        }
        let pos = hardest.unwrap().1;
        let i = pending.swap_remove(pos);
        let (x, y) = self.pairs[i];
        let mut path = vec![x];
        if self.extend(&mut path, y, i, pending, free) {
            return true;
        }
        pending.push(i);
        let last = pending.len() - 1;
        pending.swap(pos, last);
        false
    }

    fn extend(&mut self, path: &mut Vec<Vertex>, y: Vertex, i: usize, pending: &mut Vec<usize>, free: &mut VertexSet) -> bool {
        if self.exhausted {
            return false;
        }
        let u = *path.last().unwrap();
        if self.tour.has_edge(u, y) {
            if !self.tick() {
                return false;
            }
            path.push(y);
            self.routed[i] = Some(Path::new(path.clone()));
            if self.solve(pending, free) {
                return true;
            }
            self.routed[i] = None;
            path.pop();
        }
        let cands = self.tour.out_set(u).intersection(free);
        for w in cands.iter() {
            if self.exhausted {
                return false;
            }
            free.remove(w);
            if self.reaches(w, y, free) {
                if !self.tick() {
                    free.insert(w);
                    return false;
                }
                path.push(w);
                if self.extend(path, y, i, pending, free) {
                    return true;
                }
                path.pop();
            }
            free.insert(w);
        }
        false
    }
}

/// Decides the instance exactly, or reports `Unknown` once `budget` search nodes are spent.
pub fn find_linkage_exact(tour: &Tournament, instance: &LinkageInstance, budget: u64) -> Result<LinkageVerdict> {
    let n = tour.order();
    let inst = LinkageInstance::new(n, instance.pairs.clone())?;
    let mut free = tour.vertices();
    free.difference_with(&inst.endpoints(n));
    let mut search = Search {
        tour,
        pairs: &inst.pairs,
        budget,
        nodes: 0,
        exhausted: false,
        routed: vec![None; inst.k()],
    };
    let mut pending: Vec<usize> = (0..inst.k()).collect();
    let found = search.solve(&mut pending, &mut free);
    let (status, paths) = if found {
        let paths: Vec<Path> = search.routed.iter().map(|p| p.clone().unwrap()).collect();
        (LinkageStatus::Linked, Some(paths))
    } else if search.exhausted {
        (LinkageStatus::Unknown, None)
    } else {
        (LinkageStatus::NotLinked, None)
    };
    Ok(LinkageVerdict {
        status,
        paths,
        nodes_explored: search.nodes,
    })
}

/// How `is_k_linked` chooses the instances it checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum LinkedMode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct KLinkedVerdict {
    pub k: usize,
    pub status: LinkageStatus,
    pub reason: Option<String>,
    /// The first instance (in enumeration order) that is not linked.
    pub witness: Option<LinkageInstance>,
    pub instances_checked: usize,
    pub unknown_instances: usize,
}

fn enumerate_instances(n: usize, k: usize) -> Vec<LinkageInstance> {
    fn xs(n: usize, k: usize, start: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            xs(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    fn ys(n: usize, k: usize, taken: &mut Vec<bool>, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !taken[v] {
                taken[v] = true;
                cur.push(v);
                ys(n, k, taken, cur, out);
                cur.pop();
                taken[v] = false;
            }
        }
    }
    let mut x_sets = Vec::new();
    xs(n, k, 0, &mut Vec::new(), &mut x_sets);
    let mut out = Vec::new();
    for x in x_sets {
        let mut taken = vec![false; n];
        for &v in &x {
            taken[v] = true;
        }
        let mut y_lists = Vec::new();
        ys(n, k, &mut taken, &mut Vec::new(), &mut y_lists);
        for y in y_lists {
            out.push(LinkageInstance {
                pairs: x.iter().copied().zip(y).collect(),
            });
        }
    }
    out
}

fn sample_instances(n: usize, k: usize, trials: usize, seed: u64) -> Vec<LinkageInstance> {
    let mut rng = rng_from_seed(seed);
    (0..trials)
        .map(|_| {
            let mut perm: Vec<Vertex> = (0..n).collect();
            for i in 0..2 * k {
                let j = rng.gen_range(i..n);
                perm.swap(i, j);
            }
            LinkageInstance {
                pairs: (0..k).map(|i| (perm[i], perm[k + i])).collect(),
            }
        })
        .collect()
}

/// Tests k-linkedness over every endpoint configuration, or over seeded random ones.
pub fn is_k_linked(tour: &Tournament, k: usize, mode: LinkedMode, budget: u64) -> Result<KLinkedVerdict> {
    let n = tour.order();
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    if n < 2 * k {
        return Ok(KLinkedVerdict {
            k,
            status: LinkageStatus::NotLinked,
            reason: Some("too few vertices".into()),
            witness: None,
            instances_checked: 0,
            unknown_instances: 0,
        });
    }
    let instances = match mode {
        LinkedMode::Exhaustive => enumerate_instances(n, k),
        LinkedMode::Sampled { trials, seed } => sample_instances(n, k, trials, seed),
    };
    let statuses: Vec<LinkageStatus> = instances
        .par_iter()
        .map(|inst| find_linkage_exact(tour, inst, budget).map(|v| v.status))
        .collect::<Result<_>>()?;
    let failing = statuses.iter().position(|&s| s == LinkageStatus::NotLinked);
    let unknown = statuses.iter().filter(|&&s| s == LinkageStatus::Unknown).count();
    let (status, reason, witness) = match failing {
        Some(i) => (
            LinkageStatus::NotLinked,
            Some("an instance has no disjoint linkage".to_string()),
            Some(instances[i].clone()),
        ),
        None if unknown > 0 => (
            LinkageStatus::Unknown,
            Some(format!("{unknown} instances exhausted the search budget")),
            None,
        ),
        None => (LinkageStatus::Linked, None, None),
    };
    Ok(KLinkedVerdict {
        k,
        status,
        reason,
        witness,
        instances_checked: instances.len(),
        unknown_instances: unknown,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathCheck {
    pub valid: bool,
    pub violation: Option<String>,
}

impl PathCheck {
    fn fail(msg: String) -> Self {
        PathCheck {
            valid: false,
            violation: Some(msg),
        }
    }
}

/// Checks that `paths[i]` runs `x_i → y_i` along edges of `tour` and that the paths are pairwise vertex-disjoint.
pub fn validate_path_system(tour: &Tournament, instance: &LinkageInstance, paths: &[Path]) -> PathCheck {
    let n = tour.order();
    if paths.len() != instance.k() {
        return PathCheck::fail(format!("count: {} paths for {} pairs", paths.len(), instance.k()));
    }
    let mut seen = VertexSet::new(n);
    for (i, (p, &(x, y))) in paths.iter().zip(&instance.pairs).enumerate() {
        let vs = p.vertices();
        if vs.first() != Some(&x) || vs.last() != Some(&y) {
            return PathCheck::fail(format!("endpoints: path {i} does not run {x} -> {y}"));
        }
        for &v in vs {
            if v >= n {
                return PathCheck::fail(format!("range: vertex {v} in path {i}"));
            }
        }
        for w in vs.windows(2) {
            if !tour.has_edge(w[0], w[1]) {
                return PathCheck::fail(format!("orientation: path {i} uses missing edge {} -> {}", w[0], w[1]));
            }
        }
        for &v in vs {
            if !seen.insert(v) {
                return PathCheck::fail(format!("disjointness: vertex {v} appears twice (path {i})"));
            }
        }
    }
    PathCheck {
        valid: true,
        violation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle() -> Tournament {
        Tournament::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn one_pair_on_strong_tournament() {
        let t = three_cycle();
        let inst = LinkageInstance::new(3, vec![(1, 0)]).unwrap();
        let v = find_linkage_exact(&t, &inst, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, LinkageStatus::Linked);
        assert_eq!(v.paths.unwrap(), vec![Path::new(vec![1, 2, 0])]);
        let k1 = is_k_linked(&t, 1, LinkedMode::Exhaustive, DEFAULT_BUDGET).unwrap();
        assert_eq!(k1.status, LinkageStatus::Linked);
    }

    #[test]
    fn transitive_is_not_one_linked() {
        let t = Tournament::transitive(4);
        let v = is_k_linked(&t, 1, LinkedMode::Exhaustive, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, LinkageStatus::NotLinked);
        let w = v.witness.unwrap();
        let (x, y) = w.pairs()[0];
        assert_eq!((x, y), (1, 0));
        let sink_source = LinkageInstance::new(4, vec![(3, 0)]).unwrap();
        let v = find_linkage_exact(&t, &sink_source, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, LinkageStatus::NotLinked);
    }

    #[test]
    fn duplicate_endpoints_rejected() {
        assert!(LinkageInstance::new(5, vec![(0, 1), (1, 2)]).is_err());
        assert!(LinkageInstance::new(5, vec![(0, 0)]).is_err());
        assert!(LinkageInstance::new(5, vec![]).is_err());
    }

    #[test]
    fn too_few_vertices() {
        let v = is_k_linked(&three_cycle(), 2, LinkedMode::Exhaustive, 10).unwrap();
        assert_eq!(v.status, LinkageStatus::NotLinked);
        assert_eq!(v.reason.as_deref(), Some("too few vertices"));
    }

    #[test]
    fn tiny_budget_gives_unknown() {
        let t = Tournament::random(12, 3);
        let inst = LinkageInstance::new(12, vec![(0, 1), (2, 3), (4, 5)]).unwrap();
        let v = find_linkage_exact(&t, &inst, 1).unwrap();
        assert_eq!(v.status, LinkageStatus::Unknown);
        assert!(v.paths.is_none());
    }

    #[test]
    fn validation_reports_first_violation() {
        let t = Tournament::transitive(5);
        let inst = LinkageInstance::new(5, vec![(0, 1), (2, 3)]).unwrap();
        let ok = validate_path_system(&t, &inst, &[Path::new(vec![0, 1]), Path::new(vec![2, 3])]);
        assert!(ok.valid);
        let inst = LinkageInstance::new(5, vec![(0, 2), (1, 3)]).unwrap();
        let shared = validate_path_system(&t, &inst, &[Path::new(vec![0, 4, 2]), Path::new(vec![1, 4, 3])]);
        assert!(!shared.valid);
        let shared = validate_path_system(&t, &inst, &[Path::new(vec![0, 2]), Path::new(vec![1, 2, 3])]);
        assert!(shared.violation.unwrap().starts_with("disjointness"));
        let wrong = validate_path_system(&t, &inst, &[Path::new(vec![2, 0]), Path::new(vec![1, 3])]);
        assert!(wrong.violation.unwrap().starts_with("endpoints"));
    }
}
