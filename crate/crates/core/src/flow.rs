//! Vertex cuts, strong connectivity and minimum-cost systems of disjoint paths.
//!
//! Cuts are computed by unit-capacity augmenting paths on the implicit
//! vertex-split network of the tournament, reading neighbourhoods straight
//! from the bitsets. Minimum-cost systems use an explicit network and
//! successive shortest paths with Dijkstra potentials.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tournament::{Path, Tournament, Vertex, VertexSet};

/// Menger certificate for an ordered pair `(s, t)`.
///
/// When `direct_edge` is set the pair is uncuttable: the edge `s → t` is one
/// of the witness paths and `cut` only separates the remaining ones, so
/// `witness_paths.len() == cut.len() + 1`. Otherwise the two counts agree.
#[derive(Debug, Clone, Serialize)]
pub struct CutCertificate {
    pub s: Vertex,
    pub t: Vertex,
    pub direct_edge: bool,
    pub cut: Vec<Vertex>,
    pub witness_paths: Vec<Path>,
}

impl CutCertificate {
    /// Number of internally disjoint `s → t` paths, counting a direct edge as one.
    pub fn local_connectivity(&self) -> usize {
        self.witness_paths.len()
    }

    /// Re-checks the certificate against `t` without trusting the flow code.
    pub fn verify(&self, tour: &Tournament) -> bool {
        let n = tour.order();
        let expected = self.cut.len() + usize::from(self.direct_edge);
        if self.witness_paths.len() != expected || self.direct_edge != tour.has_edge(self.s, self.t) {
            return false;
        }
        let Ok(cut) = VertexSet::from_slice(n, &self.cut) else {
            return false;
        };
        if cut.contains(self.s) || cut.contains(self.t) {
            return false;
        }
        let mut interiors = VertexSet::new(n);
        for p in &self.witness_paths {
            if p.validate(tour).is_err() || p.initial() != Some(self.s) || p.terminal() != Some(self.t) {
                return false;
            }
            for &v in p.interior() {
                if !interiors.insert(v) {
                    return false;
                }
            }
        }
        let mut allowed = VertexSet::full(n);
        allowed.difference_with(&cut);
        // the direct edge is the one path a vertex cut cannot touch
        let mut start = tour.out_set(self.s).intersection(&allowed);
        start.remove(self.t);
        let mut seen = VertexSet::new(n);
        seen.insert(self.s);
        let mut stack: Vec<Vertex> = start.iter().collect();
        for &v in &stack {
            seen.insert(v);
        }
        while let Some(u) = stack.pop() {
            if u == self.t {
                return false;
            }
            let mut next = tour.out_set(u).intersection(&allowed);
            next.difference_with(&seen);
            for w in next.iter() {
                seen.insert(w);
                stack.push(w);
            }
        }
        true
    }
}

const IN: usize = 0;
const OUT: usize = 1;
const NONE: usize = usize::MAX;

/// Unit vertex-capacity flow from `s` to `t` on the implicit split network.
struct SplitFlow<'a> {
    tour: &'a Tournament,
    s: Vertex,
    t: Vertex,
    allowed: VertexSet,
    next: Vec<Vertex>,
    prev: Vec<Vertex>,
    value: usize,
}

impl<'a> SplitFlow<'a> {
    fn new(tour: &'a Tournament, s: Vertex, t: Vertex, allowed: VertexSet) -> Self {
        let n = tour.order();
        SplitFlow {
            tour,
            s,
            t,
            allowed,
            next: vec![NONE; n],
            prev: vec![NONE; n],
            value: 0,
        }
    }

    fn used(&self, v: Vertex) -> bool {
        self.prev[v] != NONE
    }

    /// Routes every common neighbour `s → w → t` at once.
    fn seed_length_two(&mut self, cap: usize) {
        let mut mids = self.tour.out_set(self.s).intersection(self.tour.in_set(self.t));
        mids.intersect_with(&self.allowed);
        for w in mids.iter() {
            if self.value >= cap {
                break;
            }
            self.prev[w] = self.s;
            self.next[w] = self.t;
            self.value += 1;
        }
    }

    /// One BFS in the residual network; returns the visited states when no path exists.
    fn augment(&mut self) -> std::result::Result<(), Vec<bool>> {
        let n = self.tour.order();
        let (s, t) = (self.s, self.t);
        let mut parent = vec![NONE; 2 * n];
        let mut visited = vec![false; 2 * n];
        let mut unseen_in = self.allowed.clone();
        unseen_in.remove(s);
        let mut queue = std::collections::VecDeque::new();
        visited[2 * s + OUT] = true;
        queue.push_back(2 * s + OUT);
        let mut reached_from = NONE;
        'bfs: while let Some(state) = queue.pop_front() {
            let (v, side) = (state / 2, state % 2);
            if side == OUT {
                if self.tour.has_edge(v, t) && v != s && self.next[v] != t {
                    reached_from = v;
                    break 'bfs;
                }
                let mut cands = self.tour.out_set(v).intersection(&unseen_in);
                cands.remove(t);
                for x in cands.iter() {
                    unseen_in.remove(x);
                    let st = 2 * x + IN;
                    visited[st] = true;
                    parent[st] = state;
                    queue.push_back(st);
                }
                if v != s && self.used(v) && !visited[2 * v + IN] {
                    unseen_in.remove(v);
                    visited[2 * v + IN] = true;
                    parent[2 * v + IN] = state;
                    queue.push_back(2 * v + IN);
                }
            } else {
                let target = if self.used(v) { 2 * self.prev[v] + OUT } else { 2 * v + OUT };
                if !visited[target] {
                    visited[target] = true;
                    parent[target] = state;
                    queue.push_back(target);
                }
            }
        }
        if reached_from == NONE {
            return Err(visited);
        }
        let mut states = vec![2 * reached_from + OUT];
        while parent[*states.last().unwrap()] != NONE {
            states.push(parent[*states.last().unwrap()]);
        }
        states.reverse();
        let mut added = vec![(reached_from, t)];
        for w in states.windows(2) {
            let (a, sa, b, sb) = (w[0] / 2, w[0] % 2, w[1] / 2, w[1] % 2);
            if a == b {
                continue;
            }
            if sa == OUT && sb == IN {
                added.push((a, b));
            } else {
                // a_in -> b_out undoes the flow edge b -> a
                if b != s && self.next[b] == a {
                    self.next[b] = NONE;
                }
                if self.prev[a] == b {
                    self.prev[a] = NONE;
                }
            }
        }
        for (a, b) in added {
            if a != s {
                self.next[a] = b;
            }
            if b != t {
                self.prev[b] = a;
            }
        }
        self.value += 1;
        Ok(())
    }

    fn run(&mut self, cap: usize) -> Option<Vec<bool>> {
        self.seed_length_two(cap);
        while self.value < cap {
            if let Err(visited) = self.augment() {
                return Some(visited);
            }
        }
        None
    }

    fn paths(&self) -> Vec<Path> {
        let mut starts: Vec<Vertex> = (0..self.tour.order())
            .filter(|&w| self.prev[w] == self.s)
            .collect();
        starts.sort_unstable();
        starts
            .into_iter()
            .map(|w| {
                let mut p = vec![self.s, w];
                let mut cur = w;
                while self.next[cur] != self.t {
                    cur = self.next[cur];
                    p.push(cur);
                }
                p.push(self.t);
                Path::new(p)
            })
            .collect()
    }
}

fn check_pair(tour: &Tournament, s: Vertex, t: Vertex) -> Result<()> {
    let n = tour.order();
    if s >= n || t >= n {
        return Err(Error::domain(format!("pair ({s}, {t}) out of range 0..{n}")));
    }
    if s == t {
        return Err(Error::domain("source and target coincide"));
    }
    Ok(())
}

/// Minimum internal vertex cut between `s` and `t`, with matching disjoint paths.
pub fn min_vertex_cut(tour: &Tournament, s: Vertex, t: Vertex) -> Result<CutCertificate> {
    check_pair(tour, s, t)?;
    let mut flow = SplitFlow::new(tour, s, t, tour.vertices());
    let visited = flow
        .run(usize::MAX)
        .expect("uncapped flow always ends with a failed search");
    let cut: Vec<Vertex> = (0..tour.order())
        .filter(|&v| v != s && v != t && visited[2 * v + IN] && !visited[2 * v + OUT])
        .collect();
    let direct_edge = tour.has_edge(s, t);
    let mut witness_paths = Vec::with_capacity(flow.value + 1);
    if direct_edge {
        witness_paths.push(Path::new(vec![s, t]));
    }
    witness_paths.extend(flow.paths());
    debug_assert_eq!(cut.len(), flow.value);
    Ok(CutCertificate {
        s,
        t,
        direct_edge,
        cut,
        witness_paths,
    })
}

/// Minimum set of vertices from `allowed` meeting every `s → t` path whose interior lies in
/// `allowed`; `None` when `s → t` is an edge.
pub(crate) fn min_cut_within(tour: &Tournament, s: Vertex, t: Vertex, allowed: &VertexSet) -> Option<Vec<Vertex>> {
    if tour.has_edge(s, t) {
        return None;
    }
    let mut allowed = allowed.clone();
    allowed.remove(s);
    allowed.remove(t);
    let mut flow = SplitFlow::new(tour, s, t, allowed);
    let visited = flow.run(usize::MAX).expect("uncapped flow always ends with a failed search");
    Some(
        flow.allowed
            .iter()
            .filter(|&v| visited[2 * v + IN] && !visited[2 * v + OUT])
            .collect(),
    )
}

/// Internally disjoint `s → t` paths, stopping once `cap` are found (a direct edge counts as one).
pub fn local_connectivity(tour: &Tournament, s: Vertex, t: Vertex, cap: usize) -> Result<usize> {
    check_pair(tour, s, t)?;
    let direct = usize::from(tour.has_edge(s, t));
    if direct >= cap {
        return Ok(direct);
    }
    let mut flow = SplitFlow::new(tour, s, t, tour.vertices());
    flow.run(cap - direct);
    Ok(flow.value + direct)
}

/// Outcome of a strong-connectivity test.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectivityVerdict {
    pub k: usize,
    pub holds: bool,
    pub reason: Option<String>,
    /// A set of fewer than `k` vertices whose removal destroys strong connectivity.
    pub separator: Option<Vec<Vertex>>,
    /// The ordered pair the separator separates.
    pub pair: Option<(Vertex, Vertex)>,
    pub pairs_checked: usize,
}

impl ConnectivityVerdict {
    /// Checks the negative witness by direct reachability.
    pub fn verify_separator(&self, tour: &Tournament) -> bool {
        let (Some(sep), Some((s, t))) = (&self.separator, self.pair) else {
            return false;
        };
        let Ok(sep) = VertexSet::from_slice(tour.order(), sep) else {
            return false;
        };
        if sep.len() >= self.k || sep.contains(s) || sep.contains(t) {
            return false;
        }
        let mut allowed = tour.vertices();
        allowed.difference_with(&sep);
        !tour.reachable_within(s, &allowed).contains(t)
    }
}

/// Ordered pairs `(u, w)` with `u` among the first `k` vertices and no edge `u → w`, in both directions.
fn even_pairs(tour: &Tournament, k: usize) -> Vec<(Vertex, Vertex)> {
    let n = tour.order();
    let mut pairs = Vec::new();
    for u in 0..k.min(n) {
        for w in 0..n {
            if w == u {
                continue;
            }
            if !tour.has_edge(u, w) {
                pairs.push((u, w));
            }
            if !tour.has_edge(w, u) && w >= k {
                pairs.push((w, u));
            }
        }
    }
    pairs
}

/// Decides strong `k`-connectivity.
///
/// A separator `S` with `|S| < k` misses one of the first `k` vertices `u`,
/// and separates it from some `w`; in a tournament the separated direction is
/// never an edge, so only non-edges incident to those `k` vertices are tested.
pub fn is_k_connected(tour: &Tournament, k: usize) -> ConnectivityVerdict {
    let n = tour.order();
    if n < k + 1 {
        return ConnectivityVerdict {
            k,
            holds: false,
            reason: Some("too few vertices".into()),
            separator: None,
            pair: None,
            pairs_checked: 0,
        };
    }
    if k == 0 {
        return ConnectivityVerdict {
            k,
            holds: true,
            reason: None,
            separator: None,
            pair: None,
            pairs_checked: 0,
        };
    }
    let pairs = even_pairs(tour, k);
    let failing = pairs
        .par_iter()
        .enumerate()
        .find_first(|(_, &(s, t))| local_connectivity(tour, s, t, k).unwrap() < k)
        .map(|(i, &p)| (i, p));
    match failing {
        None => ConnectivityVerdict {
            k,
            holds: true,
            reason: None,
            separator: None,
            pair: None,
            pairs_checked: pairs.len(),
        },
        Some((i, (s, t))) => {
            let cert = min_vertex_cut(tour, s, t).unwrap();
            ConnectivityVerdict {
                k,
                holds: false,
                reason: Some(format!("{} separates {s} from {t}", cert.cut.len())),
                separator: Some(cert.cut),
                pair: Some((s, t)),
                pairs_checked: i + 1,
            }
        }
    }
}

/// Vertex connectivity with a minimum separator (absent when no separator exists).
#[derive(Debug, Clone, Serialize)]
pub struct Connectivity {
    pub kappa: usize,
    pub separator: Option<Vec<Vertex>>,
    pub pair: Option<(Vertex, Vertex)>,
}

/// Largest `k` for which the tournament is strongly `k`-connected.
pub fn vertex_connectivity(tour: &Tournament) -> Connectivity {
    let n = tour.order();
    let mut best = (n - 1).min(tour.min_out_degree()).min(tour.min_in_degree());
    let mut witness = None;
    let mut i = 0;
    while i <= best && i < n {
        let u = i;
        let pairs: Vec<(Vertex, Vertex)> = (0..n)
            .filter(|&w| w != u)
            .flat_map(|w| [(u, w), (w, u)])
            .filter(|&(a, b)| !tour.has_edge(a, b))
            .collect();
        let cap = best;
        let found = pairs
            .par_iter()
            .map(|&(a, b)| (local_connectivity(tour, a, b, cap).unwrap(), (a, b)))
            .min_by_key(|&(c, p)| (c, p));
        if let Some((c, p)) = found {
            if c < best {
                best = c;
                witness = Some(p);
            }
        }
        i += 1;
    }
    match witness {
        Some((a, b)) => {
            let cert = min_vertex_cut(tour, a, b).unwrap();
            Connectivity {
                kappa: best,
                separator: Some(cert.cut),
                pair: Some((a, b)),
            }
        }
        None if best < n - 1 || n == 1 => {
            // the degree bound was tight: the in- or out-neighbourhood of a vertex separates it
            let v = (0..n)
                .find(|&v| tour.out_degree(v) == best || tour.in_degree(v) == best)
                .unwrap();
            if n == 1 {
                return Connectivity {
                    kappa: 0,
                    separator: None,
                    pair: None,
                };
            }
            let (sep, pair) = if tour.out_degree(v) == best {
                let w = (0..n).find(|&w| w != v && !tour.has_edge(v, w)).unwrap();
                (tour.out_set(v).to_vec(), (v, w))
            } else {
                let w = (0..n).find(|&w| w != v && !tour.has_edge(w, v)).unwrap();
                (tour.in_set(v).to_vec(), (w, v))
            };
            Connectivity {
                kappa: best,
                separator: Some(sep),
                pair: Some(pair),
            }
        }
        None => Connectivity {
            kappa: best,
            separator: None,
            pair: None,
        },
    }
}

/// Vertex-disjoint paths from `sources` into `sinks ∪ {special}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathSystem {
    pub paths: Vec<Path>,
    pub sources: VertexSet,
    pub sinks: VertexSet,
    pub special: Option<Vertex>,
}

impl PathSystem {
    pub fn total_vertices(&self) -> usize {
        self.paths.iter().map(Path::vertex_count).sum()
    }

    pub fn union(&self) -> VertexSet {
        let mut u = VertexSet::new(self.sources.universe());
        for p in &self.paths {
            for &v in p.vertices() {
                u.insert(v);
            }
        }
        u
    }

    fn is_target(&self, v: Vertex) -> bool {
        self.sinks.contains(v) || self.special == Some(v)
    }

    /// Audits orientation, disjointness and endpoint rules; returns the first violation.
    pub fn validate(&self, tour: &Tournament) -> std::result::Result<(), String> {
        let mut seen = VertexSet::new(tour.order());
        for (i, p) in self.paths.iter().enumerate() {
            p.validate(tour).map_err(|e| format!("path {i}: {e}"))?;
            let (a, b) = (p.initial().unwrap(), p.terminal().unwrap());
            if !self.sources.contains(a) {
                return Err(format!("path {i} starts at {a}, not a source"));
            }
            if !self.is_target(b) {
                return Err(format!("path {i} ends at {b}, not a sink"));
            }
            for &v in p.vertices() {
                if !seen.insert(v) {
                    return Err(format!("disjointness: vertex {v} reused by path {i}"));
                }
            }
        }
        Ok(())
    }

    /// Paths in this system that end in `v`.
    pub fn path_ending_at(&self, v: Vertex) -> Option<usize> {
        self.paths.iter().position(|p| p.terminal() == Some(v))
    }
}

#[derive(Clone, Copy)]
struct Arc {
    to: usize,
    rev: usize,
    cap: i64,
    cost: i64,
}

/// Small min-cost-flow network solved by successive shortest paths.
pub(crate) struct Network {
    adj: Vec<Vec<Arc>>,
}

impl Network {
    pub(crate) fn new(nodes: usize) -> Self {
        Network {
            adj: vec![Vec::new(); nodes],
        }
    }

    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        let rf = self.adj[to].len();
        let rt = self.adj[from].len();
        self.adj[from].push(Arc { to, rev: rf, cap, cost });
        self.adj[to].push(Arc {
            to: from,
            rev: rt,
            cap: 0,
            cost: -cost,
        });
    }

    /// Pushes up to `want` units; returns `(flow, cost)`. Costs must be non-negative.
    pub(crate) fn min_cost_flow(&mut self, src: usize, dst: usize, want: i64) -> (i64, i64) {
        let n = self.adj.len();
        let mut potential = vec![0i64; n];
        let (mut flow, mut cost) = (0, 0);
        while flow < want {
            let mut dist = vec![i64::MAX; n];
            let mut from: Vec<(usize, usize)> = vec![(usize::MAX, 0); n];
            let mut heap = std::collections::BinaryHeap::new();
            dist[src] = 0;
            heap.push(std::cmp::Reverse((0i64, src)));
            while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for (i, a) in self.adj[u].iter().enumerate() {
                    if a.cap <= 0 {
                        continue;
                    }
                    let nd = d + a.cost + potential[u] - potential[a.to];
                    if nd < dist[a.to] {
                        dist[a.to] = nd;
                        from[a.to] = (u, i);
                        heap.push(std::cmp::Reverse((nd, a.to)));
                    }
                }
            }
            if dist[dst] == i64::MAX {
                break;
            }
            for v in 0..n {
                if dist[v] != i64::MAX {
                    potential[v] += dist[v];
                }
            }
            let mut push = want - flow;
            let mut v = dst;
            while v != src {
                let (u, i) = from[v];
                push = push.min(self.adj[u][i].cap);
                v = u;
            }
            let mut v = dst;
            while v != src {
                let (u, i) = from[v];
                let rev = self.adj[u][i].rev;
                self.adj[u][i].cap -= push;
                self.adj[v][rev].cap += push;
                cost += push * self.adj[u][i].cost;
                v = u;
            }
            flow += push;
        }
        (flow, cost)
    }

    /// Nodes reachable from `src` in the residual network.
    pub(crate) fn residual_reach(&self, src: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[src] = true;
        let mut stack = vec![src];
        while let Some(u) = stack.pop() {
            for a in &self.adj[u] {
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }

    /// Arcs out of `u` carrying positive flow (original arcs only).
    pub(crate) fn flow_arcs(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u]
            .iter()
            .filter(|a| a.cost >= 0 && self.adj[a.to][a.rev].cap > 0 && self.adj[a.to][a.rev].cost <= 0)
            .map(|a| a.to)
    }
}

/// Minimum-total-length system of `count` disjoint paths from `sources` to `sinks ∪ {special}` avoiding `forbidden`.
///
/// Paths never pass through another source or continue past a sink. Ties
/// between systems of equal total length are broken by the deterministic
/// arc order of the network, not lexicographically.
pub fn min_cost_disjoint_system(
    tour: &Tournament,
    sources: &VertexSet,
    sinks: &VertexSet,
    special: Option<Vertex>,
    forbidden: &VertexSet,
    count: usize,
) -> Result<PathSystem> {
    let n = tour.order();
    for set in [sources, sinks, forbidden] {
        if set.universe() != n {
            return Err(Error::domain("vertex set built over a different universe"));
        }
    }
    let mut targets = sinks.clone();
    if let Some(v) = special {
        if v >= n {
            return Err(Error::domain(format!("special vertex {v} out of range")));
        }
        targets.insert(v);
    }
    if !targets.is_disjoint(sources) {
        return Err(Error::domain("sinks overlap sources"));
    }
    let mut endpoints = sources.union(&targets);
    if !forbidden.is_disjoint(&endpoints) {
        return Err(Error::domain("forbidden set meets an endpoint"));
    }
    if sources.len() < count {
        return Err(Error::domain(format!(
            "{count} paths requested from {} sources",
            sources.len()
        )));
    }
    endpoints.clear();

    // node ids: v_in = 2v, v_out = 2v+1, super source 2n, super sink 2n+1
    let (ss, tt) = (2 * n, 2 * n + 1);
    let big = count as i64 + 1;
    let mut net = Network::new(2 * n + 2);
    for v in 0..n {
        if forbidden.contains(v) {
            continue;
        }
        net.add_arc(2 * v, 2 * v + 1, 1, 1);
        if sources.contains(v) {
            net.add_arc(ss, 2 * v, 1, 0);
        }
        if targets.contains(v) {
            net.add_arc(2 * v + 1, tt, 1, 0);
            continue;
        }
        let mut outs = tour.out_set(v).difference(forbidden);
        outs.difference_with(sources);
        for w in outs.iter() {
            net.add_arc(2 * v + 1, 2 * w, big, 0);
        }
    }
    let (flow, _) = net.min_cost_flow(ss, tt, count as i64);
    if (flow as usize) < count {
        let reach = net.residual_reach(ss);
        let separator: Vec<Vertex> = (0..n)
            .filter(|&v| reach[2 * v] && !reach[2 * v + 1])
            .chain((0..n).filter(|&v| targets.contains(v) && reach[2 * v + 1] && !reach[tt]))
            .collect();
        let mut separator = separator;
        // sources whose feeding arc is saturated but not reached belong to the cut too
        separator.extend((0..n).filter(|&v| sources.contains(v) && !reach[2 * v] && !forbidden.contains(v)));
        separator.sort_unstable();
        separator.dedup();
        return Err(Error::Infeasible {
            needed: count,
            separator,
        });
    }

    let mut paths = Vec::with_capacity(count);
    for a in sources.iter() {
        if !net.flow_arcs(ss).any(|x| x == 2 * a) {
            continue;
        }
        let mut p = vec![a];
        let mut cur = a;
        while !targets.contains(cur) {
            let nxt = net
                .flow_arcs(2 * cur + 1)
                .find(|&x| x != tt && x % 2 == 0)
                .expect("flow conservation");
            cur = nxt / 2;
            p.push(cur);
        }
        paths.push(Path::new(p));
    }
    Ok(PathSystem {
        paths,
        sources: sources.clone(),
        sinks: sinks.clone(),
        special,
    })
}

/// Shortest path from `from` to `to` whose interior lies in `allowed`.
pub fn shortest_path_within(
    tour: &Tournament,
    from: Vertex,
    to: Vertex,
    allowed: &VertexSet,
) -> Option<Path> {
    if from == to {
        return Some(Path::new(vec![from]));
    }
    let n = tour.order();
    let mut parent = vec![NONE; n];
    let mut unseen = allowed.clone();
    unseen.remove(from);
    unseen.insert(to);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if tour.has_edge(u, to) {
            let mut p = vec![to, u];
            let mut c = u;
            while parent[c] != NONE {
                c = parent[c];
                p.push(c);
            }
            p.reverse();
            return Some(Path::new(p));
        }
        let mut next = tour.out_set(u).intersection(&unseen);
        next.remove(to);
        for w in next.iter() {
            unseen.remove(w);
            parent[w] = u;
            queue.push_back(w);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle() -> Tournament {
        Tournament::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn direct_edge_is_uncuttable() {
        let c = min_vertex_cut(&three_cycle(), 0, 1).unwrap();
        assert!(c.direct_edge);
        assert!(c.cut.is_empty());
        assert_eq!(c.witness_paths, vec![Path::new(vec![0, 1])]);
        assert!(c.verify(&three_cycle()));
    }

    #[test]
    fn unreachable_target_has_empty_cut() {
        let t = Tournament::transitive(4);
        let c = min_vertex_cut(&t, 3, 0).unwrap();
        assert!(!c.direct_edge);
        assert!(c.cut.is_empty() && c.witness_paths.is_empty());
        assert!(c.verify(&t));
        assert!(min_vertex_cut(&t, 2, 2).is_err());
    }

    #[test]
    fn small_connectivities() {
        assert_eq!(vertex_connectivity(&three_cycle()).kappa, 1);
        assert_eq!(vertex_connectivity(&Tournament::transitive(6)).kappa, 0);
        assert_eq!(vertex_connectivity(&Tournament::rotational(7).unwrap()).kappa, 3);
        assert_eq!(vertex_connectivity(&Tournament::random(1, 0)).kappa, 0);
        let v = is_k_connected(&three_cycle(), 3);
        assert!(!v.holds);
        assert_eq!(v.reason.as_deref(), Some("too few vertices"));
    }

    #[test]
    fn negative_verdict_carries_separator() {
        let t = Tournament::transitive(5);
        let v = is_k_connected(&t, 1);
        assert!(!v.holds);
        assert!(v.verify_separator(&t));
        let r = Tournament::rotational(9).unwrap();
        assert!(is_k_connected(&r, 4).holds);
        let v = is_k_connected(&r, 5);
        assert!(!v.holds && v.verify_separator(&r));
    }

    #[test]
    fn single_edge_system() {
        let t = Tournament::transitive(2);
        let src = VertexSet::from_slice(2, &[0]).unwrap();
        let snk = VertexSet::from_slice(2, &[1]).unwrap();
        let sys = min_cost_disjoint_system(&t, &src, &snk, None, &VertexSet::new(2), 1).unwrap();
        assert_eq!(sys.paths, vec![Path::new(vec![0, 1])]);
        assert_eq!(sys.total_vertices(), 2);
    }

    #[test]
    fn infeasible_system_reports_separator() {
        // two sources funnel through the single vertex 2
        let t = Tournament::from_fn(5, |u, v| !(u == 3 && v == 4) || true);
        let src = VertexSet::from_slice(5, &[0, 1]).unwrap();
        let snk = VertexSet::from_slice(5, &[3, 4]).unwrap();
        let forbidden = VertexSet::new(5);
        // transitive: 0->1 edges into sources are dropped, so both paths must avoid each other
        let sys = min_cost_disjoint_system(&t, &src, &snk, None, &forbidden, 2).unwrap();
        assert_eq!(sys.total_vertices(), 4);
        let back = Tournament::transitive(5);
        let src = VertexSet::from_slice(5, &[3, 4]).unwrap();
        let snk = VertexSet::from_slice(5, &[0, 1]).unwrap();
        match min_cost_disjoint_system(&back, &src, &snk, None, &forbidden, 2) {
            Err(Error::Infeasible { needed, separator }) => {
                assert_eq!(needed, 2);
                assert!(separator.len() < 2);
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn shortest_path_respects_allowed() {
        let t = three_cycle();
        let all = t.vertices();
        assert_eq!(shortest_path_within(&t, 1, 0, &all), Some(Path::new(vec![1, 2, 0])));
        let none = t.empty_set();
        assert_eq!(shortest_path_within(&t, 1, 0, &none), None);
    }
}
