//! Counterexample tournaments and independently checkable certificates for them.
//!
//! The first family is `(2k−1)`-connected with large minimum semi-degree but
//! not `k`-linked: every designated path must pass through a cut part `C` of
//! only `k − 1` vertices. The second is `(5k−1)`-connected but not
//! `2k`-linked: each of the `2k` designated paths needs a third vertex from a
//! core of `6k − 1` vertices.
//!
//! Certificates carry everything [`verify_certificate`] needs; the verifier
//! reads the tournament and the payload only.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::flow::is_k_connected;
use crate::oracle::{find_linkage_exact, LinkageInstance, LinkageStatus};
use crate::tournament::{rng_from_seed, Tournament, Vertex, VertexSet, GENERATOR};

pub const SCHEMA_VERSION: u32 = 1;

/// Regeneration attempts before a generator gives up.
pub const MAX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    C31,
    C32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction31Params {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    /// Smallest accepted size of the two `2m`-connected blobs.
    pub blob_floor: usize,
}

impl Construction31Params {
    pub fn new(k: usize, m: usize, n: usize, seed: u64) -> Self {
        Construction31Params {
            k,
            m,
            n,
            seed,
            blob_floor: 4 * m + 1,
        }
    }

    pub fn blob_size(&self) -> usize {
        (self.n + 1).saturating_sub(3 * self.k) / 2
    }

    fn validate(&self) -> Result<()> {
        let (k, m, n) = (self.k, self.m, self.n);
        if k < 2 {
            return Err(Error::Domain(format!("k = {k}, need k ≥ 2")));
        }
        if m < 2 * k {
            return Err(Error::Domain(format!("m = {m}, need m ≥ 2k = {}", 2 * k)));
        }
        if n + 1 < 3 * k || (n + 1 - 3 * k) % 2 != 0 {
            return Err(Error::Domain(format!("n − 3k + 1 must be even and non-negative, got n = {n}")));
        }
        let s = self.blob_size();
        // a 2m-connected blob needs semi-degrees of at least 2m
        let floor = self.blob_floor.max(4 * m + 1);
        if s < floor {
            return Err(Error::Domain(format!("blobs of {s} vertices, need at least {floor}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction32Params {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    /// Smallest accepted `|W|`.
    pub w_floor: usize,
}

impl Construction32Params {
    pub fn new(k: usize, n: usize, seed: u64) -> Self {
        Construction32Params { k, n, seed, w_floor: 6 * k }
    }

    fn validate(&self) -> Result<()> {
        let (k, n) = (self.k, self.n);
        if k < 3 {
            // T[X] must be strongly connected, impossible on two vertices
            return Err(Error::Domain(format!("k = {k}, need k ≥ 3")));
        }
        let core = 6 * k - 1;
        if n < core + self.w_floor.max(1) {
            return Err(Error::Domain(format!(
                "n = {n} leaves |W| = {}, need at least {}",
                n.saturating_sub(core),
                self.w_floor.max(1)
            )));
        }
        Ok(())
    }
}

/// Named vertex parts of a generated tournament and its designated linkage instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartMap {
    pub kind: ConstructionKind,
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub generator: String,
    pub attempts: usize,
    pub parts: BTreeMap<String, Vec<Vertex>>,
    /// Source and sink of every designated path.
    pub pairs: Vec<(Vertex, Vertex)>,
    pub params: Value,
}

impl PartMap {
    pub fn part(&self, name: &str) -> &[Vertex] {
        self.parts.get(name).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub tournament: Tournament,
    pub parts: PartMap,
}

/// Orientation table filled block by block.
struct Table {
    beats: Vec<Vec<bool>>,
}

impl Table {
    fn new(n: usize) -> Self {
        Table {
            beats: vec![vec![false; n]; n],
        }
    }

    fn arc(&mut self, u: Vertex, v: Vertex) {
        self.beats[u][v] = true;
        self.beats[v][u] = false;
    }

    fn all(&mut self, from: &[Vertex], to: &[Vertex]) {
        for &u in from {
            for &v in to {
                self.arc(u, v);
            }
        }
    }

    fn embed(&mut self, part: &[Vertex], inner: &Tournament) {
        for (a, &u) in part.iter().enumerate() {
            for (b, &v) in part.iter().enumerate() {
                if a != b && inner.has_edge(a, b) {
                    self.arc(u, v);
                }
            }
        }
    }

    fn finish(self) -> Tournament {
        Tournament::from_fn(self.beats.len(), |u, v| self.beats[u][v])
    }
}

/// Near-regular tournament on `s` vertices: a rotational tournament (plus a
/// balanced extra vertex when `s` is even), scrambled by reversing directed
/// triangles, which keeps every degree, and relabelled at random.
fn near_regular(s: usize, rng: &mut ChaCha8Rng) -> Tournament {
    let odd = if s % 2 == 1 { s } else { s - 1 };
    let half = odd / 2;
    let mut t = Table::new(s);
    for u in 0..odd {
        for d in 1..=half {
            t.arc(u, (u + d) % odd);
        }
    }
    if odd < s {
        let mut others: Vec<Vertex> = (0..odd).collect();
        others.shuffle(rng);
        let wins = if rng.gen() { half } else { half + 1 };
        for (i, &v) in others.iter().enumerate() {
            if i < wins {
                t.arc(odd, v);
            } else {
                t.arc(v, odd);
            }
        }
    }
    if s >= 3 {
        for _ in 0..8 * s * s {
            let (u, v, w) = (rng.gen_range(0..s), rng.gen_range(0..s), rng.gen_range(0..s));
            if u != v && v != w && u != w && t.beats[u][v] && t.beats[v][w] && t.beats[w][u] {
                t.arc(v, u);
                t.arc(w, v);
                t.arc(u, w);
            }
        }
    }
    let mut perm: Vec<Vertex> = (0..s).collect();
    perm.shuffle(rng);
    Tournament::from_fn(s, |a, b| t.beats[perm[a]][perm[b]])
}

/// Draws from `gen` until it reports no rejection reason, at most [`MAX_ATTEMPTS`] times.
fn regenerate<T>(
    what: &str,
    rng: &mut ChaCha8Rng,
    mut gen: impl FnMut(&mut ChaCha8Rng) -> (T, Option<String>),
) -> Result<(T, usize)> {
    let mut log = Vec::new();
    for attempt in 1..=MAX_ATTEMPTS {
        match gen(rng) {
            (t, None) => return Ok((t, attempt)),
            (_, Some(reason)) => log.push(format!("attempt {attempt}: {reason}")),
        }
    }
    Err(Error::Generation {
        attempts: MAX_ATTEMPTS,
        reason: format!("no {what}"),
        log,
    })
}

fn range(lo: usize, hi: usize) -> Vec<Vertex> {
    (lo..hi).collect()
}

/// Builds the `(2k−1)`-connected, not `k`-linked tournament.
///
/// Parts, in id order: `A = {x_1..x_k}`, `B = {y_1..y_k}`, `C` with `k − 1`
/// vertices, then the blobs `X` and `Y` of `(n − 3k + 1)/2` vertices each.
/// Blocks: `Y → X`, `A → C`, `C → B`, `X → C`, `C → Y`, `Y → A`, `B → X`, and
/// `A → B` except `y_i → x_i`. Every vertex of `A` has at least `m` out- and
/// `m` in-neighbours in `X`, and likewise for `B` in `Y`.
pub fn build_construction_31(params: &Construction31Params) -> Result<Construction> {
    params.validate()?;
    let (k, m, n) = (params.k, params.m, params.n);
    let s = params.blob_size();
    let a = range(0, k);
    let b = range(k, 2 * k);
    let c = range(2 * k, 3 * k - 1);
    let x = range(3 * k - 1, 3 * k - 1 + s);
    let y = range(3 * k - 1 + s, n);

    let mut rng = rng_from_seed(params.seed);
    let blob = |rng: &mut ChaCha8Rng| {
        let t = near_regular(s, rng);
        let v = is_k_connected(&t, 2 * m);
        (t, v.reason)
    };
    let what = format!("{}-connected blob on {s} vertices", 2 * m);
    let (bx, a1) = regenerate(&what, &mut rng, blob)?;
    let (by, a2) = regenerate(&what, &mut rng, blob)?;
    let attempts = a1 + a2;

    let mut t = Table::new(n);
    t.embed(&x, &bx);
    t.embed(&y, &by);
    for part in [&a, &b, &c] {
        let inner = Tournament::random_with(part.len(), &mut rng);
        t.embed(part, &inner);
    }
    t.all(&y, &x);
    t.all(&a, &c);
    t.all(&c, &b);
    t.all(&x, &c);
    t.all(&c, &y);
    t.all(&y, &a);
    t.all(&b, &x);
    t.all(&a, &b);
    for i in 0..k {
        t.arc(b[i], a[i]);
    }
    for (side, blob) in [(&a, &x), (&b, &y)] {
        for &u in side.iter() {
            let mut order = blob.clone();
            order.shuffle(&mut rng);
            for (j, &v) in order.iter().enumerate() {
                let out = if j < m {
                    true
                } else if j < 2 * m {
                    false
                } else {
                    rng.gen()
                };
                if out {
                    t.arc(u, v);
                } else {
                    t.arc(v, u);
                }
            }
        }
    }

    let parts = BTreeMap::from([
        ("A".to_string(), a.clone()),
        ("B".to_string(), b.clone()),
        ("C".to_string(), c),
        ("X".to_string(), x),
        ("Y".to_string(), y),
    ]);
    Ok(Construction {
        tournament: t.finish(),
        parts: PartMap {
            kind: ConstructionKind::C31,
            k,
            n,
            seed: params.seed,
            generator: GENERATOR.into(),
            attempts,
            parts,
            pairs: a.into_iter().zip(b).collect(),
            params: serde_json::to_value(params).expect("params serialize"),
        },
    })
}

/// Builds the `(5k−1)`-connected, not `2k`-linked tournament.
///
/// Parts, in id order: `X`, `Y` with `k` vertices each, `S` with `4k − 1`
/// and `W` with the rest. `y'_i` is the `i`-th vertex of `S` and `x'_i` the
/// `(k+i)`-th. Blocks: `X → Y`, `Y → W`, `W → X`, `X → S` except `y'_i → x_i`,
/// `S → Y` except `y_i → x'_i`. The designated pairs are `(x_i, y'_i)`
/// followed by `(x'_i, y_i)`.
pub fn build_construction_32(params: &Construction32Params) -> Result<Construction> {
    params.validate()?;
    let (k, n) = (params.k, params.n);
    let x = range(0, k);
    let y = range(k, 2 * k);
    let s = range(2 * k, 6 * k - 1);
    let w = range(6 * k - 1, n);
    let sw: Vec<Vertex> = s.iter().chain(&w).copied().collect();
    let need = 5 * k - 1;

    let mut rng = rng_from_seed(params.seed);
    let (core, a1) = regenerate(&format!("{need}-connected S∪W"), &mut rng, |rng| {
        let core = Tournament::random_with(sw.len(), rng);
        let v = is_k_connected(&core, need);
        (core, v.reason)
    })?;
    let strong = |rng: &mut ChaCha8Rng| {
        let t = Tournament::random_with(k, rng);
        let ok = t.is_strongly_connected();
        (t, (!ok).then(|| "not strongly connected".to_string()))
    };
    let (tx, a2) = regenerate("strong T[X]", &mut rng, strong)?;
    let (ty, a3) = regenerate("strong T[Y]", &mut rng, strong)?;
    let attempts = a1 + a2 + a3;

    let mut t = Table::new(n);
    t.embed(&sw, &core);
    t.embed(&x, &tx);
    t.embed(&y, &ty);
    t.all(&x, &y);
    t.all(&y, &w);
    t.all(&w, &x);
    t.all(&x, &s);
    t.all(&s, &y);
    let (y_prime, x_prime) = (&s[..k], &s[k..2 * k]);
    for i in 0..k {
        t.arc(y_prime[i], x[i]);
        t.arc(y[i], x_prime[i]);
    }

    let mut pairs: Vec<(Vertex, Vertex)> = x.iter().copied().zip(y_prime.iter().copied()).collect();
    pairs.extend(x_prime.iter().copied().zip(y.iter().copied()));
    let parts = BTreeMap::from([
        ("X".to_string(), x),
        ("Y".to_string(), y),
        ("S".to_string(), s),
        ("W".to_string(), w),
    ]);
    Ok(Construction {
        tournament: t.finish(),
        parts: PartMap {
            kind: ConstructionKind::C32,
            k,
            n,
            seed: params.seed,
            generator: GENERATOR.into(),
            attempts,
            parts,
            pairs,
            params: serde_json::to_value(params).expect("params serialize"),
        },
    })
}

/// `target` cannot be reached from `source` through `allowed`: `reached` is the
/// closed set of vertices reachable from `source` inside `allowed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unreachable {
    pub source: Vertex,
    pub target: Vertex,
    pub reached: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityPayload {
    /// SHA-256 of the tournament's text form; the certificate speaks about this tournament only.
    pub tournament: String,
    pub k: usize,
    pub holds: bool,
    pub separator: Option<Vec<Vertex>>,
    pub pair: Option<(Vertex, Vertex)>,
    pub pairs_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePayload {
    /// SHA-256 of the tournament's text form; the certificate speaks about this tournament only.
    pub tournament: String,
    pub out_degrees: Vec<usize>,
    pub in_degrees: Vec<usize>,
    pub min_out: usize,
    pub min_in: usize,
    pub floor: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub status: LinkageStatus,
    pub nodes_explored: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotLinked31Payload {
    /// SHA-256 of the tournament's text form; the certificate speaks about this tournament only.
    pub tournament: String,
    pub parts: PartMap,
    /// One witness per designated pair, inside `V ∖ (C ∪ terminals) ∪ {x_i, y_i}`.
    pub witnesses: Vec<Unreachable>,
    /// Every designated path needs its own vertex of `C`: `k` paths against `|C|`.
    pub paths_through_c: usize,
    pub c_size: usize,
    pub oracle: Option<OracleRecord>,
    /// Checks that failed while certifying; empty for a valid certificate.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotLinked32Payload {
    /// SHA-256 of the tournament's text form; the certificate speaks about this tournament only.
    pub tournament: String,
    pub parts: PartMap,
    /// One witness per designated pair, inside `W ∪ {source, target}`.
    pub witnesses: Vec<Unreachable>,
    pub paths: usize,
    /// Two endpoints and at least one interior vertex of every path lie in `X ∪ Y ∪ S`.
    pub core_vertices_needed: usize,
    pub core_size: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum CertificateBody {
    Connectivity(ConnectivityPayload),
    Degree(DegreePayload),
    #[serde(rename = "not-linked-31")]
    NotLinked31(NotLinked31Payload),
    #[serde(rename = "not-linked-32")]
    NotLinked32(NotLinked32Payload),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: CertificateBody,
    pub params: Value,
    pub seed: Option<u64>,
    pub verdict: bool,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self.body {
            CertificateBody::Connectivity(_) => "connectivity",
            CertificateBody::Degree(_) => "degree",
            CertificateBody::NotLinked31(_) => "not-linked-31",
            CertificateBody::NotLinked32(_) => "not-linked-32",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

/// Strong `k`-connectivity with the flow checker's witness.
pub fn certify_connectivity(tour: &Tournament, k: usize) -> Certificate {
    let v = is_k_connected(tour, k);
    Certificate {
        schema_version: SCHEMA_VERSION,
        verdict: v.holds,
        body: CertificateBody::Connectivity(ConnectivityPayload {
            tournament: tournament_digest(tour),
            k,
            holds: v.holds,
            separator: v.separator,
            pair: v.pair,
            pairs_checked: v.pairs_checked,
        }),
        params: json!({ "k": k, "n": tour.order() }),
        seed: None,
    }
}

/// Full degree table against `floor` on both semi-degrees.
pub fn certify_degrees(tour: &Tournament, floor: usize) -> Certificate {
    let (out_degrees, in_degrees): (Vec<usize>, Vec<usize>) = tour.degrees().into_iter().unzip();
    let min_out = out_degrees.iter().copied().min().unwrap_or(0);
    let min_in = in_degrees.iter().copied().min().unwrap_or(0);
    Certificate {
        schema_version: SCHEMA_VERSION,
        verdict: min_out >= floor && min_in >= floor,
        body: CertificateBody::Degree(DegreePayload {
            tournament: tournament_digest(tour),
            out_degrees,
            in_degrees,
            min_out,
            min_in,
            floor,
        }),
        params: json!({ "floor": floor, "n": tour.order() }),
        seed: None,
    }
}

/// Hex SHA-256 of the tournament's text serialization.
pub fn tournament_digest(tour: &Tournament) -> String {
    format!("{:x}", Sha256::digest(tour.to_text().as_bytes()))
}

fn to_set(n: usize, vs: &[Vertex]) -> Option<VertexSet> {
    VertexSet::from_slice(n, vs).ok()
}

fn witness(tour: &Tournament, source: Vertex, target: Vertex, allowed: &VertexSet) -> Unreachable {
    Unreachable {
        source,
        target,
        reached: tour.reachable_within(source, allowed).to_vec(),
    }
}

/// Closure check of a witness: `source` in, `target` out, nothing leaves `reached` inside `allowed`.
fn witness_holds(tour: &Tournament, w: &Unreachable, allowed: &VertexSet) -> bool {
    let n = tour.order();
    let Some(reached) = to_set(n, &w.reached) else {
        return false;
    };
    if w.source >= n || w.target >= n || !reached.contains(w.source) || reached.contains(w.target) {
        return false;
    }
    if !reached.is_subset(allowed) || !allowed.contains(w.target) {
        return false;
    }
    let closed = reached.iter().all(|u| tour.out_set(u).intersection(allowed).is_subset(&reached));
    closed
}

/// Parts must be disjoint and cover `0..n`; returns the union of the named parts.
fn check_parts(parts: &PartMap, n: usize, names: &[&str], failures: &mut Vec<String>) -> Option<Vec<VertexSet>> {
    if parts.n != n {
        failures.push(format!("part map is for {} vertices, tournament has {n}", parts.n));
        return None;
    }
    let mut seen = VertexSet::new(n);
    let mut sets = Vec::new();
    for name in names {
        let Some(set) = parts.parts.get(*name).and_then(|p| to_set(n, p)) else {
            failures.push(format!("part {name} missing or out of range"));
            return None;
        };
        if !seen.is_disjoint(&set) {
            failures.push(format!("part {name} overlaps another part"));
            return None;
        }
        seen.union_with(&set);
        sets.push(set);
    }
    if seen.len() != n {
        failures.push(format!("parts cover {} of {n} vertices", seen.len()));
        return None;
    }
    Some(sets)
}

fn pairs_disjoint(pairs: &[(Vertex, Vertex)], n: usize) -> bool {
    let mut seen = VertexSet::new(n);
    pairs
        .iter()
        .all(|&(s, t)| s < n && t < n && s != t && seen.insert(s) && seen.insert(t))
}

fn check_31(tour: &Tournament, parts: &PartMap, witnesses: Option<&[Unreachable]>) -> (Vec<Unreachable>, Vec<String>) {
    let n = tour.order();
    let mut failures = Vec::new();
    let Some(sets) = check_parts(parts, n, &["A", "B", "C", "X", "Y"], &mut failures) else {
        return (Vec::new(), failures);
    };
    let (a, b, c) = (&sets[0], &sets[1], &sets[2]);
    let k = parts.pairs.len();
    if !pairs_disjoint(&parts.pairs, n) {
        failures.push("designated pairs share endpoints".into());
        return (Vec::new(), failures);
    }
    let sources = VertexSet::from_iter_in(n, parts.pairs.iter().map(|p| p.0));
    let sinks = VertexSet::from_iter_in(n, parts.pairs.iter().map(|p| p.1));
    if &sources != a || &sinks != b {
        failures.push("A and B must be exactly the designated sources and sinks".into());
    }
    if c.len() >= k {
        failures.push(format!("|C| = {} leaves room for {k} paths", c.len()));
    }
    let mut blocked = a.union(b);
    blocked.union_with(c);
    let allowed_for = |s: Vertex, t: Vertex| {
        let mut allowed = tour.vertices();
        allowed.difference_with(&blocked);
        allowed.insert(s);
        allowed.insert(t);
        allowed
    };
    let ws: Vec<Unreachable> = match witnesses {
        Some(ws) => ws.to_vec(),
        None => parts
            .pairs
            .par_iter()
            .map(|&(s, t)| witness(tour, s, t, &allowed_for(s, t)))
            .collect(),
    };
    if ws.len() != k {
        failures.push(format!("{} witnesses for {k} pairs", ws.len()));
    }
    let bad: Vec<String> = ws
        .par_iter()
        .zip(&parts.pairs)
        .filter(|(w, &(s, t))| (w.source, w.target) != (s, t) || !witness_holds(tour, w, &allowed_for(s, t)))
        .map(|(w, _)| format!("{} reaches {} while avoiding C", w.source, w.target))
        .collect();
    failures.extend(bad);
    (ws, failures)
}

/// Certifies that the designated pairs of a first-family tournament cannot be linked.
///
/// Every `x_i → y_i` path avoiding the other terminals must enter `C`, shown
/// by a closed reachable set per pair; `|C| < k` finishes the argument. With
/// `oracle_budget` set, the exact search is run as an independent cross-check
/// and a found linkage falsifies the certificate.
pub fn certify_not_linked_31(tour: &Tournament, parts: &PartMap, oracle_budget: Option<u64>) -> Certificate {
    let (witnesses, mut failures) = check_31(tour, parts, None);
    let oracle = oracle_budget.and_then(|budget| {
        let inst = LinkageInstance::new(tour.order(), parts.pairs.clone()).ok()?;
        let v = find_linkage_exact(tour, &inst, budget).ok()?;
        Some(OracleRecord {
            status: v.status,
            nodes_explored: v.nodes_explored,
            budget,
        })
    });
    if oracle.as_ref().is_some_and(|o| o.status == LinkageStatus::Linked) {
        failures.push("exact search linked the designated pairs".into());
    }
    let c_size = parts.part("C").len();
    Certificate {
        schema_version: SCHEMA_VERSION,
        verdict: failures.is_empty(),
        params: parts.params.clone(),
        seed: Some(parts.seed),
        body: CertificateBody::NotLinked31(NotLinked31Payload {
            tournament: tournament_digest(tour),
            parts: parts.clone(),
            witnesses,
            paths_through_c: parts.pairs.len(),
            c_size,
            oracle,
            failures,
        }),
    }
}

fn check_32(tour: &Tournament, parts: &PartMap, witnesses: Option<&[Unreachable]>) -> (Vec<Unreachable>, usize, Vec<String>) {
    let n = tour.order();
    let mut failures = Vec::new();
    let Some(sets) = check_parts(parts, n, &["S", "W", "X", "Y"], &mut failures) else {
        return (Vec::new(), 0, failures);
    };
    let w = &sets[1];
    let core = tour.vertices().difference(w);
    if !pairs_disjoint(&parts.pairs, n) {
        failures.push("designated pairs share endpoints".into());
        return (Vec::new(), core.len(), failures);
    }
    if let Some(&(s, t)) = parts.pairs.iter().find(|&&(s, t)| w.contains(s) || w.contains(t)) {
        failures.push(format!("pair ({s}, {t}) has an endpoint in W"));
    }
    let needed = 3 * parts.pairs.len();
    if needed <= core.len() {
        failures.push(format!("{needed} core vertices needed, {} available", core.len()));
    }
    let allowed_for = |s: Vertex, t: Vertex| {
        let mut allowed = w.clone();
        allowed.insert(s);
        allowed.insert(t);
        allowed
    };
    let ws: Vec<Unreachable> = match witnesses {
        Some(ws) => ws.to_vec(),
        None => parts
            .pairs
            .par_iter()
            .map(|&(s, t)| witness(tour, s, t, &allowed_for(s, t)))
            .collect(),
    };
    if ws.len() != parts.pairs.len() {
        failures.push(format!("{} witnesses for {} pairs", ws.len(), parts.pairs.len()));
    }
    let bad: Vec<String> = ws
        .par_iter()
        .zip(&parts.pairs)
        .filter(|(wt, &(s, t))| (wt.source, wt.target) != (s, t) || !witness_holds(tour, wt, &allowed_for(s, t)))
        .map(|(wt, _)| format!("{} reaches {} through W alone", wt.source, wt.target))
        .collect();
    failures.extend(bad);
    (ws, core.len(), failures)
}

/// Counting certificate that the designated `2k` pairs of a second-family tournament cannot be linked.
pub fn certify_not_linked_32(tour: &Tournament, parts: &PartMap) -> Certificate {
    let (witnesses, core_size, failures) = check_32(tour, parts, None);
    Certificate {
        schema_version: SCHEMA_VERSION,
        verdict: failures.is_empty(),
        params: parts.params.clone(),
        seed: Some(parts.seed),
        body: CertificateBody::NotLinked32(NotLinked32Payload {
            tournament: tournament_digest(tour),
            parts: parts.clone(),
            paths: parts.pairs.len(),
            core_vertices_needed: 3 * parts.pairs.len(),
            core_size,
            witnesses,
            failures,
        }),
    }
}

/// Re-runs every check recorded in `cert` against `tour`.
///
/// The payload's digest must match `tour`. A certificate whose recorded verdict is false never verifies. The exact
/// search recorded in a first-family certificate is corroboration only and is
/// not repeated; its recorded status must not be `Linked`.
pub fn verify_certificate(tour: &Tournament, cert: &Certificate) -> bool {
    if cert.schema_version != SCHEMA_VERSION || !cert.verdict {
        return false;
    }
    let digest = match &cert.body {
        CertificateBody::Connectivity(p) => &p.tournament,
        CertificateBody::Degree(p) => &p.tournament,
        CertificateBody::NotLinked31(p) => &p.tournament,
        CertificateBody::NotLinked32(p) => &p.tournament,
    };
    if *digest != tournament_digest(tour) {
        return false;
    }
    match &cert.body {
        CertificateBody::Connectivity(p) => {
            if !p.holds {
                return false;
            }
            is_k_connected(tour, p.k).holds
        }
        CertificateBody::Degree(p) => {
            let (outs, ins): (Vec<usize>, Vec<usize>) = tour.degrees().into_iter().unzip();
            outs == p.out_degrees
                && ins == p.in_degrees
                && outs.iter().min() == Some(&p.min_out)
                && ins.iter().min() == Some(&p.min_in)
                && p.min_out >= p.floor
                && p.min_in >= p.floor
        }
        CertificateBody::NotLinked31(p) => {
            let (_, failures) = check_31(tour, &p.parts, Some(&p.witnesses));
            failures.is_empty()
                && p.paths_through_c == p.parts.pairs.len()
                && p.c_size == p.parts.part("C").len()
                && p.c_size < p.paths_through_c
                && p.oracle.as_ref().is_none_or(|o| o.status != LinkageStatus::Linked)
                && p.failures.is_empty()
        }
        CertificateBody::NotLinked32(p) => {
            let (_, core_size, failures) = check_32(tour, &p.parts, Some(&p.witnesses));
            failures.is_empty()
                && core_size == p.core_size
                && p.paths == p.parts.pairs.len()
                && p.core_vertices_needed == 3 * p.paths
                && p.core_vertices_needed > p.core_size
                && p.failures.is_empty()
        }
    }
}
