//! Tournament representation, seeded generation and the plain-text exchange format.
//!
//! Vertices are dense ids `0..n`. Each tournament stores both its out- and
//! in-neighbourhoods as bitsets so that neighbourhood intersections (the bread
//! and butter of every algorithm in this crate) are word-parallel.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Name of the pseudo-random stream used by every seeded generator in this crate.
///
/// Pairs `{u, v}` with `u < v` are visited row-major and each consumes one
/// `bool` from a `ChaCha8Rng` seeded with `seed_from_u64`.
pub const GENERATOR: &str = "chacha8-v1";

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A subset of `0..universe`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    /// Builds a set, rejecting out-of-range or duplicate members.
    pub fn from_slice(universe: usize, members: &[Vertex]) -> Result<Self> {
        let mut s = Self::new(universe);
        for &v in members {
            if v >= universe {
                return Err(Error::domain(format!(
                    "vertex {v} out of range 0..{universe}"
                )));
            }
            if !s.insert(v) {
                return Err(Error::domain(format!("duplicate vertex {v}")));
            }
        }
        Ok(s)
    }

    /// Collects an iterator; panics on out-of-range members.
    pub fn from_iter_in(universe: usize, it: impl IntoIterator<Item = Vertex>) -> Self {
        let mut s = Self::new(universe);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        v < self.universe && self.words[v >> 6] >> (v & 63) & 1 == 1
    }

    /// Returns `true` when `v` was not already present.
    #[inline]
    pub fn insert(&mut self, v: Vertex) -> bool {
        assert!(v < self.universe, "vertex {v} out of range 0..{}", self.universe);
        let w = &mut self.words[v >> 6];
        let bit = 1u64 << (v & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: Vertex) -> bool {
        if v >= self.universe {
            return false;
        }
        let w = &mut self.words[v >> 6];
        let bit = 1u64 << (v & 63);
        let present = *w & bit != 0;
        *w &= !bit;
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.iter().next()
    }

    fn check_universe(&self, other: &VertexSet) {
        assert_eq!(self.universe, other.universe, "vertex sets over different universes");
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection_len(other) == 0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Lowest member of `self ∩ other ∖ excluded`, without allocating.
    pub fn first_common_excluding(&self, other: &VertexSet, excluded: &VertexSet) -> Option<Vertex> {
        for (i, ((a, b), c)) in self
            .words
            .iter()
            .zip(&other.words)
            .zip(&excluded.words)
            .enumerate()
        {
            let w = a & b & !c;
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// One cell of an orientation table, read as "row vertex to column vertex".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Backward,
    None,
}

/// A complete oriented graph on `n` labelled vertices. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Tournament {
    n: usize,
    out: Vec<VertexSet>,
    inn: Vec<VertexSet>,
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament(n={})", self.n)
    }
}

impl Tournament {
    /// Builds a tournament from a predicate deciding, for every `u < v`, whether `u → v`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(Vertex, Vertex) -> bool) -> Self {
        let mut out = vec![VertexSet::new(n); n];
        let mut inn = vec![VertexSet::new(n); n];
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = if forward(u, v) { (u, v) } else { (v, u) };
                out[a].insert(b);
                inn[b].insert(a);
            }
        }
        Tournament { n, out, inn }
    }

    /// Builds a tournament from a full `n × n` orientation table.
    pub fn from_matrix(n: usize, rows: &[Vec<Orientation>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::malformed("a tournament needs at least one vertex"));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::malformed(format!("orientation table is not {n}×{n}")));
        }
        for u in 0..n {
            if rows[u][u] != Orientation::None {
                return Err(Error::malformed(format!("self-loop at vertex {u}")));
            }
            for v in u + 1..n {
                match (rows[u][v], rows[v][u]) {
                    (Orientation::Forward, Orientation::Backward)
                    | (Orientation::Backward, Orientation::Forward) => {}
                    (Orientation::None, _) | (_, Orientation::None) => {
                        return Err(Error::malformed(format!(
                            "missing orientation for pair ({u}, {v})"
                        )))
                    }
                    _ => {
                        return Err(Error::malformed(format!(
                            "symmetric orientation for pair ({u}, {v})"
                        )))
                    }
                }
            }
        }
        Ok(Self::from_fn(n, |u, v| rows[u][v] == Orientation::Forward))
    }

    /// Builds a tournament from an explicit arc list; every unordered pair must appear exactly once.
    pub fn from_arcs(n: usize, arcs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut rows = vec![vec![Orientation::None; n]; n];
        for &(u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::malformed(format!("arc ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::malformed(format!("self-loop at vertex {u}")));
            }
            if rows[u][v] != Orientation::None {
                return Err(Error::malformed(format!("pair ({u}, {v}) oriented twice")));
            }
            rows[u][v] = Orientation::Forward;
            rows[v][u] = Orientation::Backward;
        }
        Self::from_matrix(n, &rows)
    }

    /// Uniformly random tournament: one fair coin per pair from the seeded stream.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        Self::random_with(n, &mut rng)
    }

    pub(crate) fn random_with(n: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(n, |_, _| rng.gen::<bool>())
    }

    /// The transitive tournament with `u → v` whenever `u < v`.
    pub fn transitive(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    /// Rotational tournament on an odd number of vertices: `i → i + d (mod n)` for `d = 1..=(n-1)/2`.
    pub fn rotational(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::domain("rotational tournaments need an odd order"));
        }
        let half = (n - 1) / 2;
        Ok(Self::from_fn(n, |u, v| v - u <= half))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.out[u].contains(v)
    }

    /// Out-neighbourhood as a borrowed bitset; panics on an out-of-range vertex.
    #[inline]
    pub fn out_set(&self, v: Vertex) -> &VertexSet {
        &self.out[v]
    }

    #[inline]
    pub fn in_set(&self, v: Vertex) -> &VertexSet {
        &self.inn[v]
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            Err(Error::domain(format!("vertex {v} out of range 0..{}", self.n)))
        } else {
            Ok(())
        }
    }

    pub fn out_neighbors(&self, v: Vertex) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.out[v].clone())
    }

    pub fn in_neighbors(&self, v: Vertex) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.inn[v].clone())
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.inn[v].len()
    }

    /// `(out-degree, in-degree)` for every vertex.
    pub fn degrees(&self) -> Vec<(usize, usize)> {
        (0..self.n).map(|v| (self.out_degree(v), self.in_degree(v))).collect()
    }

    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    pub fn min_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_degree(v)).min().unwrap_or(0)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n)
    }

    /// Sub-tournament on `members`, together with the id translation.
    pub fn induced(&self, members: &VertexSet) -> Result<Induced> {
        if members.universe() != self.n {
            return Err(Error::domain("vertex set built over a different universe"));
        }
        if members.is_empty() {
            return Err(Error::domain("cannot induce on an empty vertex set"));
        }
        let to_global = members.to_vec();
        let mut to_local = vec![None; self.n];
        for (i, &g) in to_global.iter().enumerate() {
            to_local[g] = Some(i);
        }
        let tournament = Tournament::from_fn(to_global.len(), |a, b| {
            self.has_edge(to_global[a], to_global[b])
        });
        Ok(Induced {
            tournament,
            to_global,
            to_local,
        })
    }

    /// Vertices reachable from `start` using only vertices of `allowed` (plus `start` itself).
    pub fn reachable_within(&self, start: Vertex, allowed: &VertexSet) -> VertexSet {
        let mut seen = VertexSet::new(self.n);
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let mut next = self.out[u].intersection(allowed);
            next.difference_with(&seen);
            for w in next.iter() {
                seen.insert(w);
                stack.push(w);
            }
        }
        seen
    }

    /// Strong connectivity of the sub-tournament induced on `members`.
    pub fn is_strongly_connected_on(&self, members: &VertexSet) -> bool {
        let Some(root) = members.first() else {
            return true;
        };
        let fwd = self.reachable_within(root, members);
        if fwd.len() != members.len() {
            return false;
        }
        let mut seen = VertexSet::new(self.n);
        seen.insert(root);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let mut next = self.inn[u].intersection(members);
            next.difference_with(&seen);
            for w in next.iter() {
                seen.insert(w);
                stack.push(w);
            }
        }
        seen.len() == members.len()
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.is_strongly_connected_on(&self.vertices())
    }

    /// Serialises to the text format: `n`, then one row of `1`/`0`/`-` per vertex.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1) + 12);
        s.push_str(&self.n.to_string());
        s.push('\n');
        for u in 0..self.n {
            for v in 0..self.n {
                s.push(if u == v {
                    '-'
                } else if self.has_edge(u, v) {
                    '1'
                } else {
                    '0'
                });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text format, validating shape and antisymmetry.
    pub fn from_text(text: &str) -> Result<Self> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        let lines: Vec<&str> = body.split('\n').collect();
        let header = lines[0];
        let n: usize = header.parse().map_err(|_| Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected vertex count, found {header:?}"),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "vertex count must be positive".into(),
            });
        }
        if lines.len() != n + 1 {
            return Err(Error::Parse {
                line: lines.len().min(n + 1) + 1,
                column: 1,
                message: format!("expected {n} rows, found {}", lines.len() - 1),
            });
        }
        let mut rows = vec![vec![Orientation::None; n]; n];
        for (u, line) in lines[1..].iter().enumerate() {
            let bytes = line.as_bytes();
            if bytes.len() != n {
                return Err(Error::Parse {
                    line: u + 2,
                    column: bytes.len().min(n) + 1,
                    message: format!("row has {} characters, expected {n}", bytes.len()),
                });
            }
            for (v, &c) in bytes.iter().enumerate() {
                let cell = match c {
                    b'1' => Orientation::Forward,
                    b'0' => Orientation::Backward,
                    b'-' => Orientation::None,
                    other => {
                        return Err(Error::Parse {
                            line: u + 2,
                            column: v + 1,
                            message: format!("unexpected character {:?}", other as char),
                        })
                    }
                };
                if (cell == Orientation::None) != (u == v) {
                    return Err(Error::Parse {
                        line: u + 2,
                        column: v + 1,
                        message: "'-' must appear exactly on the diagonal".into(),
                    });
                }
                rows[u][v] = cell;
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                if rows[u][v] == rows[v][u] {
                    return Err(Error::Parse {
                        line: u + 2,
                        column: v + 1,
                        message: format!("antisymmetry violated for pair ({u}, {v})"),
                    });
                }
            }
        }
        Self::from_matrix(n, &rows)
    }
}

/// A sub-tournament and the bidirectional map between its ids and the host's.
#[derive(Debug, Clone)]
pub struct Induced {
    pub tournament: Tournament,
    to_global: Vec<Vertex>,
    to_local: Vec<Option<Vertex>>,
}

impl Induced {
    pub fn global(&self, local: Vertex) -> Vertex {
        self.to_global[local]
    }

    pub fn local(&self, global: Vertex) -> Option<Vertex> {
        self.to_local.get(global).copied().flatten()
    }

    pub fn map(&self) -> &[Vertex] {
        &self.to_global
    }

    /// Translates a host-level set into local ids, dropping vertices outside the sub-tournament.
    pub fn localize(&self, set: &VertexSet) -> VertexSet {
        VertexSet::from_iter_in(
            self.to_global.len(),
            set.iter().filter_map(|g| self.local(g)),
        )
    }

    pub fn globalize(&self, set: &VertexSet, host_order: usize) -> VertexSet {
        VertexSet::from_iter_in(host_order, set.iter().map(|l| self.global(l)))
    }

    pub fn globalize_path(&self, path: &Path) -> Path {
        Path::new(path.vertices().iter().map(|&l| self.global(l)).collect())
    }
}

/// A directed path given by its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<Vertex>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("empty path")]
    Empty,
    #[error("vertex {0} out of range")]
    OutOfRange(Vertex),
    #[error("vertex {0} repeated")]
    Repeated(Vertex),
    #[error("edge {0} -> {1} not present")]
    MissingEdge(Vertex, Vertex),
}

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        Path(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.0
    }

    pub fn initial(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn terminal(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn interior(&self) -> &[Vertex] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.0.len()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.0.iter().position(|&w| w == v)
    }

    pub fn validate(&self, t: &Tournament) -> std::result::Result<(), PathError> {
        if self.0.is_empty() {
            return Err(PathError::Empty);
        }
        let mut seen = VertexSet::new(t.order());
        for &v in &self.0 {
            if v >= t.order() {
                return Err(PathError::OutOfRange(v));
            }
            if !seen.insert(v) {
                return Err(PathError::Repeated(v));
            }
        }
        for w in self.0.windows(2) {
            if !t.has_edge(w[0], w[1]) {
                return Err(PathError::MissingEdge(w[0], w[1]));
            }
        }
        Ok(())
    }
}

impl From<Vec<Vertex>> for Path {
    fn from(v: Vec<Vertex>) -> Self {
        Path(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn three_cycle() -> Tournament {
        Tournament::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn three_cycle_from_matrix() {
        use Orientation::*;
        let rows = vec![
            vec![None, Forward, Backward],
            vec![Backward, None, Forward],
            vec![Forward, Backward, None],
        ];
        let t = Tournament::from_matrix(3, &rows).unwrap();
        assert_eq!(t, three_cycle());
        assert!(t.degrees().iter().all(|&d| d == (1, 1)));
    }

    #[test]
    fn symmetric_entry_rejected() {
        use Orientation::*;
        let rows = vec![vec![None, Forward], vec![Forward, None]];
        let err = Tournament::from_matrix(2, &rows).unwrap_err();
        assert!(matches!(err, Error::Malformed(ref m) if m.contains("(0, 1)")), "{err}");
    }

    #[test]
    fn self_loop_and_missing_rejected() {
        use Orientation::*;
        let looped = vec![vec![Forward, Forward], vec![Backward, None]];
        assert!(Tournament::from_matrix(2, &looped).is_err());
        let missing = vec![vec![None, None], vec![None, None]];
        let err = Tournament::from_matrix(2, &missing).unwrap_err();
        assert!(err.to_string().contains("missing"));
    }

    #[test]
    fn transitive_degrees() {
        let t = Tournament::transitive(4);
        let outs: Vec<usize> = (0..4).map(|v| t.out_degree(v)).collect();
        assert_eq!(outs, vec![3, 2, 1, 0]);
        assert_eq!(Tournament::transitive(5).degrees()[0], (4, 0));
    }

    #[test]
    fn random_is_deterministic_and_handshake_holds() {
        let a = Tournament::random(10, 99);
        let b = Tournament::random(10, 99);
        assert_eq!(a.to_text(), b.to_text());
        assert_ne!(a.to_text(), Tournament::random(10, 100).to_text());
        let t = Tournament::random(20, 5);
        let total: usize = t.degrees().iter().map(|d| d.0).sum();
        assert_eq!(total, 190);
        assert_eq!(Tournament::random(1, 3).order(), 1);
    }

    #[test]
    fn induced_matches_subtable() {
        let c = three_cycle();
        let sub = c.induced(&VertexSet::from_slice(3, &[0, 1]).unwrap()).unwrap();
        assert!(sub.tournament.has_edge(0, 1));
        assert_eq!(sub.tournament.order(), 2);

        let all = c.induced(&c.vertices()).unwrap();
        assert_eq!(all.tournament, c);

        let t = Tournament::random(12, 4);
        let picked = [1, 4, 6, 9, 11];
        let sub = t.induced(&VertexSet::from_slice(12, &picked).unwrap()).unwrap();
        for (a, &ga) in picked.iter().enumerate() {
            for (b, &gb) in picked.iter().enumerate() {
                if a != b {
                    assert_eq!(sub.tournament.has_edge(a, b), t.has_edge(ga, gb));
                }
            }
            assert_eq!(sub.local(ga), Some(a));
        }
        assert!(t.induced(&t.empty_set()).is_err());
    }

    #[test]
    fn out_of_range_neighbourhood_is_domain_error() {
        let t = three_cycle();
        assert!(matches!(t.out_neighbors(3), Err(Error::Domain(_))));
        assert!(matches!(t.in_neighbors(7), Err(Error::Domain(_))));
    }

    #[test]
    fn text_format_is_exact() {
        let t = three_cycle();
        assert_eq!(t.to_text(), "3\n-10\n0-1\n10-\n");
        assert_eq!(Tournament::from_text(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn text_parse_errors_carry_position() {
        let err = Tournament::from_text("3\n-10\n0-0\n10-\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err}");
        let err = Tournament::from_text("2\n-x\n0-\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 2, .. }), "{err}");
        let err = Tournament::from_text("2\n-1 \n0-\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(Tournament::from_text("abc\n").is_err());
    }

    #[test]
    fn path_validation() {
        let t = three_cycle();
        assert!(Path::new(vec![0, 1, 2]).validate(&t).is_ok());
        assert_eq!(Path::new(vec![1, 0]).validate(&t), Err(PathError::MissingEdge(1, 0)));
        assert_eq!(Path::new(vec![0, 1, 2, 0]).validate(&t), Err(PathError::Repeated(0)));
        assert_eq!(Path::new(vec![]).validate(&t), Err(PathError::Empty));
    }

    proptest! {
        #[test]
        fn text_round_trip(n in 1usize..24, seed in any::<u64>()) {
            let t = Tournament::random(n, seed);
            let back = Tournament::from_text(&t.to_text()).unwrap();
            prop_assert_eq!(&back, &t);
            for v in 0..n {
                prop_assert_eq!(t.out_degree(v) + t.in_degree(v), n - 1);
                prop_assert!(!t.has_edge(v, v));
            }
        }

        #[test]
        fn induced_preserves_orientation(seed in any::<u64>(), mask in any::<u32>()) {
            let t = Tournament::random(16, seed);
            let members: Vec<usize> = (0..16).filter(|v| mask >> v & 1 == 1).collect();
            prop_assume!(!members.is_empty());
            let sub = t.induced(&VertexSet::from_slice(16, &members).unwrap()).unwrap();
            for a in 0..members.len() {
                for b in 0..members.len() {
                    if a != b {
                        prop_assert_eq!(sub.tournament.has_edge(a, b), t.has_edge(sub.global(a), sub.global(b)));
                    }
                }
            }
        }
    }
}
