//! Greedy embedding of subdivided complete digraphs and the recursive
//! construction of good families.
//!
//! A good family is a list of disjoint sets `S_1..S_k`, each either the branch
//! set of a subdivision whose connectors have at most two interior vertices,
//! or a plain set of a fixed size; any two plain sets dominate one another
//! entirely in one direction.

use std::fmt;

use serde::Serialize;

use crate::chains::nearly_regular_window_subset;
use crate::error::{Error, Result};
use crate::tournament::{Path, Tournament, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connector {
    pub from: Vertex,
    pub to: Vertex,
    pub path: Path,
}

/// Branch vertices plus one connector per ordered pair of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subdivision {
    /// Sorted branch vertices.
    pub branch: Vec<Vertex>,
    /// Connectors in lexicographic order of `(from, to)`.
    pub connectors: Vec<Connector>,
}

impl Subdivision {
    pub fn connector(&self, a: Vertex, b: Vertex) -> Option<&Path> {
        self.connectors
            .binary_search_by_key(&(a, b), |c| (c.from, c.to))
            .ok()
            .map(|i| &self.connectors[i].path)
    }

    pub fn interiors(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.connectors.iter().flat_map(|c| c.path.interior().iter().copied())
    }

    /// Branch and interior vertices together.
    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_iter_in(n, self.branch.iter().copied().chain(self.interiors()))
    }

    /// Checks every connector: right endpoints, valid edges, at most two interior vertices, disjoint interiors.
    pub fn audit(&self, tour: &Tournament) -> std::result::Result<(), String> {
        let n = tour.order();
        let branch = VertexSet::from_slice(n, &self.branch).map_err(|e| e.to_string())?;
        let l = self.branch.len();
        if self.connectors.len() != l * (l - 1) {
            return Err(format!("{} connectors for {l} branch vertices", self.connectors.len()));
        }
        let mut interior = VertexSet::new(n);
        for &a in &self.branch {
            for &b in &self.branch {
                if a == b {
                    continue;
                }
                let p = self.connector(a, b).ok_or(format!("no connector {a} -> {b}"))?;
                p.validate(tour).map_err(|e| format!("connector {a} -> {b}: {e}"))?;
                if p.initial() != Some(a) || p.terminal() != Some(b) {
                    return Err(format!("connector {a} -> {b} has wrong endpoints"));
                }
                if p.interior().len() > 2 {
                    return Err(format!("connector {a} -> {b} has length {}", p.len()));
                }
                for &w in p.interior() {
                    if branch.contains(w) || !interior.insert(w) {
                        return Err(format!("connector {a} -> {b} reuses vertex {w}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Witness that greedy embedding got stuck at the ordered pair `(x, y)`.
#[derive(Debug, Clone, Serialize)]
pub struct Obstruction {
    pub x: Vertex,
    pub y: Vertex,
    /// Branch vertices, forbidden vertices and connector interiors placed so far.
    pub used: VertexSet,
    /// `N⁺(x) ∖ used`.
    pub x_set: VertexSet,
    /// `N⁻(y) ∖ used`.
    pub y_set: VertexSet,
}

impl Obstruction {
    /// Recomputes every claimed property from the tournament.
    pub fn audit(&self, tour: &Tournament) -> std::result::Result<(), String> {
        let (x, y) = (self.x, self.y);
        if tour.has_edge(x, y) {
            return Err(format!("edge {x} -> {y} is present"));
        }
        let common = tour.out_set(x).intersection(tour.in_set(y));
        if !common.is_subset(&self.used) {
            return Err("a common neighbour of x and y is unused".into());
        }
        if self.x_set != tour.out_set(x).difference(&self.used) {
            return Err("x_set differs from N+(x) minus used".into());
        }
        if self.y_set != tour.in_set(y).difference(&self.used) {
            return Err("y_set differs from N-(y) minus used".into());
        }
        for a in self.x_set.iter() {
            if !tour.out_set(a).is_disjoint(&self.y_set) {
                return Err(format!("vertex {a} of x_set beats part of y_set"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum EmbedOutcome {
    Subdivision(Subdivision),
    Obstruction(Obstruction),
}

/// Greedily embeds a subdivision with branch set `branch`, connecting ordered pairs lexicographically.
///
/// Each pair takes the direct edge if present, else the lowest unused common
/// neighbour, else the lexicographically lowest unused two-vertex bridge.
/// Interiors avoid the branch set, `forbidden` and earlier interiors.
pub fn greedy_embed_t2(tour: &Tournament, branch: &VertexSet, forbidden: &VertexSet) -> Result<EmbedOutcome> {
    if branch.len() < 2 {
        return Err(Error::domain("a branch set needs at least two vertices"));
    }
    if !branch.is_disjoint(forbidden) {
        return Err(Error::domain("branch set meets the forbidden set"));
    }
    let b: Vec<Vertex> = branch.to_vec();
    let mut used = branch.union(forbidden);
    let mut connectors = Vec::with_capacity(b.len() * (b.len() - 1));
    for &x in &b {
        for &y in &b {
            if x == y {
                continue;
            }
            let path = if tour.has_edge(x, y) {
                Some(vec![x, y])
            } else if let Some(w) = tour.out_set(x).first_common_excluding(tour.in_set(y), &used) {
                Some(vec![x, w, y])
            } else {
                let starts = tour.out_set(x).difference(&used);
                let found = starts.iter().find_map(|w1| {
                    let mut skip = used.clone();
                    skip.insert(w1);
                    tour.out_set(w1)
                        .first_common_excluding(tour.in_set(y), &skip)
                        .map(|w2| vec![x, w1, w2, y])
                });
                found
            };
            match path {
                Some(p) => {
                    for &w in &p[1..p.len() - 1] {
                        used.insert(w);
                    }
                    connectors.push(Connector {
                        from: x,
                        to: y,
                        path: Path::new(p),
                    });
                }
                None => {
                    return Ok(EmbedOutcome::Obstruction(Obstruction {
                        x,
                        y,
                        x_set: tour.out_set(x).difference(&used),
                        y_set: tour.in_set(y).difference(&used),
                        used,
                    }))
                }
            }
        }
    }
    Ok(EmbedOutcome::Subdivision(Subdivision { branch: b, connectors }))
}

#[derive(Debug, Clone, Serialize)]
pub struct Partition {
    /// Blocks whose trimmed part lies in the obstruction's `y_set`.
    pub i_side: Vec<usize>,
    /// Blocks whose trimmed part lies in the obstruction's `x_set`.
    pub j_side: Vec<usize>,
    /// `W_i ∩ y_set` for `i ∈ I`, `W_j ∩ x_set` for `j ∈ J`.
    pub w_prime: Vec<VertexSet>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum PartitionOutcome {
    Split(Partition),
    Infeasible { reason: String },
}

/// Splits the blocks so that `⋃_{i∈I} W'_i → ⋃_{j∈J} W'_j`.
///
/// A block may join `I` when a tenth of it lies in `y_set` and `J` when a tenth
/// lies in `x_set`. Blocks eligible for one side only go there; the rest are
/// dealt to the currently smaller side, ties to `I`.
pub fn partition_by_obstruction(tour: &Tournament, blocks: &[VertexSet], obstruction: &Obstruction) -> Result<PartitionOutcome> {
    obstruction
        .audit(tour)
        .map_err(|e| Error::domain(format!("obstruction audit failed: {e}")))?;
    let mut i_side = Vec::new();
    let mut j_side = Vec::new();
    let mut flexible = Vec::new();
    for (i, w) in blocks.iter().enumerate() {
        let to_i = 10 * w.intersection_len(&obstruction.y_set) >= w.len();
        let to_j = 10 * w.intersection_len(&obstruction.x_set) >= w.len();
        match (to_i, to_j) {
            (true, true) => flexible.push(i),
            (true, false) => i_side.push(i),
            (false, true) => j_side.push(i),
            (false, false) => {
                return Ok(PartitionOutcome::Infeasible {
                    reason: format!("block {i} has under a tenth of its vertices on either side"),
                })
            }
        }
    }
    for i in flexible {
        if i_side.len() <= j_side.len() {
            i_side.push(i);
        } else {
            j_side.push(i);
        }
    }
    i_side.sort_unstable();
    j_side.sort_unstable();
    if i_side.is_empty() || j_side.is_empty() {
        return Ok(PartitionOutcome::Infeasible {
            reason: "every block falls on one side of the obstruction".into(),
        });
    }
    let w_prime = blocks
        .iter()
        .enumerate()
        .map(|(i, w)| {
            if i_side.binary_search(&i).is_ok() {
                w.intersection(&obstruction.y_set)
            } else {
                w.intersection(&obstruction.x_set)
            }
        })
        .collect();
    Ok(PartitionOutcome::Split(Partition { i_side, j_side, w_prime }))
}

/// Required block size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WSize {
    /// `12·k^22·ℓ²` at every recursion level, saturating.
    Asymptotic,
    /// A fixed floor for the top level; deeper levels only need `ns_size`.
    Fixed(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyConfig {
    pub ell: usize,
    pub ns_size: usize,
    pub w_size: WSize,
}

impl FamilyConfig {
    /// Defaults sized for desktop runs: `ℓ = max(2k+4, 8)`, `ns_size = 12k²`, block floor `max(4ℓ², 64)`.
    pub fn desk(k: usize) -> Self {
        let ell = (2 * k + 4).max(8);
        FamilyConfig {
            ell,
            ns_size: 12 * k * k,
            w_size: WSize::Fixed((4 * ell * ell).max(64)),
        }
    }

    pub fn asymptotic_w_size(k: usize, ell: usize) -> u128 {
        (k as u128)
            .checked_pow(22)
            .and_then(|p| p.checked_mul(12))
            .and_then(|p| p.checked_mul((ell as u128) * (ell as u128)))
            .unwrap_or(u128::MAX)
    }

    fn required(&self, k: usize, top: bool) -> u128 {
        match self.w_size {
            WSize::Asymptotic => Self::asymptotic_w_size(k, self.ell),
            WSize::Fixed(s) if top => s as u128,
            WSize::Fixed(_) => self.ns_size as u128,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    Subdivision,
    NonSubdivision,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoodFamily {
    pub sets: Vec<VertexSet>,
    pub labels: Vec<Label>,
    pub subdivisions: Vec<Option<Subdivision>>,
    /// `(i, j)` for every pair of plain sets with `S_i → S_j`.
    pub orientation: Vec<(usize, usize)>,
    pub stats: BuildStats,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BuildStats {
    pub subdivisions_embedded: usize,
    pub obstructions: usize,
    pub max_removed_per_subdivision: usize,
}

/// The builder could not meet a precondition at some recursion level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyFailure {
    pub stage: &'static str,
    pub detail: String,
}

impl fmt::Display for FamilyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.detail)
    }
}

impl std::error::Error for FamilyFailure {}

fn fail(stage: &'static str, detail: impl Into<String>) -> FamilyFailure {
    FamilyFailure {
        stage,
        detail: detail.into(),
    }
}

fn dominates(tour: &Tournament, a: &VertexSet, b: &VertexSet) -> bool {
    a.iter().all(|u| b.is_subset(tour.out_set(u)))
}

impl GoodFamily {
    pub fn k(&self) -> usize {
        self.sets.len()
    }

    /// Checks every defining property against the host and the original blocks.
    pub fn audit(&self, tour: &Tournament, blocks: &[VertexSet], cfg: &FamilyConfig) -> std::result::Result<(), String> {
        let n = tour.order();
        let k = self.sets.len();
        if blocks.len() != k || self.labels.len() != k || self.subdivisions.len() != k {
            return Err("family size does not match the number of blocks".into());
        }
        let mut footprint = Vec::with_capacity(k);
        for i in 0..k {
            if !self.sets[i].is_subset(&blocks[i]) {
                return Err(format!("S_{i} is not inside W_{i}"));
            }
            match (self.labels[i], &self.subdivisions[i]) {
                (Label::NonSubdivision, None) => {
                    if self.sets[i].len() != cfg.ns_size {
                        return Err(format!("plain set S_{i} has size {}", self.sets[i].len()));
                    }
                    footprint.push(self.sets[i].clone());
                }
                (Label::Subdivision, Some(sub)) => {
                    if sub.branch != self.sets[i].to_vec() {
                        return Err(format!("S_{i} differs from its branch set"));
                    }
                    if sub.branch.len() != cfg.ell {
                        return Err(format!("subdivision on S_{i} has {} branch vertices", sub.branch.len()));
                    }
                    sub.audit(tour).map_err(|e| format!("subdivision on S_{i}: {e}"))?;
                    footprint.push(sub.vertex_set(n));
                }
                _ => return Err(format!("label and subdivision disagree for S_{i}")),
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if !footprint[i].is_disjoint(&footprint[j]) {
                    return Err(format!("S_{i} and S_{j} overlap"));
                }
            }
        }
        let plain: Vec<usize> = (0..k).filter(|&i| self.labels[i] == Label::NonSubdivision).collect();
        let mut expected = Vec::new();
        for (a, &i) in plain.iter().enumerate() {
            for &j in &plain[a + 1..] {
                if dominates(tour, &self.sets[i], &self.sets[j]) {
                    expected.push((i, j));
                } else if dominates(tour, &self.sets[j], &self.sets[i]) {
                    expected.push((j, i));
                } else {
                    return Err(format!("plain sets S_{i} and S_{j} do not dominate either way"));
                }
            }
        }
        if expected != self.orientation {
            return Err("recorded orientation does not match the tournament".into());
        }
        Ok(())
    }
}

struct Piece {
    index: usize,
    label: Label,
    set: VertexSet,
    subdivision: Option<Subdivision>,
}

fn truncate(set: &VertexSet, size: usize) -> VertexSet {
    VertexSet::from_iter_in(set.universe(), set.iter().take(size))
}

fn build_rec(
    host: &Tournament,
    blocks: Vec<(usize, VertexSet)>,
    cfg: &FamilyConfig,
    top: bool,
    stats: &mut BuildStats,
) -> std::result::Result<Vec<Piece>, FamilyFailure> {
    let n = host.order();
    let k = blocks.len();
    let need = cfg.required(k, top);
    for (i, w) in &blocks {
        if (w.len() as u128) < need {
            return Err(fail(
                "block-size",
                format!("W_{i} has {} vertices at a level with {k} blocks, {need} required", w.len()),
            ));
        }
    }
    let blocks: Vec<(usize, VertexSet)> = match cfg.w_size {
        WSize::Asymptotic => blocks.into_iter().map(|(i, w)| (i, truncate(&w, need as usize))).collect(),
        WSize::Fixed(_) if top => blocks.into_iter().map(|(i, w)| (i, truncate(&w, need as usize))).collect(),
        WSize::Fixed(_) => blocks,
    };
    if k == 1 {
        let (i, w) = &blocks[0];
        if w.len() < cfg.ns_size {
            return Err(fail("base", format!("W_{i} has {} vertices, {} needed", w.len(), cfg.ns_size)));
        }
        return Ok(vec![Piece {
            index: *i,
            label: Label::NonSubdivision,
            set: truncate(w, cfg.ns_size),
            subdivision: None,
        }]);
    }

    let mut union = VertexSet::new(n);
    for (_, w) in &blocks {
        union.union_with(w);
    }
    let sub = host.induced(&union).map_err(|e| fail("induce", e.to_string()))?;
    let t = &sub.tournament;
    let window = nearly_regular_window_subset(t, k * cfg.ell).map_err(|e| fail("window", e.to_string()))?;
    let a = sub.globalize(&window.members, n);
    let (pos, hits) = blocks
        .iter()
        .enumerate()
        .map(|(p, (_, w))| (p, w.intersection_len(&a)))
        .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if hits < cfg.ell {
        return Err(fail("pigeonhole", format!("fullest block holds {hits} of {} window vertices", k * cfg.ell)));
    }
    let branch = truncate(&a.intersection(&blocks[pos].1), cfg.ell);
    let local_branch = sub.localize(&branch);

    match greedy_embed_t2(t, &local_branch, &t.empty_set()).map_err(|e| fail("embed", e.to_string()))? {
        EmbedOutcome::Subdivision(s) => {
            let connectors: Vec<Connector> = s
                .connectors
                .iter()
                .map(|c| Connector {
                    from: sub.global(c.from),
                    to: sub.global(c.to),
                    path: sub.globalize_path(&c.path),
                })
                .collect();
            let mut global = Subdivision {
                branch: branch.to_vec(),
                connectors,
            };
            global.connectors.sort_by_key(|c| (c.from, c.to));
            let interiors = VertexSet::from_iter_in(n, global.interiors());
            stats.subdivisions_embedded += 1;
            stats.max_removed_per_subdivision = stats.max_removed_per_subdivision.max(interiors.len());
            let (index, _) = blocks[pos];
            let rest: Vec<(usize, VertexSet)> = blocks
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, (i, w))| (*i, w.difference(&interiors)))
                .collect();
            let mut pieces = build_rec(host, rest, cfg, false, stats)?;
            pieces.push(Piece {
                index,
                label: Label::Subdivision,
                set: branch,
                subdivision: Some(global),
            });
            Ok(pieces)
        }
        EmbedOutcome::Obstruction(obs) => {
            stats.obstructions += 1;
            let local_blocks: Vec<VertexSet> = blocks.iter().map(|(_, w)| sub.localize(w)).collect();
            let outcome = partition_by_obstruction(t, &local_blocks, &obs).map_err(|e| fail("partition", e.to_string()))?;
            let part = match outcome {
                PartitionOutcome::Split(p) => p,
                PartitionOutcome::Infeasible { reason } => return Err(fail("partition", reason)),
            };
            let side = |ids: &[usize]| -> Vec<(usize, VertexSet)> {
                ids.iter()
                    .map(|&p| (blocks[p].0, sub.globalize(&part.w_prime[p], n)))
                    .collect()
            };
            let (left, right) = (side(&part.i_side), side(&part.j_side));
            let mut left_stats = BuildStats::default();
            let mut right_stats = BuildStats::default();
            let (l, r) = rayon::join(
                || build_rec(host, left, cfg, false, &mut left_stats),
                || build_rec(host, right, cfg, false, &mut right_stats),
            );
            for s in [left_stats, right_stats] {
                stats.subdivisions_embedded += s.subdivisions_embedded;
                stats.obstructions += s.obstructions;
                stats.max_removed_per_subdivision = stats.max_removed_per_subdivision.max(s.max_removed_per_subdivision);
            }
            let mut pieces = l?;
            pieces.extend(r?);
            Ok(pieces)
        }
    }
}

/// Builds a good family with `S_i ⊆ W_i` inside the sub-tournament induced on `⋃ W_i`.
///
/// Every returned family has passed [`GoodFamily::audit`]; anything short of
/// that is reported as a [`FamilyFailure`].
pub fn build_good_family(
    tour: &Tournament,
    blocks: &[VertexSet],
    cfg: &FamilyConfig,
) -> std::result::Result<GoodFamily, FamilyFailure> {
    let n = tour.order();
    if blocks.is_empty() {
        return Err(fail("input", "no blocks given"));
    }
    if cfg.ell < 2 {
        return Err(fail("input", "ell must be at least 2"));
    }
    for (i, w) in blocks.iter().enumerate() {
        if w.universe() != n {
            return Err(fail("input", format!("W_{i} built over a different universe")));
        }
        for (j, v) in blocks.iter().enumerate().skip(i + 1) {
            if !w.is_disjoint(v) {
                return Err(fail("input", format!("W_{i} and W_{j} overlap")));
            }
        }
    }
    let mut stats = BuildStats::default();
    let mut pieces = build_rec(tour, blocks.iter().cloned().enumerate().collect(), cfg, true, &mut stats)?;
    pieces.sort_by_key(|p| p.index);
    let k = blocks.len();
    let labels: Vec<Label> = pieces.iter().map(|p| p.label).collect();
    let sets: Vec<VertexSet> = pieces.iter().map(|p| p.set.clone()).collect();
    let mut orientation = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if labels[i] == Label::NonSubdivision && labels[j] == Label::NonSubdivision {
                if dominates(tour, &sets[i], &sets[j]) {
                    orientation.push((i, j));
                } else {
                    orientation.push((j, i));
                }
            }
        }
    }
    let family = GoodFamily {
        sets,
        labels,
        subdivisions: pieces.into_iter().map(|p| p.subdivision).collect(),
        orientation,
        stats,
    };
    family.audit(tour, blocks, cfg).map_err(|e| fail("audit", e))?;
    Ok(family)
}
