use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{GoodFamily, Label};
use crate::tournament::{Tournament, VertexSet};

/// Digraph on the family indices; digons appear only between subdivision sets.
#[derive(Debug, Clone, Serialize)]
pub struct AuxiliaryDigraph {
    pub labels: Vec<Label>,
    /// Sorted edge list.
    pub edges: Vec<(usize, usize)>,
    /// Subdivision pairs where neither majority rule fired and the edge count decided.
    pub majority_resolved: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<bool>>,
}

impl AuxiliaryDigraph {
    pub fn from_edges(labels: Vec<Label>, edges: &[(usize, usize)]) -> Result<Self> {
        let k = labels.len();
        let mut adj = vec![vec![false; k]; k];
        for &(i, j) in edges {
            if i >= k || j >= k || i == j {
                return Err(Error::domain(format!("bad auxiliary edge ({i}, {j})")));
            }
            adj[i][j] = true;
        }
        Ok(Self::from_adj(labels, adj, Vec::new()))
    }

    fn from_adj(labels: Vec<Label>, adj: Vec<Vec<bool>>, majority_resolved: Vec<(usize, usize)>) -> Self {
        let k = labels.len();
        let edges = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .filter(|&(i, j)| adj[i][j])
            .collect();
        AuxiliaryDigraph {
            labels,
            edges,
            majority_resolved,
            adj,
        }
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn is_semicomplete(&self) -> bool {
        let k = self.k();
        (0..k).all(|i| (i + 1..k).all(|j| self.adj[i][j] || self.adj[j][i]))
    }

    pub fn indices_labelled(&self, label: Label) -> Vec<usize> {
        (0..self.k()).filter(|&i| self.labels[i] == label).collect()
    }

    /// Hamiltonian path of the sub-digraph induced on `members`.
    pub fn hamiltonian_path(&self, members: &[usize]) -> Result<Vec<usize>> {
        hamiltonian_path_semicomplete(members, |i, j| self.adj[i][j])
    }
}

fn out_count(tour: &Tournament, u: usize, set: &VertexSet) -> usize {
    tour.out_set(u).intersection_len(set)
}

/// At least `|a|/2` vertices of `a` have at least `|b|/2` out-neighbours in `b`.
pub(crate) fn majority_out(tour: &Tournament, a: &VertexSet, b: &VertexSet) -> bool {
    2 * a.iter().filter(|&u| 2 * out_count(tour, u, b) >= b.len()).count() >= a.len()
}

/// At least `|a|/2` vertices of `a` have at least `|b|/2` in-neighbours in `b`.
pub(crate) fn majority_in(tour: &Tournament, a: &VertexSet, b: &VertexSet) -> bool {
    2 * a.iter().filter(|&u| 2 * tour.in_set(u).intersection_len(b) >= b.len()).count() >= a.len()
}

/// Orients every pair of family indices.
///
/// Plain pairs follow their domination. A plain set `S_i` and a subdivision set
/// `S_j` get `i → j` under rule (a) and `j → i` under rule (b); when both hold
/// only `j → i` is kept. Two subdivision sets get an edge for each majority
/// condition that holds, so digons are possible; when neither holds the
/// direction carrying more edges wins, ties to the lower index.
pub fn build_aux_digraph(tour: &Tournament, family: &GoodFamily) -> Result<AuxiliaryDigraph> {
    let k = family.k();
    let s = &family.sets;
    let mut adj = vec![vec![false; k]; k];
    let mut resolved = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            match (family.labels[i], family.labels[j]) {
                (Label::NonSubdivision, Label::NonSubdivision) => {
                    let fwd = s[i].iter().all(|u| s[j].is_subset(tour.out_set(u)));
                    let bwd = s[j].iter().all(|u| s[i].is_subset(tour.out_set(u)));
                    match (fwd, bwd) {
                        (true, _) => adj[i][j] = true,
                        (false, true) => adj[j][i] = true,
                        _ => {
                            return Err(Error::malformed(format!(
                                "plain sets {i} and {j} do not dominate either way"
                            )))
                        }
                    }
                }
                (Label::NonSubdivision, Label::Subdivision) | (Label::Subdivision, Label::NonSubdivision) => {
                    let (ns, sub) = if family.labels[i] == Label::NonSubdivision { (i, j) } else { (j, i) };
                    if majority_in(tour, &s[ns], &s[sub]) {
                        adj[sub][ns] = true;
                    } else if majority_out(tour, &s[ns], &s[sub]) {
                        adj[ns][sub] = true;
                    } else {
                        return Err(Error::malformed(format!("neither rule orients sets {ns} and {sub}")));
                    }
                }
                (Label::Subdivision, Label::Subdivision) => {
                    adj[i][j] = majority_out(tour, &s[i], &s[j]);
                    adj[j][i] = majority_out(tour, &s[j], &s[i]);
                    if !adj[i][j] && !adj[j][i] {
                        let fwd: usize = s[i].iter().map(|u| out_count(tour, u, &s[j])).sum();
                        let bwd = s[i].len() * s[j].len() - fwd;
                        if fwd >= bwd {
                            adj[i][j] = true;
                        } else {
                            adj[j][i] = true;
                        }
                        resolved.push((i, j));
                    }
                }
            }
        }
    }
    Ok(AuxiliaryDigraph::from_adj(family.labels.clone(), adj, resolved))
}

/// Hamiltonian path by insertion; `edge` must make `members` semicomplete.
pub fn hamiltonian_path_semicomplete(members: &[usize], edge: impl Fn(usize, usize) -> bool) -> Result<Vec<usize>> {
    let mut path: Vec<usize> = Vec::with_capacity(members.len());
    for &v in members {
        let pos = if path.is_empty() || edge(v, path[0]) {
            Some(0)
        } else if edge(path[path.len() - 1], v) {
            Some(path.len())
        } else {
            (0..path.len() - 1).find(|&p| edge(path[p], v) && edge(v, path[p + 1])).map(|p| p + 1)
        };
        match pos {
            Some(p) => path.insert(p, v),
            None => return Err(Error::domain(format!("vertex {v} cannot be inserted; input is not semicomplete"))),
        }
    }
    Ok(path)
}
