//! Nearly-regular vertex subsets and monotone chains under several orderings.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tournament::{Tournament, Vertex, VertexSet};

/// Which degree dominates across a nearly-regular set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `d⁻(v) ≤ d⁺(v) ≤ C·d⁻(v)` for every member.
    OutDominant,
    /// `d⁺(v) ≤ d⁻(v) ≤ C·d⁺(v)` for every member.
    InDominant,
}

#[derive(Debug, Clone, Serialize)]
pub struct NearlyRegularWitness {
    pub members: VertexSet,
    pub side: Side,
    pub ratio: usize,
    /// Window centre `m` for the windowed variant.
    pub center_m: Option<usize>,
    /// Half-width `10t` of the in-degree window.
    pub window_halfwidth: Option<usize>,
    /// Set when the host has fewer than ten vertices and the size guarantee does not apply.
    pub small_instance: bool,
}

impl NearlyRegularWitness {
    /// Re-checks the ratio (and window) conditions from the host's degrees.
    pub fn audit(&self, tour: &Tournament) -> bool {
        let c = self.ratio;
        self.members.iter().all(|v| {
            let (dp, dm) = (tour.out_degree(v), tour.in_degree(v));
            let ratio_ok = match self.side {
                Side::OutDominant => dm <= dp && dp <= c * dm,
                Side::InDominant => dp <= dm && dm <= c * dp,
            };
            let window_ok = match (self.center_m, self.window_halfwidth) {
                (Some(m), Some(h)) => dm + h >= m && dm <= m + h,
                _ => true,
            };
            ratio_ok && window_ok
        })
    }
}

fn in_side(tour: &Tournament, v: Vertex, side: Side, c: usize) -> bool {
    let (dp, dm) = (tour.out_degree(v), tour.in_degree(v));
    match side {
        Side::OutDominant => dm <= dp && dp <= c * dm,
        Side::InDominant => dp <= dm && dm <= c * dp,
    }
}

fn side_members(tour: &Tournament, side: Side, c: usize) -> VertexSet {
    VertexSet::from_iter_in(tour.order(), (0..tour.order()).filter(|&v| in_side(tour, v, side, c)))
}

/// A `C`-nearly-regular subset; with `C = 4` it has at least `⌈n/10⌉` members when `n ≥ 10`.
///
/// The out-dominant side is taken when it is at least as large as the
/// in-dominant side, or when both reach `n/5`.
pub fn nearly_regular_subset_with_ratio(tour: &Tournament, c: usize) -> NearlyRegularWitness {
    let n = tour.order();
    let out = side_members(tour, Side::OutDominant, c);
    let inn = side_members(tour, Side::InDominant, c);
    let both_large = 5 * out.len() >= n && 5 * inn.len() >= n;
    let (members, side) = if out.len() >= inn.len() || both_large {
        (out, Side::OutDominant)
    } else {
        (inn, Side::InDominant)
    };
    NearlyRegularWitness {
        members,
        side,
        ratio: c,
        center_m: None,
        window_halfwidth: None,
        small_instance: n < 10,
    }
}

pub fn nearly_regular_subset(tour: &Tournament) -> NearlyRegularWitness {
    nearly_regular_subset_with_ratio(tour, 4)
}

/// Exactly `t` members of a 4-nearly-regular set whose in-degrees share one window of width `10t`.
///
/// In-degrees are bucketed into `[1 + 10t·j, 1 + 10t·(j+1))` and the first
/// fullest bucket wins; `m` is the midpoint of the chosen in-degrees. If the
/// preferred side has no bucket with `t` members the other side is tried
/// before giving up.
pub fn nearly_regular_window_subset(tour: &Tournament, t: usize) -> Result<NearlyRegularWitness> {
    let n = tour.order();
    if t == 0 || t > n {
        return Err(Error::domain(format!("window size {t} outside 1..={n}")));
    }
    let first = nearly_regular_subset(tour);
    let other_side = match first.side {
        Side::OutDominant => Side::InDominant,
        Side::InDominant => Side::OutDominant,
    };
    let candidates = [
        (first.members.clone(), first.side),
        (side_members(tour, other_side, 4), other_side),
    ];
    let width = 10 * t;
    let mut best_seen = 0;
    for (members, side) in candidates {
        let buckets = n.div_ceil(width).max(1);
        let mut fill: Vec<Vec<Vertex>> = vec![Vec::new(); buckets];
        for v in members.iter() {
            let b = tour.in_degree(v).saturating_sub(1) / width;
            fill[b.min(buckets - 1)].push(v);
        }
        let (j, bucket) = fill
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))
            .unwrap();
        best_seen = best_seen.max(bucket.len());
        if bucket.len() >= t {
            let chosen = &bucket[..t];
            let lo = chosen.iter().map(|&v| tour.in_degree(v)).min().unwrap();
            let hi = chosen.iter().map(|&v| tour.in_degree(v)).max().unwrap();
            debug_assert!(hi - lo < width && (j == 0 || lo > width * j));
            return Ok(NearlyRegularWitness {
                members: VertexSet::from_iter_in(n, chosen.iter().copied()),
                side,
                ratio: 4,
                center_m: Some((lo + hi) / 2),
                window_halfwidth: Some(width),
                small_instance: n < 10,
            });
        }
    }
    Err(Error::domain(format!(
        "no in-degree window holds {t} nearly-regular vertices (largest holds {best_seen})"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainWitness<T> {
    /// Indices into the input, listed in chain order.
    pub indices: Vec<usize>,
    pub items: Vec<T>,
    /// One entry per ordering; the first is always `Increasing`.
    pub directions: Vec<Direction>,
}

impl<T> ChainWitness<T> {
    /// Checks monotonicity of the chain under every ordering.
    pub fn audit(&self, orderings: &[Vec<usize>]) -> bool {
        orderings.iter().zip(&self.directions).all(|(rank, dir)| {
            self.indices.windows(2).all(|w| match dir {
                Direction::Increasing => rank[w[0]] < rank[w[1]],
                Direction::Decreasing => rank[w[0]] > rank[w[1]],
            })
        })
    }
}

/// Positions of a longest strictly increasing subsequence (patience sorting).
pub fn longest_increasing(values: &[usize]) -> Vec<usize> {
    // tails[l] = position ending the best increasing run of length l+1
    let mut tails: Vec<usize> = Vec::new();
    let mut prev = vec![usize::MAX; values.len()];
    for (i, &x) in values.iter().enumerate() {
        let l = tails.partition_point(|&p| values[p] < x);
        if l > 0 {
            prev[i] = tails[l - 1];
        }
        if l == tails.len() {
            tails.push(i);
        } else {
            tails[l] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        out.push(i);
        cur = (prev[i] != usize::MAX).then(|| prev[i]);
    }
    out.reverse();
    out
}

/// The longer of a longest increasing and a longest decreasing subsequence; ties go to increasing.
pub fn longest_monotone(values: &[usize]) -> (Vec<usize>, Direction) {
    let inc = longest_increasing(values);
    let flipped: Vec<usize> = values.iter().map(|&x| usize::MAX - x).collect();
    let dec = longest_increasing(&flipped);
    if dec.len() > inc.len() {
        (dec, Direction::Decreasing)
    } else {
        (inc, Direction::Increasing)
    }
}

/// A subset of size at least `⌈n^(1/2^(ℓ-1))⌉` increasing under the first ordering and monotone under every other.
///
/// Each ordering is a rank vector: `ordering[i]` is the position of item `i`.
pub fn multi_order_monotone_subset<T: Clone>(items: &[T], orderings: &[Vec<usize>]) -> Result<ChainWitness<T>> {
    let n = items.len();
    if orderings.is_empty() {
        return Err(Error::domain("at least one ordering is required"));
    }
    for (o, rank) in orderings.iter().enumerate() {
        let mut seen = vec![false; n];
        if rank.len() != n || rank.iter().any(|&r| r >= n || std::mem::replace(&mut seen[r], true)) {
            return Err(Error::domain(format!("ordering {} is not a total order on the items", o + 1)));
        }
    }
    let mut seq: Vec<usize> = (0..n).collect();
    seq.sort_by_key(|&i| orderings[0][i]);
    let mut directions = vec![Direction::Increasing];
    for rank in &orderings[1..] {
        let values: Vec<usize> = seq.iter().map(|&i| rank[i]).collect();
        let (positions, dir) = longest_monotone(&values);
        seq = positions.into_iter().map(|p| seq[p]).collect();
        directions.push(dir);
    }
    Ok(ChainWitness {
        items: seq.iter().map(|&i| items[i].clone()).collect(),
        indices: seq,
        directions,
    })
}

/// `⌈n^(1/2^(ℓ-1))⌉`, computed exactly.
pub fn chain_floor(n: usize, ell: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let e = 1u32 << (ell.max(1) - 1).min(31);
    // smallest s with s^e ≥ n
    let mut s = 1usize;
    while (s as u128).checked_pow(e).is_some_and(|p| p < n as u128) {
        s += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_tournament_qualifies_everywhere() {
        let t = Tournament::rotational(11).unwrap();
        let w = nearly_regular_subset(&t);
        assert_eq!(w.members.len(), 11);
        assert!(w.audit(&t));
        let win = nearly_regular_window_subset(&Tournament::rotational(31).unwrap(), 3).unwrap();
        assert_eq!(win.members.len(), 3);
        assert!(win.audit(&Tournament::rotational(31).unwrap()));
        assert_eq!(win.center_m, Some(15));
    }

    #[test]
    fn transitive_members_pass_degree_scan() {
        let t = Tournament::transitive(20);
        let w = nearly_regular_subset(&t);
        for v in 0..20 {
            let (dp, dm) = (t.out_degree(v), t.in_degree(v));
            let qualifies = match w.side {
                Side::OutDominant => dm <= dp && dp <= 4 * dm,
                Side::InDominant => dp <= dm && dm <= 4 * dp,
            };
            assert_eq!(w.members.contains(v), qualifies, "vertex {v}");
        }
        assert!(w.members.len() >= 2);
    }

    #[test]
    fn window_size_one_and_bad_sizes() {
        let t = Tournament::random(15, 2);
        let w = nearly_regular_window_subset(&t, 1).unwrap();
        assert_eq!(w.members.len(), 1);
        assert!(w.audit(&t));
        assert!(nearly_regular_window_subset(&t, 16).is_err());
        assert!(nearly_regular_window_subset(&t, 0).is_err());
        assert!(nearly_regular_subset(&Tournament::random(5, 1)).small_instance);
    }

    #[test]
    fn identical_orderings_keep_everything() {
        let items: Vec<u32> = (0..16).collect();
        let ord: Vec<usize> = (0..16).rev().collect();
        let w = multi_order_monotone_subset(&items, &[ord.clone(), ord.clone()]).unwrap();
        assert_eq!(w.indices.len(), 16);
        assert_eq!(w.directions, vec![Direction::Increasing, Direction::Increasing]);
        assert_eq!(w.items[0], 15);
        let single = multi_order_monotone_subset(&items, std::slice::from_ref(&ord)).unwrap();
        assert_eq!(single.indices.len(), 16);
    }

    #[test]
    fn non_total_order_rejected() {
        let items = [0, 1, 2];
        assert!(multi_order_monotone_subset(&items, &[vec![0, 1, 1]]).is_err());
        assert!(multi_order_monotone_subset(&items, &[vec![0, 1]]).is_err());
        assert!(multi_order_monotone_subset::<i32>(&items, &[]).is_err());
    }

    #[test]
    fn floors() {
        assert_eq!(chain_floor(16, 2), 4);
        assert_eq!(chain_floor(17, 2), 5);
        assert_eq!(chain_floor(81, 3), 3);
        assert_eq!(chain_floor(256, 3), 4);
        assert_eq!(chain_floor(7, 1), 7);
    }

    #[test]
    fn patience_examples() {
        assert_eq!(longest_increasing(&[3, 1, 4, 1, 5, 9, 2, 6]).len(), 4);
        let (pos, dir) = longest_monotone(&[5, 4, 3, 6, 2]);
        assert_eq!(dir, Direction::Decreasing);
        assert_eq!(pos, vec![0, 1, 2, 4]);
    }
}
