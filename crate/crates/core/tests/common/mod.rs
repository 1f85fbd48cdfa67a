//! Brute-force reference implementations shared by the integration tests.
//!
//! Nothing here calls into the algorithms under test beyond reading
//! orientations from a `Tournament`.
#![allow(dead_code)]

use tourlink::Tournament;

pub fn edge(t: &Tournament, u: usize, v: usize) -> bool {
    t.has_edge(u, v)
}

/// Strong connectivity of `t` restricted to the vertices in `mask`.
pub fn strongly_connected_mask(t: &Tournament, mask: u64) -> bool {
    let n = t.order();
    let verts: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
    let Some(&root) = verts.first() else {
        return true;
    };
    let reach = |forward: bool| {
        let mut seen = 1u64 << root;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in &verts {
                let e = if forward { edge(t, u, w) } else { edge(t, w, u) };
                if e && seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        seen
    };
    reach(true) == mask && reach(false) == mask
}

/// κ by enumerating every vertex subset.
pub fn brute_kappa(t: &Tournament) -> usize {
    let n = t.order();
    assert!(n <= 20);
    let full = (1u64 << n) - 1;
    let mut best = n - 1;
    for removed in 0..=full {
        let r = removed.count_ones() as usize;
        if r >= best || n - r < 2 {
            continue;
        }
        if !strongly_connected_mask(t, full & !removed) {
            best = r;
        }
    }
    best
}

/// Is `b` reachable from `a` using only vertices in `mask` as interior?
pub fn reachable_mask(t: &Tournament, a: usize, b: usize, mask: u64) -> bool {
    let n = t.order();
    let mut seen = 1u64 << a;
    let mut stack = vec![a];
    while let Some(u) = stack.pop() {
        if edge(t, u, b) {
            return true;
        }
        for w in 0..n {
            if mask >> w & 1 == 1 && seen >> w & 1 == 0 && edge(t, u, w) {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    false
}

/// Smallest set of internal vertices separating `a` from `b`; `None` when `a → b` is an edge.
pub fn brute_min_separator(t: &Tournament, a: usize, b: usize) -> Option<usize> {
    if edge(t, a, b) {
        return None;
    }
    let n = t.order();
    let others: Vec<usize> = (0..n).filter(|&v| v != a && v != b).collect();
    let mut best = others.len();
    for sub in 0u64..(1 << others.len()) {
        let size = sub.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut mask = 0u64;
        for (i, &v) in others.iter().enumerate() {
            if sub >> i & 1 == 0 {
                mask |= 1 << v;
            }
        }
        if !reachable_mask(t, a, b, mask) {
            best = size;
        }
    }
    Some(best)
}

/// Every simple path from `a` to `b` whose vertices lie in `mask` (endpoints included automatically).
pub fn simple_paths(t: &Tournament, a: usize, b: usize, mask: u64) -> Vec<Vec<usize>> {
    fn go(t: &Tournament, cur: &mut Vec<usize>, used: u64, b: usize, mask: u64, out: &mut Vec<Vec<usize>>) {
        let u = *cur.last().unwrap();
        if u == b {
            out.push(cur.clone());
            return;
        }
        for w in 0..t.order() {
            let allowed = w == b || mask >> w & 1 == 1;
            if allowed && used >> w & 1 == 0 && edge(t, u, w) {
                cur.push(w);
                go(t, cur, used | 1 << w, b, mask, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut vec![a], 1 << a, b, mask, &mut out);
    out
}

/// Minimum total vertex count over systems of `count` disjoint source-to-target paths.
///
/// Paths start at distinct sources, end at distinct targets, avoid `forbidden`,
/// never visit another source and stop at the first target they reach.
pub fn brute_min_cost_system(
    t: &Tournament,
    sources: &[usize],
    targets: &[usize],
    forbidden: &[usize],
    count: usize,
) -> Option<usize> {
    let n = t.order();
    let mut interior_mask = (1u64 << n) - 1;
    for &v in sources.iter().chain(targets).chain(forbidden) {
        interior_mask &= !(1 << v);
    }
    // candidate paths per source: into any target, interior in interior_mask
    let per_source: Vec<Vec<(u64, usize)>> = sources
        .iter()
        .map(|&a| {
            let mut ps = Vec::new();
            for &b in targets {
                for p in simple_paths(t, a, b, interior_mask) {
                    let m = p.iter().fold(0u64, |m, &v| m | 1 << v);
                    ps.push((m, p.len()));
                }
            }
            ps
        })
        .collect();
    fn go(per: &[Vec<(u64, usize)>], i: usize, left: usize, used: u64, cost: usize, best: &mut Option<usize>) {
        if left == 0 {
            if best.is_none_or(|b| cost < b) {
                *best = Some(cost);
            }
            return;
        }
        if per.len() - i < left {
            return;
        }
        if best.is_some_and(|b| cost + 2 * left >= b) {
            return;
        }
        for &(m, len) in &per[i] {
            if m & used == 0 {
                go(per, i + 1, left - 1, used | m, cost + len, best);
            }
        }
        go(per, i + 1, left, used, cost, best);
    }
    let mut best = None;
    go(&per_source, 0, count, 0, 0, &mut best);
    best
}

/// Exhaustive k-linkage check by enumerating disjoint path combinations.
pub fn brute_linked(t: &Tournament, pairs: &[(usize, usize)]) -> bool {
    let n = t.order();
    let endpoints = pairs.iter().fold(0u64, |m, &(a, b)| m | 1 << a | 1 << b);
    let interior = ((1u64 << n) - 1) & !endpoints;
    let options: Vec<Vec<u64>> = pairs
        .iter()
        .map(|&(a, b)| {
            simple_paths(t, a, b, interior)
                .into_iter()
                .map(|p| p.iter().fold(0u64, |m, &v| m | 1 << v))
                .collect()
        })
        .collect();
    fn go(options: &[Vec<u64>], i: usize, used: u64) -> bool {
        if i == options.len() {
            return true;
        }
        options[i].iter().any(|&m| m & used == 0 && go(options, i + 1, used | m))
    }
    go(&options, 0, 0)
}

/// Longest strictly increasing subsequence length by quadratic DP.
pub fn lis_quadratic(xs: &[usize]) -> usize {
    let mut best = vec![1usize; xs.len()];
    for i in 0..xs.len() {
        for j in 0..i {
            if xs[j] < xs[i] {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Whether a digraph given by an adjacency predicate has a Hamiltonian path.
pub fn has_hamiltonian_path(n: usize, adj: impl Fn(usize, usize) -> bool) -> bool {
    if n == 0 {
        return true;
    }
    // dp[mask][v]: some path covering mask ends at v
    let mut dp = vec![vec![false; n]; 1 << n];
    for v in 0..n {
        dp[1 << v][v] = true;
    }
    for mask in 1usize..1 << n {
        for v in 0..n {
            if !dp[mask][v] {
                continue;
            }
            for w in 0..n {
                if mask >> w & 1 == 0 && adj(v, w) {
                    dp[mask | 1 << w][w] = true;
                }
            }
        }
    }
    dp[(1 << n) - 1].iter().any(|&b| b)
}

/// Checks a good family from its raw fields using only edge lookups.
pub fn check_good_family(
    t: &Tournament,
    blocks: &[Vec<usize>],
    fam: &tourlink::family::GoodFamily,
    ns_size: usize,
    ell: usize,
) -> Result<(), String> {
    use tourlink::family::Label;
    let n = t.order();
    let k = blocks.len();
    if fam.sets.len() != k {
        return Err("wrong number of sets".into());
    }
    let mut owner = vec![usize::MAX; n];
    let mut claim = |v: usize, i: usize| -> Result<(), String> {
        if owner[v] != usize::MAX {
            return Err(format!("vertex {v} used by sets {} and {i}", owner[v]));
        }
        owner[v] = i;
        Ok(())
    };
    for i in 0..k {
        let s = fam.sets[i].to_vec();
        if s.iter().any(|v| !blocks[i].contains(v)) {
            return Err(format!("S_{i} leaves W_{i}"));
        }
        for &v in &s {
            claim(v, i)?;
        }
        match fam.labels[i] {
            Label::NonSubdivision => {
                if s.len() != ns_size || fam.subdivisions[i].is_some() {
                    return Err(format!("plain S_{i} malformed"));
                }
            }
            Label::Subdivision => {
                let sub = fam.subdivisions[i].as_ref().ok_or("missing subdivision")?;
                if sub.branch != s || s.len() != ell {
                    return Err(format!("S_{i} is not its branch set"));
                }
                for &a in &s {
                    for &b in &s {
                        if a == b {
                            continue;
                        }
                        let c = sub
                            .connectors
                            .iter()
                            .find(|c| c.from == a && c.to == b)
                            .ok_or(format!("no connector {a}->{b}"))?;
                        let p = c.path.vertices();
                        if p.first() != Some(&a) || p.last() != Some(&b) || p.len() > 4 {
                            return Err(format!("bad connector {a}->{b}"));
                        }
                        if p.windows(2).any(|w| !t.has_edge(w[0], w[1])) {
                            return Err(format!("connector {a}->{b} uses a missing edge"));
                        }
                        for &w in &p[1..p.len() - 1] {
                            claim(w, i)?;
                        }
                    }
                }
                if sub.connectors.len() != ell * (ell - 1) {
                    return Err("extra connectors".into());
                }
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i == j || fam.labels[i] != Label::NonSubdivision || fam.labels[j] != Label::NonSubdivision {
                continue;
            }
            let forward = fam.sets[i].iter().all(|u| fam.sets[j].iter().all(|v| t.has_edge(u, v)));
            if forward != fam.orientation.contains(&(i, j)) {
                return Err(format!("orientation of ({i},{j}) wrong"));
            }
            if i < j && !forward && !fam.sets[j].iter().all(|u| fam.sets[i].iter().all(|v| t.has_edge(u, v))) {
                return Err(format!("plain sets {i},{j} not dominating"));
            }
        }
    }
    Ok(())
}

/// Two random halves `P = [0, half)` and `Q = [half, n)` with every edge oriented `Q → P`.
pub fn split_tournament(n: usize, half: usize, seed: u64) -> Tournament {
    let inner = Tournament::random(n, seed);
    Tournament::from_fn(n, |u, v| {
        let (pu, pv) = (u < half, v < half);
        if pu == pv {
            inner.has_edge(u, v)
        } else {
            // u < v here, so u is in P and v in Q
            false
        }
    })
}

/// `X = [0, a)`, `Y = [a, 2a)`, `M = [2a, 2a+b)` with `Y → X`, `Y → M → X`, and `M`
/// transitive with higher ids winning. Any two members of `M` obstruct greedy
/// embedding, and for `b > a/2` only `M` is nearly regular.
pub fn middle_layer_tournament(a: usize, b: usize, seed: u64) -> Tournament {
    let n = 2 * a + b;
    let inner = Tournament::random(n, seed);
    let part = |v: usize| if v < a { 0 } else if v < 2 * a { 1 } else { 2 };
    Tournament::from_fn(n, |u, v| match (part(u), part(v)) {
        (0, 0) | (1, 1) => inner.has_edge(u, v),
        (2, 2) => false,
        (0, _) => false,
        (1, _) => true,
        _ => unreachable!("u < v"),
    })
}
