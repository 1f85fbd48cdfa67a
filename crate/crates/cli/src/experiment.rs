//! Grid experiments: one row per parameter cell, rows in grid order.
//!
//! A spec is a JSON object:
//!
//! ```json
//! { "kind": "c32", "grid": { "k": [3, 4], "n": [150], "seed": [1, 2] },
//!   "cells": [{ "k": 3, "n": 150, "seed": 9 }], "budget": 1000000, "link": true }
//! ```
//!
//! Grid axes expand as a cartesian product in the order k, m, n, seed and
//! explicit cells follow. Repeated cells run once.

use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use tourlink::constructions::{build_construction_31, build_construction_32, Construction31Params, Construction32Params};
use tourlink::flow::vertex_connectivity;
use tourlink::oracle::{find_linkage_exact, LinkageInstance, DEFAULT_BUDGET};
use tourlink::{Tournament, Vertex};

use crate::{CmdResult, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Random,
    C31,
    C32,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Grid {
    #[serde(default)]
    k: Vec<usize>,
    #[serde(default)]
    m: Vec<usize>,
    #[serde(default)]
    n: Vec<usize>,
    #[serde(default)]
    seed: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Cell {
    k: Option<usize>,
    m: Option<usize>,
    n: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Spec {
    kind: Kind,
    #[serde(default)]
    grid: Grid,
    #[serde(default)]
    cells: Vec<Cell>,
    budget: Option<u64>,
    /// Run the exact search on the designated pairs (default on).
    link: Option<bool>,
}

#[derive(Debug, Clone, Default, Serialize)]
struct Row {
    index: usize,
    kind: String,
    k: Option<usize>,
    m: Option<usize>,
    n: Option<usize>,
    seed: Option<u64>,
    kappa: Option<usize>,
    /// The connectivity the construction promises, where it promises one.
    kappa_floor: Option<usize>,
    min_out: Option<usize>,
    min_in: Option<usize>,
    linkage: Option<String>,
    nodes_explored: Option<u64>,
    gen_ms: Option<f64>,
    kappa_ms: Option<f64>,
    link_ms: Option<f64>,
    error: Option<String>,
}

fn axis<T: Copy>(v: &[T]) -> Vec<Option<T>> {
    if v.is_empty() {
        vec![None]
    } else {
        v.iter().copied().map(Some).collect()
    }
}

fn expand(spec: &Spec) -> Vec<Cell> {
    let g = &spec.grid;
    let mut cells = Vec::new();
    let any_axis = !(g.k.is_empty() && g.m.is_empty() && g.n.is_empty() && g.seed.is_empty());
    if any_axis {
        for &k in &axis(&g.k) {
            for &m in &axis(&g.m) {
                for &n in &axis(&g.n) {
                    for &seed in &axis(&g.seed) {
                        cells.push(Cell { k, m, n, seed });
                    }
                }
            }
        }
    }
    cells.extend(spec.cells.iter().copied());
    cells
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn run_cell(kind: Kind, cell: Cell, budget: u64, do_link: bool, row: &mut Row) -> Result<(), String> {
    let seed = cell.seed.ok_or("missing seed")?;
    let n = cell.n.ok_or("missing n")?;
    let start = Instant::now();
    let (tour, pairs): (Tournament, Option<Vec<(Vertex, Vertex)>>) = match kind {
        Kind::Random => {
            if n == 0 {
                return Err("n must be positive".into());
            }
            let pairs = cell.k.map(|k| (0..k).map(|i| (i, n - 1 - i)).collect());
            (Tournament::random(n, seed), pairs)
        }
        Kind::C31 => {
            let k = cell.k.ok_or("missing k")?;
            let m = cell.m.ok_or("missing m")?;
            row.kappa_floor = Some((2 * k).saturating_sub(1));
            let c = build_construction_31(&Construction31Params::new(k, m, n, seed)).map_err(|e| e.to_string())?;
            (c.tournament, Some(c.parts.pairs))
        }
        Kind::C32 => {
            let k = cell.k.ok_or("missing k")?;
            row.kappa_floor = Some((5 * k).saturating_sub(1));
            let c = build_construction_32(&Construction32Params::new(k, n, seed)).map_err(|e| e.to_string())?;
            (c.tournament, Some(c.parts.pairs))
        }
    };
    row.gen_ms = Some(ms(start));
    row.min_out = Some(tour.min_out_degree());
    row.min_in = Some(tour.min_in_degree());

    let start = Instant::now();
    row.kappa = Some(vertex_connectivity(&tour).kappa);
    row.kappa_ms = Some(ms(start));

    if let (true, Some(pairs)) = (do_link, pairs) {
        let start = Instant::now();
        let inst = LinkageInstance::new(n, pairs).map_err(|e| e.to_string())?;
        let v = find_linkage_exact(&tour, &inst, budget).map_err(|e| e.to_string())?;
        row.linkage = Some(serde_json::to_value(v.status).ok().and_then(|s| s.as_str().map(String::from)).unwrap_or_default());
        row.nodes_explored = Some(v.nodes_explored);
        row.link_ms = Some(ms(start));
    }
    Ok(())
}

fn csv_table(rows: &[Row]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "index",
        "kind",
        "k",
        "m",
        "n",
        "seed",
        "kappa",
        "kappa_floor",
        "min_out",
        "min_in",
        "linkage",
        "nodes_explored",
        "gen_ms",
        "kappa_ms",
        "link_ms",
        "error",
    ])
    .map_err(|e| Failure::Internal(e.to_string()))?;
    fn opt<T: ToString>(v: &Option<T>) -> String {
        v.as_ref().map(ToString::to_string).unwrap_or_default()
    }
    fn time(v: &Option<f64>) -> String {
        v.map(|t| format!("{t:.3}")).unwrap_or_default()
    }
    for r in rows {
        w.write_record([
            r.index.to_string(),
            r.kind.clone(),
            opt(&r.k),
            opt(&r.m),
            opt(&r.n),
            opt(&r.seed),
            opt(&r.kappa),
            opt(&r.kappa_floor),
            opt(&r.min_out),
            opt(&r.min_in),
            opt(&r.linkage),
            opt(&r.nodes_explored),
            time(&r.gen_ms),
            time(&r.kappa_ms),
            time(&r.link_ms),
            opt(&r.error),
        ])
        .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Internal(e.to_string()))
}

pub(crate) fn run(spec_path: &Path, out: Option<&Path>, as_json: bool) -> CmdResult {
    let text = crate::read(spec_path)?;
    let spec: Spec = serde_json::from_str(&text).map_err(|e| {
        Failure::Usage(format!(
            "{}: line {}, column {}: {e}",
            spec_path.display(),
            e.line(),
            e.column()
        ))
    })?;

    let mut seen = HashSet::new();
    let mut warnings = Vec::new();
    let mut cells = Vec::new();
    for (i, cell) in expand(&spec).into_iter().enumerate() {
        if cell.seed.is_none() {
            return Err(Failure::Usage(format!("cell {i} has no seed")));
        }
        if seen.insert(cell) {
            cells.push(cell);
        } else {
            let w = format!("duplicate cell {} dropped", serde_json::to_string(&cell).unwrap_or_default());
            eprintln!("warning: {w}");
            warnings.push(w);
        }
    }

    let budget = spec.budget.unwrap_or(DEFAULT_BUDGET);
    let do_link = spec.link.unwrap_or(true);
    let kind_name = serde_json::to_value(spec.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let rows: Vec<Row> = cells
        .par_iter()
        .enumerate()
        .map(|(index, &cell)| {
            let mut row = Row {
                index,
                kind: kind_name.clone(),
                k: cell.k,
                m: cell.m,
                n: cell.n,
                seed: cell.seed,
                ..Row::default()
            };
            if let Err(e) = run_cell(spec.kind, cell, budget, do_link, &mut row) {
                row.error = Some(e);
            }
            row
        })
        .collect();

    let csv = csv_table(&rows)?;
    let doc = json!({ "kind": spec.kind, "budget": budget, "warnings": warnings, "rows": rows });
    let json_text = serde_json::to_string_pretty(&doc).expect("rows serialize") + "\n";
    match out {
        Some(prefix) => {
            crate::write(&prefix.with_extension("csv"), &csv)?;
            crate::write(&prefix.with_extension("json"), &json_text)?;
        }
        None if as_json => print!("{json_text}"),
        None => print!("{csv}"),
    }
    Ok(true)
}
