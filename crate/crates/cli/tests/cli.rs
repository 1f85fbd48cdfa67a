use std::collections::VecDeque;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use tourlink::constructions::Certificate;
use tourlink::Tournament;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tourlink"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

/// Adjacency read straight off the text format, checking its shape on the way.
fn raw_matrix(text: &str) -> Vec<Vec<bool>> {
    let lines: Vec<&str> = text.lines().collect();
    let n: usize = lines[0].parse().unwrap();
    assert_eq!(lines.len(), n + 1);
    let m: Vec<Vec<bool>> = lines[1..]
        .iter()
        .enumerate()
        .map(|(u, l)| {
            assert_eq!(l.len(), n);
            l.chars()
                .enumerate()
                .map(|(v, c)| match c {
                    '1' => true,
                    '0' => false,
                    '-' => {
                        assert_eq!(u, v);
                        false
                    }
                    other => panic!("unexpected {other:?}"),
                })
                .collect()
        })
        .collect();
    for u in 0..n {
        for v in 0..n {
            if u != v {
                assert_ne!(m[u][v], m[v][u], "pair ({u}, {v})");
            }
        }
    }
    m
}

fn reaches(m: &[Vec<bool>], s: usize, t: usize, removed: &[usize]) -> bool {
    let n = m.len();
    let mut seen = vec![false; n];
    for &r in removed {
        seen[r] = true;
    }
    if seen[s] || seen[t] {
        return false;
    }
    seen[s] = true;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        if u == t {
            return true;
        }
        for v in 0..n {
            if m[u][v] && !seen[v] {
                seen[v] = true;
                q.push_back(v);
            }
        }
    }
    false
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const CYCLE: &str = "3\n-10\n0-1\n10-\n";
const TRANSITIVE: &str = "3\n-11\n0-1\n00-\n";

fn gen_c31(dir: &Path) {
    let o = run(dir, &["gen", "c31", "--k", "2", "--m", "4", "--n", "41", "--seed", "7", "--out", "c31.txt"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

fn gen_c32(dir: &Path) {
    let o = run(dir, &["gen", "c32", "--k", "3", "--n", "150", "--seed", "7", "--out", "c32.txt"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn gen_random_writes_a_parseable_reproducible_table() {
    let d = TempDir::new().unwrap();
    let o = run(d.path(), &["gen", "random", "--n", "20", "--seed", "7", "--out", "a.txt"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(d.path().join("a.txt")).unwrap();
    assert_eq!(text.lines().count(), 21);
    raw_matrix(&text);
    assert_eq!(Tournament::from_text(&text).unwrap().to_text(), text);
    assert_eq!(text, Tournament::random(20, 7).to_text());

    let again = run(d.path(), &["gen", "random", "--n", "20", "--seed", "7"]);
    assert_eq!(stdout(&again), text);
    let other = run(d.path(), &["gen", "random", "--n", "20", "--seed", "8"]);
    assert_ne!(stdout(&other), text);
}

#[test]
fn randomized_commands_refuse_to_run_without_a_seed() {
    let d = TempDir::new().unwrap();
    write(d.path(), "t.txt", CYCLE);
    for args in [
        &["gen", "random", "--n", "20"][..],
        &["gen", "c31", "--k", "2", "--m", "4", "--n", "41", "--out", "x.txt"],
        &["gen", "c32", "--k", "3", "--n", "150", "--out", "y.txt"],
        &["check", "linked", "t.txt", "--k", "1", "--samples", "5"],
    ] {
        let o = run(d.path(), args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(stderr(&o).contains("--seed"), "{args:?}: {}", stderr(&o));
    }
    write(d.path(), "g.json", r#"{"kind":"random","grid":{"k":[2],"n":[20]}}"#);
    assert_eq!(code(&run(d.path(), &["experiment", "g.json"])), 2);
}

#[test]
fn gen_c31_writes_the_part_map() {
    let d = TempDir::new().unwrap();
    gen_c31(d.path());
    let text = fs::read_to_string(d.path().join("c31.txt")).unwrap();
    assert_eq!(raw_matrix(&text).len(), 41);
    let parts = json_file(&d.path().join("c31.parts.json"));
    assert_eq!(parts["kind"], "c31");
    let size = |name: &str| parts["parts"][name].as_array().unwrap().len();
    assert_eq!(size("C"), 1);
    assert_eq!((size("A"), size("B")), (2, 2));
    assert_eq!(size("X") + size("Y"), 36);
    let mut all: Vec<u64> = parts["parts"]
        .as_object()
        .unwrap()
        .values()
        .flat_map(|v| v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()))
        .collect();
    all.sort_unstable();
    assert_eq!(all, (0..41).collect::<Vec<u64>>());
    assert_eq!(parts["pairs"].as_array().unwrap().len(), 2);
}

#[test]
fn gen_c32_writes_the_part_map() {
    let d = TempDir::new().unwrap();
    let o = run(
        d.path(),
        &["gen", "c32", "--k", "3", "--n", "150", "--seed", "7", "--out", "t.txt", "--parts", "map.json"],
    );
    assert_eq!(code(&o), 0);
    let parts = json_file(&d.path().join("map.json"));
    assert_eq!(parts["parts"]["S"].as_array().unwrap().len(), 11);
    assert_eq!(parts["parts"]["X"].as_array().unwrap().len(), 3);
    assert_eq!(parts["pairs"].as_array().unwrap().len(), 6);
    assert!(!d.path().join("t.parts.json").exists());
}

#[test]
fn generator_failures_exit_nonzero_with_a_diagnostic() {
    let d = TempDir::new().unwrap();
    let o = run(d.path(), &["gen", "c31", "--k", "2", "--m", "4", "--n", "20", "--seed", "1", "--out", "t.txt"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("domain error"));
    let o = run(d.path(), &["gen", "c32", "--k", "3", "--n", "35", "--seed", "1", "--out", "t.txt"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("generation failed after 64 attempts"), "{}", stderr(&o));
}

#[test]
fn check_connectivity_reports_kappa() {
    let d = TempDir::new().unwrap();
    write(d.path(), "cyc.txt", CYCLE);
    let o = run(d.path(), &["check", "connectivity", "cyc.txt"]);
    assert_eq!(code(&o), 0);
    let r = json_out(&o);
    assert_eq!(r["kappa"], 1);
    assert_eq!(r["verdict"], true);
    assert!(r["wall_ms"].is_number());
    let o = run(d.path(), &["check", "connectivity", "cyc.txt", "--k", "2", "--format", "text"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "kappa 1\n");
}

#[test]
fn check_k_connected_on_the_first_construction() {
    let d = TempDir::new().unwrap();
    gen_c31(d.path());
    let m = raw_matrix(&fs::read_to_string(d.path().join("c31.txt")).unwrap());
    let o = run(d.path(), &["check", "k-connected", "c31.txt", "--k", "3"]);
    assert_eq!(code(&o), 0);
    let r = json_out(&o);
    assert_eq!(r["verdict"], true);
    assert_eq!(r["certificate"]["kind"], "connectivity");

    // κ is 3 here, so 4 must fail with a separator that really separates
    let o = run(d.path(), &["check", "k-connected", "c31.txt", "--k", "4"]);
    assert_eq!(code(&o), 1);
    let r = json_out(&o);
    let sep: Vec<usize> = serde_json::from_value(r["result"]["separator"].clone()).unwrap();
    let (s, t): (usize, usize) = serde_json::from_value(r["result"]["pair"].clone()).unwrap();
    assert!(sep.len() < 4);
    assert!(!reaches(&m, s, t, &sep));
}

#[test]
fn check_linked_on_a_transitive_file_gives_a_witness() {
    let d = TempDir::new().unwrap();
    let path = write(d.path(), "tr.txt", TRANSITIVE);
    let m = raw_matrix(&fs::read_to_string(path).unwrap());
    let o = run(d.path(), &["check", "linked", "tr.txt", "--k", "1"]);
    assert_eq!(code(&o), 1);
    let r = json_out(&o);
    assert_eq!(r["result"]["status"], "not-linked");
    let (x, y): (usize, usize) = serde_json::from_value(r["result"]["witness"]["pairs"][0].clone()).unwrap();
    assert!(!reaches(&m, x, y, &[]));

    write(d.path(), "cyc.txt", CYCLE);
    let o = run(d.path(), &["check", "linked", "cyc.txt", "--k", "1", "--samples", "4", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_out(&o)["result"]["instances_checked"], 4);
}

#[test]
fn parse_failures_name_line_and_column() {
    let d = TempDir::new().unwrap();
    write(d.path(), "bad.txt", "3\n-11\n0-1\n0x-\n");
    let o = run(d.path(), &["check", "connectivity", "bad.txt"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 4, column 2"), "{}", stderr(&o));
    let o = run(d.path(), &["check", "connectivity", "missing.txt"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn link_emits_paths_along_real_edges() {
    let d = TempDir::new().unwrap();
    let p = write(d.path(), "cyc.txt", CYCLE);
    let m = raw_matrix(&fs::read_to_string(p).unwrap());
    let o = run(d.path(), &["link", "cyc.txt", "--pairs", "0:2"]);
    assert_eq!(code(&o), 0);
    let r = json_out(&o);
    assert_eq!(r["status"], "linked");
    let path: Vec<usize> = serde_json::from_value(r["paths"][0].clone()).unwrap();
    assert_eq!((path[0], *path.last().unwrap()), (0, 2));
    assert!(path.windows(2).all(|w| m[w[0]][w[1]]));
    assert!(r.get("trace").is_none());

    let o = run(d.path(), &["link", "cyc.txt", "--pairs", "0:2", "--trace"]);
    let r = json_out(&o);
    assert_eq!(r["trace"]["failure"]["stage"], "carve");
    assert_eq!(r["config"]["fallback"], "exact");
}

#[test]
fn link_refuses_the_designated_pairs_of_the_first_construction() {
    let d = TempDir::new().unwrap();
    gen_c31(d.path());
    let o = run(d.path(), &["link", "c31.txt", "--parts", "c31.parts.json"]);
    assert_eq!(code(&o), 0);
    let r = json_out(&o);
    assert_eq!(r["status"], "not-linked");
    assert_eq!(r["method"], "exact");
    assert!(r["paths"].is_null());

    let o = run(d.path(), &["link", "c31.txt", "--parts", "c31.parts.json", "--fallback", "none"]);
    assert_eq!(json_out(&o)["status"], "unknown");
}

#[test]
fn link_with_relaxed_constants_runs_the_pipeline() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&run(d.path(), &["gen", "random", "--n", "300", "--seed", "5", "--out", "t.txt"])), 0);
    let m = raw_matrix(&fs::read_to_string(d.path().join("t.txt")).unwrap());
    let o = run(
        d.path(),
        &[
            "link", "t.txt", "--pairs", "0:1,2:3", "--ell", "6", "--ns-size", "6", "--w-size", "30",
            "--free-threshold", "2", "--trace",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_out(&o);
    assert_eq!(r["status"], "linked");
    let paths: Vec<Vec<usize>> = serde_json::from_value(r["paths"].clone()).unwrap();
    let mut used = vec![false; 300];
    for (p, (x, y)) in paths.iter().zip([(0, 1), (2, 3)]) {
        assert_eq!((p[0], *p.last().unwrap()), (x, y));
        assert!(p.windows(2).all(|w| m[w[0]][w[1]]));
        for &v in p {
            assert!(!used[v]);
            used[v] = true;
        }
    }
    let stages: Vec<String> = r["trace"]["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["stage"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(stages[0], "carve");
}

#[test]
fn bad_pairs_and_flags_are_usage_errors() {
    let d = TempDir::new().unwrap();
    write(d.path(), "cyc.txt", CYCLE);
    for args in [
        &["link", "cyc.txt", "--pairs", "0-2"][..],
        &["link", "cyc.txt", "--pairs", "0:1,0:2"],
        &["link", "cyc.txt", "--pairs", "0:9"],
        &["link", "cyc.txt"],
        &["link", "cyc.txt", "--pairs", "0:2", "--ell", "1"],
        &["link", "cyc.txt", "--pairs", "0:2", "--fallback", "maybe"],
        &["check", "connectivity", "cyc.txt", "--format", "xml"],
        &["check", "k-connected", "cyc.txt"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&run(d.path(), args)), 2, "{args:?}");
    }
}

#[test]
fn certify_and_verify_the_first_construction() {
    let d = TempDir::new().unwrap();
    gen_c31(d.path());
    let o = run(d.path(), &["certify", "c31", "c31.txt", "--parts", "c31.parts.json", "--out", "cert.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(d.path().join("cert.json")).unwrap();
    let cert = Certificate::from_json(&text).unwrap();
    assert!(cert.verdict);
    let v: Value = serde_json::from_str(&text).unwrap();
    for key in ["schema_version", "kind", "params", "seed", "payload", "verdict"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["seed"], 7);
    assert_eq!(v["payload"]["oracle"]["status"], "not-linked");
    let tour = Tournament::from_text(&fs::read_to_string(d.path().join("c31.txt")).unwrap()).unwrap();
    assert!(tourlink::constructions::verify_certificate(&tour, &cert));

    let o = run(d.path(), &["verify", "c31.txt", "--cert", "cert.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_out(&o)["accepted"], true);
}

#[test]
fn certify_the_second_construction_by_counting() {
    let d = TempDir::new().unwrap();
    gen_c32(d.path());
    let m = raw_matrix(&fs::read_to_string(d.path().join("c32.txt")).unwrap());
    let o = run(d.path(), &["certify", "c32", "c32.txt", "--parts", "c32.parts.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json_out(&o);
    assert_eq!(v["kind"], "not-linked-32");
    assert_eq!(v["verdict"], true);
    let p = &v["payload"];
    assert_eq!(p["witnesses"].as_array().unwrap().len(), 6);
    assert_eq!((p["core_vertices_needed"].as_u64(), p["core_size"].as_u64()), (Some(18), Some(17)));

    // each witnessed pair really is cut off inside W plus its endpoints
    let parts = json_file(&d.path().join("c32.parts.json"));
    let w: Vec<usize> = serde_json::from_value(parts["parts"]["W"].clone()).unwrap();
    for pair in parts["pairs"].as_array().unwrap() {
        let (s, t): (usize, usize) = serde_json::from_value(pair.clone()).unwrap();
        let removed: Vec<usize> = (0..150).filter(|v| *v != s && *v != t && !w.contains(v)).collect();
        assert!(!reaches(&m, s, t, &removed), "{s} -> {t}");
    }
    fs::write(d.path().join("cert.json"), stdout(&o)).unwrap();
    let o = run(d.path(), &["verify", "c32.txt", "--cert", "cert.json", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "not-linked-32: accepted\n");
}

#[test]
fn certificates_do_not_transfer_to_other_tournaments() {
    let d = TempDir::new().unwrap();
    gen_c31(d.path());
    assert_eq!(code(&run(d.path(), &["gen", "random", "--n", "41", "--seed", "3", "--out", "r.txt"])), 0);
    let o = run(d.path(), &["certify", "c31", "r.txt", "--parts", "c31.parts.json"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("check failed"));
    assert_eq!(json_out(&o)["verdict"], false);

    let o = run(d.path(), &["certify", "c31", "c31.txt", "--parts", "c31.parts.json", "--out", "cert.json"]);
    assert_eq!(code(&o), 0);
    let o = run(d.path(), &["verify", "r.txt", "--cert", "cert.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json_out(&o)["accepted"], false);

    write(d.path(), "junk.json", "{\n  \"schema_version\": 1,\n  oops\n}");
    let o = run(d.path(), &["verify", "c31.txt", "--cert", "junk.json"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

fn strip_timings(mut v: Value) -> Value {
    for row in v["rows"].as_array_mut().unwrap() {
        let obj = row.as_object_mut().unwrap();
        for key in ["gen_ms", "kappa_ms", "link_ms"] {
            obj.remove(key);
        }
    }
    v
}

#[test]
fn experiment_grid_over_the_second_construction() {
    let d = TempDir::new().unwrap();
    write(
        d.path(),
        "spec.json",
        r#"{"kind":"c32","grid":{"k":[3,4],"n":[150],"seed":[1,2,3,4,5]}}"#,
    );
    let o = run(d.path(), &["experiment", "spec.json", "--out", "res"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = json_file(&d.path().join("res.json"));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r["index"], i);
        let k = r["k"].as_u64().unwrap();
        assert_eq!(k, if i < 5 { 3 } else { 4 });
        assert_eq!(r["seed"].as_u64().unwrap(), (i % 5 + 1) as u64);
        assert!(r["kappa"].as_u64().unwrap() >= 5 * k - 1);
        assert_eq!(r["linkage"], "not-linked");
        assert!(r["error"].is_null());
    }
    let csv = fs::read_to_string(d.path().join("res.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0].starts_with("index,kind,k,m,n,seed,kappa"));
    assert!(lines[1].starts_with("0,c32,3,,150,1,"));

    let again = run(d.path(), &["experiment", "spec.json", "--format", "json"]);
    assert_eq!(strip_timings(json_out(&again)), strip_timings(doc));
}

#[test]
fn empty_grid_gives_an_empty_table() {
    let d = TempDir::new().unwrap();
    write(d.path(), "spec.json", r#"{"kind":"c32","grid":{}}"#);
    let o = run(d.path(), &["experiment", "spec.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = run(d.path(), &["experiment", "spec.json", "--format", "json"]);
    assert_eq!(json_out(&o)["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn duplicate_cells_run_once_with_a_warning() {
    let d = TempDir::new().unwrap();
    write(
        d.path(),
        "spec.json",
        r#"{"kind":"random","grid":{"k":[2],"n":[30],"seed":[1,1,2]},"cells":[{"k":2,"n":30,"seed":2}]}"#,
    );
    let o = run(d.path(), &["experiment", "spec.json", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stderr(&o).matches("warning: duplicate cell").count(), 2);
    let doc = json_out(&o);
    assert_eq!(doc["warnings"].as_array().unwrap().len(), 2);
    let seeds: Vec<u64> = doc["rows"].as_array().unwrap().iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, [1, 2]);
}

#[test]
fn cell_errors_stay_in_their_row() {
    let d = TempDir::new().unwrap();
    write(d.path(), "spec.json", r#"{"kind":"c32","grid":{"k":[2,3],"n":[60],"seed":[4]},"link":false}"#);
    let o = run(d.path(), &["experiment", "spec.json", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc = json_out(&o);
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows[0]["error"].as_str().unwrap().contains("k ≥ 3"));
    assert!(rows[1]["error"].is_null());
    assert!(rows[1]["kappa"].as_u64().unwrap() >= 14);
    assert!(rows[1]["linkage"].is_null());

    write(d.path(), "bad.json", r#"{"kind":"c33"}"#);
    assert_eq!(code(&run(d.path(), &["experiment", "bad.json"])), 2);
}
