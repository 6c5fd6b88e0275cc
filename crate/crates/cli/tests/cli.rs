use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn sltwo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sltwo")).args(args).output().unwrap()
}

fn json(out: &[u8]) -> serde_json::Value {
    serde_json::from_slice(out).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(out)))
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn circles(dir: &TempDir, gap: f64) -> String {
    let p = path(dir, "circles.txt");
    let mut s = String::from("model cyl\n");
    for h in [0.0, gap] {
        s.push_str("component 1\n");
        for k in 0..8 {
            s.push_str(&format!("{} {h}\n", 2.0 * PI * k as f64 / 8.0));
        }
    }
    fs::write(&p, s).unwrap();
    p
}

fn obj_t_range(file: &Path) -> (f64, f64, usize) {
    let text = fs::read_to_string(file).unwrap();
    let ts: Vec<f64> = text
        .lines()
        .filter(|l| l.starts_with("v "))
        .map(|l| l.split_whitespace().nth(3).unwrap().parse().unwrap())
        .collect();
    let lo = ts.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi, ts.len())
}

#[test]
fn slab_mesh_spans_the_slab() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "slab.obj");
    let r = sltwo(&["surface", "mesh", "--family", "slab-bigraph", "--d", "1", "--tau", "0.5", "--model", "half", "--out", &out]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let (lo, hi, n) = obj_t_range(Path::new(&out));
    let h = 2.0f64.sqrt() * PI / 2.0;
    assert!(n > 100);
    assert!((lo + h).abs() < 5e-3 && (hi - h).abs() < 5e-3, "[{lo}, {hi}] vs ±{h}");
}

#[test]
fn meshes_are_watertight_across_fold_and_seam() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "cat.obj");
    let r = sltwo(&["surface", "mesh", "--family", "catenoid", "--c", "10", "--tau", "0.5", "--model", "cyl", "--resolution", "12", "--out", &out]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut edges = std::collections::HashMap::new();
    for l in text.lines().filter(|l| l.starts_with("f ")) {
        let f: Vec<usize> = l.split_whitespace().skip(1).map(|k| k.parse().unwrap()).collect();
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            *edges.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    // in the cylinder the seam closes up (the half-space copy jumps by 4πτ there);
    // an annulus: only the two outer rims are open
    let open = edges.values().filter(|&&c| c == 1).count();
    assert_eq!(open, 2 * 11, "open edges {open}");
    assert!(edges.values().all(|&c| c <= 2));
}

#[test]
fn two_circles_gap_four_are_tall_when_untwisted() {
    let dir = TempDir::new().unwrap();
    let c = circles(&dir, 4.0);
    let r = sltwo(&["boundary", "tall", "--curve", &c, "--tau", "0"]);
    assert!(r.status.success());
    assert_eq!(json(&r.stdout)["tall"], serde_json::Value::Bool(true));
    let r = sltwo(&["boundary", "tall", "--curve", &c, "--tau", "0.5"]);
    assert_eq!(json(&r.stdout)["tall"], serde_json::Value::Bool(false));
}

#[test]
fn sweep_margin_changes_sign_once() {
    let r = sltwo(&["annulus", "sweep", "--tau", "0.5"]);
    assert!(r.status.success());
    let csv = String::from_utf8(r.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "rho_bar,rho,tau,area_disk,area_annulus,margin,gap");
    let signs: Vec<bool> = lines.map(|l| l.split(',').nth(5).unwrap().parse::<f64>().unwrap() > 0.0).collect();
    assert!(signs.len() > 10);
    assert_eq!(signs.windows(2).filter(|w| w[0] != w[1]).count(), 1);
    assert!(!signs[0]);
}

#[test]
fn serial_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let problem = path(&dir, "p.toml");
    fs::write(
        &problem,
        "nx = 17\nny = 17\ntau = 0.5\n[domain]\nx0 = -1.0\nx1 = 1.0\ny0 = 0.2\ny1 = 0.8\n[boundary]\nkind = \"family\"\nfamily = \"slab-bigraph\"\nd = 1.0\nsheet = \"plus\"\n",
    )
    .unwrap();
    let run = |tag: &str, extra: &[&str]| {
        let csv = path(&dir, &format!("{tag}.csv"));
        let obj = path(&dir, &format!("{tag}.obj"));
        let mut args = vec!["solve", "--problem", &problem, "--out", &csv, "--obj", &obj];
        args.extend_from_slice(extra);
        let r = sltwo(&args);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        (fs::read(&csv).unwrap(), fs::read(&obj).unwrap(), r.stdout)
    };
    let a = run("a", &[]);
    let b = run("b", &[]);
    assert_eq!(a, b);
    let summary = json(&a.2);
    assert!(summary["max_node_error"].as_f64().unwrap() < 1e-2);
    // the solver is partition independent, so a worker pool changes nothing
    let c = run("c", &["--parallel", "3"]);
    assert_eq!(a.0, c.0);

    let m1 = sltwo(&["surface", "mesh", "--family", "tilted", "--d", "1", "--l", "0.5", "--tau", "0.5", "--model", "cyl"]);
    let m2 = sltwo(&["surface", "mesh", "--family", "tilted", "--d", "1", "--l", "0.5", "--tau", "0.5", "--model", "cyl"]);
    assert!(m1.status.success());
    assert_eq!(m1.stdout, m2.stdout);
}

#[test]
fn errors_are_json_on_stderr() {
    let dir = TempDir::new().unwrap();
    let r = sltwo(&["surface", "verify", "--family", "catenoid", "--c", "1.5"]);
    assert_eq!(r.status.code(), Some(1));
    let e = json(&r.stderr);
    assert_eq!(e["error"], "BadParameter");
    assert!(r.stdout.is_empty());

    let bad = path(&dir, "bad.txt");
    fs::write(&bad, "model half\n0 0\n1 banana\n").unwrap();
    let r = sltwo(&["boundary", "tall", "--curve", &bad]);
    assert_eq!(json(&r.stderr)["error"], "Parse");

    let r = sltwo(&["boundary", "tall", "--curve", &path(&dir, "missing.txt")]);
    assert_eq!(json(&r.stderr)["error"], "Io");

    let poly = path(&dir, "poly.toml");
    let th: Vec<String> = (0..17).map(|k| format!("{}", 0.1 + 0.35 * k as f64)).collect();
    fs::write(&poly, format!("thetas = [{}]\nhorocycles = [{}]\n", th.join(", "), vec!["0.01"; 17].join(", "))).unwrap();
    let r = sltwo(&["js", "check", "--polygon", &poly]);
    assert_eq!(json(&r.stderr)["error"], "TooManyVertices");

    let r = sltwo(&["boundary", "folds", "--curve", &circles(&dir, 1.0)]);
    assert_eq!(json(&r.stderr)["error"], "WrongModel");
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "cfg.toml");
    fs::write(&cfg, "tau = 0.0\n[annulus]\nrho_bar_range = \"1:2:3\"\nratio = 1.5\n").unwrap();
    let r = sltwo(&["--config", &cfg, "annulus", "sweep"]);
    let csv = String::from_utf8(r.stdout).unwrap();
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!((rows[0][0], rows[0][1], rows[0][2]), (1.0, 1.5, 0.0));
    // a flag overrides the file
    let r = sltwo(&["--config", &cfg, "annulus", "sweep", "--tau", "0.5", "--ratio", "1.25"]);
    let csv = String::from_utf8(r.stdout).unwrap();
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!((first[1], first[2]), (1.25, 0.5));

    let c = circles(&dir, 4.0);
    let r = sltwo(&["--config", &cfg, "boundary", "tall", "--curve", &c]);
    assert_eq!(json(&r.stdout)["tall"], serde_json::Value::Bool(true));
}

#[test]
fn transport_round_trip_keeps_the_verdict() {
    let dir = TempDir::new().unwrap();
    let src = path(&dir, "loops.txt");
    fs::write(&src, "model half\ncomponent\n-1 0\n1 0\n1 5\n-1 5\n").unwrap();
    let cyl = path(&dir, "cyl.txt");
    let r = sltwo(&["boundary", "transport", "--curve", &src, "--dir", "half2cyl", "--tau", "0.5", "--out", &cyl]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(fs::read_to_string(&cyl).unwrap().starts_with("model cyl"));
    let a = json(&sltwo(&["boundary", "tall", "--curve", &src, "--tau", "0.5"]).stdout);
    let b = json(&sltwo(&["boundary", "tall", "--curve", &cyl, "--tau", "0.5"]).stdout);
    assert_eq!(a["tall"], b["tall"]);
    assert!((a["inf_height"].as_f64().unwrap() - b["inf_height"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn verify_report_file() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "r.json");
    let r = sltwo(&["surface", "verify", "--family", "fan", "--c", "0.5", "--tau", "1", "--samples", "30", "--json", &out]);
    assert!(r.status.success());
    let v = json(&fs::read(&out).unwrap());
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    assert_eq!(v["n_samples"], 30);
}
