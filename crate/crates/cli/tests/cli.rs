use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pregelkit"))
}

fn ok(out: Output) -> Output {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    ok(bin().arg("gen").args(args).arg("--output").arg(&path).output().unwrap());
    path
}

fn lines(path: &Path) -> Vec<(String, String)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let (a, b) = l.split_once(' ').unwrap();
            (a.to_string(), b.to_string())
        })
        .collect()
}

#[test]
fn hashmin_on_a_path_labels_everything_zero() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "path.txt", &["path", "-n", "50"]);
    let res = dir.path().join("res.txt");
    ok(bin()
        .args(["run", "hashmin", "--workers", "4", "--graph"])
        .arg(&g)
        .arg("--output")
        .arg(&res)
        .output()
        .unwrap());
    let rows = lines(&res);
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|(_, v)| v == "0"));
}

#[test]
fn pagerank_report_records_the_chosen_threshold() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "g.txt", &["random", "-n", "300", "--directed", "--seed", "3"]);
    let report = dir.path().join("report.json");
    ok(bin()
        .args(["run", "pagerank", "--epsilon", "0.01", "--mirror-threshold", "auto", "--directed"])
        .arg("--graph")
        .arg(&g)
        .arg("--output")
        .arg(dir.path().join("pr.txt"))
        .arg("--report")
        .arg(&report)
        .output()
        .unwrap());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let tau = v["mirror"]["threshold"].as_f64().unwrap();
    // 4 workers, average degree about 4
    assert!(tau > 4.0 && tau < 20.0, "{tau}");
    assert!(v["supersteps"].as_u64().unwrap() >= 3);
}

#[test]
fn sweep_writes_one_row_per_threshold() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "g.txt", &["powerlaw", "-n", "500", "--avg-degree", "6"]);
    let csv = dir.path().join("sweep.csv");
    ok(bin()
        .args(["sweep", "pagerank", "--thresholds", "1,10,100,1000,inf,auto", "--graph"])
        .arg(&g)
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap());
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 7);
    assert!(rows[0].starts_with("schema_version,threshold,tau,cost_model"));
    assert!(rows[5].contains(",inf,,false,"));
    assert!(rows[6].contains(",auto,") && rows[6].contains(",true,"));
}

#[test]
fn same_config_gives_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "g.txt", &["random", "-n", "400", "--weighted", "--seed", "9"]);
    let mut outputs = Vec::new();
    for k in 0..2 {
        let res = dir.path().join(format!("r{k}.txt"));
        let rep = dir.path().join(format!("r{k}.json"));
        ok(bin()
            .args(["run", "msf", "--weighted", "--workers", "3", "--seed", "11"])
            .args(["--mirror-threshold", "3"])
            .arg("--graph")
            .arg(&g)
            .arg("--output")
            .arg(&res)
            .arg("--report")
            .arg(&rep)
            .output()
            .unwrap());
        outputs.push((std::fs::read(&res).unwrap(), std::fs::read(&rep).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn sssp_and_sv_variants() {
    let dir = TempDir::new().unwrap();
    let g = gen(dir.path(), "path.txt", &["path", "-n", "6"]);
    let out = ok(bin()
        .args(["run", "sssp", "--source", "0", "--graph"])
        .arg(&g)
        .output()
        .unwrap());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "5 5"));
    for reqresp in ["on", "off"] {
        let out = ok(bin()
            .args(["run", "sv", "--reqresp", reqresp, "--graph"])
            .arg(&g)
            .output()
            .unwrap());
        assert!(String::from_utf8(out.stdout).unwrap().lines().all(|l| l.ends_with(" 0")));
    }
}

#[test]
fn pair_ids_are_accepted() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("pairs.txt");
    std::fs::write(&g, "1:2 1:3\n1:3 0:9\n").unwrap();
    let out = ok(bin()
        .args(["run", "hashmin", "--id-type", "pair", "--graph"])
        .arg(&g)
        .output()
        .unwrap());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.ends_with(" 0:9")), "{text}");
}

#[test]
fn bad_flags_exit_2() {
    let out = bin().args(["run", "hashmin", "--workers", "0", "--graph", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["run", "nosuch", "--graph", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["run", "hashmin", "--mirror-threshold", "-3", "--graph", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn runtime_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let missing = bin().args(["run", "hashmin", "--graph"]).arg(dir.path().join("none")).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
    let g = gen(dir.path(), "path.txt", &["path", "-n", "6"]);
    let no_source = bin().args(["run", "sssp", "--graph"]).arg(&g).output().unwrap();
    assert_eq!(no_source.status.code(), Some(1));
    let limit = bin()
        .args(["run", "hashmin", "--max-supersteps", "2", "--graph"])
        .arg(&g)
        .output()
        .unwrap();
    assert_eq!(limit.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&limit.stderr).contains("superstep limit"));
}
