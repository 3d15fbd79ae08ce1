use std::path::PathBuf;
use std::process::{Command, Output};

fn opcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opcat")).args(args).env_remove("OPCAT_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("opcat-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

#[test]
fn dims_grids() {
    let o = opcat(&["--json", "dims", "assu", "3", "3"]);
    assert!(o.status.success());
    let grid = json(&o)["dims"].clone();
    // Rising factorials n(n+1)⋯(n+m−1).
    for m in 0..=3u64 {
        for n in 0..=3u64 {
            let rising: u64 = (0..m).map(|i| n + i).product();
            assert_eq!(grid[m as usize][n as usize], rising);
        }
    }
    let lie = json(&opcat(&["--json", "dims", "lie", "3", "3"]))["dims"].clone();
    for m in 0..=3 {
        for n in m + 1..=3 {
            assert_eq!(lie[m][n], 0);
        }
    }
    let com = json(&opcat(&["--json", "dims", "com", "2", "2"]))["dims"].clone();
    assert_eq!(com[2], serde_json::json!([0, 1, 2]));
    assert!(stdout(&opcat(&["dims", "assu", "3", "3"])).contains("2 |  0  2  6 12"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(opcat(&["dims", "foo", "2", "2"]).status.code(), Some(2));
    assert_eq!(opcat(&["resolve", "--d", "2", "--t", "2", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(opcat(&["resolve", "--d", "0", "--t", "2"]).status.code(), Some(2));
    assert_eq!(opcat(&["induce", "/nonexistent/module.json", "--t", "1"]).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for args in [&["verify", "pbw", "--m", "4", "--n", "4"][..], &["verify", "koszul", "--d", "3", "--t", "4"], &["verify", "flie"], &["verify", "lie-case", "--n", "2", "--t", "2"]] {
        let o = opcat(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains("PASS"));
    }
    let f = opcat(&["verify", "flie"]);
    assert!(stdout(&f).contains("dim Hom(k_sgn(2), E) = 0"));
    let r = json(&opcat(&["--json", "verify", "koszul", "--d", "2", "--t", "2"]));
    assert_eq!(r["passed"], true);
    assert_eq!(r["suite"], "koszul");
}

#[test]
fn resolve_exports() {
    let j = json(&opcat(&["resolve", "--d", "4", "--t", "2", "--format", "json"]));
    // S(4, n) · 2(2+1)⋯(2+n−1) for n = 1..4.
    let expected = [2u64, 7 * 6, 6 * 24, 120];
    for (k, e) in expected.iter().enumerate() {
        assert_eq!(j["terms"][k]["dim"], *e);
        assert_eq!(j["terms"][k]["homology"], 0);
    }
    assert_eq!(j["target_dim"], 16);
    assert_eq!(j["differentials"].as_array().unwrap().len(), 3);
    let tex = stdout(&opcat(&["resolve", "--d", "2", "--t", "3", "--format", "latex"]));
    assert!(tex.contains("\\to") && tex.contains("tabular"));
    let csv = stdout(&opcat(&["resolve", "--d", "1", "--t", "3", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn induce_module_files() {
    let dir = scratch("induce");
    let reg = dir.join("regular2.json");
    assert!(opcat(&["module", "regular", "--arity", "2", "--out", reg.to_str().unwrap()]).status.success());
    let j = json(&opcat(&["--json", "induce", reg.to_str().unwrap(), "--t", "3"]));
    for t in 0..=3 {
        assert_eq!(j["induced"][t]["dim"], t * t);
    }
    let sl2 = dir.join("sl2.json");
    assert!(opcat(&["module", "sl2", "--truncation", "2", "--out", sl2.to_str().unwrap()]).status.success());
    let j = json(&opcat(&["--json", "induce", sl2.to_str().unwrap(), "--t", "2"]));
    // Filtered pieces of U(sl2) ⊗ k^t up to degree 2: Σ_k C(3t+k−1, k).
    assert_eq!(j["induced"][1]["dim"], 1 + 3 + 6);
    assert_eq!(j["induced"][2]["dim"], 1 + 6 + 21);
    let mut bad: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&sl2).unwrap()).unwrap();
    bad["alphas"][0][0][0] = serde_json::json!("5");
    let corrupt = dir.join("corrupt.json");
    std::fs::write(&corrupt, bad.to_string()).unwrap();
    let o = opcat(&["induce", corrupt.to_str().unwrap(), "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Antisymmetry"));
    let m = json(&opcat(&["--json", "induce", reg.to_str().unwrap(), "--t", "2", "--matrices"]));
    assert!(!m["generators"].as_array().unwrap().is_empty());
}

#[test]
fn cache_directory_is_used() {
    let dir = scratch("cache");
    let run = || Command::new(env!("CARGO_BIN_EXE_opcat")).args(["dims", "assu", "2", "2"]).env("OPCAT_CACHE_DIR", &dir).output().unwrap();
    let first = run();
    assert!(std::fs::read_dir(&dir).unwrap().count() > 0);
    assert_eq!(first.stdout, run().stdout);
}

#[test]
fn sequential_mode_agrees() {
    let a = stdout(&opcat(&["resolve", "--d", "3", "--t", "2"]));
    let b = stdout(&opcat(&["--sequential", "resolve", "--d", "3", "--t", "2"]));
    assert_eq!(a, b);
}
