use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use convrep::io::{load_bifunction, load_grid};

fn convrep(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convrep"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

const IDENTITY: &str = r#"{"space":{"dim":1,"grid":{"min":-2,"max":2,"points":81}},"operator":{"kind":"identity"},"iteration":{"epsilon":1e-3}}"#;

#[test]
fn aiterate_on_identity_fitzpatrick() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("id.json"), IDENTITY).unwrap();
    let o = convrep(
        &[
            "aiterate",
            "--config",
            "id.json",
            "--h",
            "fitz",
            "--epsilon",
            "1e-3",
            "--output",
            "run",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run/report.json")).unwrap()).unwrap();
    let n_final = report["n_final"].as_u64().unwrap();
    assert!(n_final <= report["stopping_bound"].as_u64().unwrap());
    let log = fs::read_to_string(dir.path().join("run/convergence.jsonl")).unwrap();
    for line in log.lines() {
        let r: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(r["n"].is_u64() && r["sup_gap"].is_f64() && r["dom_size"].is_u64());
    }
    let h = load_bifunction(&dir.path().join("run/final.csv")).unwrap();
    for k in 20..=60 {
        let (x, xs) = h.point(k * h.dual_len() + k);
        assert_eq!(x, xs);
        assert!((h.at(k * h.dual_len() + k).finite().unwrap() - x[0] * x[0]).abs() <= 1e-2);
    }
}

#[test]
fn enlarge_epsdiff_interval() {
    let dir = tempfile::tempdir().unwrap();
    let o = convrep(
        &["enlarge", "--kind", "epsdiff", "--epsilon", "0.5", "--x", "0"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let set: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(set["kind"], "epsdiff");
    let xs: Vec<f64> = set["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["xstar"][0].as_f64().unwrap())
        .collect();
    assert_eq!(xs.first(), Some(&-1.0));
    assert_eq!(xs.last(), Some(&1.0));
}

#[test]
fn verify_default_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = convrep(&["verify", "--output", "report.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.starts_with("[PASS]")).count(), 10);
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(r["pass"], true);
}

#[test]
fn verify_fails_with_impossible_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let o = convrep(&["verify", "--tol", "1e-30"], dir.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn grids_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("id.json"), IDENTITY).unwrap();
    for (cmd, file) in [("fitzpatrick", "f.csv"), ("sigma", "s.csv")] {
        let o = convrep(&[cmd, "--config", "id.json", "--output", file], dir.path());
        assert_eq!(code(&o), 0);
        assert_eq!(load_bifunction(&dir.path().join(file)).unwrap().len(), 81 * 81);
    }
    let o = convrep(&["conjugate", "--output", "c.csv"], dir.path());
    assert_eq!(code(&o), 0);
    let c = load_grid(&dir.path().join("c.csv")).unwrap();
    assert_eq!((c.axes()[0].min(), c.axes()[0].max()), (-8.0, 8.0));
    let o = convrep(&["fenchel-young", "--output", "fy.csv"], dir.path());
    assert_eq!(code(&o), 0);

    let o = convrep(&["plot-data", "--config", "id.json", "--h", "fitz"], dir.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# inf rows omitted: 0"));
    assert_eq!(lines.next(), Some("x,xstar,value"));
    for l in lines {
        let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((v[2] - 0.25 * (v[0] + v[1]).powi(2)).abs() <= 1e-2);
    }

    // At eps = 0 the subdifferential of x^2/2 gives the single row x* = x.
    let o = convrep(&["plot-data", "--kind", "epsdiff", "--x", "1.2"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "# kind epsdiff, epsilon 0, x 1.2\nxstar,slack\n1.2000000000000002,0\n"
    );
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("id.json"), IDENTITY).unwrap();
    let a = convrep(&["sigma", "--config", "id.json"], dir.path());
    let b = convrep(&["sigma", "--config", "id.json"], dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn transport_members() {
    let dir = tempfile::tempdir().unwrap();
    let o = convrep(
        &[
            "transport",
            "--kind",
            "epsdiff",
            "--m1",
            "0.5:-1:-0.5",
            "--m2",
            "0.1:2:2.2",
            "--alpha",
            "0.3",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["member"], true);
    // x* = 3 is far outside the 0.1-subdifferential at 0.
    let o = convrep(
        &["transport", "--kind", "epsdiff", "--m1", "0.1:0:3", "--m2", "0:1:1"],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"space":{"dim":1,"grid":{"min":0,"max":1,"points":1}}}"#,
    )
    .unwrap();
    fs::write(
        dir.path().join("graph.json"),
        r#"{"space":{"dim":1,"grid":{"min":0,"max":1,"points":5}},"operator":{"kind":"graph","path":"none.csv"}}"#,
    )
    .unwrap();
    let cases: [&[&str]; 9] = [
        &["nonsense"],
        &["enlarge", "--x", "0"],
        &["enlarge", "--kind", "be"],
        &["enlarge", "--kind", "be", "--x", "0,1"],
        &["enlarge", "--kind", "be", "--x", "0", "--h", "fy"],
        &["aiterate", "--x", "0"],
        &["aiterate", "--h", "mix:2"],
        &["sigma", "--config", "bad.json"],
        &["fitzpatrick", "--config", "graph.json"],
    ];
    for args in cases {
        let o = convrep(args, dir.path());
        assert_eq!(code(&o), 2, "{args:?}");
    }
    let o = convrep(&["fitzpatrick", "--config", "graph.json"], dir.path());
    assert!(String::from_utf8_lossy(&o.stderr).contains("file not found"));
}
