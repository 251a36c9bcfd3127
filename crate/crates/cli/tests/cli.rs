use std::path::Path;
use std::process::{Command, Output};

fn qboson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qboson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_default_passes() {
    let o = qboson(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_minimal_rank_passes() {
    let o = qboson(&["verify", "--k", "2", "--alpha", "-3/4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_corrupted_rates_names_the_identity() {
    let o = qboson(&["verify", "--k", "2", "--corrupt-rates"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let failures: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failures.len(), 1, "{out}");
    assert!(failures[0].contains("generator = phi^-1 H^+ phi - k"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qboson(&["verify", "--k", "1"]).status.code(), Some(2));
    assert_eq!(qboson(&["rates", "0:"]).status.code(), Some(2));
    assert_eq!(qboson(&["rates", "0:1", "--s", "1"]).status.code(), Some(2));
    assert_eq!(qboson(&["nonsense"]).status.code(), Some(2));
    assert_eq!(qboson(&["simulate", "--t-end", "0"]).status.code(), Some(2));
}

fn rate_rows(out: &str) -> Vec<Vec<String>> {
    out.lines()
        .skip(2)
        .filter(|l| !l.starts_with("exit rate"))
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

#[test]
fn rates_for_the_figure_configuration() {
    let o = qboson(&["rates", "2:1,2;-1:4;-3:2,2,3", "--s", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows = rate_rows(&out);
    let keys: Vec<(&str, &str)> = rows
        .iter()
        .map(|r| (r[0].as_str(), r[1].as_str()))
        .collect();
    assert_eq!(
        keys,
        [
            ("2", "1"),
            ("2", "2"),
            ("-1", "4"),
            ("-3", "2"),
            ("-3", "3")
        ]
    );
    assert!(
        out.contains("exit rate [2]_q@2 + [1]_q@-1 + [3]_q@-3 = 57/16"),
        "{out}"
    );
}

#[test]
fn rates_single_particle_and_cluster() {
    let single = stdout(&qboson(&["rates", "4:2"]));
    let rows = rate_rows(&single);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], "1");
    let cluster = stdout(&qboson(&["rates", "0:1,2,2", "--s", "1/2"]));
    let rows = rate_rows(&cluster);
    let rates: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(rates, ["1/16", "5/4"]);
    assert!(cluster.contains("= 21/16"));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    for p in [&a, &b] {
        let o = qboson(&[
            "simulate",
            "0:1,2;-2:1",
            "--t-end",
            "5",
            "--seed",
            "11",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
    for line in String::from_utf8(x).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["t", "from_site", "color", "state"] {
            assert!(v.get(key).is_some(), "{line}");
        }
    }
}

#[test]
fn single_particle_jumps_at_unit_rate() {
    let t_end = 10_000.0;
    let o = qboson(&["simulate", "0:1", "--t-end", "10000", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let events = stdout(&o).lines().count() as f64;
    assert!((events - t_end).abs() <= 3.0 * t_end.sqrt(), "{events}");
}

#[test]
fn simulate_rejects_unwritable_output() {
    let o = qboson(&["simulate", "--out", "/nonexistent/dir/x.jsonl"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eigencheck_passes_and_reports_resonance() {
    let o = qboson(&["eigencheck", "--k", "2", "--seed", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qboson(&["eigencheck", "--k", "3", "--trivial", "--q-boson"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qboson(&[
        "eigencheck",
        "--z",
        "3/32,1/2",
        "--s",
        "1/2",
        "--alpha",
        "2/3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("resonant"));
}

fn read_csv(p: &Path) -> Vec<String> {
    std::fs::read_to_string(p)
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn generator_exports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("q.csv");
    let o = qboson(&[
        "generator",
        "0:1,2,2",
        "--depth",
        "0",
        "--s",
        "1/2",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(read_csv(&csv), ["row,col,rate", "0,0,-1.3125"]);

    let o = qboson(&[
        "generator",
        "5:1",
        "--depth",
        "3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_csv(&csv).len(), 1 + 4 + 3);
    let index: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(csv.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(index.as_array().unwrap().len(), 4);
    assert_eq!(index[3]["state"], serde_json::json!({"2": [1]}));

    let o = qboson(&[
        "generator",
        "0:1,1,1,1",
        "--depth",
        "50",
        "--state-cap",
        "10",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let toml = dir.path().join("run.toml");
    std::fs::write(
        &toml,
        "k = 2\nn_colors = 2\ns = \"1/2\"\nalpha = \"qboson\"\nwindow = 1\n",
    )
    .unwrap();
    let o = qboson(&[
        "verify",
        "--config",
        toml.to_str().unwrap(),
        "--window",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("k=2 N=2 s=1/2 alpha=-3/4 window=[-2,2]"),
        "{}",
        stdout(&o)
    );
    std::fs::write(&toml, "colours = 2\n").unwrap();
    assert_eq!(
        qboson(&["verify", "--config", toml.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
