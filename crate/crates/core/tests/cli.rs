use std::process::{Command, Output};

use serde_json::Value;

fn qhj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spectrum_outputs() {
    let o = qhj(&["spectrum", "--system", "ho", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("E,4.5"));

    let o = qhj(&["spectrum", "--system", "ho", "--n", "1,2,3", "--omega", "2,3,4", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["energy"], 24.5);

    let o = qhj(&["spectrum", "--system", "hydrogen", "--n", "3", "--ell", "1", "--m", "-1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["energy"].as_f64().unwrap(), -1.0 / 18.0);
}

#[test]
fn momentum_csv_is_deterministic() {
    let args = ["momentum", "--system", "hydrogen", "--n", "5", "--ell", "1", "--coord", "radial"];
    let a = qhj(&args);
    let b = qhj(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("q,re_p,im_p,u,is_near_pole\n"));
}

#[test]
fn masked_rows_sit_next_to_sign_changes_of_u() {
    let o = qhj(&["momentum", "--system", "ho", "--n", "7", "--grid", "-5:5:1001"]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<(f64, f64, bool)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[3].parse().unwrap(), &r[4] == "true")
        })
        .collect();
    let spacing = rows[1].0 - rows[0].0;
    let masked: Vec<usize> = (0..rows.len()).filter(|&k| rows[k].2).collect();
    assert!(!masked.is_empty());
    for k in masked {
        // a sign change of u within one spacing either side
        let lo = k.saturating_sub(1);
        let hi = (k + 1).min(rows.len() - 1);
        let change = (lo..hi).any(|j| rows[j].1 * rows[j + 1].1 <= 0.0);
        assert!(change, "row {k} at q = {} (spacing {spacing})", rows[k].0);
    }
    let clusters = rows.windows(2).filter(|w| w[1].2 && !w[0].2).count();
    assert_eq!(clusters, 7);
}

#[test]
fn action_table() {
    let o = qhj(&["action", "--system", "hydrogen", "--n", "4", "--ell", "2", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    let targets: Vec<&str> = rows.iter().map(|r| &r[3]).collect();
    assert_eq!(targets, ["1", "2", "3"]);
    for r in &rows {
        let j: f64 = r[1].parse().unwrap();
        let target: f64 = r[3].parse().unwrap();
        assert!((j - target).abs() < 1e-8);
        assert_eq!(&r[6], "true");
    }
}

#[test]
fn nodes_json() {
    let o = qhj(&["nodes", "--system", "hydrogen", "--n", "5", "--ell", "2", "--m", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let counts: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["node_count"].as_u64().unwrap()).collect();
    assert_eq!(counts, [0, 2, 2]);
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let o = qhj(&["verify", "--nmax", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qhj(&["verify", "--system", "ho", "--nmax", "3", "--kappa-shift", "0.01"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("riccati_residual,4,"));
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["spectrum", "--system", "hydrogen", "--n", "2", "--ell", "3"],
        vec!["momentum", "--grid", "0:1:1"],
        vec!["momentum", "--system", "hydrogen", "--n", "2", "--coord", "radial", "--grid", "-1:2:10"],
        vec!["action", "--samples", "100"],
        vec!["action", "--contour", "0,0,1"],
        vec!["frobnicate"],
        vec!["spectrum", "--no-such-flag"],
    ] {
        let o = qhj(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn non_convergence_exits_with_two() {
    let o = qhj(&["action", "--system", "ho", "--n", "6", "--contour", "0,0,0.5,0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"], "non_convergence");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let o = qhj(&["spectrum", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("name,value\nE,1.5\n"));
}

#[test]
fn help_succeeds() {
    assert_eq!(qhj(&["--help"]).status.code(), Some(0));
}
