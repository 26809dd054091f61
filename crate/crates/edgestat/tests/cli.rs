use std::fs;
use std::path::Path;
use std::process::Command;

use edgestat::output::sha256_hex;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_edgestat"))
}

fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let mut v = vec!["edgestat".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    v.push("--out".into());
    v.push(dir.display().to_string());
    edgestat::run(v)
}

/// Data rows of a versioned CSV file.
fn rows(path: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    lines.next().expect("column header");
    lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn dist_tw_table() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["dist", "tw", "--from", "-8", "--to", "4", "--step", "0.1"]), 0);
    let text = fs::read_to_string(d.path().join("dist_tw.csv")).unwrap();
    assert!(text.starts_with("# edgestat-csv v1 dist/tw\n"));
    assert!(text.contains("# nodes=80\n") && text.contains("# refine=true\n"));
    let r = rows(&d.path().join("dist_tw.csv"));
    assert_eq!(r.len(), 121);
    assert!(r.windows(2).all(|w| w[1][1] >= w[0][1]));
    assert!((r[120][0] - 4.0).abs() < 1e-12);
    let m = json(&d.path().join("dist_tw.manifest.json"));
    assert_eq!(m["outputs"][0]["sha256"].as_str().unwrap(), sha256_hex(text.as_bytes()));
}

#[test]
fn dist_falpha_rows_and_large_alpha() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["dist", "falpha", "--alpha", "1", "--from", "-6", "--to", "4", "--step", "0.5"]), 0);
    let r = rows(&d.path().join("dist_falpha.csv"));
    assert_eq!(r.len(), 21);
    assert!(r.iter().all(|x| (0.0..=1.0).contains(&x[1])));

    let big = tempfile::tempdir().unwrap();
    assert_eq!(run_in(big.path(), &["dist", "falpha", "--alpha", "16"]), 0);
    assert_eq!(run_in(big.path(), &["dist", "tw"]), 0);
    let f = rows(&big.path().join("dist_falpha.csv"));
    let t = rows(&big.path().join("dist_tw.csv"));
    let gap = f.iter().zip(&t).map(|(a, b)| (a[1] - b[1]).abs()).fold(0.0, f64::max);
    assert!(gap < 5e-3, "{gap}");
}

#[test]
fn dist_gumbel_and_json_format() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["dist", "gumbel", "--from", "-2", "--to", "2", "--step", "1", "--format", "json"]), 0);
    let v = json(&d.path().join("dist_gumbel.json"));
    assert_eq!(v["schema"], "dist/gumbel");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let f0 = rows[2]["F"].as_f64().unwrap();
    assert!((f0 - (-1f64).exp()).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_with_two() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().to_str().unwrap();
    for args in [
        vec!["dist", "falpha"],
        vec!["dist", "tw", "--step", "0"],
        vec!["dist", "tw", "--from", "-20"],
        vec!["dist", "nope"],
        vec!["sample", "mns", "--replicas", "0", "--seed", "1"],
        vec!["sample", "deformed", "--epsilon", "0.2", "--seed", "1"],
        vec!["converge", "thm1_2", "--ladder", "6,2"],
    ] {
        let s = bin().args(&args).args(["--out", out]).output().unwrap();
        assert_eq!(s.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&s.stderr));
    }
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().to_str().unwrap();
    let ok = bin().args(["verify", "airy_identity", "--out", out]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&d.path().join("verify_airy_identity.json"));
    assert_eq!(v["passed"], true);
    assert_eq!(v["verdicts"][0]["cases"].as_array().unwrap().len(), 3);
    for which in ["von_koch", "operator_bounds", "orthonormality"] {
        assert_eq!(bin().args(["verify", which, "--out", out]).status().unwrap().code(), Some(0), "{which}");
    }
    // the 80-term sum cannot reach 1e-10 at q = 0.9
    let m = bin().args(["verify", "mehler", "--out", out]).output().unwrap();
    assert_eq!(m.status.code(), Some(1));
    let v = json(&d.path().join("verify_mehler.json"));
    assert_eq!(v["verdicts"][0]["cases"][0]["passed"], true);
    assert_eq!(v["verdicts"][0]["cases"][2]["passed"], false);
}

#[test]
fn converge_tables_and_trend_failure() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().to_str().unwrap();
    let s = bin().args(["converge", "thm1_10", "--out", out]).output().unwrap();
    assert_eq!(s.status.code(), Some(0));
    let side = json(&d.path().join("converge_thm1_10.json"));
    let bytes = fs::read(d.path().join("converge_thm1_10.csv")).unwrap();
    assert_eq!(side["sha256"].as_str().unwrap(), sha256_hex(&bytes));
    assert_eq!(side["passed"], true);
    assert!(side["errors"][2].as_f64().unwrap() < 0.05);

    let bad = bin().args(["converge", "thm1_10", "--alpha", "4", "--ladder", "8,9", "--out", out]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("sup_error"));
    assert_eq!(json(&d.path().join("converge_thm1_10.json"))["passed"], false);
}

#[test]
fn same_seed_same_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["sample", "mns", "--n", "10", "--mu", "0.3", "--replicas", "200", "--seed", "42"];
    assert_eq!(run_in(a.path(), &args), 0);
    assert_eq!(run_in(b.path(), &args), 0);
    for f in ["sample_mns.csv", "sample_mns.report.json", "sample_mns.manifest.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let other = tempfile::tempdir().unwrap();
    assert_eq!(run_in(other.path(), &["sample", "mns", "--n", "10", "--mu", "0.3", "--replicas", "200", "--seed", "43"]), 0);
    assert_ne!(fs::read(a.path().join("sample_mns.csv")).unwrap(), fs::read(other.path().join("sample_mns.csv")).unwrap());
}

#[test]
fn thread_count_does_not_change_output() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["sample", "gue", "--n", "100", "--replicas", "300", "--seed", "7"];
    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = args.to_vec();
    four.extend(["--threads", "4"]);
    assert_eq!(run_in(a.path(), &one), 0);
    assert_eq!(run_in(b.path(), &four), 0);
    for f in ["sample_gue.csv", "sample_gue.report.json", "sample_gue.manifest.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn generated_seed_is_recorded_and_replayable() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["sample", "poisson", "--t-min", "-1", "--replicas", "50"]), 0);
    let manifest = d.path().join("sample_poisson.manifest.json");
    let m = json(&manifest);
    let args: Vec<&str> = m["args"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let pos = args.iter().position(|a| *a == "--seed").unwrap();
    assert_eq!(args[pos + 1].parse::<u64>().unwrap(), m["seeds"]["base"].as_u64().unwrap());

    let s = bin().args(["replay", manifest.to_str().unwrap()]).output().unwrap();
    assert_eq!(s.status.code(), Some(0), "{}", String::from_utf8_lossy(&s.stdout));
    assert!(String::from_utf8_lossy(&s.stdout).contains("byte-identical"));

    let re = tempfile::tempdir().unwrap();
    let s = bin().args(["replay", manifest.to_str().unwrap(), "--out", re.path().to_str().unwrap()]).status().unwrap();
    assert_eq!(s.code(), Some(0));
    for f in ["sample_poisson.csv", "sample_poisson.report.json", "sample_poisson.manifest.json"] {
        assert_eq!(fs::read(d.path().join(f)).unwrap(), fs::read(re.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn replay_detects_a_changed_hash() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["dist", "gumbel", "--from", "0", "--to", "1", "--step", "0.5"]), 0);
    let path = d.path().join("dist_gumbel.manifest.json");
    let text = fs::read_to_string(&path).unwrap();
    let hash = json(&path)["outputs"][0]["sha256"].as_str().unwrap().to_string();
    fs::write(&path, text.replace(&hash, &"0".repeat(64))).unwrap();
    let s = bin().args(["replay", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(s.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&s.stdout).contains("DIFFERS"));
}

#[test]
fn config_file_with_flag_override() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.conf");
    fs::write(&cfg, "# grid\nfrom = -1\nto = 1\nstep = 0.5\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(run_in(d.path(), &["dist", "gumbel", "--config", c]), 0);
    assert_eq!(rows(&d.path().join("dist_gumbel.csv")).len(), 5);
    assert_eq!(run_in(d.path(), &["dist", "gumbel", "--config", c, "--step", "0.25"]), 0);
    assert_eq!(rows(&d.path().join("dist_gumbel.csv")).len(), 9);
    fs::write(&cfg, "from -1\n").unwrap();
    assert_eq!(run_in(d.path(), &["dist", "gumbel", "--config", c]), 2);
}

#[test]
fn out_dir_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let s = bin()
        .args(["dist", "gumbel", "--from", "0", "--to", "1", "--step", "1"])
        .env(edgestat::cli::OUT_DIR_ENV, d.path())
        .status()
        .unwrap();
    assert_eq!(s.code(), Some(0));
    assert!(d.path().join("dist_gumbel.csv").exists());
}

#[test]
fn kernel_dump() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["kernel", "gue", "--n", "5", "--from", "-1", "--to", "1", "--step", "0.5"]), 0);
    let r = rows(&d.path().join("kernel_gue.csv"));
    assert_eq!(r.len(), 25);
    for row in &r {
        let twin = r.iter().find(|o| o[0] == row[1] && o[1] == row[0]).unwrap();
        assert!((row[2] - twin[2]).abs() < 1e-14);
    }
    assert_eq!(run_in(d.path(), &["kernel", "deformed", "--y=0,0.5,-0.5", "--s", "0.3", "--step", "1"]), 0);
    assert_eq!(rows(&d.path().join("kernel_deformed.csv")).len(), 49);
}

#[test]
fn sample_reports() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d.path(), &["sample", "deformed", "--n", "200", "--alpha", "1", "--replicas", "1000", "--seed", "3"]), 0);
    let r = json(&d.path().join("sample_deformed.report.json"));
    let run = &r["runs"][0];
    assert!(run["ks_convolution"].as_f64().unwrap() < run["ks_gaussian"].as_f64().unwrap());
    assert!(run["max_identity_error"].as_f64().unwrap() < 1e-10);
    assert_eq!(rows(&d.path().join("sample_deformed.csv")).len(), 1000);

    assert_eq!(run_in(d.path(), &["sample", "shifted_airy", "--alpha", "2", "--replicas", "300", "--seed", "1"]), 0);
    let r = json(&d.path().join("sample_shifted_airy.report.json"));
    assert!(r["ks_f_alpha"].as_f64().unwrap() < 0.1);
    assert!(r["table_mass_outside"].as_f64().unwrap() < 1e-6);

    assert_eq!(run_in(d.path(), &["sample", "mns", "--replicas", "500", "--seed", "1"]), 0);
    let r = json(&d.path().join("sample_mns.report.json"));
    assert!((r["exact_mean_count"].as_f64().unwrap() - 20.0).abs() < 0.01);
    assert!(r["count_tv"].as_f64().unwrap() < 0.1);
}
