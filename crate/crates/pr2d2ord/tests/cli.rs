use std::fs;
use std::path::Path;

use pr2d2ord::cli::run;
use pr2d2ord::formats::read_draws_bin;

fn write_toy(dir: &Path) -> String {
    let mut s = String::from("grade,x1,x2,x3\n");
    for i in 0..40 {
        let x1 = (i as f64 * 0.37).sin();
        let x2 = (i as f64 * 1.3).cos();
        let x3 = ((i * 7) % 11) as f64 / 11.0;
        let g = if x1 < -0.4 { 2 } else if x1 < 0.4 { 5 } else { 9 };
        s.push_str(&format!("{g},{x1},{x2},{x3}\n"));
    }
    let path = dir.join("toy.csv");
    fs::write(&path, s).unwrap();
    path.to_str().unwrap().to_string()
}

fn fit_args<'a>(data: &'a str, out: &'a str) -> Vec<&'a str> {
    vec![
        "pr2d2ord", "fit", "--data", data, "--response", "grade", "--gig", "1.1,1.41,0.15", "--chains", "2", "--warmup", "200",
        "--draws", "200", "--seed", "3", "--no-strict", "--out", out,
    ]
}

#[test]
fn fit_then_predict() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy(dir.path());
    let out = dir.path().join("fit");
    assert_eq!(run(fit_args(&data, out.to_str().unwrap())).unwrap(), 0);
    for f in ["draws.csv", "draws.bin", "summary.json", "diagnostics.csv", "schema.json"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    // p betas, p − 1 free phis, W, K − 1 cut-points
    assert_eq!(summary["parameters"].as_array().unwrap().len(), 3 + 2 + 1 + 2);
    assert_eq!(summary["parameters"][0]["name"], "beta[x1]");
    assert_eq!(summary["seed"], 3);
    let draws = read_draws_bin(fs::read(out.join("draws.bin")).unwrap().as_slice()).unwrap();
    assert_eq!((draws.p, draws.k, draws.num_chains(), draws.draws_per_chain()), (3, 3, 2, 200));

    let pred = dir.path().join("pred.csv");
    let args = ["pr2d2ord", "predict", "--fit", out.to_str().unwrap(), "--data", &data, "--out", pred.to_str().unwrap()];
    assert_eq!(run(args).unwrap(), 0);
    let text = fs::read_to_string(&pred).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row,predicted,observed"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 40);
    // raw labels come back, not category indices
    assert!(rows.iter().all(|r| ["2", "5", "9"].contains(&r.split(',').nth(1).unwrap())));
    let metrics: serde_json::Value = serde_json::from_str(&fs::read_to_string(pred.with_extension("metrics.json")).unwrap()).unwrap();
    assert!(metrics["accuracy"].as_f64().unwrap() > 0.6);

    let diag = dir.path().join("diag.csv");
    let draws_csv = out.join("draws.csv");
    let args = ["pr2d2ord", "diagnose", "--draws", draws_csv.to_str().unwrap(), "--out", diag.to_str().unwrap()];
    assert_eq!(run(args).unwrap(), 0);
    assert_eq!(fs::read_to_string(&diag).unwrap(), fs::read_to_string(out.join("diagnostics.csv")).unwrap());
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_toy(dir.path());
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, "response = \"grade\"\nprior = \"horseshoe\"\nchains = 2\nwarmup = 100\ndraws = 50\nseed = 9\nstrict = false\nstandardize = false\n").unwrap();
    let out = dir.path().join("fit");
    let args = ["pr2d2ord", "fit", "--config", cfg.to_str().unwrap(), "--data", &data, "--draws", "80", "--out", out.to_str().unwrap()];
    assert_eq!(run(args).unwrap(), 0);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["prior"], "horseshoe");
    assert_eq!(summary["draws_per_chain"], 80);
    assert_eq!(summary["seed"], 9);
    let schema: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("schema.json")).unwrap()).unwrap();
    assert_eq!(schema["schema"]["standardized"], false);
}

#[test]
fn usage_errors() {
    let e = run(["pr2d2ord", "elicit", "--a", "1", "--b", "1", "--n", "50"]).unwrap_err();
    let c = e.downcast_ref::<clap::Error>().expect("a usage error");
    assert_eq!(c.kind(), clap::error::ErrorKind::MissingRequiredArgument);
    assert!(run(["pr2d2ord", "fit", "--data", "x.csv", "--prior", "lasso"]).unwrap_err().downcast_ref::<clap::Error>().is_some());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "bogus_flag = 1\n").unwrap();
    assert!(run(["pr2d2ord", "diagnose", "--config", cfg.to_str().unwrap(), "--draws", "d.bin"]).is_err());
}

#[test]
fn missing_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    assert!(run(fit_args("/nonexistent/data.csv", out.to_str().unwrap())).is_err());
}

#[test]
fn simulate_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.toml");
    fs::write(
        &grid,
        r#"seed = 4
replications = 2
[fit]
chains = 2
warmup = 150
draws = 150
[[design]]
n = 60
p = 8
k = 3
coef = "fixed"
cut = "low"
[[prior]]
kind = "pr2d2ord"
a = 1
b = 1
gig = [1.10, 1.41, 0.15]
[[prior]]
kind = "r2d2"
a = 1
b = 1
"#,
    )
    .unwrap();
    let out = dir.path().join("study");
    assert_eq!(run(["pr2d2ord", "simulate", "--grid", grid.to_str().unwrap(), "--out", out.to_str().unwrap()]).unwrap(), 0);
    let text = fs::read_to_string(out.join("study.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("n,p,k,coef,cut,prior"));
    assert!(lines[1].contains(",pr2d2ord,2,0,"));
    assert!(lines[2].contains(",r2d2,2,0,"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("study.json")).unwrap()).unwrap();
    assert_eq!(json["cells"].as_array().unwrap().len(), 2);
}
