use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimer-fluorescence"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Header row plus data rows, comment lines dropped.
fn records(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

fn meta<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix("# ")?.strip_prefix(key)?.strip_prefix('='))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dimer-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn undriven_steady_state_is_ground_state() {
    let text = stdout(&["steady", "--omega", "0"]);
    assert!(text.starts_with("# dimer-fluorescence v1\n"));
    let (header, rows) = records(&text);
    assert_eq!(header, ["basis", "row", "col", "re", "im"]);
    assert_eq!(rows.len(), 32);
    for row in &rows {
        let re: f64 = row[3].parse().unwrap();
        let expected = if row[1] == "gg" && row[2] == "gg" { 1.0 } else { 0.0 };
        assert!((re - expected).abs() < 1e-12, "{row:?}");
    }
}

#[test]
fn resonant_mixed_dimer_shows_thirteen_peaks() {
    let text = stdout(&["spectrum", "--beta", "0.7854", "--omega", "1.0R", "--delta", "0", "--peaks"]);
    assert_eq!(meta(&text, "n_peaks"), Some("13"));
    assert_eq!(records(&text).1.len(), 13);
}

#[test]
fn conflicting_triples_are_config_errors() {
    for args in [
        &["steady", "--j", "5", "--kr12", "0.2"][..],
        &["steady", "--beta", "0.3", "--delta-emit", "1"],
        &["steady", "--delta-emit", "1"],
        &["steady", "--omega", "x"],
        &["ladder", "--omega", "1", "--delta", "2"],
        &["reproduce", "fig3", "--panel", "z"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unknown_figure_is_usage_error() {
    let out = run(&["reproduce", "fig9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dark_state_degeneracy_is_numerical_error() {
    let out = run(&["steady", "--beta", "0", "--gamma12", "1", "--omega", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not unique"));
}

#[test]
fn output_is_deterministic_across_runs_and_pools() {
    let args = ["observables", "--sweep", "delta=-0.05R:0.05R:41", "--omega", "0.1R"];
    let a = stdout(&args);
    let b = stdout(&[&args[..], &["--jobs", "1"]].concat());
    let c = stdout(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a, b);
    assert_eq!(a, c);
    let f = ["reproduce", "fig5", "--panel", "b"];
    assert_eq!(stdout(&f), stdout(&f));
}

#[test]
fn figure_three_zoom_compares_models() {
    let text = stdout(&["reproduce", "fig3", "--panel", "e"]);
    let (header, rows) = records(&text);
    assert_eq!(header, ["delta_over_r", "I", "I_eff", "g2", "g2_eff"]);
    assert_eq!(meta(&text, "big_r"), Some("1000"));
    assert_eq!(meta(&text, "gamma12"), Some("0.999"));
    let centre = &rows[rows.len() / 2];
    assert_eq!(centre[0].parse::<f64>().unwrap(), 0.0);
    let (i, ie): (f64, f64) = (centre[1].parse().unwrap(), centre[2].parse().unwrap());
    assert!((ie / i - 1.0).abs() < 0.1, "{i} {ie}");
}

#[test]
fn json_output_parses() {
    let text = stdout(&["ladder", "--beta", "0", "--omega", "0.05R", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "dimer-fluorescence v1");
    let rows = v["rows"].as_array().unwrap();
    let w6 = rows.iter().find(|r| r[0] == "w6").unwrap();
    assert!((w6[4].as_f64().unwrap() - 0.01).abs() < 1e-12);
}

#[test]
fn config_file_supplies_parameters() {
    let dir = scratch("config");
    let cfg = dir.join("dimer.cfg");
    std::fs::write(&cfg, "# test dimer\nkr12 = 0.17\ndelta_emit = 50\nomega = 6.5\ndet_linewidth = 1\n").unwrap();
    let text = stdout(&["fisher", "--config", cfg.to_str().unwrap(), "--grid", "-400:400:1601"]);
    let (header, rows) = records(&text);
    assert_eq!(header[..4], ["kr12", "delta", "omega", "F"]);
    assert_eq!(rows[0][2], "6.5");
    assert!(rows[0][3].parse::<f64>().unwrap() > 0.0);
    // flags override the file
    let text = stdout(&["steady", "--config", cfg.to_str().unwrap(), "--omega", "0"]);
    assert_eq!(meta(&text, "omega"), Some("0"));
    std::fs::write(&cfg, "kr12 = 0.17\nbeta = 0.3\n").unwrap();
    assert_eq!(run(&["steady", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn plot_flag_writes_svg_next_to_output() {
    let dir = scratch("plot");
    let out = dir.join("obs.csv");
    stdout(&[
        "observables",
        "--sweep",
        "omega=0.001R:0.3R:30:log",
        "--out",
        out.to_str().unwrap(),
        "--plot",
    ]);
    let svg = std::fs::read_to_string(dir.join("obs.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    let (_, rows) = records(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 30);
    std::fs::remove_dir_all(dir).unwrap();
}
