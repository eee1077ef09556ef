use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clique-match"))
        .args(args)
        .output()
        .expect("spawn clique-match")
}

const SMALL: [&str; 6] = ["--set", "repetitions=2", "--set", "frames=4", "--set", "points=15"];

fn with_small<'a>(head: &[&'a str]) -> Vec<&'a str> {
    head.iter().copied().chain(SMALL).collect()
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let out = cli(&["experiment", "--set", "nonsense=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonsense"));
}

#[test]
fn bad_config_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "repetitions = 2\np = 3\n").unwrap();
    let out = cli(&["--config", path.to_str().unwrap(), "experiment"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn missing_dataset_is_a_usage_error() {
    let out = cli(&["--with-dataset", "/nonexistent/house.csv", "experiment"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# frame separation on a short sequence\nprotocol = frame_separation\nrepetitions = 2\nframes = 4\npoints = 15\ngaps = 0, 2\n",
    )
    .unwrap();
    let out_path = dir.path().join("table.csv");
    let out = cli(&["--config", cfg.to_str().unwrap(), "--out", out_path.to_str().unwrap(), "experiment"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "protocol,cell,mean_error_pct,std_error_pct,mean_runtime_s");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("frame_separation,gap=0,0,0,"));
}

#[test]
fn max_error_breach_exits_one() {
    // independent graphs per frame give a large error
    let args = with_small(&[
        "experiment", "--protocol", "occlusion", "--set", "share_seed=false", "--set", "missing=0", "--set",
        "max_error=1",
    ]);
    assert_eq!(cli(&args).status.code(), Some(1));
}

#[test]
fn max_error_within_bound_exits_zero() {
    let args = with_small(&["experiment", "--protocol", "frame_separation", "--set", "gaps=0", "--set", "max_error=0"]);
    assert_eq!(cli(&args).status.code(), Some(0));
}

#[test]
fn match_prints_per_dimension_rows() {
    let out = cli(&["--seed", "2", "match", "--transform", "rotation:45", "--set", "share_seed=true"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("dim,clique_a,clique_b,cost\n"));
    for d in 0..=2 {
        assert!(text.contains(&format!("{d},summary,")), "{text}");
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertex error"));
}

#[test]
fn match_rejects_out_of_range_frames() {
    let out = cli(&["match", "--frames", "0", "99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn match_reads_landmark_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.csv");
    let mut csv = String::from("frame,point,x,y\n");
    for f in 0..2 {
        for p in 0..12 {
            let (x, y) = ((p * 37 % 11) as f64 * 10.0 + f as f64, (p * 53 % 7) as f64 * 12.0 + p as f64);
            csv.push_str(&format!("{f},{p},{x},{y}\n"));
        }
    }
    std::fs::write(&path, csv).unwrap();
    let out = cli(&["--with-dataset", path.to_str().unwrap(), "match", "--set", "share_seed=true"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn validate_rejects_unknown_names() {
    assert_eq!(cli(&["validate", "nope"]).status.code(), Some(2));
}

#[test]
fn validate_selected_validators() {
    let out = cli(&["--seed", "3", "validate", "gap_bound", "clique_counts"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("validator,param_set,statistic,value,bound,ok\n"));
    assert!(text.contains("gap_bound,") && text.contains("clique_counts,"));
    assert!(!text.contains(",false"));
}

#[test]
fn sweep_has_one_row_per_grid_cell() {
    let args = with_small(&["sweep", "--p", "0.5,0.7", "--k", "3,5", "--set", "gaps=1"]);
    let out = cli(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("knn_sweep,p=0.7|k=5,"));
}
