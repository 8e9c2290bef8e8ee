use std::path::Path;
use std::process::{Command, Output};

fn sea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sea"))
        .args(args)
        .output()
        .expect("spawn sea")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["compare", "--problem", "sphere"][..],
        &["blocksize", "--k", "1,4,9", "--runs", "1"],
        &["sweep", "--step", "1.5", "--runs", "1"],
        &["compare", "--p-cross", "1.5"],
        &["clouds", "--k", "4"],
        &["compare", "--jobs", "0"],
        &["compare", "--preset", "paper-P7"],
        &["frobnicate"],
    ] {
        let o = sea(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn missing_config_file_is_a_runtime_failure() {
    let o = sea(&["config", "--config", "/nonexistent/sea.conf"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compare_single_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let text = stdout(&sea(&[
        "compare", "--preset", "paper-P1", "--runs", "1", "--out", out,
    ]));
    let lines: Vec<_> = text.lines().collect();
    assert!(lines[1].starts_with("algorithm"));
    assert!(lines[2].starts_with("SGA"));
    assert!(lines[3].starts_with("2-SEA"));
    for name in ["compare_sga.csv", "compare_sea.csv"] {
        let csv = read(dir.path(), name);
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.starts_with("run,seed,success,gen_to_opt,best_fitness\n"));
    }
}

#[test]
fn sweep_grid_shape() {
    let text = stdout(&sea(&[
        "sweep",
        "--preset",
        "paper-P3",
        "--step",
        "0.25",
        "--runs",
        "2",
        "--max-gen",
        "10",
    ]));
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "p_mut_state,p_mut_per_bit,sr_percent,gnto_all");
    assert_eq!(lines.len(), 26);
    assert!(lines[1].starts_with("0.0,0.0,"));
    assert!(lines[25].starts_with("1.0,1.0,"));
}

#[test]
fn blocksize_rows() {
    let text = stdout(&sea(&[
        "blocksize",
        "--preset",
        "paper-P1",
        "--k",
        "1,3,9,19",
        "--runs",
        "2",
        "--max-gen",
        "10",
    ]));
    let ks: Vec<_> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(ks, ["1", "3", "9", "19"]);
}

#[test]
fn clouds_shapes() {
    let text = stdout(&sea(&[
        "clouds", "--count", "100", "--n", "100", "--k", "19", "--pflip", "0.25", "--seed", "7",
    ]));
    assert_eq!(text.lines().count(), 101);

    let text = stdout(&sea(&["clouds", "--count", "0"]));
    assert_eq!(
        text,
        "idx,f,m,m_conv1,m_conv0,m_conv1_m_conv0,m_conv0_m_conv1\n"
    );

    let text = stdout(&sea(&[
        "clouds", "--count", "20", "--n", "30", "--k", "5", "--pflip", "0",
    ]));
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert!(cols[2..].iter().all(|c| *c == cols[1]), "{line}");
    }
}

#[test]
fn config_file_round_trip_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let dumped = stdout(&sea(&["config", "--preset", "paper-P4"]));
    assert!(dumped.contains("max-gen = 30000\n"));
    assert!(dumped.contains("pop-size = 10\n"));
    let path = dir.path().join("p4.conf");
    std::fs::write(&path, &dumped).unwrap();
    let path = path.to_str().unwrap();

    assert_eq!(stdout(&sea(&["config", "--config", path])), dumped);
    let overridden = stdout(&sea(&["config", "--config", path, "--runs", "7"]));
    assert!(overridden.contains("runs = 7\n"));
    assert!(overridden.contains("problem = alternation\n"));

    let a = stdout(&sea(&[
        "run",
        "--config",
        path,
        "--runs",
        "2",
        "--max-gen",
        "50",
    ]));
    let b = stdout(&sea(&[
        "run",
        "--preset",
        "paper-P4",
        "--runs",
        "2",
        "--max-gen",
        "50",
    ]));
    assert_eq!(a, b);
}

#[test]
fn trace_output() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    stdout(&sea(&[
        "run",
        "--preset",
        "paper-P1",
        "--runs",
        "1",
        "--max-gen",
        "5",
        "--trace",
        trace.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(trace).unwrap();
    assert!(text.starts_with("generation,best_fitness,state_0,state_1\n0,"));
}
