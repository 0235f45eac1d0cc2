use std::path::PathBuf;
use std::process::{Command, Output};

fn pc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pc")).args(args).env("PC_THREADS", "2").output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pc-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &PathBuf, body: &str) -> String {
    let path = dir.join("exp.cfg");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn identical_configs_give_identical_results() {
    let dir = scratch("determinism");
    let body = format!(
        "experiment = lemma-checks\nn_list = [4, 6]\nmc_samples = 500\nseed = 9\nout_dir = {}\n",
        dir.join("a").display()
    );
    let cfg = write_config(&dir, &body);
    let first = pc(&["run", &cfg]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let second = pc(&["run", &cfg, "--out", dir.join("b").to_str().unwrap()]);
    assert_eq!(second.status.code(), Some(0));
    let a = std::fs::read(dir.join("a/results.csv")).unwrap();
    let b = std::fs::read(dir.join("b/results.csv")).unwrap();
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with("experiment,n,k,quantity,value,std_error,seed\n"));
    assert!(dir.join("a/summary.csv").exists());
    assert!(dir.join("a/plot_lemma-checks_ratios.svg").exists());
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = scratch("threads");
    let cfg = write_config(&dir, "experiment = chaining-demo\nn_list = [8, 16]\nk = 2\nmc_samples = 300\nreplications = 2\n");
    let run = |threads: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_pc"))
            .args(["run", &cfg, "--out", dir.join(out).to_str().unwrap()])
            .env("PC_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("1", "one").status.code(), Some(0));
    assert_eq!(run("3", "three").status.code(), Some(0));
    assert_eq!(std::fs::read(dir.join("one/results.csv")).unwrap(), std::fs::read(dir.join("three/results.csv")).unwrap());
    assert!(dir.join("one/sequence_n8.txt").exists());
}

#[test]
fn config_errors_exit_2_with_location() {
    let dir = scratch("badkey");
    let cfg = write_config(&dir, "experiment = lemma-checks\nn_list = [4]\nfoo = 1\n");
    let out = pc(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("foo") && err.contains(":3:1"), "{err}");

    let cfg = write_config(&dir, "experiment = lemma-checks\nn_list = [8, 4]\n");
    let out = pc(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ascending"));

    assert_eq!(pc(&["run", dir.join("missing.cfg").to_str().unwrap()]).status.code(), Some(2));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_pc")).args(["tails", "--w", "0", "--u-grid", "1:2:1"]).env("PC_THREADS", "zero").output().unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn failed_assertion_exits_1() {
    // over twelve decades the k = 4 rate constant drifts out of its ×1.5 band
    let dir = scratch("assert");
    let cfg = write_config(&dir, "experiment = scaling-kk\nk = 4\nn_list = [4, 1000000000000]\n");
    let out = pc(&["run", &cfg, "--out", dir.join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rate constant"));
}

#[test]
fn tails_subcommand_prints_csv() {
    let out = pc(&["tails", "--w", "0", "--u-grid", "1:10:9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,p,q");
    assert!(lines[1].starts_with("1,") && lines[1].ends_with(",1"));
    let p10: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((p10 / 5.95e-43 - 1.0).abs() < 2e-3);
    assert_eq!(pc(&["tails", "--w", "0", "--u-grid", "3:1:1"]).status.code(), Some(2));
}

#[test]
fn estimate_subcommand() {
    let dir = scratch("estimate");
    let input = dir.join("t.csv");
    std::fs::write(&input, "elem_id,coord_0,coord_1\n0,1,0\n1,0,1\n").unwrap();
    let input = input.to_str().unwrap();
    let out = pc(&["estimate", "--input", input, "--quantity", "b", "--exact", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "quantity,value,std_error,method,samples,seed\nb,0.5,0,exact-enumeration,4,0\n"
    );
    let out = pc(&["estimate", "--input", input, "--quantity", "g", "--mc", "20000", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let row = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = row.lines().nth(1).unwrap().split(',').collect();
    let (v, se): (f64, f64) = (fields[1].parse().unwrap(), fields[2].parse().unwrap());
    assert!((v - 1.0 / std::f64::consts::PI.sqrt()).abs() <= 3.0 * se);
    assert_eq!(fields[3], "monte-carlo");
    assert_eq!(pc(&["estimate", "--input", input, "--quantity", "g", "--exact"]).status.code(), Some(2));
    assert_eq!(pc(&["estimate", "--input", "/nonexistent.csv", "--quantity", "b"]).status.code(), Some(2));
}
