use std::path::Path;
use std::process::{Command, Output};

use mflow_harness::ResultTable;

fn mflow(args: &[&str], config: Option<&Path>, out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mflow"));
    cmd.args(args).env("RUST_LOG", "off");
    if let Some(c) = config {
        cmd.arg("--config").arg(c).arg("--out").arg(out);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn simulate_writes_results_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "w.cfg",
        "preset = wigner\nn_list = 6, 10\nreplicas = 3\nt_step = 0.5\n",
    );
    let out = dir.path().join("out");
    let o = mflow(&["simulate"], Some(&cfg), &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "results.csv",
        "spectrum_n6.dat",
        "spectrum_n10.dat",
        "m2_vs_t_n10.dat",
        "limit_density.dat",
        "w1_vs_n.dat",
    ] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let text = std::fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(text.starts_with("# mflow "));
    let table = ResultTable::read_csv(text.as_bytes()).unwrap();
    assert_eq!(table.n_values(), vec![6, 10]);

    // compare and sweep reuse the file without simulating again
    let input = out.join("results.csv");
    for sub in ["compare", "sweep"] {
        let o = Command::new(env!("CARGO_BIN_EXE_mflow"))
            .args([sub, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path().join(sub))
            .arg("--input")
            .arg(&input)
            .output()
            .unwrap();
        assert!(o.status.success(), "{sub}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn seed_flag_changes_the_sample() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "w.cfg",
        "preset = wigner\nn_list = 5\nreplicas = 2\nt_step = 1\n",
    );
    let read = |seed: &str, sub: &str| {
        let out = dir.path().join(sub);
        let o = Command::new(env!("CARGO_BIN_EXE_mflow"))
            .args(["simulate", "--seed", seed, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        assert!(o.status.success());
        mflow_harness::table::strip_comments(&std::fs::read_to_string(out.join("results.csv")).unwrap())
    };
    assert_ne!(read("1", "a"), read("2", "b"));
}

#[test]
fn invalid_wishart_config_exits_with_code_two_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.cfg",
        "preset = wishart\nalpha = 0.5\nbeta = 2\nn_list = 50\n",
    );
    let out = dir.path().join("out");
    let o = mflow(&["simulate"], Some(&cfg), &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha n >= beta (n - 1) + 2"));
    assert!(!out.exists());
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    for (name, text) in [
        ("unknown_key.cfg", "preset = wigner\ncolour = blue\n"),
        ("no_preset.cfg", "n_list = 10\n"),
        ("bad_number.cfg", "preset = wigner\ndt = fast\n"),
    ] {
        let cfg = write_config(dir.path(), name, text);
        let o = mflow(&["simulate"], Some(&cfg), &out);
        assert_eq!(o.status.code(), Some(2), "{name}");
    }
    let o = mflow(&["simulate"], Some(&dir.path().join("missing.cfg")), &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn presets_lists_every_preset() {
    let o = mflow(&["presets"], None, Path::new("."));
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    for p in [
        "wigner",
        "wigner_real",
        "wishart",
        "wishart_nonunique",
        "geometric",
        "jacobi",
        "free_bm",
        "free_ou",
        "custom",
    ] {
        assert!(text.contains(p), "missing {p}");
    }
}
