use std::process::Command;

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shishkin-mg"))
}

#[test]
fn small_sweep_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("report.json");
    let vtk = dir.path().join("vtk");
    let out = cli()
        .args(["--case", "square-parab", "--eps", "1e-4,1e-8", "--n", "16"])
        .arg("--out")
        .arg(&csv)
        .arg("--report")
        .arg(&json)
        .arg("--export-mesh")
        .arg(&vtk)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.contains("converged")).count(), 2);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("metric,eps,N,value\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 6);
    assert!(std::fs::read_to_string(&json).unwrap().contains("\"residual_history\""));
    assert_eq!(std::fs::read_dir(&vtk).unwrap().count(), 2);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small run\ncase = hemker\neps = 1\nn = 64\nlevels = 3\n").unwrap();
    let csv = dir.path().join("out.csv");
    let out = cli()
        .arg("--config")
        .arg(&cfg)
        .args(["--case", "square-exp", "--n", "16", "--levels", "max"])
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.contains("dofs,1.00000e0,16,2.89000e2"), "{text}");
}

#[test]
fn invalid_configuration_exits_with_usage_error() {
    let out = cli().args(["--case", "square-exp", "--eps", ""]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eps"));
    let out = cli().args(["--case", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unconverged_cells_give_nonzero_exit() {
    let out = cli()
        .args(["--case", "square-exp", "--eps", "1e-4", "--n", "16,32", "--nu1", "0", "--nu2", "0"])
        .args(["--max-iterations", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
}
