use std::process::Command;

fn wwlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wwlab"))
        .args(args)
        .env("WWLAB_JOBS", "1")
        .output()
        .expect("wwlab runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn selftest_is_byte_identical() {
    let (c1, a) = wwlab(&["selftest", "--seed", "11"]);
    let (c2, b) = wwlab(&["selftest", "--seed", "11"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.starts_with("# wwlab selftest"));
}

#[test]
fn exit_codes() {
    assert_eq!(wwlab(&["ntheta", "--no-such-key", "1"]).0, 2);
    assert_eq!(wwlab(&["weyl-scan", "--n-min", "4096", "--n-max", "4096", "--abs-err", "1e-3"]).0, 3);
    let (code, out) = wwlab(&["weyl-scan", "--n-min", "64", "--n-max", "128"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn json_output() {
    let (code, out) = wwlab(&["badc", "--theta", "golden"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
    assert!(v["config"].as_str().unwrap().starts_with("wwlab badc"));
    assert!(v["result"]["bad_approx_constant"].as_f64().unwrap() > 0.38);
}

#[test]
fn config_file() {
    let dir = std::env::temp_dir().join(format!("wwlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(&path, "subcommand = \"dirichlet\"\nseed = 3\n[dirichlet]\nq = \"10,100\"\n").unwrap();
    let (code, out) = wwlab(&["dirichlet", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("q=10,100"), "{out}");
    std::fs::remove_dir_all(&dir).unwrap();
}
