use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn catring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catring")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name).to_string_lossy().into_owned()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let p = std::env::temp_dir().join(format!("catring-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        TempDir(p)
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.0).ok();
    }
}

fn build(dir: &TempDir, k: u64) -> String {
    let path = dir.path(&format!("r{k}.json"));
    let o = catring(&["ring", "build", "--order", &k.to_string(), "-o", &path]);
    assert!(o.status.success(), "{}", stderr(&o));
    path
}

#[test]
fn group_subcommands() {
    assert_eq!(stdout(&catring(&["group", "cosets", "--order", "4", "1", "2", "1"])).trim(), "e, a^2");
    assert_eq!(stdout(&catring(&["group", "cosets", "--order", "4", "2", "4", "2"])).trim(), "e, a");
    let ind = catring(&["group", "induce", "--order", "4", "--from", "2", "--to", "4", "--chi", "1"]);
    assert_eq!(stdout(&ind).trim(), "chi1 + chi3");
    let bad = catring(&["group", "induce", "--order", "4", "--from", "4", "--to", "2", "--chi", "0"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn build_reports_rank_and_hash() {
    let o = catring(&["ring", "build", "--order", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("sha256 60a091334576cac4280277eee72b55ae147f6ea4acb51bf76d12acc88aed65a5"), "{out}");
}

#[test]
fn small_bound_fails_with_trajectory() {
    let o = catring(&["--max-len", "4", "ring", "build", "--order", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("did not stabilize"), "{}", stderr(&o));
}

#[test]
fn verify_passes_and_names_corrupted_triples() {
    let dir = TempDir::new("verify");
    let path = build(&dir, 4);
    let o = catring(&["ring", "verify", &path]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")), "{}", stdout(&o));

    let mut ring: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let entry = &mut ring["table"][5]["coefficients"][0];
    *entry = serde_json::json!(entry.as_i64().unwrap() + 1);
    let bad = dir.path("bad.json");
    std::fs::write(&bad, ring.to_string()).unwrap();
    let o = catring(&["ring", "verify", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("associativity fails on triple"), "{}", stdout(&o));
}

#[test]
fn classical_ext_and_uct() {
    let dir = TempDir::new("classical");
    let r1 = build(&dir, 1);
    let (z6, z) = (dir.path("z6.json"), dir.path("z.json"));
    assert!(catring(&["module", "abelian", "--ring", &r1, "--even", "6", "-o", &z6]).status.success());
    assert!(catring(&["module", "abelian", "--ring", &r1, "--even", "0", "-o", &z]).status.success());
    let e = catring(&["ext", "--ring", &r1, &z6, &z, "-n", "1"]);
    assert_eq!(stdout(&e).trim(), "Ext^1: degree 0: Z/6; degree 1: 0");
    let u = stdout(&catring(&["uct", "--ring", &r1, &z6, &z]));
    assert!(u.contains("pd_check: true"), "{u}");
    assert!(u.contains("degree 1: Z/6"), "{u}");
}

#[test]
fn witness_dimension_and_resolution() {
    let ring = fixture("ring_c4.json");
    let (m, n) = (fixture("witness_module.json"), fixture("witness_partner.json"));
    assert_eq!(stdout(&catring(&["pd", "--ring", &ring, &m, "--cap", "2"])).trim(), "projective dimension: > 2");
    let e = stdout(&catring(&["ext", "--ring", &ring, &m, &n, "-n", "2"]));
    assert_eq!(e.trim(), "Ext^2: degree 0: Z/2 + Z/2; degree 1: 0");
    let res = stdout(&catring(&["resolve", "--ring", &ring, &m, "--length", "2"]));
    assert!(res.lines().count() >= 3, "{res}");
    let cyclic = stdout(&catring(&["module", "cyclic", "--ring", &ring, "--object", "4", "--basis", "13"]));
    assert_eq!(cyclic.trim(), std::fs::read_to_string(&m).unwrap().trim());
}

#[test]
fn ring_mismatch_and_missing_files_are_usage_errors() {
    let dir = TempDir::new("mismatch");
    let r2 = build(&dir, 2);
    let o = catring(&["module", "check", "--ring", &r2, &fixture("witness_module.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("different ring"));
    let missing = catring(&["ring", "info", "/nonexistent/ring.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!Path::new("/nonexistent/ring.json").exists());
}

#[test]
fn json_output_parses() {
    let ring = fixture("ring_c4.json");
    let o = catring(&["--json", "ring", "info", &ring]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());
    let o = catring(&["--json", "pd", "--ring", &ring, &fixture("witness_module.json"), "--cap", "1"]);
    serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap();
}
