use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monoid-recon"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("monoid-recon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn describe_b() {
    let o = bin().args(["describe", "B"]).output().unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("ideals (3):"));
    assert!(text.contains("primes (2):"));
    assert!(text.contains("topologies (3):"));
}

#[test]
fn describe_x2_file() {
    let o = bin().arg("describe").arg(data("X2.scheme")).output().unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("points (4):"), "{text}");
    assert!(text.contains("centre (5 elements):"));
}

#[test]
fn topologies_of_e() {
    let o = bin().args(["topologies", "E"]).output().unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("topologies (4):"));
}

#[test]
fn verify_reconstruction_on_corpus() {
    let o = bin().args(["verify", "--corpus", "--suite", "reconstruction", "--format", "records"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# monoid-recon "));
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split('\t').collect();
        let keys: Vec<&str> = fields.iter().map(|f| f.split('=').next().unwrap()).collect();
        assert_eq!(keys, ["id", "anchor", "status", "witness", "millis"]);
        assert_eq!(fields[2], "status=pass");
        assert_eq!(fields[4], "millis=-");
    }
}

#[test]
fn records_are_deterministic() {
    let args = ["verify", "--corpus", "--suite", "schemes", "--suite", "incidence", "--format", "records"];
    let a = bin().args(args).env("MONOID_RECON_JOBS", "1").output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn data_files_verify() {
    let mut cmd = bin();
    cmd.args(["verify", "--suite", "ideals", "--suite", "schemes"]);
    for name in ["F3.monoid", "X2.scheme", "BplusE.scheme"] {
        cmd.arg(data(name));
    }
    let o = cmd.output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn parse_error_exits_two() {
    let path = scratch("broken.monoid", "monoid Q 2 0\n0 1\n1 x\n");
    let o = bin().arg("verify").arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3, column 3"), "{err}");
}

#[test]
fn non_associative_table_fails_verification() {
    // (1·1)·2 = 0 but 1·(1·2) = 1.
    let path = scratch("bad.monoid", "monoid Q 3 0\n0 1 2\n1 1 0\n2 0 2\n");
    let o = bin().args(["verify", "--suite", "ideals", "--format", "records"]).arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("status=fail"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bin().arg("verify").output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["verify", "--corpus", "--suite", "nope"]).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["describe", "NoSuchThing"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn counterexample_table() {
    let o = bin().args(["counterexample", "--max-s", "1000", "--max-p", "100", "--table"]).output().unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("\n1\t2\t1\n"));
    assert!(text.contains("\n6\t5\t1\n"));
    assert_eq!(text.lines().count(), 1002);
}

#[test]
fn counterexample_bound_too_small() {
    let o = bin().args(["counterexample", "--max-s", "100", "--max-p", "3"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}
