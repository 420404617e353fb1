use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn staged(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_staged"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("staged_cli_{}_{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn gen_then_run() {
    let g = staged(&["gen", "square-jigsaw", "--n", "5"], None);
    assert!(g.status.success());
    let r = staged(&["run", "-"], Some(&stdout(&g)));
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let out = stdout(&r);
    assert!(out.starts_with("terminal 1: 5x5, 25 cells\n"), "{out}");
    assert!(out.ends_with("unique=true complete=true\n"));
}

#[test]
fn verify_and_metrics_on_the_line() {
    let v = staged(&["verify", &data("line10.tam"), "--target", &data("line10.shape"), "--connectivity", "full", "--planar"], None);
    assert_eq!(stdout(&v), "ok\n");
    let m = staged(&["metrics", &data("line10.tam")], None);
    assert_eq!(stdout(&m), "glues=3 tiles=3 stages=3 bins=2 temperature=1\n");
    let wrong = temp("nine.shape", "#########\n");
    let v = staged(&["verify", &data("line10.tam"), "--target", &wrong], None);
    assert_eq!(v.status.code(), Some(4));
    let v = staged(&["verify", &data("line10.tam"), "--target", &data("line10.shape"), "--connectivity", "partial"], None);
    assert_eq!(v.status.code(), Some(4));
}

#[test]
fn exit_codes() {
    let syntax = staged(&["run", "-"], Some("system s\ntemperature =\n"));
    assert_eq!(syntax.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&syntax.stderr).contains("2:13"));
    let semantic = staged(&["run", "-"], Some("system s\ntemperature 1\nglue a strength 0\n"));
    assert_eq!(semantic.status.code(), Some(2));
    let line = stdout(&staged(&["gen", "line", "--n", "40"], None));
    let budget = staged(&["run", "-", "--budget-size", "5"], Some(&line));
    assert_eq!(budget.status.code(), Some(3));
    let missing = staged(&["run", "/nonexistent/system.tam"], None);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn generators_write_parseable_systems() {
    let shape = temp("ell.shape", "#.\n#.\n##\n");
    for args in [
        vec!["gen", "line-pow2", "--k", "3"],
        vec!["gen", "spanning-tree", "--shape", &shape],
        vec!["gen", "scale2", "--shape", &shape],
        vec!["gen", "monotone", "--shape", &shape],
        vec!["gen", "counter", "--k", "1"],
        vec!["gen", "crazy-string", "--bits", "0110"],
    ] {
        let g = staged(&args, None);
        assert!(g.status.success(), "{args:?}");
        let m = staged(&["metrics", "-"], Some(&stdout(&g)));
        assert!(m.status.success() && stdout(&m).starts_with("glues="), "{args:?}");
    }
    let holed = temp("ring.shape", "###\n#.#\n###\n");
    assert_eq!(staged(&["gen", "scale2", "--shape", &holed], None).status.code(), Some(2));
}

#[test]
fn render_and_trace() {
    let a = staged(&["render", &data("line10.shape")], None);
    assert_eq!(stdout(&a), "##########\n");
    let s = staged(&["render", &data("line10.tam"), "--format", "svg"], None);
    assert!(stdout(&s).starts_with("<svg") && stdout(&s).matches("<rect").count() == 10);
    let trace = std::env::temp_dir().join(format!("staged_cli_{}_trace", std::process::id()));
    let r = staged(&["run", &data("line10.tam"), "--trace", &trace.display().to_string()], None);
    assert!(r.status.success());
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("terminal 1\n") && text.contains("-> 10 cells"), "{text}");
}
