use std::process::{Command, Output};

fn lftcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lftcf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_e() {
    let o = lftcf(&["expand", "[2; 1, 2*k, 1 @ k=1..]", "--terms", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2 1 2 1 1 4 1");
}

#[test]
fn transform_fixed_point() {
    let o = lftcf(&["transform", "--lft", "1,1,1,-1", "[2; 2 @ k=1..]", "--terms", "6"]);
    assert_eq!(stdout(&o).trim(), "2 2 2 2 2 2");
}

#[test]
fn transform_rational() {
    // (x + 1) / (x - 1) at 7/2 is 9/5 = [1; 1, 4]
    let o = lftcf(&["transform", "--lft", "1,1,1,-1", "[3, 2]", "--terms", "10"]);
    assert_eq!(stdout(&o).trim(), "1 1 4");
}

#[test]
fn decompose_example() {
    let o = lftcf(&["decompose", "--lft", "3,1,1,1"]);
    assert_eq!(stdout(&o).trim(), "case=TM T=[[2,1],[1,0]]");
    let o = lftcf(&["--json", "decompose", "--lft", "3,1,1,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["case"], "TM");
    assert_eq!(v["t"][0][0], "2");
}

#[test]
fn expand_json() {
    let o = lftcf(&["expand", "[0; 4*k+2 @ k=0..]", "--terms", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"], serde_json::json!(["0", "2", "6"]));
}

#[test]
fn verify_report_schema() {
    let o = lftcf(&[
        "verify",
        "recurrence",
        "--lft",
        "1,1,1,-1",
        "[; 4*(1+k) @ k=0..]",
        "--pmax",
        "20",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["branch"].as_str().unwrap().starts_with("rec1"));
    assert_eq!(v["p_range"], serde_json::json!([4, 20]));
    assert_eq!(v["passes"], 17);
    assert_eq!(v["failures"], serde_json::json!([]));
    assert!(v.get("threshold").is_none());

    let o = lftcf(&[
        "verify",
        "leaping",
        "--lft",
        "1,2,1,0",
        "[; 2 @ k=1..]",
        "--pmax",
        "40",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["threshold"], 0);
}

#[test]
fn verify_tail_and_leaping_pass() {
    for what in ["tail", "leaping"] {
        let o = lftcf(&[
            "verify",
            what,
            "--lft",
            "1,1,1,-1",
            "[; 3 @ k=1..]",
            "--pmax",
            "25",
            "--horizon",
            "100",
            "--seed",
            "3",
        ]);
        assert_eq!(o.status.code(), Some(0), "{what}: {}", stdout(&o));
        assert!(stdout(&o).contains("pass"));
    }
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(lftcf(&["expand"]).status.code(), Some(2));
    assert_eq!(lftcf(&["expand", "[1, 2", "--terms", "3"]).status.code(), Some(2));
    assert_eq!(lftcf(&["decompose", "--lft", "1,2,3"]).status.code(), Some(2));
    // not applicable
    assert_eq!(lftcf(&["decompose", "--lft", "1,0,0,1"]).status.code(), Some(3));
    assert_eq!(
        lftcf(&["verify", "recurrence", "--lft", "1,2,1,0", "[; 2 @ k=1..]"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        lftcf(&["family", "hurwitz", "--a", "3", "--n", "3", "--emit-tail"])
            .status
            .code(),
        Some(3)
    );
    // a check that cannot be carried out
    assert_eq!(
        lftcf(&[
            "verify",
            "leaping",
            "--lft",
            "1,1,1,-1",
            "[; 3 @ k=1..]",
            "--pmax",
            "1000"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn family_tail_output() {
    let o = lftcf(&[
        "family",
        "tasoev1",
        "--u",
        "3",
        "--a",
        "3",
        "--emit-tail",
        "--case",
        "TMR",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("class=CF2"));
    assert!(out.contains("tail t2.2"));
}

#[test]
fn selftest_passes() {
    let o = lftcf(&["selftest", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
