use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn mauto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mauto"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    mauto(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(mauto(args).stdout).unwrap()
}

#[test]
fn membership() {
    assert_eq!(code(&["member", "fig1.aut", "1,0,0"]), 0);
    assert_eq!(code(&["member", "fig1.aut", "0"]), 1);
    assert_eq!(code(&["member", "add3.aut", "1,2", "3,4", "4,6"]), 0);
    assert_eq!(code(&["member", "add3.aut", "1", "1", "3"]), 1);
    assert!(stdout(&["member", "fig1.aut", "1,0"]).starts_with("accept q0 q1 q1"));
}

#[test]
fn errors_exit_two() {
    assert_eq!(code(&["member", "fig1.aut"]), 2);
    assert_eq!(code(&["member", "fig1.aut", "x"]), 2);
    assert_eq!(code(&["member", "missing.aut", "1"]), 2);
    assert_eq!(code(&["member", "fig1.aut", "1", "--theory", "ab.fin"]), 2);
    assert_eq!(code(&["member", "fig1.aut", "1", "--pad", "alias:0"]), 2);
    assert_eq!(code(&["product", "fig1.aut", "starts_a.aut"]), 2);
    assert_eq!(code(&["ordinal", "add", "1,0", "1"]), 2);
    assert_eq!(code(&["skolem-encode", "0"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    let out = mauto(&["member", "fig1.aut", "x"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn theory_override_matches() {
    assert_eq!(code(&["member", "fig1.aut", "1", "--theory", "presburger"]), 0);
    assert_eq!(code(&["member", "starts_a.aut", "a,b", "--theory", "ab.fin"]), 0);
    assert_eq!(code(&["member", "starts_a.aut", "b"]), 1);
}

#[test]
fn emptiness() {
    assert_eq!(code(&["empty", "contradiction.aut"]), 0);
    assert_eq!(code(&["empty", "fig1.aut"]), 1);
    assert_eq!(stdout(&["empty", "fig1.aut"]).trim(), "1");
}

#[test]
fn closure_commands_round_trip() {
    let dir = std::env::temp_dir().join(format!("mauto-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = |name: &str| dir.join(name).display().to_string();
    assert_eq!(code(&["complement", "universal.aut", "-o", &out("c.aut")]), 0);
    assert_eq!(code(&["empty", &out("c.aut")]), 0);
    assert_eq!(code(&["complement", "fig1.aut", "-o", &out("nf.aut")]), 0);
    assert_eq!(code(&["member", &out("nf.aut"), "1,0"]), 1);
    assert_eq!(code(&["member", &out("nf.aut"), "0"]), 0);
    assert_eq!(code(&["project", "add3.aut", "--track", "3", "-o", &out("p.aut")]), 0);
    assert_eq!(code(&["member", &out("p.aut"), "1,2", "3,4"]), 0);
    assert_eq!(code(&["product", "fig1.aut", "evenodd.aut", "-o", &out("i.aut")]), 0);
    assert_eq!(code(&["member", &out("i.aut"), "1,0"]), 0);
    assert_eq!(code(&["member", &out("i.aut"), "1,0,0"]), 1);
    assert_eq!(code(&["union", "fig1.aut", "contradiction.aut", "-o", &out("u.aut")]), 0);
    assert_eq!(code(&["member", &out("u.aut"), "1,0"]), 0);
    assert_eq!(code(&["cylindrify", "fig1.aut", "--tracks", "2", "-o", &out("y.aut")]), 0);
    assert_eq!(code(&["member", &out("y.aut"), "1,0", "7,7,7"]), 0);
    assert_eq!(code(&["compile-mso", "alternation.mso", "-o", &out("m.aut")]), 0);
    assert_eq!(code(&["member", &out("m.aut"), "1,2,3"]), 0);
    assert_eq!(code(&["member", &out("m.aut"), "1,2,4"]), 1);
    for f in ["c", "nf", "p", "i", "u", "y", "m"] {
        let path = out(&format!("{f}.aut"));
        let text = std::fs::read_to_string(&path).unwrap();
        let a = mauto::automata::parse_automaton(&text, None).unwrap();
        assert_eq!(mauto::automata::print_automaton(&a), text, "{f}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn decisions() {
    assert_eq!(
        code(&["decide", "presburger", "(forall x (exists y (rel plus x y x)))"]),
        0
    );
    assert_eq!(code(&["decide", "presburger", "(exists x (rel plus x x 1))"]), 2);
    assert_eq!(
        code(&[
            "decide",
            "fo",
            "ordinal-omega-omega",
            "(exists a (exists b (exists c (exists d \
             (and (rel plus a b c) (rel plus b a d) (not (= c d)))))))"
        ]),
        0
    );
    assert_eq!(
        code(&["decide", "fo", "skolem", "(forall x (exists y (rel times y y x)))"]),
        1
    );
    assert_eq!(
        code(&[
            "decide",
            "fo",
            "starts_a.pres",
            "(exists x (exists y (and (rel eqlength x y) (not (= x y)))))"
        ]),
        0
    );
    assert_eq!(
        code(&["decide", "satplus", "repeated.msoplus", "--theory", "presburger"]),
        0
    );
    assert_eq!(code(&["decide", "satplus", "double_tail.msoplus"]), 0);
    assert_eq!(code(&["decide", "mso", "alternation.mso"]), 0);
    assert_eq!(code(&["decide", "mso", "(existsP x (alpha false x))"]), 1);
}

#[test]
fn ordinals_and_skolem() {
    assert_eq!(
        stdout(&["ordinal", "add", "11,2,0,3,4,0,5", "0,2,6,17"]).lines().next(),
        Some("0,2,6,20,4,0,5")
    );
    assert_eq!(stdout(&["ordinal", "add", "", "1"]).lines().next(), Some("1"));
    assert_eq!(stdout(&["ordinal", "add", "1", "0,1"]).lines().next(), Some("0,1"));
    assert_eq!(stdout(&["ordinal", "cmp", "1", "0,1"]).trim(), "1 < ω");
    assert_eq!(stdout(&["skolem-encode", "12"]).trim(), "2,1");
}
