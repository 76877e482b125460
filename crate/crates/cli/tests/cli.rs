use std::path::Path;
use std::process::{Command, Output};

fn thompson(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thompson")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn reduce_negation_refinement() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("t.tbl"), "thompson k=2\n0 -> 1\n10 -> 00\n11 -> 01\n").unwrap();
    let o = thompson(d.path(), &["reduce", "--in", "t.tbl", "--out", "c.tbl"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let c = std::fs::read_to_string(d.path().join("c.tbl")).unwrap();
    assert_eq!(c, "thompson k=2\n0 -> 1\n1 -> 0\n");
    let again = thompson(d.path(), &["reduce", "--in", "t.tbl", "--out", "c2.tbl"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read(d.path().join("c2.tbl")).unwrap(), c.as_bytes());
}

#[test]
fn wf_word_of_and_evaluates() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("and.ckt"), "circuit inputs=2 outputs=1\nw1 = AND in1 in2\noutputs w1\n").unwrap();
    let o = thompson(d.path(), &["compile-wf", "--in", "and.ckt", "--out", "wf.word"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let word = std::fs::read_to_string(d.path().join("wf.word")).unwrap();
    assert!(word.contains("# source_size=4"));
    for (x, want) in [("000", "0000"), ("011", "0111"), ("010", "0010")] {
        let o = thompson(d.path(), &["eval-word", "--word", "wf.word", "--apply", x]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stdout(&o).trim(), want, "at {x}");
    }
}

#[test]
fn cayley_ball_of_an_involution() {
    let d = tempfile::tempdir().unwrap();
    let o = thompson(d.path(), &["measure", "cayley", "--gens", "phi_not", "--radius", "3", "--out", "ball.txt"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "n,value,resolved\n0,1,true\n1,1,true\n");
    let dump = std::fs::read_to_string(d.path().join("ball.txt")).unwrap();
    assert_eq!(dump.lines().count(), 2);
    assert!(dump.lines().all(|l| l.contains('\t')));
}

#[test]
fn word_commands_accept_inline_words() {
    let d = tempfile::tempdir().unwrap();
    let o = thompson(d.path(), &["word-inverse", "--word", "sigma phi_not tau(1,3)"]);
    assert_eq!(stdout(&o).trim(), "tau(1,3) phi_not inv(sigma)");
    let o = thompson(d.path(), &["eval-word", "--word", "phi_not phi_not"]);
    assert_eq!(stdout(&o), "thompson k=2\neps -> eps\n");
    let o = thompson(d.path(), &["lep-normalize", "--word", "sigma inv(sigma) gamma_and"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().next().unwrap().split_whitespace().all(|t| t.starts_with("gamma_") || t.starts_with("tau(")));
}

#[test]
fn compose_applies_first_input_first() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("fork.tbl"), "thompson k=2\n0 -> 00\n1 -> 11\n").unwrap();
    std::fs::write(d.path().join("and.tbl"), "thompson k=2\n00 -> 0\n01 -> 0\n1 -> eps\n").unwrap();
    let o = thompson(d.path(), &["compose", "--in", "fork.tbl", "--in", "and.tbl"]);
    assert_eq!(stdout(&o), "thompson k=2\neps -> eps\n");
    let o = thompson(d.path(), &["classify", "--in", "fork.tbl"]);
    assert!(stdout(&o).contains("lep=true\n") && stdout(&o).contains("in_g=false"));
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("and.tbl"), "thompson k=2\n00 -> 0\n01 -> 0\n1 -> eps\n").unwrap();
    let o = thompson(d.path(), &["invert", "--in", "and.tbl"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NOT_INVERTIBLE"));

    let o = thompson(d.path(), &["measure", "cayley", "--radius", "many"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--radius"));

    let o = thompson(d.path(), &["compose", "--in", "and.tbl"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--in"));

    let o = thompson(d.path(), &["eval-word", "--word", "missing.word"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--word"));

    let o = thompson(d.path(), &["word-to-circuit", "--word", "sigma"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NOT_LEP"));
}

#[test]
fn help_states_application_order() {
    let d = tempfile::tempdir().unwrap();
    for cmd in ["eval-word", "word-inverse", "compile-wf", "lep-normalize", "measure"] {
        let o = thompson(d.path(), &[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("left to right"), "{cmd}");
    }
}

#[test]
fn reversible_synthesis_and_pairs() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("swap.tt"), "truthtable m=2 n=2\n00 -> 00\n01 -> 10\n10 -> 01\n11 -> 11\n").unwrap();
    std::fs::write(d.path().join("swap.ckt"), "circuit inputs=2 outputs=2\nw1 w2 = SWAP in1 in2\noutputs w1 w2\n").unwrap();
    let o = thompson(d.path(), &["toffoli", "--in", "swap.tt"]);
    assert!(stdout(&o).starts_with("circuit inputs=4 outputs=4"), "{}", stderr(&o));
    let o = thompson(d.path(), &["fredkin", "--in", "swap.tt", "--k", "1"]);
    assert!(stdout(&o).starts_with("circuit inputs=7 outputs=7"), "{}", stderr(&o));
    let o = thompson(d.path(), &["pad-perm", "--in", "swap.tt", "--k", "3"]);
    assert!(stdout(&o).starts_with("truthtable m=3 n=3\n"), "{}", stderr(&o));

    let o = thompson(d.path(), &["compile-pair", "--in", "swap.ckt", "--in", "swap.ckt", "--out", "p.word"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for (x, want) in [("001", "010"), ("010", "001"), ("011", "011")] {
        let o = thompson(d.path(), &["eval-word", "--word", "p.word", "--apply", x]);
        assert_eq!(stdout(&o).trim(), want, "at {x}");
    }
    std::fs::write(d.path().join("id.ckt"), "circuit inputs=2 outputs=2\noutputs in1 in2\n").unwrap();
    let o = thompson(d.path(), &["compile-pair", "--in", "swap.ckt", "--in", "id.ckt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NOT_INVERSE_PAIR"));
}

#[test]
fn verify_is_seeded_and_reproducible() {
    let d = tempfile::tempdir().unwrap();
    let a = thompson(d.path(), &["verify", "codes", "--seed", "3", "--jobs", "1"]);
    let b = thompson(d.path(), &["verify", "codes", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let o = thompson(d.path(), &["verify", "nothing"]);
    assert_eq!(o.status.code(), Some(2));
}
