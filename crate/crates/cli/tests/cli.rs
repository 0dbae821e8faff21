use std::path::PathBuf;
use std::process::{Command, Output};

fn rainbow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rainbow-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn all_ones_coloring_fails_with_a_printed_set() {
    let f = scratch("ones.txt");
    assert_eq!(rainbow(&["gen", "--classes", "3,3", "--colors", "3", "--out", path(&f)]).status.code(), Some(0));
    let o = rainbow(&["verify", "--in", path(&f), "--k", "3", "--l", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "verify coloring fail k 3 l 1 S {0:0, 0:1, 0:2}\n");
}

#[test]
fn randomized_verbs_require_a_seed() {
    let mc = rainbow(&["mc", "--classes", "3,3", "--event", "rainbow-tree", "--t", "3", "--trials", "10", "--case", "spread", "--k", "2"]);
    assert_eq!(mc.status.code(), Some(1));
    let color = rainbow(&["color", "--classes", "3,3", "--colors", "3"]);
    assert_eq!(color.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(rainbow(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(rainbow(&[]).status.code(), Some(1));
    assert_eq!(rainbow(&["--help"]).status.code(), Some(0));
    let bad = scratch("bad.txt");
    std::fs::write(&bad, "classes 3 3\ncolors 3\nedges 1 2 3\n").unwrap();
    let o = rainbow(&["verify", "--in", path(&bad), "--k", "2", "--l", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed certificate"));
    assert_eq!(rainbow(&["bounds", "--case", "no-such-case", "--n", "5"]).status.code(), Some(1));
}

#[test]
fn rx_witness_passes_verify() {
    for (classes, k, l) in [("3,3", "3", "1"), ("1,1,1", "3", "1"), ("2,2", "2", "1")] {
        let w = scratch(&format!("witness-{classes}-{k}-{l}.txt"));
        let o = rainbow(&["rx", "--classes", classes, "--k", k, "--l", l, "--t", "4", "--out", path(&w)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let v = rainbow(&["verify", "--in", path(&w), "--k", k, "--l", l]);
        assert_eq!(v.status.code(), Some(0), "{classes} k={k} l={l}: {}", stdout(&v));
    }
}

#[test]
fn infeasible_rx_names_the_failing_set() {
    let o = rainbow(&["rx", "--classes", "1,1,1", "--k", "3", "--l", "2", "--t", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("rx 1,1,1 k 3 l 2 value infeasible"), "{out}");
    assert!(out.contains("rx failing {0:0, 1:0, 2:0}"), "{out}");
}

#[test]
fn written_certificates_are_accepted_by_the_readers() {
    let c = scratch("random.txt");
    let o = rainbow(&["color", "--classes", "4,4", "--colors", "3", "--seed", "9", "--out", path(&c)]);
    assert_eq!(o.status.code(), Some(0));
    let p = rainbow(&["pack", "--in", path(&c), "--set", "0:0,0:1,1:0"]);
    assert_eq!(p.status.code(), Some(0));
    let packed = scratch("packed.txt");
    std::fs::write(&packed, &p.stdout).unwrap();
    let v = rainbow(&["verify", "--in", path(&packed)]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    assert!(stdout(&v).starts_with("verify packing ok {0:0, 0:1, 1:0}"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let runs: [&[&str]; 4] = [
        &["mc", "--classes", "6,6", "--event", "pair-family-fail", "--t", "3", "--l", "2", "--trials", "2000", "--case", "two-classes", "--k", "3", "--seed", "41"],
        &["color", "--classes", "4,4", "--colors", "3", "--seed", "5", "--attempts", "20", "--k", "3", "--l", "1"],
        &["bounds", "--n", "3..6"],
        &["rx", "--classes", "2,2,2", "--k", "3", "--l", "1", "--t", "3"],
    ];
    for args in runs {
        let (a, b) = (rainbow(args), rainbow(args));
        assert_eq!(a.status.code(), b.status.code(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty(), "{args:?}");
    }
    let mc = rainbow(runs[0]);
    let jobs: Vec<&str> = runs[0].iter().copied().chain(["--jobs", "3"]).collect();
    assert_eq!(rainbow(&jobs).stdout, mc.stdout);
}

#[test]
fn machine_lines_carry_their_verb() {
    let b = stdout(&rainbow(&["bounds", "--case", "bip-star-tail", "--n", "2"]));
    assert!(b.lines().any(|l| l == "bound bip-star-tail 2 77/81 9.506172839506173e-1"), "{b}");
    let t = stdout(&rainbow(&["threshold", "--k", "3", "--l", "1"]));
    assert_eq!(t.lines().next(), Some("threshold 3 1 183"));
    assert!(t.lines().skip(1).all(|l| l.starts_with("bound union-bound ")));
    let mc = stdout(&rainbow(&["mc", "--classes", "1,1,1", "--event", "triangle-mono", "--t", "3", "--trials", "900", "--case", "spread", "--k", "3", "--seed", "2"]));
    let fields: Vec<&str> = mc.trim().split(' ').collect();
    assert_eq!(&fields[..3], &["mc", "triangle-mono", "900"]);
    assert_eq!(fields.len(), 6);
}

#[test]
fn refute_and_ramsey_on_a_constant_coloring() {
    let f = scratch("const44.txt");
    rainbow(&["gen", "--classes", "4,4", "--colors", "4", "--fill", "2", "--out", path(&f)]);
    let r = rainbow(&["ramsey", "--in", path(&f), "--k", "4"]);
    assert_eq!(stdout(&r), "ramsey color 2 U 0:0,0:1,0:2,0:3 V 1:0,1:1,1:2,1:3\n");
    let o = rainbow(&["refute", "--in", path(&f), "--k", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.starts_with("refute S {0:0, 0:1, 1:0, 1:1} color 2 trees "), "{out}");
    assert!(out.ends_with("rainbow 0 packing 0\n"), "{out}");
    let latin = scratch("latin44.txt");
    rainbow(&["gen", "--classes", "4,4", "--colors", "4", "--scheme", "latin", "--out", path(&latin)]);
    let none = rainbow(&["refute", "--in", path(&latin), "--k", "4"]);
    assert_eq!((none.status.code(), stdout(&none)), (Some(0), "refute none\n".to_string()));
}
