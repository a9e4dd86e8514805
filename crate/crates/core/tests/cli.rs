mod common;

use std::path::{Path, PathBuf};

use indstab::cli::{run, EXIT_CYCLE, EXIT_NEGATIVE, EXIT_OK, EXIT_STEP_LIMIT, EXIT_USAGE};
use indstab::matching::parse_matching;
use indstab::model::parse_instance;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("indstab-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn indstab(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("indstab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const MARRIAGE: &str = "\
# two men, two women, with ties
marriage 2 2
1: (3 4)
2: 3 4
3: 1 (2 self)
4: 2
";

#[test]
fn solve_then_verify() {
    let dir = Scratch::new("solve");
    let game = dir.file("g.txt", MARRIAGE);
    for concept in ["is", "cis-ir", "cns"] {
        let (code, out, _) = indstab(&["solve", "--concept", concept, s(&game)]);
        assert_eq!(code, EXIT_OK, "{concept}");
        let m = dir.file("m.txt", &out);
        let verify_as = if concept == "cis-ir" { "cis" } else { concept };
        let (code, out, _) = indstab(&["verify", "--concept", verify_as, s(&game), s(&m)]);
        assert_eq!((code, out.as_str()), (EXIT_OK, "STABLE\n"), "{concept}");
    }
}

#[test]
fn verify_reports_witness() {
    let dir = Scratch::new("verify");
    let game = dir.file("g.txt", "roommate 2\n1: 2\n2: 1\n");
    let m = dir.file("m.txt", "1 -\n2 -\n");
    let (code, out, _) = indstab(&["verify", "--concept", "ns", s(&game), s(&m)]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(out, "UNSTABLE\nDEVIATION mover=1 target=2 concept=NS\n");
    let (code, out, _) = indstab(&["verify", "--concept", "strict-core", s(&game), s(&m)]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(out, "UNSTABLE\nBLOCK i=1 j=2 concept=STRICT_CORE\n");
}

#[test]
fn malformed_inputs_exit_with_usage_code() {
    let dir = Scratch::new("bad");
    let game = dir.file("g.txt", "roommate 3\n1: 2\n2: 1\n3:\n");
    let not_involution = dir.file("m.txt", "1 2\n2 3\n3 -\n");
    let (code, _, err) = indstab(&["verify", "--concept", "ns", s(&game), s(&not_involution)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error: "), "{err}");

    let broken = dir.file("b.txt", "roommate 2\n1: 1\n2:\n");
    assert_eq!(indstab(&["brute", "--concept", "ns", s(&broken)]).0, EXIT_USAGE);
    assert_eq!(indstab(&["brute", "--concept", "nope", s(&game)]).0, EXIT_USAGE);
    assert_eq!(indstab(&["verify", "--concept", "ns", "/nonexistent/g.txt", s(&game)]).0, EXIT_USAGE);
    assert_eq!(indstab(&["solve", "--concept", "is", s(&game)]).0, EXIT_USAGE);
    assert_eq!(indstab(&[]).0, EXIT_USAGE);
    assert_eq!(indstab(&["--help"]).0, EXIT_OK);
}

#[test]
fn brute_and_dynamics_on_cyclic_game() {
    let dir = Scratch::new("cyclic");
    let game = dir.file("g.txt", &common::cyclic3().to_string());
    assert_eq!(indstab(&["brute", "--concept", "is", "--count", s(&game)]), (EXIT_NEGATIVE, "0\n".into(), String::new()));
    assert_eq!(indstab(&["exists", "--concept", "is", "--method", "brute", s(&game)]).1, "NO\n");

    let (code, out, _) = indstab(&["dynamics", "--concept", "is", s(&game)]);
    assert_eq!(code, EXIT_CYCLE);
    assert!(out.contains("CYCLE first_repeat=1 length=3 steps=4\n"), "{out}");
    assert!(out.starts_with("STEP 1 DEVIATION mover=1 target=2 concept=IS\n"), "{out}");

    let (code, out, _) = indstab(&["dynamics", "--concept", "is", "--max-steps", "2", s(&game)]);
    assert_eq!(code, EXIT_STEP_LIMIT);
    assert!(out.contains("STEP_LIMIT steps=2\n"));
}

#[test]
fn exists_poly_on_complete_roommate_game() {
    let dir = Scratch::new("exists");
    let game = dir.file("g.txt", "roommate 3\n1: 2 3\n2: 3 1\n3: 1 2\n");
    assert_eq!(indstab(&["exists", "--concept", "ns", s(&game)]).0, EXIT_NEGATIVE);
    let game = dir.file("h.txt", "roommate 3\n1: (2 3)\n2: 1 3\n3: 1 2\n");
    let (code, out, _) = indstab(&["exists", "--concept", "ns", s(&game)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("YES\n"));
    let m = parse_matching(out.strip_prefix("YES\n").unwrap(), 3).unwrap();
    let g = parse_instance(&std::fs::read_to_string(&game).unwrap()).unwrap();
    assert!(indstab::stability::is_stable(&g, &m, indstab::Concept::Ns));
}

#[test]
fn reduce_writes_a_parseable_instance() {
    let dir = Scratch::new("reduce");
    let graph = dir.file("k2.txt", "graph 2 1\n1 2\n");
    for kind in ["ns-marriage", "is-roommate"] {
        let (code, out, _) = indstab(&["reduce", kind, s(&graph), "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with(&format!("# reduction {kind}:")));
        parse_instance(&out).unwrap();
    }
    assert_eq!(indstab(&["reduce", "ns-marriage", s(&graph), "99"]).0, EXIT_USAGE);
}

#[test]
fn gen_is_seeded() {
    let args = ["gen", "--marriage", "3", "4", "--tie-prob", "0.4", "--accept-prob", "0.7", "--seed", "9"];
    let (code, first, _) = indstab(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(indstab(&args).1, first);
    let g = parse_instance(&first).unwrap();
    assert_eq!(g.n(), 7);
    assert_eq!(indstab(&["gen", "--roommate", "3", "--tie-prob", "2"]).0, EXIT_USAGE);
}
