use gpfree_cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE, OUTPUT_SCHEMA};
use serde_json::Value;

fn gpfree(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gpfree").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn validate(doc: &str) -> Value {
    let schema: Value = serde_json::from_str(OUTPUT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let value: Value = serde_json::from_str(doc).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc}");
    value
}

fn progression_file(lines: &str) -> tempfile_path::Path {
    tempfile_path::write(lines)
}

mod tempfile_path {
    use std::sync::atomic::{AtomicUsize, Ordering};

    pub struct Path(pub std::path::PathBuf);

    impl Drop for Path {
        fn drop(&mut self) {
            let _ = std::fs::remove_file(&self.0);
        }
    }

    pub fn write(contents: &str) -> Path {
        static NEXT: AtomicUsize = AtomicUsize::new(0);
        let name = format!(
            "gpfree-cli-{}-{}.txt",
            std::process::id(),
            NEXT.fetch_add(1, Ordering::Relaxed)
        );
        let path = std::env::temp_dir().join(name);
        std::fs::write(&path, contents).unwrap();
        Path(path)
    }
}

#[test]
fn density_values() {
    let (code, out, _) = gpfree(&["density", "greedy", "--q", "2", "--digits", "6"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "0.648361");
    let (_, out, _) = gpfree(&["density", "upper-simple", "--q", "2", "--digits", "9"]);
    assert_eq!(out.trim(), "0.857142857");
    let (_, out, _) = gpfree(&["density", "upper-no", "--q", "3", "--digits", "9"]);
    assert_eq!(out.trim(), "0.921925273");
}

#[test]
fn usage_errors_exit_two() {
    let (code, out, err) = gpfree(&["density", "greedy", "--q", "6", "--digits", "6"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("prime power"), "{err}");
    assert_eq!(gpfree(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(gpfree(&["factor", "--q", "2", "x^2+3"]).0, EXIT_USAGE);
    assert_eq!(gpfree(&["factor", "--q", "4", "--modulus", "1,0,1", "x"]).0, EXIT_USAGE);
    assert_eq!(gpfree(&["--help"]).0, EXIT_OK);
}

#[test]
fn budget_failures_exit_one() {
    let (code, _, err) = gpfree(&["--budget", "100", "empirical", "--q", "2", "--max-degree", "10"]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn checkpoint_and_rn() {
    assert_eq!(gpfree(&["checkpoint", "--q", "2", "--k", "2"]).1.trim(), "27/32");
    assert_eq!(
        gpfree(&["rn", "--n", "9"]).1.trim(),
        "1, 2, 4, 5, 9, 11, 13, 14, 20"
    );
    assert_eq!(
        gpfree(&["empirical", "--q", "2", "--max-degree", "2"]).1.trim(),
        "5/8 = 0.625000"
    );
}

#[test]
fn factor_text() {
    let (code, out, _) = gpfree(&["factor", "--q", "2", "x^6+x^4+x^2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "(x)^2 * (x^2+x+1)^2");
    let (_, out, _) = gpfree(&["factor", "--q", "3", "2*x^2+2"]);
    assert_eq!(out.trim(), "2 * (x^2+1)");
}

#[test]
fn greedy_commands() {
    assert_eq!(gpfree(&["greedy", "check", "--q", "2", "x^2"]).1.trim(), "not a member");
    assert_eq!(gpfree(&["greedy", "check", "--q", "2", "x^4+x^3"]).1.trim(), "member");
    let (_, out, _) = gpfree(&["greedy", "enumerate", "--q", "2", "--max-degree", "2", "--counts-only"]);
    assert_eq!(out, "degree,count\n0,1\n1,2\n2,2\n");
}

#[test]
fn progcheck_reports_witness() {
    let file = progression_file("# a progression\nx\nx^2\nx^3\n");
    let path = file.0.to_str().unwrap();
    let (code, out, _) = gpfree(&["progcheck", "--q", "2", "--file", path]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "progression: x, x^2, x^3 (ratio x)");
    let clean = progression_file("1\nx\nx+1\n");
    let (_, out, _) = gpfree(&["progcheck", "--q", "2", "--file", clean.0.to_str().unwrap()]);
    assert_eq!(out.trim(), "progression-free (3 polynomials)");
}

#[test]
fn figure1_writes_csv() {
    let (code, out, _) = gpfree(&["figure1", "--qmax", "9"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "q,density");
    assert_eq!(lines[1], "2,0.648361");
    assert_eq!(lines.len(), 1 + 7);
}

#[test]
fn identical_invocations_are_identical() {
    let args = ["factor", "--q", "5", "x^9+3*x^4+x+1", "--json"];
    assert_eq!(gpfree(&args), gpfree(&args));
}

#[test]
fn json_outputs_match_schema() {
    let file = progression_file("x\nx^2\nx^3\n");
    let path = file.0.to_str().unwrap().to_string();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["density", "greedy", "--q", "4", "--digits", "6"],
        vec!["density", "lower", "--q", "2", "--digits", "9"],
        vec!["density", "upper-simple", "--q", "5", "--digits", "9"],
        vec!["density", "upper-no", "--q", "2", "--digits", "9"],
        vec!["tables", "--which", "2"],
        vec!["figure1", "--qmax", "8"],
        vec!["checkpoint", "--q", "3", "--k", "3"],
        vec!["empirical", "--q", "3", "--max-degree", "3"],
        vec!["rn", "--n", "5"],
        vec!["factor", "--q", "4", "x^4+x"],
        vec!["factor", "--q", "2", "1"],
        vec!["greedy", "check", "--q", "9", "x^2+[1]"],
        vec!["greedy", "enumerate", "--q", "3", "--max-degree", "2"],
        vec!["greedy", "enumerate", "--q", "3", "--max-degree", "2", "--counts-only"],
        vec!["progcheck", "--q", "2", "--file", &path],
        vec!["progcheck", "--q", "2", "--file", &path, "--unit-tolerant"],
        vec!["extremal", "--q", "2", "--max-degree", "3"],
    ];
    for args in invocations {
        let mut full = args.clone();
        full.push("--json");
        let (code, out, err) = gpfree(&full);
        assert_eq!(code, EXIT_OK, "{args:?}: {err}");
        let value = validate(&out);
        assert!(value["command"].is_string());
    }
}
