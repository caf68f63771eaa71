use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crystdual"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_passes_on_builtins() {
    for name in ["hantzsche-wendt", "klein-bottle"] {
        let out = run(&["check", "--builtin", name]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert!(stdout(&out).contains("torsion-free: yes"));
    }
}

#[test]
fn check_passes_on_a_trivial_group_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{
            "rank": 1,
            "holonomy": {{ "labels": ["e"], "mult": [["e"]], "identity": "e" }},
            "generators": {{ "t": {{ "v": ["1"], "h": "e" }} }}
        }}"#
    )
    .unwrap();
    let out = run(&["check", "--input", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_reports_cocycle_violations_with_exit_two() {
    // the builtin group with the first translation replaced by (1/2, 0, 0)
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let config = serde_json::json!({
        "rank": 3,
        "holonomy": {
            "labels": ["e", "x", "y", "z"],
            "mult": [
                ["e", "x", "y", "z"],
                ["x", "e", "z", "y"],
                ["y", "z", "e", "x"],
                ["z", "y", "x", "e"]
            ],
            "identity": "e"
        },
        "lin": {
            "x": [[1, 0, 0], [0, -1, 0], [0, 0, -1]],
            "y": [[-1, 0, 0], [0, 1, 0], [0, 0, -1]],
            "z": [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]
        },
        "trans": {
            "x": ["1/2", "0", "0"],
            "y": ["0", "1/2", "1/2"],
            "z": ["1/2", "0", "1/2"]
        }
    });
    write!(f, "{config}").unwrap();
    let out = run(&["check", "--input", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("CocycleViolation"), "stderr: {err}");
}

#[test]
fn unknown_builtin_is_a_validation_error() {
    let out = run(&["check", "--builtin", "nonesuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn induce_with_paper_basis_prints_the_expected_block() {
    let out = run(&[
        "induce",
        "--builtin",
        "hantzsche-wendt",
        "--stratum",
        "(u,1,1)",
        "--paper-basis",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("substitutions: u = a^2"), "{text}");
    assert!(text.contains("pi(x) =\n  [       a        0 ]\n  [       0  conj(a) ]"));
    assert!(text.contains("pi(y) =\n  [ 0  1 ]\n  [ 1  0 ]"));
    assert!(text.contains("pi(z) =\n  [       0        a ]\n  [ conj(a)        0 ]"));
}

#[test]
fn induce_json_contains_the_generic_matrix_entries() {
    let out = run(&[
        "induce",
        "--builtin",
        "hantzsche-wendt",
        "--stratum",
        "(u,v,w)",
        "--paper-basis",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rendered = &doc[0]["rendered"]["x"];
    assert_eq!(rendered[0][1], "u");
    assert_eq!(rendered[2][3], "conj(u)*w");
    assert_eq!(rendered[3][2], "conj(w)");
}

#[test]
fn induce_without_paper_basis_uses_the_orbit_transversal() {
    // for (1,1,w) the first coset representative after the identity in
    // table order is x, so the matrices land in a different but equivalent
    // basis
    let out = run(&[
        "induce",
        "--builtin",
        "hantzsche-wendt",
        "--stratum",
        "(1,1,w)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("pi(x) =\n  [ 0  1 ]\n  [ 1  0 ]"), "{text}");
}

#[test]
fn explicit_transversal_flag_matches_paper_basis() {
    let a = run(&[
        "induce",
        "--builtin",
        "hantzsche-wendt",
        "--stratum",
        "(1,1,w)",
        "--transversal",
        "e,y",
    ]);
    let b = run(&[
        "induce",
        "--builtin",
        "hantzsche-wendt",
        "--stratum",
        "(1,1,w)",
        "--paper-basis",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn shielded_verdict_for_the_builtins() {
    let out = run(&["shielded", "--builtin", "hantzsche-wendt"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: Shielded"));

    let out = run(&["shielded", "--builtin", "klein-bottle"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: NotCertified"));
}

#[test]
fn shielded_output_is_deterministic() {
    let a = run(&["shielded", "--builtin", "hantzsche-wendt", "--format", "json"]);
    let b = run(&["shielded", "--builtin", "hantzsche-wendt", "--format", "json"]);
    assert_eq!(out_bytes(&a), out_bytes(&b));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(doc["verdict"], "shielded");
    assert_eq!(doc["strata"].as_array().unwrap().len(), 4);
}

fn out_bytes(out: &Output) -> &[u8] {
    &out.stdout
}

#[test]
fn embed_suite_passes() {
    for name in ["hantzsche-wendt", "klein-bottle"] {
        let out = run(&["embed", "--builtin", name, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(doc["pass"], true);
    }
}

#[test]
fn certify_klein_bottle_passes_and_rank3_group_is_rejected() {
    let out = run(&["certify", "--builtin", "klein-bottle"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("all pass"), "{text}");
    assert!(text.contains("base: m=1"));

    let out = run(&["certify", "--builtin", "hantzsche-wendt"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NonCyclicHolonomy"));
}

#[test]
fn certify_json_shape() {
    let out = run(&["certify", "--builtin", "klein-bottle", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["certificate"]["kind"], "step");
    assert_eq!(doc["certificate"]["sub"]["kind"], "base");
}

#[test]
fn hw_verify_passes_on_a_fresh_checkout() {
    let out = run(&["hw-verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 diffs"));
}

#[test]
fn hw_verify_json_is_machine_readable() {
    let out = run(&["hw-verify", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["diff_count"], 0);
    assert!(doc["items"].as_array().unwrap().len() > 40);
}

#[test]
fn hw_verify_reports_exactly_one_diff_for_one_flipped_sign() {
    let golden_path = concat!(env!("CARGO_MANIFEST_DIR"), "/golden/hw.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(golden_path).unwrap()).unwrap();
    // flip the sign of one matrix entry
    doc["matrices"]["(u,1,1)"]["x"][0][0] = serde_json::json!("-a");
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{doc}").unwrap();
    let out = run(&[
        "hw-verify",
        "--golden",
        f.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["diff_count"], 1);
    let diff: Vec<&serde_json::Value> = doc["items"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|i| i["pass"] == false)
        .collect();
    assert_eq!(diff.len(), 1);
    assert_eq!(diff[0]["name"], "matrix.(u,1,1).x");
}

#[test]
fn orbits_lists_the_fixed_characters() {
    let out = run(&["orbits", "--builtin", "hantzsche-wendt", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["fixed_points"]["finite"], true);
    assert_eq!(doc["fixed_points"]["characters"].as_array().unwrap().len(), 8);
    let strata = doc["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 4);
    assert_eq!(strata[0]["orbit"].as_array().unwrap().len(), 2);
}

#[test]
fn shielded_with_explicit_stratum_on_a_file_group() {
    // the Klein-bottle group via a config file with an explicit stratum
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let config = serde_json::json!({
        "rank": 2,
        "holonomy": {
            "labels": ["e", "g"],
            "mult": [["e", "g"], ["g", "e"]],
            "identity": "e"
        },
        "lin": { "g": [[1, 0], [0, -1]] },
        "trans": { "g": ["1/2", "0"] },
        "generators": {
            "x": { "v": ["1/2", "0"], "h": "g" },
            "t": { "v": ["0", "1"], "h": "e" }
        }
    });
    write!(f, "{config}").unwrap();
    let out = run(&[
        "shielded",
        "--input",
        f.path().to_str().unwrap(),
        "--stratum",
        "(1,v)",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // the flipped-coordinate stratum carries a witness, but the fixed locus
    // is a subtorus, so the verdict stays uncertified
    assert_eq!(doc["verdict"], "not-certified");
    assert!(doc["strata"][0]["witness"].is_object());
}

#[test]
fn strata_without_defaults_require_the_flag() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{
            "rank": 1,
            "holonomy": {{ "labels": ["e"], "mult": [["e"]], "identity": "e" }},
            "generators": {{ "t": {{ "v": ["1"], "h": "e" }} }}
        }}"#
    )
    .unwrap();
    let out = run(&["orbits", "--input", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
