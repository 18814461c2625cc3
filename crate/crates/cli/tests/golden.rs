mod common;

use serde_json::Value;

#[test]
fn outputs_match_recordings() {
    let failures = common::check_golden();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn success_outputs_are_json_and_errors_are_structured() {
    for case in common::CASES {
        let run = common::run(case.args);
        if case.exit == 0 {
            serde_json::from_str::<Value>(&run.stdout).unwrap_or_else(|e| panic!("{}: {e}", case.name));
            assert!(run.stderr.is_empty(), "{}", case.name);
        } else if case.name != "error_unknown_subcommand" {
            let err: Value = serde_json::from_str(&run.stderr).unwrap_or_else(|e| panic!("{}: {e}", case.name));
            assert!(err["error"].is_string(), "{}", case.name);
        }
    }
}

#[test]
fn every_subcommand_has_a_case() {
    use clap::CommandFactory;
    let cli = ila_cli::commands::Cli::command();
    for sub in cli.get_subcommands() {
        let name = sub.get_name();
        if name == "help" {
            continue;
        }
        assert!(common::CASES.iter().any(|c| c.exit == 0 && c.args[0] == name), "no golden case for {name}");
    }
}

#[test]
fn documented_examples() {
    let det: Value = serde_json::from_str(&common::run(&["det", "--in", "a.json"]).stdout).unwrap();
    assert_eq!(det, serde_json::json!({"det": [-2, 0]}));
    let sig: Value = serde_json::from_str(&common::run(&["signature", "--hform", "minkowski.json"]).stdout).unwrap();
    assert_eq!(sig, serde_json::json!({"n_plus": 1, "n_minus": 3}));
    let check: Value = serde_json::from_str(
        &common::run(&["check", "--kind", "pseudo-unitary", "--hform", "minkowski.json", "--in", "minkowski.json"])
            .stdout,
    )
    .unwrap();
    assert_eq!(check["result"], Value::Bool(true));
}
