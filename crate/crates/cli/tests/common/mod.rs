#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, exit }
}

/// Every subcommand at least once, plus the error paths. Inputs are read
/// relative to `tests/golden/inputs`.
pub const CASES: &[Case] = &[
    case("det", &["det", "--in", "a.json"], 0),
    case("det_in_basis", &["det", "--in", "a.json", "--basis", "basis2.json"], 0),
    case("matmul", &["matmul", "--in", "a.json", "--in", "basis2.json"], 0),
    case("eig_pauli_y", &["eig", "--in", "pauli_y.json"], 0),
    case("spectral", &["spectral", "--in", "sym.json"], 0),
    case("spectral_dirac", &["spectral", "--in", "diag23.json", "--hform", "eta2.json"], 0),
    case("adjoint", &["adjoint", "--in", "cmat2.json"], 0),
    case("adjoint_gram", &["adjoint", "--in", "a.json", "--gram", "gram2.json"], 0),
    case("adjoint_riesz", &["adjoint", "--in", "ket2.json", "--gram", "gram2.json"], 0),
    case("dirac_adjoint_vector", &["dirac-adjoint", "--in", "cket2.json", "--hform", "eta2.json"], 0),
    case("dirac_adjoint_covector", &["dirac-adjoint", "--in", "bra2.json", "--hform", "eta2.json"], 0),
    case("dirac_adjoint_operator", &["dirac-adjoint", "--in", "a.json", "--hform", "eta2.json"], 0),
    case("signature_minkowski", &["signature", "--hform", "minkowski.json"], 0),
    case("metric_swap", &["metric", "--hform", "swap.json"], 0),
    case("canonical_basis_swap", &["canonical-basis", "--hform", "swap.json", "--gram", "id2.json"], 0),
    case("canonical_basis_gram", &["canonical-basis", "--in", "basis2.json", "--gram", "gram2.json"], 0),
    case("projectors_eta", &["projectors", "--hform", "eta2.json"], 0),
    case("tensor_product", &["tensor-product", "--in", "ket2.json", "--in", "bra2.json"], 0),
    case("contract", &["contract", "--in", "tensor_op.json", "--slots", "1,2"], 0),
    case("contract_lower", &["contract", "--in", "ket4.json", "--slot", "1", "--hform", "minkowski.json"], 0),
    case("kron", &["kron", "--in", "a.json", "--in", "basis2.json"], 0),
    case("kron_flatten", &["kron", "--in", "tensor_op.json"], 0),
    case("change_basis_dual", &["change-basis", "--basis", "basis2.json"], 0),
    case("change_basis_transition", &["change-basis", "--basis", "basis2.json", "--from", "a.json"], 0),
    case("change_basis_vector", &["change-basis", "--basis", "basis2.json", "--in", "ket2.json"], 0),
    case("change_basis_covector", &["change-basis", "--basis", "basis2.json", "--in", "bra2.json"], 0),
    case("change_basis_operator", &["change-basis", "--basis", "basis2.json", "--in", "a.json"], 0),
    case(
        "change_basis_conjugate",
        &["change-basis", "--basis", "basis2.json", "--from", "a.json", "--in", "sym.json"],
        0,
    ),
    case("change_basis_tensor", &["change-basis", "--basis", "basis2.json", "--in", "tensor_op.json"], 0),
    case("check_hermitian", &["check", "--kind", "hermitian", "--in", "pauli_y.json"], 0),
    case("check_unitary", &["check", "--kind", "unitary", "--in", "rotation.json"], 0),
    case("check_orthogonal", &["check", "--kind", "orthogonal", "--in", "rotation.json"], 0),
    case("check_selfadjoint", &["check", "--kind", "selfadjoint", "--in", "sym.json"], 0),
    case(
        "check_dirac_selfadjoint",
        &["check", "--kind", "dirac-selfadjoint", "--in", "diag23.json", "--hform", "eta2.json"],
        0,
    ),
    case(
        "check_pseudo_unitary",
        &["check", "--kind", "pseudo-unitary", "--hform", "minkowski.json", "--in", "minkowski.json"],
        0,
    ),
    case(
        "check_pseudo_orthogonal",
        &["check", "--kind", "pseudo-orthogonal", "--in", "boost.json", "--hform", "eta2.json"],
        0,
    ),
    case("check_classify", &["check", "--kind", "classify", "--in", "eta2.json"], 0),
    case("check_rank_nullity", &["check", "--kind", "rank-nullity", "--in", "singular.json"], 0),
    case("inner", &["inner", "--in", "ket2.json", "--in", "ket2b.json", "--gram", "gram2.json"], 0),
    case("inner_norm", &["inner", "--in", "ket2.json"], 0),
    case("inner_hform", &["inner", "--in", "ket2.json", "--in", "ket2b.json", "--hform", "eta2.json"], 0),
    case("verify_small", &["verify", "--seed", "7", "--dims", "2,3", "--instances", "2"], 0),
    case("error_incompatible", &["signature", "--hform", "k_incompat.json", "--gram", "id2.json"], 1),
    case("error_not_hermitian", &["eig", "--in", "nonherm.json"], 1),
    case("error_parse", &["det", "--in", "malformed.json"], 2),
    case("error_schema", &["det", "--in", "badshape.json"], 2),
    case("error_missing_file", &["det", "--in", "absent.json"], 2),
    case("error_unknown_subcommand", &["frobnicate"], 2),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built binary inside the golden input directory.
pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_ila"))
        .args(args)
        .current_dir(golden_dir().join("inputs"))
        .output()
        .expect("spawn ila");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Text recorded for a case: stdout on success, stderr otherwise.
pub fn recorded(case: &Case, run: &Run) -> String {
    if case.exit == 0 {
        run.stdout.clone()
    } else {
        run.stderr.clone()
    }
}

pub fn expected_path(case: &Case) -> PathBuf {
    let ext = if case.exit == 0 { "json" } else { "err" };
    golden_dir().join("expected").join(format!("{}.{ext}", case.name))
}

/// Compares every case against its recorded output. With `UPDATE_GOLDEN`
/// set the recordings are rewritten instead. Returns the mismatches.
pub fn check_golden() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for case in CASES {
        let run = run(case.args);
        if run.code != case.exit {
            failures.push(format!("{}: exit {} (expected {}): {}", case.name, run.code, case.exit, run.stderr));
            continue;
        }
        let text = recorded(case, &run);
        let path = expected_path(case);
        if update {
            std::fs::write(&path, &text).expect("write golden file");
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == text => {}
            Ok(_) => failures.push(format!("{}: output differs from {}", case.name, path.display())),
            Err(e) => failures.push(format!("{}: cannot read {}: {e}", case.name, path.display())),
        }
    }
    failures
}
