#![allow(dead_code)]

//! The `twist` binary, its fixtures and the golden case table.

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn twist(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_twist"))
        .args(args)
        .current_dir(dir("fixtures"))
        .env_remove("TWIST_JOBS")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// `(golden name, arguments, exit code)`.
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("validate_e1", &["validate", "E1.json"], 0),
    ("validate_module", &["validate", "regular_module.json"], 0),
    ("validate_dangling", &["validate", "dangling.json"], 1),
    ("validate_fp4", &["validate", "fp4.json"], 1),
    ("validate_uu", &["validate", "E1_uu.json"], 1),
    ("validate_float", &["validate", "float.json"], 1),
    ("validate_missing", &["validate", "no_such_file.json"], 1),
    ("twist_check_a", &["twist", "check", "E1.json", "--element", "a"], 0),
    ("twist_check_matrix", &["twist", "check", "two_by_two.json", "--element", "e10"], 0),
    ("twist_check_degree", &["twist", "check", "E1.json", "--element", "u"], 1),
    ("twist_enumerate_e1", &["twist", "enumerate", "E1.json"], 0),
    ("twist_enumerate_q", &["twist", "enumerate", "E1_q.json"], 1),
    ("twist_enumerate_bound", &["twist", "enumerate", "E1.json", "--max-dim", "0"], 2),
    ("gauge_act", &["gauge", "act", "E1.json", "--unit", "1 + u", "--element", "a"], 0),
    ("gauge_act_not_unit", &["gauge", "act", "E1.json", "--unit", "u", "--element", "a"], 1),
    ("gauge_orbit_e1", &["gauge", "orbit", "E1.json"], 0),
    ("gauge_orbit_flat", &["gauge", "orbit", "E1_flat.json"], 0),
    ("gauge_orbit_kind", &["gauge", "orbit", "g3.json"], 1),
    ("defo_points_g3", &["defo", "points", "g3.json", "--ring", "Fp:5[t]/t^3"], 0),
    ("defo_points_class", &["--max-dim", "12", "defo", "points", "g3.json", "--ring", "Fp:5[t]/t^6"], 2),
    ("defo_points_dim", &["defo", "points", "g3.json", "--ring", "Fp:5[t]/t^6"], 2),
    ("defo_points_mismatch", &["defo", "points", "g3.json", "--ring", "Fp:3[t]/t^2"], 1),
    ("defo_extend_obstructed", &["defo", "extend", "obstructed.json", "--order", "4"], 0),
    ("defo_extend_solved", &["defo", "extend", "obstructed.json", "--gamma1", "s", "--order", "4"], 0),
    ("defo_extend_not_cycle", &["defo", "extend", "residual.json", "--order", "3"], 1),
    ("defo_extend_g3", &["defo", "extend", "g3.json", "--order", "3"], 0),
    ("defo_extend_order", &["defo", "extend", "obstructed.json", "--order", "5"], 2),
    (
        "defo_compare_f3",
        &["defo", "compare", "sym_coalgebra.json", "two_by_two.json", "--tau1", "xi1->e10", "--tau2", "0"],
        0,
    ),
    (
        "defo_compare_undecided",
        &[
            "defo",
            "compare",
            "sym_coalgebra_q.json",
            "two_by_two_q.json",
            "--tau1",
            "xi1->e10",
            "--tau2",
            "0",
            "--search-bound",
            "20",
        ],
        2,
    ),
    (
        "defo_compare_degree",
        &["defo", "compare", "sym_coalgebra.json", "two_by_two.json", "--tau1", "xi1->e00", "--tau2", "0"],
        1,
    ),
    ("hh_diff", &["hh", "diff", "upper_triangular.json", "--arity", "1", "--cochain", "(e01)->e00"], 0),
    (
        "hh_bracket",
        &["hh", "bracket", "dual_numbers.json", "--f", "(x)->x", "--arity-f", "1", "--g", "(x,x)->1", "--arity-g", "2"],
        0,
    ),
    ("hh_cohomology_dual", &["hh", "cohomology", "dual_numbers.json", "--max-degree", "3"], 0),
    ("hh_cohomology_upper", &["hh", "cohomology", "upper_triangular.json", "--max-degree", "2"], 0),
    ("hh_cohomology_bound", &["hh", "cohomology", "dual_numbers.json", "--max-degree", "5"], 2),
    (
        "hh_deform_accepted",
        &["hh", "deform", "dual_numbers.json", "--gamma", "(x,x)->1", "--gamma", "0", "--gamma", "0", "--gamma", "0"],
        0,
    ),
    ("hh_deform_rejected", &["hh", "deform", "upper_triangular.json", "--gamma", "(e01,e01)->e01"], 0),
    ("hh_deform_graded", &["hh", "deform", "E1.json", "--gamma", "0"], 1),
    ("chen_build_heisenberg", &["chen", "build", "heisenberg.json", "--max-length", "2"], 0),
    ("chen_verify_heisenberg", &["chen", "verify", "heisenberg.json"], 0),
    ("chen_verify_sphere", &["chen", "verify", "sphere.json"], 0),
    ("chen_verify_torus", &["chen", "verify", "torus.json", "--max-length", "3"], 0),
];

pub const VALID: &[&str] = &[
    "E1",
    "E1_flat",
    "E1_q",
    "obstructed",
    "g3",
    "residual",
    "dual_numbers",
    "upper_triangular",
    "heisenberg",
    "sphere",
    "torus",
    "two_by_two",
    "two_by_two_q",
    "sym_coalgebra",
    "sym_coalgebra_q",
    "regular_module",
];
