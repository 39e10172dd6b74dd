//! End-to-end tests of the command-line interface: every subcommand, the
//! file formats, and the exit-code contract (0 verified, 1 violations,
//! 2 usage/input error).

use jetmod_core::category::{CategoryJModule, WeightCoset};
use jetmod_core::lie::{BasisSymbol, FiniteLieAlgebra};
use jetmod_core::matrix::RatMatrix;
use jetmod_core::multiindex::{LatticeVector, MultiIndex};
use jetmod_core::polyfit::OperatorFamilyWindow;
use jetmod_core::rep::{gln_natural, tensor_module_truncated, AlgebraTag, FiniteRep, GdotRep};
use jetmod_core::scalar::rat;
use jetmod_core::GPlusRep;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jetmod-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn jetmod(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetmod"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn build_verify_degrees_pipeline() {
    let dir = workdir("pipeline");
    let out = jetmod(
        &[
            "build-jet",
            "--n",
            "2",
            "--jet-order",
            "2",
            "--fiber",
            "natural",
            "--out",
            "m.json",
            "--quiet",
        ],
        &dir,
    );
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // fiber dimension 6·2 = 12 for n=2, N=2 over the natural fiber
    let file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    assert_eq!(file["rep"]["dim"], 12);
    assert_eq!(file["provenance"]["kind"], "jet");

    let out = jetmod(&["verify", "m.json", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 6);

    let out = jetmod(&["degrees", "m.json", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["max"], 3);
    assert_eq!(report["expected"], 3);
    assert_eq!(report["matches"], true);

    // suite subset: the report carries exactly one suite
    let out = jetmod(&["verify", "m.json", "--suites", "lemma1", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_json(&out)["suites"].as_array().unwrap().len(), 1);
}

#[test]
fn corrupted_module_fails_verification() {
    let dir = workdir("corrupt");
    // order 2 so the generators genuinely constrain each other
    let out = jetmod(
        &[
            "build-jet",
            "--n",
            "1",
            "--jet-order",
            "2",
            "--fiber",
            "trivial",
            "--out",
            "m.json",
            "--quiet",
        ],
        &dir,
    );
    assert_eq!(exit_code(&out), 0);
    let mut file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    // bump an entry of ρ(z²∂) so that [z∂, z²∂] = z²∂ no longer holds
    file["rep"]["generators"][1]["matrix"][0][1] = serde_json::json!("5");
    std::fs::write(dir.join("bad.json"), serde_json::to_string(&file).unwrap()).unwrap();
    let out = jetmod(&["verify", "bad.json", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 1);
    let report = stdout_json(&out);
    assert_eq!(report["passed"], false);
    // at least one suite reports a concrete violation
    assert!(report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| !s["violations"].as_array().unwrap().is_empty()));
}

#[test]
fn malformed_and_unknown_inputs_exit_two() {
    let dir = workdir("errors");
    std::fs::write(dir.join("broken.json"), "{ not json").unwrap();
    let out = jetmod(&["verify", "broken.json", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 2);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "parse");

    let out = jetmod(
        &[
            "build-jet",
            "--n",
            "1",
            "--jet-order",
            "1",
            "--fiber",
            "trivial",
            "--out",
            "m.json",
            "--quiet",
        ],
        &dir,
    );
    assert_eq!(exit_code(&out), 0);
    let out = jetmod(&["verify", "m.json", "--suites", "bogus", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 2);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "usage");
}

#[test]
fn correspond_builds_half_weight_module() {
    let dir = workdir("correspond");
    let rep = tensor_module_truncated(&FiniteRep::trivial_gln(1), 1).unwrap();
    std::fs::write(dir.join("rep.json"), serde_json::to_string(&rep).unwrap()).unwrap();
    let out = jetmod(
        &[
            "correspond",
            "--lambda",
            "1/2",
            "rep.json",
            "--out",
            "m.json",
            "--quiet",
        ],
        &dir,
    );
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let module: CategoryJModule =
        serde_json::from_str(&std::fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    assert_eq!(module.lambda(), &WeightCoset::new(vec![rat(1, 2)]));
    let out = jetmod(&["verify", "m.json", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 0);
    // a non-representation input is rejected with an input error
    let mut broken = FiniteRep::new(AlgebraTag::WnPlus, 1, 2);
    broken
        .set_generator(
            BasisSymbol::wn_plus(1, MultiIndex::new(vec![1])),
            RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]),
        )
        .unwrap();
    broken
        .set_generator(
            BasisSymbol::wn_plus(1, MultiIndex::new(vec![2])),
            RatMatrix::from_i64_rows(&[&[0, 0], &[1, 0]]),
        )
        .unwrap();
    std::fs::write(
        dir.join("broken.json"),
        serde_json::to_string(&broken).unwrap(),
    )
    .unwrap();
    let out = jetmod(
        &["correspond", "--lambda", "0", "broken.json", "--quiet"],
        &dir,
    );
    assert_eq!(exit_code(&out), 2);
    // a weight representative of the wrong arity is also an input error
    let out = jetmod(
        &["correspond", "--lambda", "0,1/2", "rep.json", "--quiet"],
        &dir,
    );
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn polyfit_detects_and_rejects() {
    let dir = workdir("polyfit");
    // sample a rank-one jet family on [−4, 10]
    let rep = tensor_module_truncated(&FiniteRep::trivial_gln(1), 2).unwrap();
    let module = CategoryJModule::from_wnplus_rep(WeightCoset::new(vec![rat(1, 2)]), rep).unwrap();
    let family = OperatorFamilyWindow::from_interval(3, -4, 10, |s| {
        module.d_at(1, &LatticeVector::new(vec![s])).unwrap()
    });
    std::fs::write(
        dir.join("family.json"),
        serde_json::to_string(&family).unwrap(),
    )
    .unwrap();
    let out = jetmod(&["polyfit", "family.json", "--quiet"], &dir);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "polynomial");
    assert_eq!(report["vanishing_order"], 2);
    assert_eq!(report["theta_checks"].as_array().unwrap().len(), 2);

    // a family violating the commutator relation is surfaced as such
    let a = RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
    let b = RatMatrix::from_i64_rows(&[&[0, 0], &[1, 0]]);
    let bad = OperatorFamilyWindow::from_interval(2, -4, 10, |s| {
        &a.scale(&rat(s, 1)) + &b.scale(&rat(s * s * s, 1))
    });
    std::fs::write(dir.join("bad.json"), serde_json::to_string(&bad).unwrap()).unwrap();
    let out = jetmod(&["polyfit", "bad.json", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["verdict"], "precondition_failed");

    // an inadequate window is a usage-level error carrying the requirement
    let small = OperatorFamilyWindow::from_interval(3, -1, 4, |s| {
        module.d_at(1, &LatticeVector::new(vec![s])).unwrap()
    });
    std::fs::write(
        dir.join("small.json"),
        serde_json::to_string(&small).unwrap(),
    )
    .unwrap();
    let out = jetmod(&["polyfit", "small.json", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 2);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"].as_str().unwrap().contains("8"));
}

#[test]
fn decompose_verdicts() {
    let dir = workdir("decompose");
    // a direct sum decomposes with an explicit projection
    let z = FiniteRep::new(AlgebraTag::WnPlus, 1, 2);
    std::fs::write(dir.join("sum.json"), serde_json::to_string(&z).unwrap()).unwrap();
    let out = jetmod(&["decompose", "sum.json", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["commutant_dim"], 4);
    assert_eq!(report["verdict"], "decomposes");
    assert!(report["projection"].is_array());

    // the nilpotent Jordan block is indecomposable
    let mut jordan = FiniteRep::new(AlgebraTag::WnPlus, 1, 2);
    jordan
        .set_generator(
            BasisSymbol::wn_plus(1, MultiIndex::new(vec![1])),
            RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]),
        )
        .unwrap();
    std::fs::write(
        dir.join("jordan.json"),
        serde_json::to_string(&jordan).unwrap(),
    )
    .unwrap();
    let out = jetmod(&["decompose", "jordan.json", "--quiet"], &dir);
    let report = stdout_json(&out);
    assert_eq!(report["commutant_dim"], 2);
    assert_eq!(report["verdict"], "indecomposable");

    // an irrational splitting stays indeterminate
    let mut comp = FiniteRep::new(AlgebraTag::WnPlus, 1, 2);
    comp.set_generator(
        BasisSymbol::wn_plus(1, MultiIndex::new(vec![1])),
        RatMatrix::from_i64_rows(&[&[0, 2], &[1, 0]]),
    )
    .unwrap();
    std::fs::write(dir.join("comp.json"), serde_json::to_string(&comp).unwrap()).unwrap();
    let out = jetmod(&["decompose", "comp.json", "--quiet"], &dir);
    assert_eq!(stdout_json(&out)["verdict"], "indeterminate");
}

#[test]
fn loop_build_and_verify() {
    let dir = workdir("loop");
    let sl2 = FiniteLieAlgebra::sl2();
    let adj = GdotRep::adjoint(sl2);
    let (gl_prod, gdot_prod) = GPlusRep::product_pair(&gln_natural(2), &adj);
    let rep = GPlusRep::from_commuting_pair(&gl_prod, &gdot_prod).unwrap();
    std::fs::write(dir.join("gplus.json"), serde_json::to_string(&rep).unwrap()).unwrap();
    let out = jetmod(
        &[
            "loop-build",
            "--lambda",
            "0,0",
            "gplus.json",
            "--out",
            "gm.json",
            "--quiet",
        ],
        &dir,
    );
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = jetmod(&["verify", "gm.json", "--window", "1", "--quiet"], &dir);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = stdout_json(&out);
    // plain suites plus the loop suites
    assert_eq!(report["suites"].as_array().unwrap().len(), 9);
    assert_eq!(report["passed"], true);

    // loop relations that fail are rejected at build time
    let sl2 = FiniteLieAlgebra::sl2();
    let wn = FiniteRep::new(AlgebraTag::WnPlus, 1, 2);
    let mut broken = GPlusRep::new(sl2, wn).unwrap();
    broken
        .set_loop_generator(
            MultiIndex::zero(1),
            1,
            RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]),
        )
        .unwrap();
    std::fs::write(
        dir.join("broken.json"),
        serde_json::to_string(&broken).unwrap(),
    )
    .unwrap();
    let out = jetmod(
        &["loop-build", "--lambda", "0", "broken.json", "--quiet"],
        &dir,
    );
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = workdir("determinism");
    for run in ["a.json", "b.json"] {
        let out = jetmod(
            &[
                "build-jet",
                "--n",
                "2",
                "--jet-order",
                "1",
                "--fiber",
                "natural",
                "--emit-table",
                "--out",
                run,
                "--quiet",
            ],
            &dir,
        );
        assert_eq!(exit_code(&out), 0);
    }
    let a = std::fs::read(dir.join("a.json")).unwrap();
    let b = std::fs::read(dir.join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn tensor_type_fibers() {
    let dir = workdir("tensor-fiber");
    // one contravariant slot over rank 2 at order 2: 6·2 = 12
    let out = jetmod(
        &[
            "build-jet",
            "--n",
            "2",
            "--jet-order",
            "2",
            "--fiber",
            "tensor:1,0",
            "--out",
            "m.json",
            "--quiet",
        ],
        &dir,
    );
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    assert_eq!(file["rep"]["dim"], 12);
    let out = jetmod(&["degrees", "m.json", "--quiet"], &dir);
    assert_eq!(exit_code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["max"], 3);
    assert_eq!(report["matches"], true);
    // a malformed fiber string is a usage error
    let out = jetmod(
        &[
            "build-jet",
            "--n",
            "2",
            "--jet-order",
            "1",
            "--fiber",
            "tensor:x",
            "--quiet",
        ],
        &dir,
    );
    assert_eq!(exit_code(&out), 2);
}
