//! Command implementations.

use crate::files::{CmdError, LoopModuleFile, ModuleFile, Provenance, TableEntry};
use jetmod_core::category::check_relations_37;
use jetmod_core::jets::JetModuleSpec;
use jetmod_core::lie::{jacobi_check, BasisSymbol, BracketContext};
use jetmod_core::polyfit::detect_polynomial_rank1;
use jetmod_core::rep::{commutant_of, gln_conatural, gln_natural, probe_commutant, tensor_fiber};
use jetmod_core::scalar::parse_rat;
use jetmod_core::{
    lattice_window, CategoryJModule, CheckReport, FiniteRep, GModule, GPlusRep, Indecomposability,
    OperatorFamilyWindow, Rat, WeightCoset,
};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub struct Config {
    pub window: i64,
    pub theta_p: Vec<i64>,
    pub out: Option<PathBuf>,
    pub quiet: bool,
}

impl Config {
    fn emit<T: Serialize>(&self, value: &T) -> Result<(), CmdError> {
        let text = serde_json::to_string_pretty(value).map_err(CmdError::parse)?;
        match &self.out {
            Some(path) => std::fs::write(path, text + "\n").map_err(|e| CmdError::io(path, e)),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }

    fn note(&self, line: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", line.as_ref());
        }
    }
}

fn parse_lambda(text: &str) -> Result<WeightCoset, CmdError> {
    let entries: Result<Vec<Rat>, _> = text.split(',').map(parse_rat).collect();
    Ok(WeightCoset::new(entries.map_err(CmdError::parse)?))
}

fn parse_fiber(n: usize, spec: &str) -> Result<FiniteRep, CmdError> {
    match spec {
        "trivial" => Ok(FiniteRep::trivial_gln(n)),
        "natural" => Ok(gln_natural(n)),
        "conatural" => Ok(gln_conatural(n)),
        other => {
            let Some(type_part) = other.strip_prefix("tensor:") else {
                return Err(CmdError::usage(format!(
                    "unknown fiber `{other}` (expected trivial, natural, conatural or tensor:S,K)"
                )));
            };
            let parts: Vec<&str> = type_part.split(',').collect();
            let (Some(s), Some(k), true) = (
                parts.first().and_then(|v| v.parse::<usize>().ok()),
                parts.get(1).and_then(|v| v.parse::<usize>().ok()),
                parts.len() == 2,
            ) else {
                return Err(CmdError::usage(format!("bad tensor type `{type_part}`")));
            };
            Ok(tensor_fiber(n, s, k))
        }
    }
}

pub fn build_jet(
    config: &Config,
    n: usize,
    order: u32,
    fiber_spec: &str,
    fiber_file: Option<&Path>,
    emit_table: bool,
) -> Result<ExitCode, CmdError> {
    if n == 0 {
        return Err(CmdError::usage("the rank must be at least 1"));
    }
    let (fiber, fiber_name) = match fiber_file {
        Some(path) => (
            crate::files::read_json::<FiniteRep>(path)?,
            "file".to_string(),
        ),
        None => (parse_fiber(n, fiber_spec)?, fiber_spec.to_string()),
    };
    let spec = JetModuleSpec::new(n, order, fiber).map_err(CmdError::input)?;
    let module = spec.to_module().map_err(CmdError::input)?;
    let table = if emit_table {
        let mut entries = Vec::new();
        for j in 1..=n {
            for s in lattice_window(n, config.window) {
                entries.push(TableEntry {
                    j,
                    matrix: module.d_at(j, &s).map_err(CmdError::input)?,
                    s,
                });
            }
        }
        Some(entries)
    } else {
        None
    };
    config.note(format!(
        "jet module: rank {n}, order {order}, fiber {fiber_name}, weight-space dimension {}",
        module.dim_u()
    ));
    config.emit(&ModuleFile {
        provenance: Some(Provenance::Jet {
            n,
            order,
            fiber: fiber_name,
        }),
        module,
        table,
    })?;
    Ok(ExitCode::SUCCESS)
}

pub fn correspond(config: &Config, lambda: &str, rep_path: &Path) -> Result<ExitCode, CmdError> {
    let lambda = parse_lambda(lambda)?;
    let rep: FiniteRep = crate::files::read_json(rep_path)?;
    let module = CategoryJModule::from_wnplus_rep(lambda, rep).map_err(CmdError::input)?;
    config.note(format!(
        "module over rank {} with weight-space dimension {}",
        module.n(),
        module.dim_u()
    ));
    config.emit(&ModuleFile {
        provenance: Some(Provenance::Correspond),
        module,
        table: None,
    })?;
    Ok(ExitCode::SUCCESS)
}

const PLAIN_SUITES: &[&str] = &["rep", "leibniz", "bracket", "lemma1", "rel37", "jacobi"];
const LOOP_SUITES: &[&str] = &["j4", "eq53", "loop"];

#[derive(Serialize)]
struct VerifyReport {
    suites: Vec<CheckReport>,
    passed: bool,
}

fn run_plain_suite(
    name: &str,
    module: &CategoryJModule,
    window: i64,
) -> Result<CheckReport, CmdError> {
    match name {
        "rep" => module.rep().rep_check_support().map_err(CmdError::input),
        "leibniz" => Ok(module.leibniz_check(window)),
        "bracket" => Ok(module.bracket_compat_check(window)),
        "lemma1" => Ok(module.lemma1_check(window)),
        "rel37" => {
            let terms: Vec<_> = (1..=module.n()).map(|j| module.expand_d(j)).collect();
            Ok(check_relations_37(&terms))
        }
        "jacobi" => {
            let symbols: Vec<BasisSymbol> = (1..=module.n())
                .flat_map(|j| {
                    lattice_window(module.n(), window)
                        .into_iter()
                        .map(move |s| BasisSymbol::wn(j, s))
                })
                .collect();
            jacobi_check(&BracketContext::Wn, &symbols).map_err(CmdError::input)
        }
        other => Err(CmdError::usage(format!("unknown suite `{other}`"))),
    }
}

pub fn verify(
    config: &Config,
    module_path: &Path,
    suites: Option<&[String]>,
) -> Result<ExitCode, CmdError> {
    let text = std::fs::read_to_string(module_path).map_err(|e| CmdError::io(module_path, e))?;
    let raw: serde_json::Value = serde_json::from_str(&text).map_err(CmdError::parse)?;
    let has_loop = raw
        .get("rep")
        .and_then(|r| r.get("algebra"))
        .and_then(|a| a.as_str())
        == Some("g_plus");
    let (module, loop_module): (CategoryJModule, Option<GModule>) = if has_loop {
        let file: LoopModuleFile = serde_json::from_str(&text).map_err(CmdError::parse)?;
        (file.module.module().clone(), Some(file.module))
    } else {
        let file: ModuleFile = serde_json::from_str(&text).map_err(CmdError::parse)?;
        (file.module, None)
    };
    let selected: Vec<String> = match suites {
        Some(list) => list.to_vec(),
        None => {
            let mut all: Vec<String> = PLAIN_SUITES.iter().map(|s| s.to_string()).collect();
            if loop_module.is_some() {
                all.extend(LOOP_SUITES.iter().map(|s| s.to_string()));
            }
            all
        }
    };
    let mut reports = Vec::new();
    for name in &selected {
        let report = if PLAIN_SUITES.contains(&name.as_str()) {
            run_plain_suite(name, &module, config.window)?
        } else if LOOP_SUITES.contains(&name.as_str()) {
            let Some(gm) = &loop_module else {
                return Err(CmdError::usage(format!(
                    "suite `{name}` needs a module with a loop part"
                )));
            };
            match name.as_str() {
                "j4" => gm.j4_check(config.window),
                "eq53" => gm.check_53(config.window),
                "loop" => gm.gplus().check_54_55(),
                _ => unreachable!(),
            }
        } else {
            return Err(CmdError::usage(format!("unknown suite `{name}`")));
        };
        config.note(format!("{report}"));
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed());
    config.emit(&VerifyReport {
        suites: reports,
        passed,
    })?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct DegreeReport {
    per_direction: Vec<DirectionDegree>,
    max: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
}

#[derive(Serialize)]
struct DirectionDegree {
    j: usize,
    degree: i64,
}

pub fn degrees(config: &Config, module_path: &Path) -> Result<ExitCode, CmdError> {
    let file: ModuleFile = crate::files::read_json(module_path)?;
    let module = &file.module;
    let per_direction: Vec<DirectionDegree> = (1..=module.n())
        .map(|j| DirectionDegree {
            j,
            degree: module.dpoly(j).degree(),
        })
        .collect();
    let max = module.degree_report();
    // jet modules are built at weight zero, so the trivial fiber at order 0
    // has the zero polynomial family (degree sentinel −1)
    let expected = match &file.provenance {
        Some(Provenance::Jet { order, fiber, .. }) => match (fiber.as_str(), *order) {
            ("file", _) => None,
            ("trivial" | "tensor:0,0", 0) => Some(-1),
            ("trivial" | "tensor:0,0", o) => Some(o as i64),
            (_, o) => Some(o as i64 + 1),
        },
        _ => None,
    };
    let matches = expected.map(|e| e == max);
    config.note(format!("max s-degree: {max}"));
    config.emit(&DegreeReport {
        per_direction,
        max,
        expected,
        matches,
    })?;
    Ok(match matches {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}

pub fn polyfit(config: &Config, family_path: &Path) -> Result<ExitCode, CmdError> {
    let family: OperatorFamilyWindow = crate::files::read_json(family_path)?;
    if family.vars() != 1 {
        return Err(CmdError::input(
            "the detector works on one-variable families; extract axes first",
        ));
    }
    let report = detect_polynomial_rank1(&family, &config.theta_p).map_err(CmdError::input)?;
    config.note(format!(
        "verdict: {}",
        serde_json::to_string(&report.verdict).unwrap_or_default()
    ));
    let passed = report.passed();
    config.emit(&report)?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct DecomposeReport {
    commutant_dim: usize,
    #[serde(flatten)]
    probe: Indecomposability,
}

pub fn decompose(config: &Config, rep_path: &Path) -> Result<ExitCode, CmdError> {
    let text = std::fs::read_to_string(rep_path).map_err(|e| CmdError::io(rep_path, e))?;
    let raw: serde_json::Value = serde_json::from_str(&text).map_err(CmdError::parse)?;
    let is_gplus = raw.get("algebra").and_then(|a| a.as_str()) == Some("g_plus")
        && raw.get("loop_generators").is_some();
    let (basis, dim) = if is_gplus {
        let rep: GPlusRep = serde_json::from_str(&text).map_err(CmdError::parse)?;
        let mats: Vec<_> = rep
            .wnplus()
            .support()
            .map(|(_, m)| m.clone())
            .chain(rep.loop_support().map(|(_, m)| m.clone()))
            .collect();
        let refs: Vec<&_> = mats.iter().collect();
        (commutant_of(&refs, rep.dim()), rep.dim())
    } else {
        let rep: FiniteRep = serde_json::from_str(&text).map_err(CmdError::parse)?;
        let mats: Vec<_> = rep.support().map(|(_, m)| m.clone()).collect();
        let refs: Vec<&_> = mats.iter().collect();
        (commutant_of(&refs, rep.dim()), rep.dim())
    };
    let probe = probe_commutant(&basis, dim);
    config.note(format!("commutant dimension {}", basis.len()));
    config.emit(&DecomposeReport {
        commutant_dim: basis.len(),
        probe,
    })?;
    Ok(ExitCode::SUCCESS)
}

pub fn loop_build(config: &Config, lambda: &str, rep_path: &Path) -> Result<ExitCode, CmdError> {
    let lambda = parse_lambda(lambda)?;
    let rep: GPlusRep = crate::files::read_json(rep_path)?;
    let module = GModule::from_gplus_rep(lambda, rep).map_err(CmdError::input)?;
    config.note(format!(
        "loop module over rank {} with weight-space dimension {}",
        module.n(),
        module.dim_u()
    ));
    config.emit(&LoopModuleFile {
        provenance: Some(Provenance::LoopBuild),
        module,
    })?;
    Ok(ExitCode::SUCCESS)
}
