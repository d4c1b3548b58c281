//! Command-line front end: one request per invocation.
//!
//! Exit codes: 0 success or applicable, 2 invalid input, 3 the vanishing
//! condition is refuted, 4 undetermined. Errors are emitted as one-line
//! JSON objects on stderr.

use crate::arrangement::{emit_arrangement, parse_arrangement, ArrError, WeightedArrangement};
use crate::examples;
use crate::poset::{dense_flats, intersection_poset};
use crate::rat::{format_rat, parse_rat};
use crate::report;
use crate::resolution::BuildingSetPreset;
use crate::salvetti::{twisted_betti, Backend, Side};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "icarr", version, about = "Exact intersection cohomology for weighted hyperplane arrangements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
    Both,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
            BackendArg::Both => Backend::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Primary,
    Dual,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PresetArg {
    Minimal,
    #[value(name = "all-edges")]
    AllEdges,
}

impl From<PresetArg> for BuildingSetPreset {
    fn from(p: PresetArg) -> BuildingSetPreset {
        match p {
            PresetArg::Minimal => BuildingSetPreset::Minimal,
            PresetArg::AllEdges => BuildingSetPreset::AllEdges,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dump the intersection poset with Moebius values and weight sums
    Lattice {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the dense flats with their weight sums
    Dense {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Twisted Betti numbers of the complement
    Betti {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        #[arg(long, value_enum, default_value = "both")]
        backend: BackendArg,
    },
    /// Per-edge vanishing verdicts for the local system and its dual
    #[command(name = "condition-a")]
    ConditionA {
        input: PathBuf,
        #[arg(long = "building-set", value_enum, default_value = "minimal")]
        building_set: PresetArg,
        #[arg(long, value_enum, default_value = "both")]
        backend: BackendArg,
        #[arg(long)]
        json: bool,
    },
    /// Verdicts plus certified intersection cohomology Betti intervals
    Ic {
        input: PathBuf,
        #[arg(long = "building-set", value_enum, default_value = "minimal")]
        building_set: PresetArg,
        #[arg(long, value_enum, default_value = "both")]
        backend: BackendArg,
        #[arg(long)]
        json: bool,
    },
    /// Full JSON bundle: lattice, dense flats, verdicts and intervals
    Report {
        input: PathBuf,
        #[arg(long = "building-set", value_enum, default_value = "minimal")]
        building_set: PresetArg,
        #[arg(long, value_enum, default_value = "both")]
        backend: BackendArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit a built-in or generated arrangement file
    Generate {
        /// example2 | example1-generic | boolean | concurrent-lines
        name: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Comma-separated rational weights for concurrent-lines
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

pub fn exit_code_for(e: &ArrError) -> i32 {
    use ArrError::*;
    match e {
        MalformedInput(_) | IntegerWeight(_) | ProjectiveTotalNonintegral
        | DuplicateHyperplane(..) | NotCentral | NotAffine | FlatNotInArrangement
        | FlatNotDenseNorInBuildingSet | NonintegralTotal | GenerationFailed(_) => 2,
        ConditionAFailed(_) => 3,
        ConditionAUndetermined(_) => 4,
        _ => 1,
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: String,
}

pub fn error_json(e: &ArrError) -> String {
    serde_json::to_string(&ErrorJson {
        error: e.code(),
        message: e.to_string(),
    })
    .expect("error serializes")
}

fn load(input: &PathBuf) -> Result<WeightedArrangement, ArrError> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| ArrError::MalformedInput(format!("{}: {e}", input.display())))?;
    parse_arrangement(&text)
}

fn betti_lines(a: &WeightedArrangement, side: SideArg, backend: Backend) -> Result<String, ArrError> {
    let mut out = String::new();
    let sides: Vec<(&str, Side)> = match side {
        SideArg::Primary => vec![("primary", Side::Primary)],
        SideArg::Dual => vec![("dual", Side::Dual)],
        SideArg::Both => vec![("primary", Side::Primary), ("dual", Side::Dual)],
    };
    let mut computed = Vec::new();
    for (name, s) in &sides {
        let b = twisted_betti(a, *s, backend)?;
        out.push_str(&format!("{name}: {:?}\n", b.0));
        computed.push(b);
    }
    if computed.len() == 2 && computed[0] != computed[1] {
        return Err(ArrError::DualMismatch("betti".into()));
    }
    Ok(out)
}

/// Execute one request; returns (exit code, stdout text, stderr text).
pub fn run(cli: Cli) -> (i32, String, String) {
    match run_inner(cli) {
        Ok((code, out)) => (code, out, String::new()),
        Err(e) => (exit_code_for(&e), String::new(), format!("{}\n", error_json(&e))),
    }
}

fn run_inner(cli: Cli) -> Result<(i32, String), ArrError> {
    match cli.command {
        Command::Lattice { input, json } => {
            let a = load(&input)?;
            let mut poset = intersection_poset(&a);
            dense_flats(&a, &mut poset);
            if json {
                let flats = report::lattice_json(&a, &poset);
                Ok((0, serde_json::to_string_pretty(&flats).unwrap() + "\n"))
            } else {
                let mut out = String::new();
                for f in &poset.flats {
                    out.push_str(&format!(
                        "{} codim={} moebius={} weight_sum={}{}\n",
                        f.label(&a),
                        f.codim,
                        f.moebius,
                        format_rat(&f.weight_sum),
                        if f.dense == Some(true) { " dense" } else { "" },
                    ));
                }
                Ok((0, out))
            }
        }
        Command::Dense { input, json } => {
            let a = load(&input)?;
            let mut poset = intersection_poset(&a);
            let dense = dense_flats(&a, &mut poset);
            let dense: Vec<usize> = dense
                .into_iter()
                .filter(|&f| poset.is_edge(&a, f))
                .collect();
            if json {
                let flats: Vec<report::FlatJson> = report::lattice_json(&a, &poset)
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| dense.contains(i))
                    .map(|(_, f)| f)
                    .collect();
                Ok((0, serde_json::to_string_pretty(&flats).unwrap() + "\n"))
            } else {
                let mut out = String::new();
                for &f in &dense {
                    let flat = &poset.flats[f];
                    out.push_str(&format!(
                        "{} codim={} weight_sum={}\n",
                        flat.label(&a),
                        flat.codim,
                        format_rat(&flat.weight_sum),
                    ));
                }
                Ok((0, out))
            }
        }
        Command::Betti { input, side, backend } => {
            let a = load(&input)?;
            Ok((0, betti_lines(&a, side, backend.into())?))
        }
        Command::ConditionA {
            input,
            building_set,
            backend,
            json,
        } => {
            let a = load(&input)?;
            let mut poset = intersection_poset(&a);
            let rep = crate::verdict::check_arrangement(
                &a,
                &mut poset,
                building_set.into(),
                backend.into(),
            )?;
            let code = condition_code(&rep);
            let out = if json {
                serde_json::to_string_pretty(&report::condition_a_json(&a, &rep)).unwrap() + "\n"
            } else {
                let mut out = String::new();
                for e in &rep.edges {
                    out.push_str(&format!(
                        "{} codim={} weight_sum={} primary={} dual={}\n",
                        e.label,
                        e.codim,
                        e.weight_sum,
                        e.primary.kind.as_str(),
                        e.dual.kind.as_str(),
                    ));
                }
                out.push_str(&format!("applicable: {}\n", rep.applicable));
                out
            };
            Ok((code, out))
        }
        Command::Ic {
            input,
            building_set,
            backend,
            json,
        } => {
            let a = load(&input)?;
            let mut poset = intersection_poset(&a);
            let rep = crate::verdict::ic_betti(&a, &mut poset, building_set.into(), backend.into());
            match rep {
                Ok(rep) => {
                    let out = if json {
                        serde_json::to_string_pretty(&report::condition_a_json(&a, &rep)).unwrap()
                            + "\n"
                    } else {
                        let iv = rep.ic_betti.as_ref().unwrap();
                        let mut out = String::new();
                        for d in &iv.degrees {
                            out.push_str(&format!(
                                "H^{}: [{}, {}]{}\n",
                                d.degree,
                                d.lower,
                                d.upper,
                                if d.exact { " exact" } else { "" }
                            ));
                        }
                        out
                    };
                    Ok((0, out))
                }
                Err(e) => Err(e),
            }
        }
        Command::Report {
            input,
            building_set,
            backend,
            output,
        } => {
            let a = load(&input)?;
            let mut poset = intersection_poset(&a);
            dense_flats(&a, &mut poset);
            let verdicts = crate::verdict::check_arrangement(
                &a,
                &mut poset,
                building_set.into(),
                backend.into(),
            )?;
            let code = condition_code(&verdicts);
            let ic = if verdicts.applicable {
                crate::verdict::ic_betti(&a, &mut poset, building_set.into(), backend.into())
                    .ok()
                    .and_then(|r| r.ic_betti)
            } else {
                None
            };
            let mut cond = report::condition_a_json(&a, &verdicts);
            cond.ic_betti = ic.map(|iv| {
                iv.degrees
                    .iter()
                    .map(|d| report::IcDegreeJson {
                        degree: d.degree,
                        lower: d.lower,
                        upper: d.upper,
                        exact: d.exact,
                    })
                    .collect()
            });
            let resolution =
                report::resolution_json(&a, &mut poset, building_set.into(), backend.into())?;
            #[derive(Serialize)]
            struct Bundle {
                arrangement: serde_json::Value,
                lattice: Vec<report::FlatJson>,
                condition_a: report::ConditionAJson,
                resolution: report::ResolutionJson,
            }
            let bundle = Bundle {
                arrangement: serde_json::from_str(&emit_arrangement(&a)).unwrap(),
                lattice: report::lattice_json(&a, &poset),
                condition_a: cond,
                resolution,
            };
            let text = serde_json::to_string_pretty(&bundle).unwrap() + "\n";
            if let Some(path) = output {
                std::fs::write(&path, &text)
                    .map_err(|e| ArrError::MalformedInput(format!("{}: {e}", path.display())))?;
                Ok((code, format!("report written to {}\n", path.display())))
            } else {
                Ok((code, text))
            }
        }
        Command::Generate {
            name,
            k,
            n,
            seed,
            weights,
            output,
        } => {
            let a = generate(&name, k, n, seed, weights.as_deref())?;
            let text = emit_arrangement(&a) + "\n";
            if let Some(path) = output {
                std::fs::write(&path, &text)
                    .map_err(|e| ArrError::MalformedInput(format!("{}: {e}", path.display())))?;
                Ok((0, format!("arrangement written to {}\n", path.display())))
            } else {
                Ok((0, text))
            }
        }
    }
}

fn condition_code(rep: &crate::verdict::ApplicabilityReport) -> i32 {
    if rep.applicable {
        0
    } else if rep
        .edges
        .iter()
        .any(|e| e.primary.kind == crate::verdict::VerdictKind::Fails)
    {
        3
    } else {
        4
    }
}

pub fn generate(
    name: &str,
    k: usize,
    n: usize,
    seed: u64,
    weights: Option<&str>,
) -> Result<WeightedArrangement, ArrError> {
    match name {
        "example2" => Ok(examples::example2()),
        "boolean" => Ok(examples::boolean_arrangement(k)),
        "concurrent-lines" => {
            let w = weights.ok_or_else(|| {
                ArrError::MalformedInput("concurrent-lines requires --weights".into())
            })?;
            let parsed = w
                .split(',')
                .map(parse_rat)
                .collect::<Result<Vec<_>, _>>()
                .map_err(ArrError::MalformedInput)?;
            examples::concurrent_lines(parsed.len(), &parsed)
        }
        "example1-generic" => examples::example1_generic(k, n, seed),
        other => Err(ArrError::MalformedInput(format!(
            "unknown example {other:?}; expected example2, example1-generic, boolean or concurrent-lines"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_knows_its_names() {
        assert!(generate("example2", 0, 0, 0, None).is_ok());
        assert!(generate("boolean", 2, 0, 0, None).is_ok());
        assert!(generate("concurrent-lines", 0, 0, 0, Some("1/5,1/5,1/5")).is_ok());
        assert_eq!(
            generate("nope", 0, 0, 0, None).unwrap_err().code(),
            "MALFORMED_INPUT"
        );
    }

    #[test]
    fn exit_codes_map_per_contract() {
        assert_eq!(exit_code_for(&ArrError::MalformedInput("x".into())), 2);
        assert_eq!(exit_code_for(&ArrError::ConditionAFailed("x".into())), 3);
        assert_eq!(exit_code_for(&ArrError::ConditionAUndetermined("x".into())), 4);
        assert_eq!(
            exit_code_for(&ArrError::BackendDisagreement(vec![], vec![])),
            1
        );
    }
}
