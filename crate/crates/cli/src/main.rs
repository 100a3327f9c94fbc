use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use diffeolin::bilinear::smooth_bilinear_basis;
use diffeolin::hom::{diffeological_dual, hat_dual, is_smooth_linear_with, smooth_hom_basis, Witness};
use diffeolin::oracle::{classify_traced, cross_validate, OracleConfig};
use diffeolin::parse::{parse_components, parse_expr, validate_degree};
use diffeolin::spacefile::SpaceFile;
use diffeolin::tensor::{tensor_dual_iso, tensor_product};
use diffeolin::verify::{all_passed, run_all};
use diffeolin::{format_rational, parse_rational, Exec, Matrix, Membership, MembershipConfig, Plot, Subspace};

const BUNDLED: &str = include_str!("../data/spaces.json");

#[derive(Parser)]
#[command(name = "diffeolin", version, about = "Finite-dimensional diffeological vector spaces, exactly")]
struct Cli {
    /// Space-definition file; the bundled examples are used when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    spaces: Option<PathBuf>,

    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension and basis of the diffeological dual.
    Dual { space: String },
    /// Smooth linear maps between two spaces.
    Hom { v: String, w: String },
    /// Smooth bilinear maps V × V → W.
    Bilinear { v: String, w: String },
    /// Tensor product of two spaces.
    Tensor {
        v: String,
        w: String,
        /// Also build the map V* ⊗ W* → (V ⊗ W)*.
        #[arg(long)]
        dual_iso: bool,
    },
    /// Smoothness of a named map.
    CheckMap { map: String },
    /// Plot membership; one expression per coordinate, or one
    /// comma-separated argument.
    CheckPlot {
        space: String,
        #[arg(required = true, allow_hyphen_values = true)]
        exprs: Vec<String>,
    },
    /// Pushforward of a space along an isomorphism.
    HatDual {
        space: String,
        /// Rows separated by ';', entries by ',', e.g. "0,1;1,0".
        #[arg(long)]
        iso: String,
    },
    /// Numeric smoothness classification at the origin.
    Oracle {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Print every (order, scale) record.
        #[arg(long)]
        trace: bool,
    },
    /// Compare the oracle with the symbolic verdict on sampled plots.
    CrossValidate {
        space: String,
        /// Comma-separated functional coefficients.
        #[arg(long, allow_hyphen_values = true)]
        functional: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the full verification suite.
    Verify {
        /// Run checks one after another.
        #[arg(long)]
        sequential: bool,
    },
}

/// Output of a subcommand: JSON fields plus the text rendering.
struct Report {
    command: &'static str,
    inputs: Value,
    result: Value,
    verdicts: Value,
    text: String,
    ok: bool,
}

fn rationals(v: &[diffeolin::Rational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(format_rational(q))).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| rationals(r)).collect())
}

fn subspace_json(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "basis": matrix_json(s.basis()) })
}

fn parse_matrix_arg(text: &str) -> Result<Matrix> {
    let rows = text
        .split(';')
        .map(|r| r.split(',').map(|e| parse_rational(e.trim())).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    Ok(Matrix::from_rows(cols, &rows)?)
}

fn membership_json(m: &Membership) -> Value {
    match m {
        Membership::Plot => json!({ "verdict": "Plot" }),
        Membership::NotPlot(c) => json!({
            "verdict": "NotPlot",
            "certificate": { "degree": c.degree, "functional": rationals(&c.functional) }
        }),
        Membership::Unknown { degree, bound } => {
            json!({ "verdict": "UNKNOWN", "degree": degree, "slack_bound": bound })
        }
    }
}

fn witness_json(w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(Witness::Plot { plot, image }) => json!({ "plot": plot.to_string(), "image": image.to_string() }),
        Some(Witness::Pair { left, right, image }) => {
            json!({ "left": left.to_string(), "right": right.to_string(), "image": image.to_string() })
        }
    }
}

fn witness_text(w: &Option<Witness>) -> String {
    match w {
        None => String::new(),
        Some(Witness::Plot { plot, image }) => format!("\nwitness: {plot} ↦ {image}"),
        Some(Witness::Pair { left, right, image }) => format!("\nwitness: ({left}, {right}) ↦ {image}"),
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let load = || -> Result<SpaceFile> {
        Ok(match &cli.spaces {
            Some(p) => SpaceFile::load(p)?,
            None => SpaceFile::from_json(BUNDLED).context("bundled space file")?,
        })
    };
    let cfg = MembershipConfig::from_env()?;
    Ok(match &cli.command {
        Command::Dual { space } => {
            let file = load()?;
            let d = diffeological_dual(file.space(space)?)?;
            Report {
                command: "dual",
                inputs: json!({ "space": space }),
                result: json!({ "dim": d.dim(), "annihilator": subspace_json(d.annihilator()) }),
                verdicts: json!({}),
                text: format!("dim V* = {}\nbasis: {}", d.dim(), d.annihilator().basis()),
                ok: true,
            }
        }
        Command::Hom { v, w } => {
            let file = load()?;
            let h = smooth_hom_basis(file.space(v)?, file.space(w)?)?;
            Report {
                command: "hom",
                inputs: json!({ "v": v, "w": w }),
                result: subspace_json(&h),
                verdicts: json!({}),
                text: format!("dim L∞(V, W) = {}\nbasis (row-major): {}", h.dim(), h.basis()),
                ok: true,
            }
        }
        Command::Bilinear { v, w } => {
            let file = load()?;
            let b = smooth_bilinear_basis(file.space(v)?, file.space(w)?)?;
            Report {
                command: "bilinear",
                inputs: json!({ "v": v, "w": w }),
                result: subspace_json(&b),
                verdicts: json!({}),
                text: format!("dim B∞(V, W) = {}\nbasis: {}", b.dim(), b.basis()),
                ok: true,
            }
        }
        Command::Tensor { v, w, dual_iso } => {
            let file = load()?;
            let (sv, sw) = (file.space(v)?, file.space(w)?);
            let t = tensor_product(sv, sw)?;
            let s = t.singular_span()?;
            let dual = diffeological_dual(&t)?.dim();
            let mut text = format!("dim V⊗W = {}\ndim S = {}\ndim (V⊗W)* = {dual}", t.dim(), s.dim());
            let mut result = json!({ "dim": t.dim(), "singular_span": subspace_json(&s), "dual_dim": dual });
            if *dual_iso {
                let f = tensor_dual_iso(sv, sw)?;
                text.push_str(&format!(
                    "\nF: V*⊗W* → (V⊗W)*: {}×{} matrix, rank {}, isomorphism {}",
                    f.target_dim,
                    f.source_dim,
                    f.rank,
                    f.is_iso()
                ));
                result["dual_iso"] = json!({
                    "matrix": matrix_json(&f.matrix),
                    "source_dim": f.source_dim,
                    "target_dim": f.target_dim,
                    "rank": f.rank,
                    "isomorphism": f.is_iso(),
                });
            }
            Report {
                command: "tensor",
                inputs: json!({ "v": v, "w": w, "dual_iso": dual_iso }),
                result,
                verdicts: json!({}),
                text,
                ok: true,
            }
        }
        Command::CheckMap { map } => {
            let file = load()?;
            let f = file.map(map)?;
            let d = is_smooth_linear_with(f, &cfg)?;
            Report {
                command: "check-map",
                inputs: json!({ "map": map }),
                result: json!({ "witness": witness_json(&d.witness) }),
                verdicts: json!({ map.as_str(): d.verdict.label() }),
                text: format!("{}{}", d.verdict, witness_text(&d.witness)),
                ok: true,
            }
        }
        Command::CheckPlot { space, exprs } => {
            let file = load()?;
            let comps = parse_components(&exprs.join(","))?;
            let plot = Plot::new(comps);
            let m = file.space(space)?.is_plot_with(&plot, &cfg)?;
            let cert = match &m {
                Membership::NotPlot(c) => format!(
                    "\ncertificate: degree {}, functional {}",
                    c.degree,
                    c.functional.iter().map(format_rational).collect::<Vec<_>>().join(" ")
                ),
                Membership::Unknown { degree, bound } => {
                    format!("\nresidue at degree {degree} needs a multiplier beyond the slack bound {bound}")
                }
                Membership::Plot => String::new(),
            };
            Report {
                command: "check-plot",
                inputs: json!({ "space": space, "plot": plot.to_string() }),
                result: membership_json(&m),
                verdicts: json!({ "plot": m.label() }),
                text: format!("{}{cert}", m.label()),
                ok: true,
            }
        }
        Command::HatDual { space, iso } => {
            let file = load()?;
            let iso_m = parse_matrix_arg(iso)?;
            let h = hat_dual(file.space(space)?, &iso_m)?;
            let s = h.singular_span()?;
            Report {
                command: "hat-dual",
                inputs: json!({ "space": space, "iso": matrix_json(&iso_m) }),
                result: json!({ "dim": h.dim(), "singular_span": subspace_json(&s), "description": h.to_string() }),
                verdicts: json!({}),
                text: format!("{h}\ndim S = {}\nS basis: {}", s.dim(), s.basis()),
                ok: true,
            }
        }
        Command::Oracle { expr, trace } => {
            let e = parse_expr(expr)?;
            validate_degree(&e)?;
            let (c, records) = classify_traced(&e, &OracleConfig::default());
            let mut text = format!("{c}\nsymbolic: {}", if e.is_smooth() { "smooth" } else { "not smooth" });
            if *trace {
                for r in &records {
                    text.push_str(&format!("\n{:>2} {:>12.6e} {:>14.6e} {}", r.order, r.scale, r.value, r.verdict));
                }
            }
            Report {
                command: "oracle",
                inputs: json!({ "expression": e.to_string() }),
                result: json!({ "classification": c, "records": records }),
                verdicts: json!({ "oracle": c.to_string(), "symbolic_smooth": e.is_smooth() }),
                text,
                ok: true,
            }
        }
        Command::CrossValidate { space, functional, trials, seed } => {
            let file = load()?;
            let l = functional.split(',').map(|s| parse_rational(s.trim())).collect::<Result<Vec<_>, _>>()?;
            let r = cross_validate(file.space(space)?, &l, *trials, *seed, &OracleConfig::default())?;
            let mut text = format!("symbolic: {}", r.verdict);
            if r.skipped {
                text.push_str("\nskipped: no sampled representation");
            } else {
                for t in &r.trials {
                    text.push_str(&format!(
                        "\n{} {:<28} expected {}  {}",
                        if t.agrees() { "ok  " } else { "DIFF" },
                        t.classification.to_string(),
                        if t.expected_smooth { "smooth" } else { "non-smooth" },
                        t.plot
                    ));
                }
                text.push_str(&format!(
                    "\nagreement {:.1}%, consistent {}",
                    r.agreement_rate() * 100.0,
                    r.consistent()
                ));
            }
            let trials_json: Vec<Value> = r
                .trials
                .iter()
                .map(|t| json!({ "plot": t.plot.to_string(), "expected_smooth": t.expected_smooth, "classification": t.classification }))
                .collect();
            Report {
                command: "cross-validate",
                inputs: json!({ "space": space, "functional": rationals(&l), "trials": trials, "seed": seed }),
                result: json!({ "skipped": r.skipped, "agreement": r.agreement_rate(), "consistent": r.consistent(), "trials": trials_json }),
                verdicts: json!({ "symbolic": r.verdict.label() }),
                text,
                ok: true,
            }
        }
        Command::Verify { sequential } => {
            let file = load()?;
            let exec = if *sequential { Exec::Sequential } else { Exec::default() };
            let results = run_all(&file, exec);
            let ok = all_passed(&results);
            let failed = results.iter().filter(|r| !r.passed).count();
            let mut text: String = results.iter().map(|r| r.line() + "\n").collect();
            text.push_str(&format!("{} checks, {failed} failed", results.len()));
            let verdicts: serde_json::Map<String, Value> = results
                .iter()
                .map(|r| (r.name.clone(), Value::String(if r.passed { "pass" } else { "fail" }.into())))
                .collect();
            Report {
                command: "verify",
                inputs: json!({ "sequential": sequential }),
                result: serde_json::to_value(&results)?,
                verdicts: Value::Object(verdicts),
                text,
                ok,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                let doc =
                    json!({ "command": r.command, "inputs": r.inputs, "result": r.result, "verdicts": r.verdicts });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                println!("{}", r.text);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": format!("{e:#}") }));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_argument() {
        let m = parse_matrix_arg("0,1; 1,0").unwrap();
        assert_eq!(m, Matrix::from_ints(&[&[0, 1], &[1, 0]]));
        assert!(parse_matrix_arg("1,2;3").is_err());
        assert!(parse_matrix_arg("1.5").is_err());
    }

    #[test]
    fn bundled_file_loads() {
        let f = SpaceFile::from_json(BUNDLED).unwrap();
        assert!(f.space("kink_R2").is_ok());
    }
}
