//! `pprmc` — synthesize low-cost NCV quantum circuits from XOR-of-products
//! Boolean functions.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pprm_synth::ncv::VariantPolicy;
use pprm_synth_cli::bench::{parse_manifest, run_bench, to_csv, to_json};
use pprm_synth_cli::pipeline::{
    run_pipeline, CostModel, PipelineConfig, PipelineInput, PipelineOutcome, Stage,
};
use pprm_synth_cli::qasm::{export_qasm, VdagOrder};
use pprm_synth_cli::real::write_real;
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "pprmc",
    about = "Synthesis of low-cost NCV quantum circuits from XOR-of-products Boolean functions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Seed for sampled verification sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Halt after the named stage and emit its artifact
    /// (parse|normalize|factorize|reorder|rearrange|synth|ctr|elide|decompose|simplify).
    #[arg(long, global = true)]
    stop_after: Option<String>,
    /// Report format: text or json.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Artifact to emit for circuit outputs: real, qasm, gates or pprm.
    #[arg(long, global = true)]
    emit: Option<String>,
    /// Cost accounting: annotated (negative controls count one) or
    /// strict-export (NOT pairs and V-dagger lowering included).
    #[arg(long, global = true, default_value = "annotated")]
    cost_model: String,
    /// Two-control realization choice: greedy or fixed:K (K in 1..=4).
    #[arg(long, global = true, default_value = "greedy")]
    variant_policy: String,
    /// Reject complemented literals in the input.
    #[arg(long, global = true)]
    strict_pprm: bool,
    /// Exhaustive-verification bit cap; wider circuits are sampled.
    #[arg(long, global = true, default_value_t = 16)]
    exhaustive_cap: u32,
    /// Skip the factorization stage (disables reorder and rearrange too).
    #[arg(long, global = true)]
    no_factorize: bool,
    /// Skip the reorder stage.
    #[arg(long, global = true)]
    no_reorder: bool,
    /// Skip the move-heaviest-term-last rearrangement.
    #[arg(long, global = true)]
    no_rearrange: bool,
    /// Skip common-target gate merging.
    #[arg(long, global = true)]
    no_ctr: bool,
    /// Keep trailing input-restoring gates.
    #[arg(long, global = true)]
    no_elide: bool,
    /// Skip NCV peephole simplification.
    #[arg(long, global = true)]
    no_simplify: bool,
    /// Controlled-V-dagger export order: cv-cnot or cnot-cv.
    #[arg(long, global = true, default_value = "cv-cnot")]
    vdag_order: String,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the MCT circuit for a function file.
    Synth {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run the full pipeline down to the NCV circuit.
    Lower {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Verify the synthesized circuit against its source function.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Report gate counts and quantum cost.
    Cost {
        input: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run a manifest of functions and tabulate costs.
    Bench {
        manifest: PathBuf,
        /// Directory for the CSV and JSON reports.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Export the NCV circuit as OpenQASM 2.0.
    Export {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn build_config(opts: &CommonOpts) -> Result<PipelineConfig> {
    let stop_after = match &opts.stop_after {
        Some(name) => Some(
            Stage::parse_name(name)
                .with_context(|| format!("unknown stage {name:?}"))?,
        ),
        None => None,
    };
    let variant_policy = match opts.variant_policy.as_str() {
        "greedy" => VariantPolicy::Greedy,
        other => match other.strip_prefix("fixed:") {
            Some(k) => {
                let k: u8 = k.parse().context("variant index")?;
                if !(1..=4).contains(&k) {
                    bail!("variant index must be 1..=4");
                }
                VariantPolicy::Fixed(k)
            }
            None => bail!("variant policy must be greedy or fixed:K"),
        },
    };
    let cost_model = match opts.cost_model.as_str() {
        "annotated" => CostModel::Annotated,
        "strict-export" => CostModel::StrictExport,
        other => bail!("unknown cost model {other:?}"),
    };
    Ok(PipelineConfig {
        factorize: !opts.no_factorize,
        reorder: !opts.no_reorder,
        rearrange: !opts.no_rearrange,
        ctr: !opts.no_ctr,
        elide: !opts.no_elide,
        simplify: !opts.no_simplify,
        variant_policy,
        cost_model,
        stop_after,
        seed: opts.seed,
        exhaustive_cap: opts.exhaustive_cap,
        sample_count: 10_000,
        strict_pprm: opts.strict_pprm,
    }
    .normalized())
}

fn vdag_order(opts: &CommonOpts) -> Result<VdagOrder> {
    match opts.vdag_order.as_str() {
        "cv-cnot" => Ok(VdagOrder::CvThenCnot),
        "cnot-cv" => Ok(VdagOrder::CnotThenCv),
        other => bail!("unknown vdag order {other:?}"),
    }
}

fn read_input(path: &Path) -> Result<PipelineInput> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e == "real") {
        Ok(PipelineInput::Real(text))
    } else {
        Ok(PipelineInput::Pprm(text))
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn equivalence_json(outcome: &PipelineOutcome) -> serde_json::Value {
    use pprm_synth::sim::{EquivalenceStatus, SweepMode};
    match &outcome.equivalence {
        None => json!(null),
        Some(r) => {
            let status = match &r.status {
                EquivalenceStatus::Equivalent => json!({"kind": "equivalent"}),
                EquivalenceStatus::Counterexample { input, expected, got } => json!({
                    "kind": "counterexample",
                    "input": input.iter().map(|&b| u8::from(b)).collect::<Vec<_>>(),
                    "expected": expected,
                    "got": got,
                }),
                EquivalenceStatus::NonClassical { gate_index } => json!({
                    "kind": "non-classical",
                    "gate_index": gate_index,
                }),
            };
            json!({
                "status": status,
                "inputs_checked": r.inputs_checked,
                "mode": match r.mode {
                    SweepMode::Exhaustive => "exhaustive",
                    SweepMode::Sampled => "sampled",
                },
            })
        }
    }
}

fn cost_json(outcome: &PipelineOutcome) -> serde_json::Value {
    match &outcome.cost {
        None => json!(null),
        Some(c) => json!({
            "not": c.not_count,
            "cnot": c.cnot_count,
            "cv": c.cv_count,
            "cv_dagger": c.cvdag_count,
            "negative_controls": c.negative_controls,
            "qc": c.qc_total,
            "strict_export_qc": c.strict_export_qc,
            "per_stage": c.per_stage.iter()
                .map(|(k, v)| json!({"stage": k, "gates": v}))
                .collect::<Vec<_>>(),
        }),
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Synth { input, output, opts } => {
            let mut config = build_config(&opts)?;
            if config.stop_after.is_none() {
                config.stop_after = Some(Stage::Elide);
            }
            let outcome = run_pipeline(&read_input(&input)?, &config)?;
            write_output(output.as_deref(), &outcome.dump)
        }
        Command::Lower { input, output, opts } => {
            let config = build_config(&opts)?;
            let outcome = run_pipeline(&read_input(&input)?, &config)?;
            let content = match opts.emit.as_deref() {
                Some("qasm") => match &outcome.ncv {
                    Some(ncv) => export_qasm(ncv, vdag_order(&opts)?).0,
                    None => bail!("pipeline stopped before the NCV stage"),
                },
                Some("real") => match &outcome.mct {
                    Some(mct) => write_real(mct),
                    None => bail!("no MCT circuit at this stage"),
                },
                _ => outcome.dump.clone(),
            };
            write_output(output.as_deref(), &content)
        }
        Command::Verify { input, opts } => {
            let config = build_config(&opts)?;
            let outcome = run_pipeline(&read_input(&input)?, &config)?;
            let report = equivalence_json(&outcome);
            if opts.format == "json" {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                match &outcome.equivalence {
                    Some(r) if r.is_equivalent() => {
                        println!("equivalent ({} inputs)", r.inputs_checked)
                    }
                    Some(_) => println!("NOT equivalent: {report}"),
                    None => println!("no verification ran (early stop)"),
                }
            }
            if outcome.equivalence.as_ref().is_some_and(|r| !r.is_equivalent()) {
                std::process::exit(1);
            }
            Ok(())
        }
        Command::Cost { input, opts } => {
            let config = build_config(&opts)?;
            let outcome = run_pipeline(&read_input(&input)?, &config)?;
            if opts.format == "json" {
                println!("{}", serde_json::to_string_pretty(&cost_json(&outcome))?);
            } else if let Some(c) = &outcome.cost {
                let headline = match config.cost_model {
                    CostModel::Annotated => c.qc_total,
                    CostModel::StrictExport => c.strict_export_qc,
                };
                println!("qc: {headline}");
                println!(
                    "gates: not={} cnot={} cv={} cv+={} (negative controls: {})",
                    c.not_count, c.cnot_count, c.cv_count, c.cvdag_count, c.negative_controls
                );
                for (stage, count) in &c.per_stage {
                    println!("{stage}: {count} gates");
                }
            }
            Ok(())
        }
        Command::Bench { manifest, output, opts } => {
            let config = build_config(&opts)?;
            let text = std::fs::read_to_string(&manifest)
                .with_context(|| format!("reading {}", manifest.display()))?;
            let base = manifest.parent().unwrap_or(Path::new("."));
            let entries = parse_manifest(&text, base)?;
            let table = run_bench(&entries, &config);
            let csv = to_csv(&table);
            match output {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    std::fs::write(dir.join("bench.csv"), &csv)?;
                    std::fs::write(
                        dir.join("bench.json"),
                        serde_json::to_string_pretty(&to_json(&table))?,
                    )?;
                    println!("wrote {}", dir.join("bench.csv").display());
                }
                None => {
                    if opts.format == "json" {
                        println!("{}", serde_json::to_string_pretty(&to_json(&table))?);
                    } else {
                        print!("{csv}");
                    }
                }
            }
            Ok(())
        }
        Command::Export { input, output, opts } => {
            let config = build_config(&opts)?;
            let outcome = run_pipeline(&read_input(&input)?, &config)?;
            let ncv = outcome
                .ncv
                .as_ref()
                .context("pipeline stopped before the NCV stage")?;
            let (text, _) = export_qasm(ncv, vdag_order(&opts)?);
            write_output(output.as_deref(), &text)
        }
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}
