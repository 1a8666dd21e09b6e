//! The synthesis pipeline: parse → normalize → factorize → reorder →
//! rearrange → MCT synthesis → common-target merge → trailing elision →
//! NCV lowering and simplification → costing → verification. Every stage
//! before synthesis can be toggled off; `stop_after` halts the pipeline
//! and returns the artifact of the named stage.

use crate::real::{read_real, write_real, RealError};
use pprm_synth::circuit::{Circuit, MctGate, NcvGate};
use pprm_synth::error::{ParseError, SynthError};
use pprm_synth::factor::factorize;
use pprm_synth::mct::{apply_ctr, elide_trailing, mark_garbage_mct, synth_terms};
use pprm_synth::ncv::{
    lower_circuit_with, quantum_cost, CostReport, LowerOptions, VariantPolicy,
};
use pprm_synth::pprm::{parse_pprm, BoolFunction};
use pprm_synth::reorder::{rearrange_max_last, reorder_method};
use pprm_synth::sim::{
    check_equivalence_ncv, ncv_result_bit, simulate_mct,
    EquivalenceReport, EquivalenceStatus, SweepMode,
};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Parse,
    Normalize,
    Factorize,
    Reorder,
    Rearrange,
    Synth,
    Ctr,
    Elide,
    Decompose,
    Simplify,
}

impl Stage {
    pub fn parse_name(s: &str) -> Option<Stage> {
        Some(match s {
            "parse" => Stage::Parse,
            "normalize" => Stage::Normalize,
            "factorize" => Stage::Factorize,
            "reorder" => Stage::Reorder,
            "rearrange" => Stage::Rearrange,
            "synth" => Stage::Synth,
            "ctr" => Stage::Ctr,
            "elide" => Stage::Elide,
            "decompose" => Stage::Decompose,
            "simplify" => Stage::Simplify,
            _ => return None,
        })
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Parse => "parse",
            Stage::Normalize => "normalize",
            Stage::Factorize => "factorize",
            Stage::Reorder => "reorder",
            Stage::Rearrange => "rearrange",
            Stage::Synth => "synth",
            Stage::Ctr => "ctr",
            Stage::Elide => "elide",
            Stage::Decompose => "decompose",
            Stage::Simplify => "simplify",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostModel {
    #[default]
    Annotated,
    StrictExport,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub factorize: bool,
    pub reorder: bool,
    pub rearrange: bool,
    pub ctr: bool,
    pub elide: bool,
    pub simplify: bool,
    pub variant_policy: VariantPolicy,
    pub cost_model: CostModel,
    pub stop_after: Option<Stage>,
    pub seed: u64,
    pub exhaustive_cap: u32,
    pub sample_count: u64,
    pub strict_pprm: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            factorize: true,
            reorder: true,
            rearrange: true,
            ctr: true,
            elide: true,
            simplify: true,
            variant_policy: VariantPolicy::Greedy,
            cost_model: CostModel::Annotated,
            stop_after: None,
            seed: 0,
            exhaustive_cap: 16,
            sample_count: 10_000,
            strict_pprm: false,
        }
    }
}

impl PipelineConfig {
    /// The term transforms build on each other: without factorization
    /// there are no factored terms to reorder or rearrange.
    pub fn normalized(mut self) -> Self {
        if !self.factorize {
            self.reorder = false;
            self.rearrange = false;
        }
        self
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("parse: {0}")]
    Parse(#[from] ParseError),
    #[error("read-real: {0}")]
    Real(#[from] RealError),
    #[error("{stage}: {source}")]
    Stage { stage: Stage, source: SynthError },
}

fn at(stage: Stage) -> impl Fn(SynthError) -> PipelineError {
    move |source| PipelineError::Stage { stage, source }
}

#[derive(Debug, Clone)]
pub enum PipelineInput {
    Pprm(String),
    Real(String),
}

#[derive(Debug)]
pub struct PipelineOutcome {
    /// The parsed function (absent for circuit inputs).
    pub parsed: Option<BoolFunction>,
    /// The function after the enabled term transforms.
    pub final_form: Option<BoolFunction>,
    pub mct: Option<Circuit<MctGate>>,
    pub ncv: Option<Circuit<NcvGate>>,
    pub cost: Option<CostReport>,
    pub equivalence: Option<EquivalenceReport>,
    /// Text artifact of the stage the pipeline stopped at (or the final
    /// NCV gate list).
    pub dump: String,
}

impl PipelineOutcome {
    /// The headline cost under the configured model.
    pub fn qc(&self, model: CostModel) -> Option<usize> {
        self.cost.as_ref().map(|c| match model {
            CostModel::Annotated => c.qc_total,
            CostModel::StrictExport => c.strict_export_qc,
        })
    }
}

fn ncv_dump(c: &Circuit<NcvGate>) -> String {
    let mut out = String::new();
    for g in &c.gates {
        out.push_str(&format!("{g}\n"));
    }
    out
}

/// NCV-vs-MCT result-line agreement over the NCV circuit's free lines
/// (used for circuit inputs, where no source function exists).
fn check_ncv_vs_mct(
    ncv: &Circuit<NcvGate>,
    mct: &Circuit<MctGate>,
    exhaustive_cap: u32,
    seed: u64,
    samples: u64,
) -> Result<EquivalenceReport, SynthError> {
    let result = ncv.result_line().ok_or(SynthError::Precondition("a result line"))?;
    let mct_result = mct.result_line().ok_or(SynthError::Precondition("a result line"))?;
    let free = ncv.free_input_lines();
    let run = |pattern: u64| -> Result<Option<EquivalenceReport>, SynthError> {
        let mut input = vec![false; ncv.width()];
        for (i, &l) in free.iter().enumerate() {
            input[l] = (pattern >> i) & 1 == 1;
        }
        let mct_input: Vec<bool> = input[..mct.width()].to_vec();
        let expected = simulate_mct(mct, &mct_input)?[mct_result];
        let got = ncv_result_bit(ncv, &input, result)?;
        if got != Some(expected) {
            return Ok(Some(EquivalenceReport {
                status: EquivalenceStatus::Counterexample { input, expected, got },
                inputs_checked: 0,
                mode: SweepMode::Exhaustive,
            }));
        }
        Ok(None)
    };
    if (free.len() as u32) <= exhaustive_cap {
        let total = 1u64 << free.len();
        for pattern in 0..total {
            if let Some(mut bad) = run(pattern)? {
                bad.inputs_checked = pattern + 1;
                return Ok(bad);
            }
        }
        Ok(EquivalenceReport {
            status: EquivalenceStatus::Equivalent,
            inputs_checked: total,
            mode: SweepMode::Exhaustive,
        })
    } else {
        let mut rng = pprm_synth::sim::SplitMix64::new(seed);
        for k in 0..samples {
            if let Some(mut bad) = run(rng.next())? {
                bad.inputs_checked = k + 1;
                bad.mode = SweepMode::Sampled;
                return Ok(bad);
            }
        }
        Ok(EquivalenceReport {
            status: EquivalenceStatus::Equivalent,
            inputs_checked: samples,
            mode: SweepMode::Sampled,
        })
    }
}

pub fn run_pipeline(
    input: &PipelineInput,
    config: &PipelineConfig,
) -> Result<PipelineOutcome, PipelineError> {
    let config = config.clone().normalized();
    let mut outcome = PipelineOutcome {
        parsed: None,
        final_form: None,
        mct: None,
        ncv: None,
        cost: None,
        equivalence: None,
        dump: String::new(),
    };

    let stop = |s: Stage| config.stop_after == Some(s);

    let mct = match input {
        PipelineInput::Pprm(text) => {
            let parsed = parse_pprm(text, config.strict_pprm)?;
            outcome.parsed = Some(parsed.clone());
            if stop(Stage::Parse) {
                outcome.dump = format!("{parsed}\n");
                return Ok(outcome);
            }

            let mut f = parsed.normalize();
            if stop(Stage::Normalize) {
                outcome.dump = format!("{f}\n");
                outcome.final_form = Some(f);
                return Ok(outcome);
            }

            if config.factorize {
                f = factorize(&f);
            }
            if stop(Stage::Factorize) {
                outcome.dump = format!("{f}\n");
                outcome.final_form = Some(f);
                return Ok(outcome);
            }

            if config.reorder {
                f = reorder_method(&f);
            }
            if stop(Stage::Reorder) {
                outcome.dump = format!("{f}\n");
                outcome.final_form = Some(f);
                return Ok(outcome);
            }

            if config.rearrange {
                f = rearrange_max_last(&f);
            }
            outcome.final_form = Some(f.clone());
            if stop(Stage::Rearrange) {
                outcome.dump = format!("{f}\n");
                return Ok(outcome);
            }

            synth_terms(&f).map_err(at(Stage::Synth))?
        }
        PipelineInput::Real(text) => read_real(text)?,
    };

    let mut mct = mct;
    if stop(Stage::Synth) {
        mark_garbage_mct(&mut mct);
        outcome.dump = write_real(&mct);
        outcome.mct = Some(mct);
        return Ok(outcome);
    }

    if config.ctr {
        mct = apply_ctr(&mct);
    }
    if stop(Stage::Ctr) {
        mark_garbage_mct(&mut mct);
        outcome.dump = write_real(&mct);
        outcome.mct = Some(mct);
        return Ok(outcome);
    }

    if config.elide {
        elide_trailing(&mut mct);
    }
    mark_garbage_mct(&mut mct);
    if stop(Stage::Elide) {
        outcome.dump = write_real(&mct);
        outcome.mct = Some(mct);
        return Ok(outcome);
    }

    if stop(Stage::Decompose) {
        // Pre-simplification dump: structural expansion only.
        let ncv = lower_circuit_with(
            &mct,
            LowerOptions {
                policy: match config.variant_policy {
                    VariantPolicy::Fixed(k) => VariantPolicy::Fixed(k),
                    VariantPolicy::Greedy => VariantPolicy::Fixed(1),
                },
                simplify: false,
                elide: false,
            },
        )
        .map_err(at(Stage::Decompose))?;
        outcome.dump = ncv_dump(&ncv);
        outcome.cost = Some(quantum_cost(&ncv));
        outcome.ncv = Some(ncv);
        outcome.mct = Some(mct);
        return Ok(outcome);
    }

    let ncv = lower_circuit_with(
        &mct,
        LowerOptions {
            policy: config.variant_policy,
            simplify: config.simplify,
            elide: config.elide && !stop(Stage::Simplify),
        },
    )
    .map_err(at(Stage::Decompose))?;
    if stop(Stage::Simplify) {
        outcome.dump = ncv_dump(&ncv);
        outcome.cost = Some(quantum_cost(&ncv));
        outcome.ncv = Some(ncv);
        outcome.mct = Some(mct);
        return Ok(outcome);
    }

    let mut cost = quantum_cost(&ncv);
    cost.per_stage = vec![
        ("mct".to_string(), mct.gates.len()),
        ("ncv".to_string(), ncv.gates.len()),
    ];

    let equivalence = match &outcome.parsed {
        Some(f) => check_equivalence_ncv(
            &ncv,
            f,
            config.exhaustive_cap,
            config.seed,
            config.sample_count,
        )
        .map_err(at(Stage::Simplify))?,
        None => check_ncv_vs_mct(
            &ncv,
            &mct,
            config.exhaustive_cap,
            config.seed,
            config.sample_count,
        )
        .map_err(at(Stage::Simplify))?,
    };

    outcome.dump = ncv_dump(&ncv);
    outcome.cost = Some(cost);
    outcome.equivalence = Some(equivalence);
    outcome.ncv = Some(ncv);
    outcome.mct = Some(mct);
    Ok(outcome)
}

/// Convenience wrapper for `.pprm` text with the default configuration.
pub fn run_pprm(text: &str, config: &PipelineConfig) -> Result<PipelineOutcome, PipelineError> {
    run_pipeline(&PipelineInput::Pprm(text.to_string()), config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const F1_RAW: &str = "x1x2x3x4 + x1x3 + x1x5";
    const G4_RAW: &str = "x1x2x4 + x2x3x4 + x2x3 + x2x4 + x1 + x1x2x3~x4";

    #[test]
    fn rearrangement_flips_costs() {
        let mut config = PipelineConfig::default();
        config.rearrange = false;
        let out = run_pprm(F1_RAW, &config).unwrap();
        assert_eq!(out.qc(CostModel::Annotated), Some(42));
        assert!(out.equivalence.unwrap().is_equivalent());

        let config = PipelineConfig::default();
        let out = run_pprm(F1_RAW, &config).unwrap();
        assert_eq!(out.qc(CostModel::Annotated), Some(30));
        assert!(out.equivalence.unwrap().is_equivalent());
    }

    #[test]
    fn worked_example_in_range() {
        let out = run_pprm(G4_RAW, &PipelineConfig::default()).unwrap();
        let qc = out.qc(CostModel::Annotated).unwrap();
        assert!((45..=47).contains(&qc), "qc = {qc}");
        assert!(out.equivalence.unwrap().is_equivalent());
        assert_eq!(
            format!("{}", out.final_form.unwrap()),
            "x1 + (x2x4)(x1 + x3) + (x2)(x3 + x4) + x1x2x3~x4"
        );
    }

    #[test]
    fn zero_function_is_trivial() {
        let out = run_pprm("", &PipelineConfig::default()).unwrap();
        assert_eq!(out.qc(CostModel::Annotated), Some(0));
        assert!(out.equivalence.unwrap().is_equivalent());
    }

    #[test]
    fn stop_after_produces_dumps() {
        let mut config = PipelineConfig::default();
        config.stop_after = Some(Stage::Rearrange);
        let out = run_pprm(G4_RAW, &config).unwrap();
        assert_eq!(
            out.dump.trim(),
            "x1 + (x2x4)(x1 + x3) + (x2)(x3 + x4) + x1x2x3~x4"
        );

        config.stop_after = Some(Stage::Synth);
        let out = run_pprm(G4_RAW, &config).unwrap();
        assert!(out.dump.contains(".begin"));
        assert_eq!(out.mct.unwrap().gates.len(), 8);

        config.stop_after = Some(Stage::Decompose);
        let out = run_pprm(G4_RAW, &config).unwrap();
        let unopt = out.cost.unwrap().qc_total;
        let full = run_pprm(G4_RAW, &PipelineConfig::default())
            .unwrap()
            .qc(CostModel::Annotated)
            .unwrap();
        assert!(full <= unopt, "optimized {full} > raw {unopt}");
    }

    #[test]
    fn real_input_runs_circuit_stages() {
        let mut config = PipelineConfig::default();
        config.stop_after = Some(Stage::Synth);
        let real_text = run_pprm(F1_RAW, &config).unwrap().dump;

        let out = run_pipeline(&PipelineInput::Real(real_text), &PipelineConfig::default())
            .unwrap();
        assert!(out.equivalence.as_ref().unwrap().is_equivalent());
        assert!(out.qc(CostModel::Annotated).unwrap() > 0);
    }

    #[test]
    fn disabling_factorize_disables_dependents() {
        let config = PipelineConfig { factorize: false, ..Default::default() }.normalized();
        assert!(!config.reorder);
        assert!(!config.rearrange);
        let out = run_pprm(F1_RAW, &config).unwrap();
        assert!(out.equivalence.unwrap().is_equivalent());
    }

    #[test]
    fn strict_export_cost_dominates() {
        for src in [F1_RAW, G4_RAW, "x1x2 + ~x1x3 + 1"] {
            let out = run_pprm(src, &PipelineConfig::default()).unwrap();
            let cost = out.cost.unwrap();
            assert!(cost.strict_export_qc >= cost.qc_total);
        }
    }
}
