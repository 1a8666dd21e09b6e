//! Pipeline driver, circuit file formats and benchmark harness around
//! the `pprm-synth` core.

pub mod bench;
pub mod pipeline;
pub mod qasm;
pub mod real;

pub use pipeline::{
    run_pipeline, run_pprm, CostModel, PipelineConfig, PipelineError, PipelineInput,
    PipelineOutcome, Stage,
};
