//! Synthesis of low-cost quantum circuits from Boolean functions given as
//! XOR-of-products (Reed-Muller style) expansions.
//!
//! The pipeline turns a parsed [`BoolFunction`] into a multiple-control
//! Toffoli (MCT) circuit and then into an elementary NCV circuit
//! (NOT / CNOT / controlled-V / controlled-V†):
//!
//! 1. [`factor::factorize`] groups product terms of equal degree and pulls
//!    out common factors, producing `(group)(v1 ⊕ v2 ⊕ ..)` terms.
//! 2. [`reorder::reorder_method`] sorts terms by factor-group form and
//!    factor-variable count, applies the two merge/exchange rules, and
//!    [`reorder::rearrange_max_last`] moves the most expensive term last.
//! 3. [`mct::synth_function`] emits one MCT gate per product term and a
//!    CNOT-sandwich cascade per factored term, merges common-target gate
//!    pairs, and drops trailing gates that only restore inputs.
//! 4. [`ncv::lower_circuit`] decomposes every MCT gate down to two-control
//!    gates, expands those into five-gate NCV realizations, and simplifies
//!    the result with peephole rewrite rules.
//!
//! [`sim`] provides the classical, semi-classical and state-vector engines
//! used to verify every stage against the function it came from.
//!
//! ```
//! use pprm_synth::factor::factorize;
//! use pprm_synth::mct::{elide_trailing, synth_terms};
//! use pprm_synth::ncv::{lower_circuit, quantum_cost};
//! use pprm_synth::pprm::parse_pprm;
//! use pprm_synth::reorder::{rearrange_max_last, reorder_method};
//! use pprm_synth::sim::check_equivalence_ncv;
//!
//! let f = parse_pprm("x1x2x3x4 + x1x3 + x1x5", false)?;
//! let form = rearrange_max_last(&reorder_method(&factorize(&f)));
//! assert_eq!(form.to_string(), "(x1)(x3 + x5) + x1x2x3x4");
//!
//! let mut mct = synth_terms(&form)?;
//! elide_trailing(&mut mct);
//! let ncv = lower_circuit(&mct)?;
//! assert_eq!(quantum_cost(&ncv).qc_total, 30);
//! assert!(check_equivalence_ncv(&ncv, &f, 16, 0, 0)?.is_equivalent());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod circuit;
pub mod error;
pub mod factor;
pub mod mct;
pub mod ncv;
pub mod pprm;
pub mod reorder;
pub mod sim;

pub use circuit::{Circuit, LineId, LineKind, LineMeta, MctGate, NcvGate, NcvKind, Polarity};
pub use error::{ParseError, SynthError};
pub use ncv::{CostReport, VariantPolicy};
pub use pprm::{BoolFunction, FactorVars, Group, GvTerm, Literal, ProductTerm, Term};
pub use sim::{EquivalenceReport, EquivalenceStatus};
