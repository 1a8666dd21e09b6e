//! OpenQASM 2.0 export.
//!
//! Controlled-V is emitted as the controlled-phase idiom `h t; cu1(pi/2)
//! c,t; h t`, which reproduces the V matrix exactly. Controlled-V† lowers
//! to controlled-V followed by CNOT (or the reverse, both orders are
//! equal); negative controls are wrapped in NOT pairs. The header records
//! both the annotated and the strict-export gate totals.

use pprm_synth::circuit::{Circuit, LineId, NcvGate, NcvKind, Polarity};
use pprm_synth::ncv::quantum_cost;
use pprm_synth::sim::StateVector;
use num_complex::Complex64;
use std::fmt::Write as _;
use thiserror::Error;

/// Order of the two-gate realization of controlled-V†.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VdagOrder {
    #[default]
    CvThenCnot,
    CnotThenCv,
}

/// Primitive gates appearing in the emitted text.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrimGate {
    X(LineId),
    H(LineId),
    Cx(LineId, LineId),
    /// Controlled phase by `±π/2`: true = +π/2.
    Cu1(LineId, LineId, bool),
}

#[derive(Debug, Error)]
pub enum QasmError {
    #[error("line {0}: unsupported statement: {1}")]
    Unsupported(usize, String),
    #[error("missing qreg declaration")]
    MissingQreg,
}

fn emit_prim(out: &mut String, prims: &mut Vec<PrimGate>, p: PrimGate) {
    match p {
        PrimGate::X(t) => {
            let _ = writeln!(out, "x q[{t}];");
        }
        PrimGate::H(t) => {
            let _ = writeln!(out, "h q[{t}];");
        }
        PrimGate::Cx(c, t) => {
            let _ = writeln!(out, "cx q[{c}],q[{t}];");
        }
        PrimGate::Cu1(c, t, plus) => {
            let sign = if plus { "" } else { "-" };
            let _ = writeln!(out, "cu1({sign}pi/2) q[{c}],q[{t}];");
        }
    }
    prims.push(p);
}

fn emit_cv(out: &mut String, prims: &mut Vec<PrimGate>, c: LineId, t: LineId, dagger: bool) {
    emit_prim(out, prims, PrimGate::H(t));
    emit_prim(out, prims, PrimGate::Cu1(c, t, !dagger));
    emit_prim(out, prims, PrimGate::H(t));
}

/// Emits OpenQASM 2.0 text along with the primitive list it encodes.
pub fn export_qasm(c: &Circuit<NcvGate>, vdag: VdagOrder) -> (String, Vec<PrimGate>) {
    let cost = quantum_cost(c);
    let mut out = String::new();
    let mut prims = Vec::new();
    let _ = writeln!(out, "OPENQASM 2.0;");
    let _ = writeln!(out, "include \"qelib1.inc\";");
    let _ = writeln!(out, "// annotated-qc: {}", cost.qc_total);
    let _ = writeln!(out, "// strict-export-qc: {}", cost.strict_export_qc);
    let _ = writeln!(out, "qreg q[{}];", c.width());

    for g in &c.gates {
        let wrap = match g.control {
            Some((cl, Polarity::Negative)) => Some(cl),
            _ => None,
        };
        if let Some(cl) = wrap {
            emit_prim(&mut out, &mut prims, PrimGate::X(cl));
        }
        let ctrl = g.control_line();
        match (g.kind, ctrl) {
            (NcvKind::Not, _) => emit_prim(&mut out, &mut prims, PrimGate::X(g.target)),
            (NcvKind::Cnot, Some(cl)) => {
                emit_prim(&mut out, &mut prims, PrimGate::Cx(cl, g.target))
            }
            (NcvKind::CV, Some(cl)) => emit_cv(&mut out, &mut prims, cl, g.target, false),
            (NcvKind::CVdag, Some(cl)) => match vdag {
                VdagOrder::CvThenCnot => {
                    emit_cv(&mut out, &mut prims, cl, g.target, false);
                    emit_prim(&mut out, &mut prims, PrimGate::Cx(cl, g.target));
                }
                VdagOrder::CnotThenCv => {
                    emit_prim(&mut out, &mut prims, PrimGate::Cx(cl, g.target));
                    emit_cv(&mut out, &mut prims, cl, g.target, false);
                }
            },
            _ => unreachable!("controlled kind without control"),
        }
        if let Some(cl) = wrap {
            emit_prim(&mut out, &mut prims, PrimGate::X(cl));
        }
    }
    (out, prims)
}

/// Parses the subset of OpenQASM 2.0 that [`export_qasm`] emits.
pub fn parse_qasm_subset(text: &str) -> Result<(usize, Vec<PrimGate>), QasmError> {
    let mut width = None;
    let mut prims = Vec::new();
    let qubit = |s: &str| -> Option<LineId> {
        s.trim()
            .strip_prefix("q[")?
            .strip_suffix(']')?
            .parse()
            .ok()
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty()
            || line.starts_with("//")
            || line.starts_with("OPENQASM")
            || line.starts_with("include")
        {
            continue;
        }
        let line = line.trim_end_matches(';');
        let bad = || QasmError::Unsupported(lineno + 1, raw.to_string());
        if let Some(rest) = line.strip_prefix("qreg q[") {
            let n: usize = rest.trim_end_matches(']').parse().map_err(|_| bad())?;
            width = Some(n);
        } else if let Some(rest) = line.strip_prefix("x ") {
            prims.push(PrimGate::X(qubit(rest).ok_or_else(bad)?));
        } else if let Some(rest) = line.strip_prefix("h ") {
            prims.push(PrimGate::H(qubit(rest).ok_or_else(bad)?));
        } else if let Some(rest) = line.strip_prefix("cx ") {
            let mut it = rest.split(',');
            let c = qubit(it.next().ok_or_else(bad)?).ok_or_else(bad)?;
            let t = qubit(it.next().ok_or_else(bad)?).ok_or_else(bad)?;
            prims.push(PrimGate::Cx(c, t));
        } else if let Some(rest) = line.strip_prefix("cu1(") {
            let (arg, tail) = rest.split_once(')').ok_or_else(bad)?;
            let plus = match arg.trim() {
                "pi/2" => true,
                "-pi/2" => false,
                _ => return Err(bad()),
            };
            let mut it = tail.trim().split(',');
            let c = qubit(it.next().ok_or_else(bad)?).ok_or_else(bad)?;
            let t = qubit(it.next().ok_or_else(bad)?).ok_or_else(bad)?;
            prims.push(PrimGate::Cu1(c, t, plus));
        } else {
            return Err(bad());
        }
    }
    Ok((width.ok_or(QasmError::MissingQreg)?, prims))
}

const H_MATRIX: [[Complex64; 2]; 2] = [
    [
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ],
    [
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ],
];

/// Applies a primitive list to a basis input.
pub fn simulate_prims(width: usize, prims: &[PrimGate], input: &[bool]) -> StateVector {
    let mut sv = StateVector::basis(width, input);
    for p in prims {
        match *p {
            PrimGate::X(t) => {
                sv.apply_controlled(&pprm_synth::sim::X_MATRIX, None, t);
            }
            PrimGate::H(t) => {
                sv.apply_controlled(&H_MATRIX, None, t);
            }
            PrimGate::Cx(c, t) => {
                sv.apply_controlled(&pprm_synth::sim::X_MATRIX, Some((c, Polarity::Positive)), t);
            }
            PrimGate::Cu1(c, t, plus) => {
                let phase = if plus {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                };
                let m = [
                    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                    [Complex64::new(0.0, 0.0), phase],
                ];
                sv.apply_controlled(&m, Some((c, Polarity::Positive)), t);
            }
        }
    }
    sv
}

/// Full unitary of a primitive list, column by column.
pub fn prim_unitary(width: usize, prims: &[PrimGate]) -> Vec<Vec<Complex64>> {
    let dim = 1usize << width;
    (0..dim)
        .map(|k| {
            let bits: Vec<bool> = (0..width).map(|i| (k >> i) & 1 == 1).collect();
            simulate_prims(width, prims, &bits).amplitudes
        })
        .collect()
}
