//! RevLib `.real` reader and writer for MCT circuits.
//!
//! Gate lines are `tK c1 .. c(K-1) target` where `K` counts the lines the
//! gate touches; a `-` prefix on a control name marks a negative control.
//! `.constants` uses `0`/`1` per line (`-` for free inputs), `.garbage`
//! uses `1` (or `g`) per garbage line. A `# pprmc-kinds:` comment records
//! our line roles so circuits round-trip losslessly; files without it get
//! the usual convention: constant-0 lines are work lines and the last one
//! carries the result.

use pprm_synth::circuit::{Circuit, LineId, LineKind, LineMeta, MctGate, Polarity};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RealError {
    #[error("missing .numvars header")]
    MissingNumvars,
    #[error("malformed header line: {0}")]
    Header(String),
    #[error("line {0}: unknown variable {1}")]
    UnknownVariable(usize, String),
    #[error("line {0}: gate arity {1} does not match {2} named lines")]
    Arity(usize, usize, usize),
    #[error("line {0}: malformed gate: {1}")]
    Gate(usize, String),
    #[error("{0} variables declared but {1} names given")]
    NameCount(usize, usize),
}

/// Serializes an MCT circuit.
pub fn write_real(c: &Circuit<MctGate>) -> String {
    let names: Vec<String> = c
        .lines
        .iter()
        .enumerate()
        .map(|(i, m)| match &m.kind {
            LineKind::Input(name) => name.clone(),
            LineKind::AncillaZero => format!("w{i}"),
            LineKind::Auxiliary => format!("l{i}"),
            LineKind::Result => "f".to_string(),
        })
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, ".version 2.0");
    let kinds: Vec<&str> = c
        .lines
        .iter()
        .map(|m| match m.kind {
            LineKind::Input(_) => "i",
            LineKind::AncillaZero => "a",
            LineKind::Auxiliary => "x",
            LineKind::Result => "r",
        })
        .collect();
    let _ = writeln!(out, "# pprmc-kinds: {}", kinds.join(" "));
    let _ = writeln!(out, ".numvars {}", c.width());
    let _ = writeln!(out, ".variables {}", names.join(" "));
    let constants: String = c
        .lines
        .iter()
        .map(|m| if m.kind.forced_zero() { '0' } else { '-' })
        .collect();
    let _ = writeln!(out, ".constants {constants}");
    let garbage: String = c
        .lines
        .iter()
        .map(|m| if m.garbage { '1' } else { '-' })
        .collect();
    let _ = writeln!(out, ".garbage {garbage}");
    let _ = writeln!(out, ".begin");
    for g in &c.gates {
        let mut parts = vec![format!("t{}", g.arity() + 1)];
        for &(l, p) in &g.controls {
            let prefix = if p == Polarity::Negative { "-" } else { "" };
            parts.push(format!("{prefix}{}", names[l]));
        }
        parts.push(names[g.target].clone());
        let _ = writeln!(out, "{}", parts.join(" "));
    }
    let _ = writeln!(out, ".end");
    out
}

/// Parses `.real` text into an MCT circuit.
pub fn read_real(text: &str) -> Result<Circuit<MctGate>, RealError> {
    let mut numvars: Option<usize> = None;
    let mut names: Vec<String> = Vec::new();
    let mut constants: Vec<char> = Vec::new();
    let mut garbage: Vec<char> = Vec::new();
    let mut kinds_hint: Option<Vec<String>> = None;
    let mut gates: Vec<(usize, Vec<String>)> = Vec::new();
    let mut in_body = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# pprmc-kinds:") {
            kinds_hint = Some(rest.split_whitespace().map(str::to_string).collect());
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('.') {
            let mut it = rest.split_whitespace();
            let key = it.next().unwrap_or_default();
            let vals: Vec<&str> = it.collect();
            match key {
                "version" => {}
                "numvars" => {
                    numvars = Some(
                        vals.first()
                            .and_then(|v| v.parse().ok())
                            .ok_or_else(|| RealError::Header(line.to_string()))?,
                    )
                }
                "variables" => names = vals.iter().map(|s| s.to_string()).collect(),
                "inputs" | "outputs" | "inputbus" | "outputbus" | "state" | "module" => {}
                "constants" => {
                    constants = vals.first().map(|v| v.chars().collect()).unwrap_or_default()
                }
                "garbage" => {
                    garbage = vals.first().map(|v| v.chars().collect()).unwrap_or_default()
                }
                "begin" => in_body = true,
                "end" => in_body = false,
                _ => return Err(RealError::Header(line.to_string())),
            }
            continue;
        }
        if in_body {
            let mut it = line.split_whitespace();
            let head = it.next().unwrap_or_default();
            let arity: usize = head
                .strip_prefix('t')
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| RealError::Gate(lineno + 1, line.to_string()))?;
            let args: Vec<String> = it.map(str::to_string).collect();
            if args.len() != arity {
                return Err(RealError::Arity(lineno + 1, arity, args.len()));
            }
            gates.push((lineno + 1, args));
        }
    }

    let n = numvars.ok_or(RealError::MissingNumvars)?;
    if names.is_empty() {
        names = (0..n).map(|i| format!("x{}", i + 1)).collect();
    }
    if names.len() != n {
        return Err(RealError::NameCount(n, names.len()));
    }

    let lines: Vec<LineMeta> = (0..n)
        .map(|i| {
            let kind = match kinds_hint.as_ref().and_then(|k| k.get(i)).map(String::as_str) {
                Some("i") => LineKind::Input(names[i].clone()),
                Some("a") => LineKind::AncillaZero,
                Some("x") => LineKind::Auxiliary,
                Some("r") => LineKind::Result,
                _ => {
                    // No hint: constant-0 lines are work lines; the last
                    // such line is treated as the result.
                    let is_zero = constants.get(i) == Some(&'0');
                    let last_zero = constants.iter().rposition(|&c| c == '0');
                    if is_zero && last_zero == Some(i) {
                        LineKind::Result
                    } else if is_zero {
                        LineKind::AncillaZero
                    } else {
                        LineKind::Input(names[i].clone())
                    }
                }
            };
            let mut meta = LineMeta::new(kind);
            meta.garbage = matches!(garbage.get(i), Some('1') | Some('g'));
            meta
        })
        .collect();

    let mut circuit = Circuit::new(lines);
    for (lineno, args) in gates {
        let mut controls: Vec<(LineId, Polarity)> = Vec::new();
        let resolve = |name: &str| -> Result<LineId, RealError> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| RealError::UnknownVariable(lineno, name.to_string()))
        };
        for arg in &args[..args.len() - 1] {
            let (pol, name) = match arg.strip_prefix('-') {
                Some(rest) => (Polarity::Negative, rest),
                None => (Polarity::Positive, arg.as_str()),
            };
            controls.push((resolve(name)?, pol));
        }
        let target = resolve(&args[args.len() - 1])?;
        if controls.iter().any(|&(l, _)| l == target) {
            return Err(RealError::Gate(lineno, "control equals target".into()));
        }
        circuit.push(MctGate::new(controls, target));
    }
    Ok(circuit)
}
