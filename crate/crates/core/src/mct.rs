//! Lowering of an ordered term list to a multiple-control Toffoli
//! circuit.
//!
//! Product terms become one gate each on the result line, with per-literal
//! control polarity and the constant term an uncontrolled NOT. A factored
//! `(group)(v1 ⊕ .. ⊕ vl)` term becomes a CNOT chain accumulating the XOR
//! on the last listed variable, one group gate per product term of the
//! group, and the mirrored un-compute chain. Two cleanups follow: merging
//! common-target gate pairs whose positive control sets differ by one
//! line, and dropping trailing gates that only restore inputs.

use crate::circuit::{
    function_lines, Circuit, Gate, LineId, MctGate, NcvGate, Polarity,
};
use crate::error::SynthError;
use crate::pprm::{BoolFunction, GvTerm, ProductTerm, Term};
use crate::sim::{simulate_mct, simulate_ncv_semiclassical, SemiOutcome, SplitMix64};

fn line_of(var: u32) -> LineId {
    (var - 1) as LineId
}

/// Appends one gate per product term, targeting the result line.
pub fn synth_direct(
    terms: &[ProductTerm],
    c: &mut Circuit<MctGate>,
) -> Result<(), SynthError> {
    let result = c.result_line().ok_or(SynthError::Precondition("a result line"))?;
    for t in terms {
        let controls: Vec<(LineId, Polarity)> = t
            .literals()
            .iter()
            .map(|l| {
                if line_of(l.var) >= c.width() {
                    return Err(SynthError::VarOutOfRange {
                        var: l.var,
                        n: c.width() as u32 - 1,
                    });
                }
                Ok((
                    line_of(l.var),
                    if l.positive { Polarity::Positive } else { Polarity::Negative },
                ))
            })
            .collect::<Result<_, _>>()?;
        c.push(MctGate::new(controls, result));
    }
    Ok(())
}

/// Appends the cascade for one factored term: the CNOT chain over the
/// factor variables, a NOT on the accumulator when the constant entry is
/// present, the group gates, and the mirror. Group controls are listed
/// before the accumulator line, which decompositions treat as the work
/// side of the gate.
pub fn synth_gv(t: &GvTerm, c: &mut Circuit<MctGate>) -> Result<(), SynthError> {
    let result = c.result_line().ok_or(SynthError::Precondition("a result line"))?;
    if t.vars.len() < 2 {
        return Err(SynthError::Precondition("at least two factor entries"));
    }
    let vars: Vec<LineId> = t.vars.vars.iter().map(|&v| line_of(v)).collect();
    let acc = *vars.last().expect("non-empty factor variables");

    let chain: Vec<MctGate> = vars
        .windows(2)
        .map(|w| MctGate::new(vec![(w[0], Polarity::Positive)], w[1]))
        .collect();

    for g in &chain {
        c.push(g.clone());
    }
    if t.vars.plus_one {
        c.push(MctGate::new(vec![], acc));
    }
    for p in t.group.products() {
        let mut controls: Vec<(LineId, Polarity)> = p
            .literals()
            .iter()
            .map(|l| (line_of(l.var), Polarity::Positive))
            .collect();
        controls.push((acc, Polarity::Positive));
        c.push(MctGate::new(controls, result));
    }
    if t.vars.plus_one {
        c.push(MctGate::new(vec![], acc));
    }
    for g in chain.iter().rev() {
        c.push(g.clone());
    }
    Ok(())
}

/// Walks the term list in order, dispatching products to the direct
/// method and factored terms to the cascade form.
pub fn synth_terms(f: &BoolFunction) -> Result<Circuit<MctGate>, SynthError> {
    let mut c = Circuit::new(function_lines(f.n()));
    for t in f.terms() {
        match t {
            Term::Product(p) => synth_direct(std::slice::from_ref(p), &mut c)?,
            Term::Gv(gv) => synth_gv(gv, &mut c)?,
        }
    }
    Ok(c)
}

/// MCT gates commute when they share a target or touch disjoint lines.
fn mct_commute(a: &MctGate, b: &MctGate) -> bool {
    if a.target == b.target {
        return true;
    }
    let sa = a.support();
    b.support().iter().all(|l| !sa.contains(l))
}

/// Are the two gates a common-target pair whose positive control sets
/// nest with a one-line difference? Returns the merged gate.
fn ctr_merge(a: &MctGate, b: &MctGate) -> Option<MctGate> {
    if a.target != b.target || !a.all_positive() || !b.all_positive() {
        return None;
    }
    let (small, large) = if a.arity() + 1 == b.arity() {
        (a, b)
    } else if b.arity() + 1 == a.arity() {
        (b, a)
    } else {
        return None;
    };
    let small_lines: Vec<LineId> = small.control_lines().collect();
    let mut extra = None;
    for l in large.control_lines() {
        if !small_lines.contains(&l) {
            if extra.is_some() {
                return None;
            }
            extra = Some(l);
        }
    }
    let extra = extra?;
    let mut controls: Vec<(LineId, Polarity)> =
        small_lines.iter().map(|&l| (l, Polarity::Positive)).collect();
    controls.push((extra, Polarity::Negative));
    controls.sort_by_key(|&(l, _)| l);
    Some(MctGate::new(controls, small.target))
}

/// One left-to-right pass of the common-target merge. A later partner is
/// pulled next to the earlier gate when every gate in between commutes
/// with it; the merged gate carries one negative control and therefore
/// never merges again.
pub fn apply_ctr(c: &Circuit<MctGate>) -> Circuit<MctGate> {
    let mut gates = c.gates.clone();
    let mut i = 0;
    while i < gates.len() {
        let mut j = i + 1;
        while j < gates.len() {
            if let Some(merged) = ctr_merge(&gates[i], &gates[j]) {
                if gates[i + 1..j].iter().all(|k| mct_commute(k, &gates[j])) {
                    gates[i] = merged;
                    gates.remove(j);
                    continue;
                }
            }
            j += 1;
        }
        i += 1;
    }
    c.with_gates(gates)
}

/// Drops trailing gates whose target is not the result line. Nothing
/// follows them, so removing them only changes what the non-result lines
/// end up holding; those lines are flagged garbage by the caller.
pub fn elide_trailing<G: Gate>(c: &mut Circuit<G>) -> usize {
    let result = c.result_line();
    let mut dropped = 0;
    while let Some(last) = c.gates.last() {
        if Some(last.target()) == result {
            break;
        }
        c.gates.pop();
        dropped += 1;
    }
    dropped
}

/// Cap on exhaustive garbage sweeps; beyond it a seeded sample is used.
const GARBAGE_SWEEP_CAP: usize = 12;
const GARBAGE_SAMPLES: u64 = 256;

fn garbage_patterns(free: usize) -> Vec<u64> {
    if free <= GARBAGE_SWEEP_CAP {
        (0..(1u64 << free)).collect()
    } else {
        let mut rng = SplitMix64::new(0);
        (0..GARBAGE_SAMPLES).map(|_| rng.next()).collect()
    }
}

/// Flags every line whose final value can differ from its initial value.
pub fn mark_garbage_mct(c: &mut Circuit<MctGate>) {
    let free = c.free_input_lines();
    let result = c.result_line();
    let mut garbage = vec![false; c.width()];
    for pattern in garbage_patterns(free.len()) {
        let mut input = vec![false; c.width()];
        for (i, &l) in free.iter().enumerate() {
            input[l] = (pattern >> i) & 1 == 1;
        }
        let out = simulate_mct(c, &input).expect("width matches");
        for l in 0..c.width() {
            if Some(l) != result && out[l] != input[l] {
                garbage[l] = true;
            }
        }
    }
    for (l, meta) in c.lines.iter_mut().enumerate() {
        meta.garbage = garbage[l];
    }
}

/// NCV analogue: a line left in a rotated state is garbage too.
pub fn mark_garbage_ncv(c: &mut Circuit<NcvGate>) {
    let free = c.free_input_lines();
    let result = c.result_line();
    let mut garbage = vec![false; c.width()];
    for pattern in garbage_patterns(free.len()) {
        let mut input = vec![false; c.width()];
        for (i, &l) in free.iter().enumerate() {
            input[l] = (pattern >> i) & 1 == 1;
        }
        match simulate_ncv_semiclassical(c, &input).expect("width matches") {
            SemiOutcome::Bits(out) => {
                for l in 0..c.width() {
                    if Some(l) != result && out[l] != input[l] {
                        garbage[l] = true;
                    }
                }
            }
            SemiOutcome::NonClassical { .. } => {
                // The fast path cannot certify restoration; check each
                // non-result line on the sparse engine.
                if let Ok(sv) = crate::sim::simulate_ncv_sparse(c, &input) {
                    for l in 0..c.width() {
                        if Some(l) == result {
                            continue;
                        }
                        let p1 = sv.prob_one(l);
                        let init = input[l] && !c.lines[l].kind.forced_zero();
                        let restored = if init { p1 > 1.0 - 1e-9 } else { p1 < 1e-9 };
                        if !restored {
                            garbage[l] = true;
                        }
                    }
                }
            }
        }
    }
    for (l, meta) in c.lines.iter_mut().enumerate() {
        meta.garbage = garbage[l];
    }
}

/// Full MCT synthesis: term walk, common-target merging, trailing-gate
/// removal, garbage marking.
pub fn synth_function(f: &BoolFunction) -> Result<Circuit<MctGate>, SynthError> {
    let mut c = apply_ctr(&synth_terms(f)?);
    elide_trailing(&mut c);
    mark_garbage_mct(&mut c);
    Ok(c)
}
