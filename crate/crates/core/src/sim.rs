//! Simulation and equivalence engines.
//!
//! Three engines with increasing cost: classical bit simulation for MCT
//! circuits, a semi-classical fast path for NCV circuits that tracks each
//! line in {|0⟩, V|0⟩, |1⟩, V|1⟩}, and a dense state-vector engine used as
//! ground truth and as the per-input fallback when the fast path meets a
//! control in a rotated state.

use crate::circuit::{Circuit, LineId, MctGate, NcvGate, NcvKind, Polarity};
use crate::error::SynthError;
use crate::pprm::BoolFunction;
use num_complex::Complex64;

/// Square root of NOT. V² = X, V·V† = I.
pub const V_MATRIX: [[Complex64; 2]; 2] = [
    [Complex64::new(0.5, 0.5), Complex64::new(0.5, -0.5)],
    [Complex64::new(0.5, -0.5), Complex64::new(0.5, 0.5)],
];

/// Conjugate transpose of [`V_MATRIX`].
pub const VDAG_MATRIX: [[Complex64; 2]; 2] = [
    [Complex64::new(0.5, -0.5), Complex64::new(0.5, 0.5)],
    [Complex64::new(0.5, 0.5), Complex64::new(0.5, -0.5)],
];

pub const X_MATRIX: [[Complex64; 2]; 2] = [
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
];

/// Applies an MCT circuit to classical bits. Lines pinned to |0⟩ are
/// forced to 0 before the sweep.
pub fn simulate_mct(c: &Circuit<MctGate>, input: &[bool]) -> Result<Vec<bool>, SynthError> {
    if input.len() != c.width() {
        return Err(SynthError::AssignmentLength { got: input.len(), want: c.width() });
    }
    let mut bits = input.to_vec();
    for (l, meta) in c.lines.iter().enumerate() {
        if meta.kind.forced_zero() {
            bits[l] = false;
        }
    }
    for g in &c.gates {
        if g.fires(&bits) {
            bits[g.target] = !bits[g.target];
        }
    }
    Ok(bits)
}

/// Per-line state of the semi-classical NCV engine: the orbit of V acting
/// on the basis states. V cycles 0 → v0 → 1 → v1 → 0; X swaps 0↔1 and
/// v0↔v1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiState {
    Zero,
    VZero,
    One,
    VOne,
}

impl SemiState {
    fn classical(self) -> Option<bool> {
        match self {
            SemiState::Zero => Some(false),
            SemiState::One => Some(true),
            _ => None,
        }
    }

    fn apply_v(self) -> SemiState {
        match self {
            SemiState::Zero => SemiState::VZero,
            SemiState::VZero => SemiState::One,
            SemiState::One => SemiState::VOne,
            SemiState::VOne => SemiState::Zero,
        }
    }

    fn apply_vdag(self) -> SemiState {
        match self {
            SemiState::VZero => SemiState::Zero,
            SemiState::One => SemiState::VZero,
            SemiState::VOne => SemiState::One,
            SemiState::Zero => SemiState::VOne,
        }
    }

    fn apply_x(self) -> SemiState {
        match self {
            SemiState::Zero => SemiState::One,
            SemiState::One => SemiState::Zero,
            SemiState::VZero => SemiState::VOne,
            SemiState::VOne => SemiState::VZero,
        }
    }
}

/// Result of the fast path: final classical bits, or the index of the
/// first gate whose control was caught in a rotated state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemiOutcome {
    Bits(Vec<bool>),
    NonClassical { gate_index: usize },
}

/// Runs the fast path as far as it goes: the per-line states after the
/// longest prefix with classical fired controls, plus the index of the
/// gate (if any) that stopped it.
fn semiclassical_prefix(
    c: &Circuit<NcvGate>,
    input: &[bool],
) -> Result<(Vec<SemiState>, Option<usize>), SynthError> {
    if input.len() != c.width() {
        return Err(SynthError::AssignmentLength { got: input.len(), want: c.width() });
    }
    let mut state: Vec<SemiState> = input
        .iter()
        .map(|&b| if b { SemiState::One } else { SemiState::Zero })
        .collect();
    for (l, meta) in c.lines.iter().enumerate() {
        if meta.kind.forced_zero() {
            state[l] = SemiState::Zero;
        }
    }
    for (i, g) in c.gates.iter().enumerate() {
        let fire = match g.control {
            None => true,
            Some((cl, pol)) => match state[cl].classical() {
                Some(bit) => pol.matches(bit),
                None => return Ok((state, Some(i))),
            },
        };
        if !fire {
            continue;
        }
        state[g.target] = match g.kind {
            NcvKind::Not | NcvKind::Cnot => state[g.target].apply_x(),
            NcvKind::CV => state[g.target].apply_v(),
            NcvKind::CVdag => state[g.target].apply_vdag(),
        };
    }
    Ok((state, None))
}

/// Semi-classical NCV simulation. Sound whenever it returns bits: every
/// fired control was classical, so the state stayed in the product orbit.
pub fn simulate_ncv_semiclassical(
    c: &Circuit<NcvGate>,
    input: &[bool],
) -> Result<SemiOutcome, SynthError> {
    let (state, stuck) = semiclassical_prefix(c, input)?;
    if let Some(gate_index) = stuck {
        return Ok(SemiOutcome::NonClassical { gate_index });
    }
    let mut bits = Vec::with_capacity(state.len());
    for (i, s) in state.iter().enumerate() {
        match s.classical() {
            Some(b) => bits.push(b),
            None => {
                // Final state is not a basis state; report the line via a
                // sentinel of the last gate touching it.
                let gate_index = c
                    .gates
                    .iter()
                    .rposition(|g| g.target == i)
                    .unwrap_or(c.gates.len().saturating_sub(1));
                return Ok(SemiOutcome::NonClassical { gate_index });
            }
        }
    }
    Ok(SemiOutcome::Bits(bits))
}

/// Sparse amplitude map over basis states. Circuits synthesized here keep
/// the support tiny (entangling gates come in compute/un-compute pairs),
/// so this tracks exact amplitudes at a cost proportional to the live
/// support instead of 2^w.
#[derive(Debug, Clone)]
pub struct SparseState {
    pub amplitudes: std::collections::HashMap<u64, Complex64>,
}

impl SparseState {
    /// Product state from semi-classical per-line states.
    fn from_semistates(states: &[SemiState]) -> SparseState {
        // V|0> = (1+i)/2 |0> + (1-i)/2 |1>, V|1> the mirror image.
        let p = Complex64::new(0.5, 0.5);
        let m = Complex64::new(0.5, -0.5);
        let mut amplitudes = std::collections::HashMap::new();
        amplitudes.insert(0u64, Complex64::new(1.0, 0.0));
        for (l, s) in states.iter().enumerate() {
            let bit = 1u64 << l;
            let mut next = std::collections::HashMap::with_capacity(amplitudes.len() * 2);
            for (&idx, &amp) in &amplitudes {
                match s {
                    SemiState::Zero => {
                        next.insert(idx, amp);
                    }
                    SemiState::One => {
                        next.insert(idx | bit, amp);
                    }
                    SemiState::VZero => {
                        next.insert(idx, amp * p);
                        next.insert(idx | bit, amp * m);
                    }
                    SemiState::VOne => {
                        next.insert(idx, amp * m);
                        next.insert(idx | bit, amp * p);
                    }
                }
            }
            amplitudes = next;
        }
        SparseState { amplitudes }
    }

    fn apply(&mut self, matrix: &[[Complex64; 2]; 2], control: Option<(LineId, Polarity)>, target: LineId) {
        let tbit = 1u64 << target;
        let mut next: std::collections::HashMap<u64, Complex64> =
            std::collections::HashMap::with_capacity(self.amplitudes.len() * 2);
        for (&idx, &amp) in &self.amplitudes {
            let fire = match control {
                None => true,
                Some((cl, pol)) => pol.matches(idx & (1 << cl) != 0),
            };
            if !fire {
                *next.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += amp;
                continue;
            }
            let bit = usize::from(idx & tbit != 0);
            let base = idx & !tbit;
            let a0 = matrix[0][bit] * amp;
            let a1 = matrix[1][bit] * amp;
            if a0.norm_sqr() > 1e-24 {
                *next.entry(base).or_insert(Complex64::new(0.0, 0.0)) += a0;
            }
            if a1.norm_sqr() > 1e-24 {
                *next.entry(base | tbit).or_insert(Complex64::new(0.0, 0.0)) += a1;
            }
        }
        next.retain(|_, a| a.norm_sqr() > 1e-20);
        self.amplitudes = next;
    }

    fn apply_ncv(&mut self, g: &NcvGate) {
        let m = match g.kind {
            NcvKind::Not | NcvKind::Cnot => &X_MATRIX,
            NcvKind::CV => &V_MATRIX,
            NcvKind::CVdag => &VDAG_MATRIX,
        };
        self.apply(m, g.control, g.target);
    }

    /// Probability that `line` reads 1.
    pub fn prob_one(&self, line: LineId) -> f64 {
        let bit = 1u64 << line;
        self.amplitudes
            .iter()
            .filter(|(&idx, _)| idx & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// The single basis index carrying all amplitude, if the state is
    /// (numerically) a basis state.
    pub fn as_basis(&self) -> Option<u64> {
        let mut found = None;
        for (&idx, a) in &self.amplitudes {
            if a.norm_sqr() > 1e-9 {
                if found.is_some() {
                    return None;
                }
                found = Some(idx);
            }
        }
        found.filter(|&idx| {
            self.amplitudes
                .get(&idx)
                .is_some_and(|a| (a.norm_sqr() - 1.0).abs() < 1e-9)
        })
    }
}

/// Exact simulation from a basis input: the semi-classical prefix runs
/// first, and the sparse engine takes over at the first rotated control.
pub fn simulate_ncv_sparse(
    c: &Circuit<NcvGate>,
    input: &[bool],
) -> Result<SparseState, SynthError> {
    let (states, stuck) = semiclassical_prefix(c, input)?;
    let mut sparse = SparseState::from_semistates(&states);
    if let Some(from) = stuck {
        for g in &c.gates[from..] {
            sparse.apply_ncv(g);
        }
    }
    Ok(sparse)
}

/// Dense state-vector engine.
pub struct StateVector {
    pub width: usize,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Basis state for packed little-endian input bits.
    pub fn basis(width: usize, input: &[bool]) -> StateVector {
        let mut index = 0usize;
        for (i, &b) in input.iter().enumerate() {
            if b {
                index |= 1 << i;
            }
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << width];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector { width, amplitudes }
    }

    /// Applies a single-qubit matrix to `target`, restricted to basis
    /// states where the optional control matches.
    pub fn apply_controlled(
        &mut self,
        matrix: &[[Complex64; 2]; 2],
        control: Option<(LineId, Polarity)>,
        target: LineId,
    ) {
        let tbit = 1usize << target;
        for idx in 0..self.amplitudes.len() {
            if idx & tbit != 0 {
                continue; // visit each (t=0, t=1) pair once
            }
            if let Some((cl, pol)) = control {
                let bit = idx & (1 << cl) != 0;
                if !pol.matches(bit) {
                    continue;
                }
            }
            let a0 = self.amplitudes[idx];
            let a1 = self.amplitudes[idx | tbit];
            self.amplitudes[idx] = matrix[0][0] * a0 + matrix[0][1] * a1;
            self.amplitudes[idx | tbit] = matrix[1][0] * a0 + matrix[1][1] * a1;
        }
    }

    pub fn apply_ncv(&mut self, g: &NcvGate) {
        let m = match g.kind {
            NcvKind::Not | NcvKind::Cnot => &X_MATRIX,
            NcvKind::CV => &V_MATRIX,
            NcvKind::CVdag => &VDAG_MATRIX,
        };
        self.apply_controlled(m, g.control, g.target);
    }

    pub fn apply_mct(&mut self, g: &MctGate) {
        // Permutation gate: swap amplitude pairs where all controls match.
        let tbit = 1usize << g.target;
        for idx in 0..self.amplitudes.len() {
            if idx & tbit != 0 {
                continue;
            }
            let fires = g.controls.iter().all(|&(l, p)| p.matches(idx & (1 << l) != 0));
            if fires {
                self.amplitudes.swap(idx, idx | tbit);
            }
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Probability that `line` reads 1.
    pub fn prob_one(&self, line: LineId) -> f64 {
        let bit = 1usize << line;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// Default width cap for dense simulation.
pub const DEFAULT_STATEVECTOR_CAP: usize = 14;

/// Dense simulation of an NCV circuit from a basis input.
pub fn simulate_statevector(
    c: &Circuit<NcvGate>,
    input: &[bool],
    cap: usize,
) -> Result<StateVector, SynthError> {
    if c.width() > cap {
        return Err(SynthError::WidthCap(c.width(), cap));
    }
    if input.len() != c.width() {
        return Err(SynthError::AssignmentLength { got: input.len(), want: c.width() });
    }
    let mut bits = input.to_vec();
    for (l, meta) in c.lines.iter().enumerate() {
        if meta.kind.forced_zero() {
            bits[l] = false;
        }
    }
    let mut sv = StateVector::basis(c.width(), &bits);
    for g in &c.gates {
        sv.apply_ncv(g);
    }
    debug_assert!((sv.norm() - 1.0).abs() < 1e-12, "norm drift");
    Ok(sv)
}

/// How an equivalence sweep covered the input space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EquivalenceStatus {
    Equivalent,
    Counterexample { input: Vec<bool>, expected: bool, got: Option<bool> },
    NonClassical { gate_index: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub status: EquivalenceStatus,
    pub inputs_checked: u64,
    pub mode: SweepMode,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        matches!(self.status, EquivalenceStatus::Equivalent)
    }
}

/// Reads the result bit of an NCV circuit on one basis input: fast path
/// first, sparse continuation when a control went non-classical.
pub fn ncv_result_bit(
    c: &Circuit<NcvGate>,
    input: &[bool],
    result: LineId,
) -> Result<Option<bool>, SynthError> {
    match simulate_ncv_semiclassical(c, input)? {
        SemiOutcome::Bits(bits) => Ok(Some(bits[result])),
        SemiOutcome::NonClassical { .. } => {
            let sparse = simulate_ncv_sparse(c, input)?;
            let p1 = sparse.prob_one(result);
            if p1 > 1.0 - 1e-9 {
                Ok(Some(true))
            } else if p1 < 1e-9 {
                Ok(Some(false))
            } else {
                Ok(None) // result line entangled: not a function of the input
            }
        }
    }
}

/// Assignment iterator over the circuit's free lines: function variables
/// map to the first `n` lines, every other non-pinned line (auxiliary
/// work lines) is enumerated too so dirty lines are covered.
fn inputs_for(c_width: usize, free: &[LineId], pattern: u64) -> Vec<bool> {
    let mut input = vec![false; c_width];
    for (i, &l) in free.iter().enumerate() {
        input[l] = (pattern >> i) & 1 == 1;
    }
    input
}

/// Exhaustive (or seeded-sample) comparison of a circuit's result line
/// against `f`. Exhaustive while the free-line count stays within
/// `exhaustive_cap` bits; sampled with `samples` pseudo-random patterns
/// otherwise.
pub fn check_equivalence_ncv(
    c: &Circuit<NcvGate>,
    f: &BoolFunction,
    exhaustive_cap: u32,
    seed: u64,
    samples: u64,
) -> Result<EquivalenceReport, SynthError> {
    let result = c.result_line().ok_or(SynthError::Precondition("a result line"))?;
    let free = c.free_input_lines();
    let n = f.n() as usize;
    let eval_input = |input: &Vec<bool>| -> Result<bool, SynthError> {
        let assignment: Vec<bool> = (0..n).map(|i| input[i]).collect();
        f.evaluate(&assignment)
    };

    if (free.len() as u32) <= exhaustive_cap {
        let total = 1u64 << free.len();
        for pattern in 0..total {
            let input = inputs_for(c.width(), &free, pattern);
            let expected = eval_input(&input)?;
            let got = ncv_result_bit(c, &input, result)?;
            if got != Some(expected) {
                return Ok(EquivalenceReport {
                    status: EquivalenceStatus::Counterexample { input, expected, got },
                    inputs_checked: pattern + 1,
                    mode: SweepMode::Exhaustive,
                });
            }
        }
        Ok(EquivalenceReport {
            status: EquivalenceStatus::Equivalent,
            inputs_checked: total,
            mode: SweepMode::Exhaustive,
        })
    } else {
        let mut rng = SplitMix64::new(seed);
        for k in 0..samples {
            let pattern = rng.next();
            let input = inputs_for(c.width(), &free, pattern);
            let expected = eval_input(&input)?;
            let got = ncv_result_bit(c, &input, result)?;
            if got != Some(expected) {
                return Ok(EquivalenceReport {
                    status: EquivalenceStatus::Counterexample { input, expected, got },
                    inputs_checked: k + 1,
                    mode: SweepMode::Sampled,
                });
            }
        }
        Ok(EquivalenceReport {
            status: EquivalenceStatus::Equivalent,
            inputs_checked: samples,
            mode: SweepMode::Sampled,
        })
    }
}

/// MCT-stage analogue of [`check_equivalence_ncv`].
pub fn check_equivalence_mct(
    c: &Circuit<MctGate>,
    f: &BoolFunction,
    exhaustive_cap: u32,
    seed: u64,
    samples: u64,
) -> Result<EquivalenceReport, SynthError> {
    let result = c.result_line().ok_or(SynthError::Precondition("a result line"))?;
    let free = c.free_input_lines();
    let n = f.n() as usize;
    let run = |pattern: u64| -> Result<Option<(Vec<bool>, bool, Option<bool>)>, SynthError> {
        let input = inputs_for(c.width(), &free, pattern);
        let assignment: Vec<bool> = (0..n).map(|i| input[i]).collect();
        let expected = f.evaluate(&assignment)?;
        let got = simulate_mct(c, &input)?[result];
        if got != expected {
            return Ok(Some((input, expected, Some(got))));
        }
        Ok(None)
    };
    if (free.len() as u32) <= exhaustive_cap {
        let total = 1u64 << free.len();
        for pattern in 0..total {
            if let Some((input, expected, got)) = run(pattern)? {
                return Ok(EquivalenceReport {
                    status: EquivalenceStatus::Counterexample { input, expected, got },
                    inputs_checked: pattern + 1,
                    mode: SweepMode::Exhaustive,
                });
            }
        }
        Ok(EquivalenceReport {
            status: EquivalenceStatus::Equivalent,
            inputs_checked: total,
            mode: SweepMode::Exhaustive,
        })
    } else {
        let mut rng = SplitMix64::new(seed);
        for k in 0..samples {
            if let Some((input, expected, got)) = run(rng.next())? {
                return Ok(EquivalenceReport {
                    status: EquivalenceStatus::Counterexample { input, expected, got },
                    inputs_checked: k + 1,
                    mode: SweepMode::Sampled,
                });
            }
        }
        Ok(EquivalenceReport {
            status: EquivalenceStatus::Equivalent,
            inputs_checked: samples,
            mode: SweepMode::Sampled,
        })
    }
}

/// Builds the full unitary of an NCV circuit column by column.
pub fn ncv_unitary(c: &Circuit<NcvGate>, cap: usize) -> Result<Vec<Vec<Complex64>>, SynthError> {
    if c.width() > cap {
        return Err(SynthError::WidthCap(c.width(), cap));
    }
    let dim = 1usize << c.width();
    let mut cols = Vec::with_capacity(dim);
    for k in 0..dim {
        let bits: Vec<bool> = (0..c.width()).map(|i| (k >> i) & 1 == 1).collect();
        let mut sv = StateVector::basis(c.width(), &bits);
        for g in &c.gates {
            sv.apply_ncv(g);
        }
        cols.push(sv.amplitudes);
    }
    Ok(cols)
}

/// Dense unitaries compared up to global phase: the phase is read off the
/// first entry above tolerance and divided out.
pub fn check_unitary_equiv(
    c1: &Circuit<NcvGate>,
    c2: &Circuit<NcvGate>,
    tol: f64,
) -> Result<bool, SynthError> {
    if c1.width() != c2.width() {
        return Err(SynthError::WidthMismatch(c1.width(), c2.width()));
    }
    let u1 = ncv_unitary(c1, 10)?;
    let u2 = ncv_unitary(c2, 10)?;
    unitaries_equal_up_to_phase(&u1, &u2, tol)
}

pub fn unitaries_equal_up_to_phase(
    u1: &[Vec<Complex64>],
    u2: &[Vec<Complex64>],
    tol: f64,
) -> Result<bool, SynthError> {
    let mut phase: Option<Complex64> = None;
    for (col1, col2) in u1.iter().zip(u2) {
        for (a, b) in col1.iter().zip(col2) {
            if phase.is_none() && (a.norm() > 1e-6 || b.norm() > 1e-6) {
                if a.norm() < 1e-12 {
                    return Ok(false);
                }
                phase = Some(b / a);
            }
            if let Some(p) = phase {
                if (a * p - b).norm() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Deterministic 64-bit generator for sampled sweeps.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed.wrapping_add(0x9E3779B97F4A7C15) }
    }

    pub fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
}
