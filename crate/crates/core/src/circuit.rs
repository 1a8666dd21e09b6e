//! Circuit representation: a fixed set of lines and a stage-homogeneous
//! gate list (multiple-control Toffoli gates, or NCV elementary gates).

use std::fmt;

/// 0-based circuit line index.
pub type LineId = usize;

/// Control condition: fire on |1⟩ (positive) or |0⟩ (negative).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn matches(self, bit: bool) -> bool {
        match self {
            Polarity::Positive => bit,
            Polarity::Negative => !bit,
        }
    }
}

/// What a line holds at circuit start and what it is for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineKind {
    /// Primary input, free to take either basis value.
    Input(String),
    /// Work line initialized to |0⟩.
    AncillaZero,
    /// Extra line added by decomposition; initial value arbitrary,
    /// restored by construction.
    Auxiliary,
    /// The |0⟩-initialized line the function result accumulates on.
    Result,
}

impl LineKind {
    /// Lines whose initial value is pinned to |0⟩.
    pub fn forced_zero(&self) -> bool {
        matches!(self, LineKind::AncillaZero | LineKind::Result)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineMeta {
    pub kind: LineKind,
    pub garbage: bool,
}

impl LineMeta {
    pub fn new(kind: LineKind) -> Self {
        LineMeta { kind, garbage: false }
    }
}

/// A NOT on `target` conditioned on every control matching its polarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MctGate {
    /// Control order is structural: decompositions put work lines last.
    pub controls: Vec<(LineId, Polarity)>,
    pub target: LineId,
}

impl MctGate {
    pub fn new(controls: Vec<(LineId, Polarity)>, target: LineId) -> Self {
        debug_assert!(controls.iter().all(|&(l, _)| l != target));
        debug_assert!({
            let mut lines: Vec<_> = controls.iter().map(|&(l, _)| l).collect();
            lines.sort_unstable();
            lines.windows(2).all(|w| w[0] != w[1])
        });
        MctGate { controls, target }
    }

    pub fn arity(&self) -> usize {
        self.controls.len()
    }

    pub fn all_positive(&self) -> bool {
        self.controls.iter().all(|&(_, p)| p == Polarity::Positive)
    }

    pub fn control_lines(&self) -> impl Iterator<Item = LineId> + '_ {
        self.controls.iter().map(|&(l, _)| l)
    }

    pub fn fires(&self, bits: &[bool]) -> bool {
        self.controls.iter().all(|&(l, p)| p.matches(bits[l]))
    }
}

/// Elementary gate kinds of the NCV library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NcvKind {
    Not,
    Cnot,
    /// Controlled square root of NOT.
    CV,
    /// Controlled inverse square root of NOT.
    CVdag,
}

/// An NCV gate: NOT has no control, the rest exactly one (possibly
/// negative) control.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcvGate {
    pub kind: NcvKind,
    pub control: Option<(LineId, Polarity)>,
    pub target: LineId,
}

impl NcvGate {
    pub fn not(target: LineId) -> Self {
        NcvGate { kind: NcvKind::Not, control: None, target }
    }

    pub fn cnot(control: LineId, pol: Polarity, target: LineId) -> Self {
        debug_assert_ne!(control, target);
        NcvGate { kind: NcvKind::Cnot, control: Some((control, pol)), target }
    }

    pub fn cv(control: LineId, pol: Polarity, target: LineId) -> Self {
        debug_assert_ne!(control, target);
        NcvGate { kind: NcvKind::CV, control: Some((control, pol)), target }
    }

    pub fn cvdag(control: LineId, pol: Polarity, target: LineId) -> Self {
        debug_assert_ne!(control, target);
        NcvGate { kind: NcvKind::CVdag, control: Some((control, pol)), target }
    }

    pub fn control_line(&self) -> Option<LineId> {
        self.control.map(|(l, _)| l)
    }

    pub fn has_negative_control(&self) -> bool {
        matches!(self.control, Some((_, Polarity::Negative)))
    }
}

/// Common interface for gate kinds stored in a [`Circuit`].
pub trait Gate: Clone {
    fn target(&self) -> LineId;
    /// Every line the gate touches.
    fn support(&self) -> Vec<LineId>;
}

impl Gate for MctGate {
    fn target(&self) -> LineId {
        self.target
    }

    fn support(&self) -> Vec<LineId> {
        let mut s: Vec<LineId> = self.control_lines().collect();
        s.push(self.target);
        s
    }
}

impl Gate for NcvGate {
    fn target(&self) -> LineId {
        self.target
    }

    fn support(&self) -> Vec<LineId> {
        match self.control {
            Some((c, _)) => vec![c, self.target],
            None => vec![self.target],
        }
    }
}

/// Fixed-width line list plus an ordered gate sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit<G: Gate> {
    pub lines: Vec<LineMeta>,
    pub gates: Vec<G>,
}

impl<G: Gate> Circuit<G> {
    pub fn new(lines: Vec<LineMeta>) -> Self {
        Circuit { lines, gates: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.lines.len()
    }

    /// The unique result line.
    pub fn result_line(&self) -> Option<LineId> {
        self.lines.iter().position(|m| matches!(m.kind, LineKind::Result))
    }

    /// Lines enumerated by equivalence sweeps (everything not pinned to 0).
    pub fn free_input_lines(&self) -> Vec<LineId> {
        (0..self.width())
            .filter(|&l| !self.lines[l].kind.forced_zero())
            .collect()
    }

    pub fn push(&mut self, gate: G) {
        debug_assert!(gate.support().iter().all(|&l| l < self.width()));
        self.gates.push(gate);
    }

    /// Rebuilds with a different gate list over the same lines.
    pub fn with_gates<H: Gate>(&self, gates: Vec<H>) -> Circuit<H> {
        Circuit { lines: self.lines.clone(), gates }
    }
}

/// A standard line layout: `n` named inputs followed by one result line.
pub fn function_lines(n: u32) -> Vec<LineMeta> {
    let mut lines: Vec<LineMeta> = (1..=n)
        .map(|i| LineMeta::new(LineKind::Input(format!("x{i}"))))
        .collect();
    lines.push(LineMeta::new(LineKind::Result));
    lines
}

impl fmt::Display for MctGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t(")?;
        for (i, &(l, p)) in self.controls.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if p == Polarity::Negative {
                write!(f, "~")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ";{})", self.target)
    }
}

impl fmt::Display for NcvGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            NcvKind::Not => "not",
            NcvKind::Cnot => "cnot",
            NcvKind::CV => "v",
            NcvKind::CVdag => "v+",
        };
        match self.control {
            Some((c, p)) => write!(
                f,
                "{name}({}{c};{})",
                if p == Polarity::Negative { "~" } else { "" },
                self.target
            ),
            None => write!(f, "{name}({})", self.target),
        }
    }
}
