//! Boolean functions as ordered XOR lists of product terms and factored
//! `(group)(vars)` terms.
//!
//! Term order is preserved everywhere: XOR semantics do not depend on it,
//! but synthesis cost does, and the reorder stage exists precisely to pick
//! a good order. Product terms keep their literals sorted by variable
//! index so that structural equality is also set equality.

mod parse;

pub use parse::parse_pprm;

use crate::error::{ParseError, SynthError};
use std::fmt;

/// A possibly complemented variable. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, positive: false }
    }
}

/// AND of literals; the empty product is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductTerm {
    literals: Vec<Literal>,
}

impl ProductTerm {
    /// Builds a term from literals, sorting by variable index.
    /// Rejects repeated variables (including `x ~x` pairs).
    pub fn new(mut literals: Vec<Literal>) -> Result<Self, ParseError> {
        literals.sort();
        for pair in literals.windows(2) {
            if pair[0].var == pair[1].var {
                return Err(ParseError::RepeatedVar { var: pair[0].var, pos: 0 });
            }
        }
        Ok(ProductTerm { literals })
    }

    /// The constant-1 term.
    pub fn one() -> Self {
        ProductTerm { literals: Vec::new() }
    }

    pub fn from_vars(vars: &[u32]) -> Self {
        ProductTerm::new(vars.iter().map(|&v| Literal::pos(v)).collect())
            .expect("distinct variables")
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn degree(&self) -> usize {
        self.literals.len()
    }

    pub fn is_one(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn all_positive(&self) -> bool {
        self.literals.iter().all(|l| l.positive)
    }

    pub fn max_var(&self) -> u32 {
        self.literals.iter().map(|l| l.var).max().unwrap_or(0)
    }

    pub fn contains_var(&self, var: u32) -> bool {
        self.literals.iter().any(|l| l.var == var)
    }

    /// Removes `var` from the term; no-op if absent.
    pub fn without_var(&self, var: u32) -> ProductTerm {
        ProductTerm {
            literals: self.literals.iter().copied().filter(|l| l.var != var).collect(),
        }
    }

    /// AND of two products. `None` when a variable occurs with both
    /// polarities (the product is identically 0).
    pub fn and(&self, other: &ProductTerm) -> Option<ProductTerm> {
        let mut lits = self.literals.clone();
        for &l in &other.literals {
            match lits.iter().find(|m| m.var == l.var) {
                Some(m) if m.positive == l.positive => {}
                Some(_) => return None,
                None => lits.push(l),
            }
        }
        lits.sort();
        Some(ProductTerm { literals: lits })
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.literals
            .iter()
            .all(|l| assignment[(l.var - 1) as usize] == l.positive)
    }
}

/// XOR of single positive variables, optionally plus the constant 1.
/// Order is preserved: synthesis chains CNOTs in this order and stores
/// the accumulated value on the last variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorVars {
    pub vars: Vec<u32>,
    pub plus_one: bool,
}

impl FactorVars {
    pub fn new(vars: Vec<u32>, plus_one: bool) -> Self {
        FactorVars { vars, plus_one }
    }

    /// Entry count; the constant-1 entry counts.
    pub fn len(&self) -> usize {
        self.vars.len() + usize::from(self.plus_one)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Variable set irrespective of order, used for grouping and equality
    /// up to commutativity.
    pub fn sorted_vars(&self) -> Vec<u32> {
        let mut v = self.vars.clone();
        v.sort_unstable();
        v
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        let mut acc = self.plus_one;
        for &v in &self.vars {
            acc ^= assignment[(v - 1) as usize];
        }
        acc
    }
}

/// The factor-group side of a `(group)(vars)` term.
///
/// `Xor` covers an XOR of product terms: a single product, a single
/// literal and an XOR of literals are the degenerate shapes used by the
/// form classification. `LitXor` is the nested shape `x(v1 ⊕ v2 ⊕ ..)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Group {
    Xor(Vec<ProductTerm>),
    LitXor(u32, FactorVars),
}

impl Group {
    /// Every variable occurring in the group.
    pub fn vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        match self {
            Group::Xor(terms) => {
                for t in terms {
                    out.extend(t.literals().iter().map(|l| l.var));
                }
            }
            Group::LitXor(lit, inner) => {
                out.push(*lit);
                out.extend(inner.vars.iter().copied());
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn max_var(&self) -> u32 {
        self.vars().last().copied().unwrap_or(0)
    }

    /// Expands the group into plain product terms (distributing the
    /// nested literal over its XOR).
    pub fn products(&self) -> Vec<ProductTerm> {
        match self {
            Group::Xor(terms) => terms.clone(),
            Group::LitXor(lit, inner) => {
                let mut out: Vec<ProductTerm> = inner
                    .vars
                    .iter()
                    .map(|&v| {
                        ProductTerm::new(vec![Literal::pos(*lit), Literal::pos(v)])
                            .expect("lit and inner var distinct")
                    })
                    .collect();
                if inner.plus_one {
                    out.push(ProductTerm::from_vars(&[*lit]));
                }
                out
            }
        }
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            Group::Xor(terms) => terms.iter().fold(false, |acc, t| acc ^ t.eval(assignment)),
            Group::LitXor(lit, inner) => {
                assignment[(*lit - 1) as usize] && inner.eval(assignment)
            }
        }
    }
}

/// A factored term `(group)(v1 ⊕ .. ⊕ vl [⊕ 1])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GvTerm {
    pub group: Group,
    pub vars: FactorVars,
}

impl GvTerm {
    /// Validates the group/vars split: at least two factor entries, no
    /// repeated factor variable, and no variable shared between the two
    /// sides.
    pub fn new(group: Group, vars: FactorVars) -> Result<Self, ParseError> {
        if vars.len() < 2 {
            return Err(ParseError::ShortFactorVars);
        }
        let sorted = vars.sorted_vars();
        if let Some(dup) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(ParseError::RepeatedVar { var: dup[0], pos: 0 });
        }
        let gvars = group.vars();
        for &v in &vars.vars {
            if gvars.binary_search(&v).is_ok() {
                return Err(ParseError::OverlappingVars { var: v });
            }
        }
        Ok(GvTerm { group, vars })
    }

    /// Factor-variable entry count (`LenF`).
    pub fn len_f(&self) -> usize {
        self.vars.len()
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.group.eval(assignment) && self.vars.eval(assignment)
    }

    pub fn max_var(&self) -> u32 {
        self.group
            .max_var()
            .max(self.vars.vars.iter().copied().max().unwrap_or(0))
    }
}

/// One addend of the XOR list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Product(ProductTerm),
    Gv(GvTerm),
}

impl Term {
    /// Builds a `(group)(vars)` term, collapsing the degenerate cases
    /// (one factor entry, or constant-only vars) back into products.
    pub fn gv_or_collapse(group: Group, vars: FactorVars) -> Result<Vec<Term>, ParseError> {
        if vars.len() >= 2 {
            return Ok(vec![Term::Gv(GvTerm::new(group, vars)?)]);
        }
        // (g)(x) = gx and (g)(1) = g: distribute over the group products.
        let mut out = Vec::new();
        for p in group.products() {
            let q = match vars.vars.first() {
                Some(&v) => p
                    .and(&ProductTerm::from_vars(&[v]))
                    .ok_or(ParseError::OverlappingVars { var: v })?,
                None if vars.plus_one => p,
                None => continue,
            };
            out.push(Term::Product(q));
        }
        Ok(out)
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            Term::Product(p) => p.eval(assignment),
            Term::Gv(g) => g.eval(assignment),
        }
    }

    pub fn max_var(&self) -> u32 {
        match self {
            Term::Product(p) => p.max_var(),
            Term::Gv(g) => g.max_var(),
        }
    }
}

/// A Boolean function: XOR of `terms` over variables `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolFunction {
    n: u32,
    terms: Vec<Term>,
}

impl BoolFunction {
    pub fn new(n: u32, terms: Vec<Term>) -> Result<Self, ParseError> {
        for t in &terms {
            let m = t.max_var();
            if m > n {
                return Err(ParseError::VarOutOfRange { var: m, n });
            }
        }
        Ok(BoolFunction { n, terms })
    }

    pub fn zero(n: u32) -> Self {
        BoolFunction { n, terms: Vec::new() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    /// Rebuilds with the same width; callers guarantee the terms already
    /// fit (all transformations in this crate keep variables in range).
    pub(crate) fn with_terms(&self, terms: Vec<Term>) -> BoolFunction {
        BoolFunction { n: self.n, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// XOR over all terms at one input assignment.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, SynthError> {
        if assignment.len() != self.n as usize {
            return Err(SynthError::AssignmentLength {
                got: assignment.len(),
                want: self.n as usize,
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(false, |acc, t| acc ^ t.eval(assignment)))
    }

    /// Truth table as a bit list in input order (index = little-endian
    /// packed assignment, x1 the least significant bit).
    pub fn truth_table(&self) -> Result<Vec<bool>, SynthError> {
        let n = self.n as usize;
        let mut out = Vec::with_capacity(1 << n);
        let mut assignment = vec![false; n];
        for input in 0u64..(1u64 << n) {
            for (i, slot) in assignment.iter_mut().enumerate() {
                *slot = (input >> i) & 1 == 1;
            }
            out.push(self.evaluate(&assignment)?);
        }
        Ok(out)
    }

    /// Cancels identical term pairs (t ⊕ t = 0), keeping the first
    /// occurrence of every term that survives with odd multiplicity.
    pub fn normalize(&self) -> BoolFunction {
        let mut kept: Vec<(Term, bool)> = Vec::new();
        'outer: for t in &self.terms {
            for (seen, alive) in kept.iter_mut() {
                if seen == t {
                    *alive = !*alive;
                    continue 'outer;
                }
            }
            kept.push((t.clone(), true));
        }
        self.with_terms(
            kept.into_iter()
                .filter_map(|(t, alive)| alive.then_some(t))
                .collect(),
        )
    }

    /// Distributes every `(group)(vars)` term into plain product terms and
    /// normalizes. Inverse of factorization; used as a test oracle.
    pub fn expand(&self) -> BoolFunction {
        let mut terms = Vec::new();
        for t in &self.terms {
            match t {
                Term::Product(p) => terms.push(Term::Product(p.clone())),
                Term::Gv(gv) => {
                    for g in gv.group.products() {
                        for &v in &gv.vars.vars {
                            if let Some(p) = g.and(&ProductTerm::from_vars(&[v])) {
                                terms.push(Term::Product(p));
                            }
                        }
                        if gv.vars.plus_one {
                            terms.push(Term::Product(g.clone()));
                        }
                    }
                }
            }
        }
        self.with_terms(terms).normalize()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "~")?;
        }
        write!(f, "x{}", self.var)
    }
}

impl fmt::Display for ProductTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "1");
        }
        for l in &self.literals {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for FactorVars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &v in &self.vars {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "x{v}")?;
            first = false;
        }
        if self.plus_one {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Xor(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Group::LitXor(lit, inner) => write!(f, "x{lit}({inner})"),
        }
    }
}

impl fmt::Display for GvTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})({})", self.group, self.vars)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Product(p) => write!(f, "{p}"),
            Term::Gv(g) => write!(f, "{g}"),
        }
    }
}

impl fmt::Display for BoolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> BoolFunction {
        parse_pprm(s, false).unwrap()
    }

    /// Independent truth-table oracle: evaluates term text shapes directly
    /// on packed inputs without going through `BoolFunction::evaluate`.
    fn oracle_eq3(input: u64) -> bool {
        let x = |k: u32| (input >> (k - 1)) & 1 == 1;
        (x(1) && x(2) && x(3) && x(4))
            ^ (!x(1) && x(2) && x(4))
            ^ (!x(2) && x(3) && x(4))
            ^ (x(3) && x(4))
            ^ true
    }

    #[test]
    fn parse_example_function() {
        let f = parse("x1x2x3x4 + ~x1x2x4 + ~x2x3x4 + x3x4 + 1");
        assert_eq!(f.n(), 4);
        assert_eq!(f.terms().len(), 5);
        assert!(matches!(&f.terms()[4], Term::Product(p) if p.is_one()));
    }

    #[test]
    fn empty_text_is_zero_function() {
        let f = parse("");
        assert!(f.is_zero());
        assert_eq!(f.evaluate(&[]).unwrap(), false);
    }

    #[test]
    fn duplicate_terms_cancel() {
        let f = parse("x1x2 + x1x2").normalize();
        assert!(f.is_zero());
        let g = parse("x1x2 + x1x2 + x3").normalize();
        assert_eq!(format!("{g}"), "x3");
    }

    #[test]
    fn evaluate_matches_hand_oracle() {
        let f = parse("x1x2x3x4 + ~x1x2x4 + ~x2x3x4 + x3x4 + 1");
        assert_eq!(f.evaluate(&[true, true, true, true]).unwrap(), true);
        assert_eq!(f.evaluate(&[false, false, false, false]).unwrap(), true);
        for input in 0u64..16 {
            let bits: Vec<bool> = (0..4).map(|i| (input >> i) & 1 == 1).collect();
            assert_eq!(f.evaluate(&bits).unwrap(), oracle_eq3(input), "input {input}");
        }
    }

    #[test]
    fn zero_function_evaluates_false() {
        let f = BoolFunction::zero(3);
        for input in 0u64..8 {
            let bits: Vec<bool> = (0..3).map(|i| (input >> i) & 1 == 1).collect();
            assert!(!f.evaluate(&bits).unwrap());
        }
    }

    #[test]
    fn normalize_keeps_order_and_truth_table() {
        let f = parse("x1 + x2");
        assert_eq!(f.normalize(), f);
        let g = parse("x1x2 + x3 + x1x2 + x3 + x3");
        let n = g.normalize();
        assert_eq!(format!("{n}"), "x3");
        assert_eq!(g.truth_table().unwrap(), n.truth_table().unwrap());
    }

    #[test]
    fn expand_distributes_groups() {
        let f = parse("(x1x2)(x3 + x5 + x7)");
        let e = f.expand();
        assert_eq!(format!("{e}"), "x1x2x3 + x1x2x5 + x1x2x7");
        assert_eq!(f.truth_table().unwrap(), e.truth_table().unwrap());

        let g = parse("(x1x2)(x3 + x4 + 1)");
        let e = g.expand();
        assert_eq!(format!("{e}"), "x1x2x3 + x1x2x4 + x1x2");
        assert_eq!(g.truth_table().unwrap(), e.truth_table().unwrap());
    }

    #[test]
    fn expand_of_products_is_identity() {
        let f = parse("x1x2 + x3");
        assert_eq!(f.expand(), f);
    }

    #[test]
    fn gv_term_eval_matches_expansion() {
        let f = parse("(x1(x2 + x3))(x6 + x7 + 1)");
        let e = f.expand();
        assert_eq!(f.truth_table().unwrap(), e.truth_table().unwrap());
    }

    #[test]
    fn gv_collapse_rules() {
        // One factor entry folds back into products.
        let f = parse("(x1x2)(x3)");
        assert_eq!(format!("{f}"), "x1x2x3");
        let g = parse("(x1 + x2x4)(1)");
        assert_eq!(format!("{g}"), "x1 + x2x4");
    }

    #[test]
    fn parse_rejects_bad_terms() {
        assert!(matches!(
            parse_pprm("x1x1", false),
            Err(ParseError::RepeatedVar { var: 1, .. })
        ));
        assert!(matches!(
            parse_pprm("x0", false),
            Err(ParseError::ZeroIndex { .. })
        ));
        assert!(matches!(
            parse_pprm("(x1)(x1 + x2)", false),
            Err(ParseError::OverlappingVars { var: 1 })
        ));
        assert!(parse_pprm("x1 +", false).is_err());
        assert!(matches!(
            parse_pprm("~x2x3", true),
            Err(ParseError::NegativeLiteral { var: 2 })
        ));
    }

    #[test]
    fn header_sets_width() {
        let f = parse_pprm(".n 6\n# a comment\nx1x2", false).unwrap();
        assert_eq!(f.n(), 6);
        assert!(matches!(
            parse_pprm(".n 2\nx1x3", false),
            Err(ParseError::VarOutOfRange { var: 3, n: 2 })
        ));
    }

    #[test]
    fn display_roundtrips() {
        for s in [
            "x1x2x3x4 + ~x1x2x4 + ~x2x3x4 + x3x4 + 1",
            "(x2x4)(x1 + x3) + x2(x3 + x4)",
            "(x1(x2 + x3))(x6 + x7 + 1)",
            "(x1 + x2)(x3 + x4)",
            "x1",
            "",
        ] {
            let f = parse(s);
            let printed = format!("{f}");
            let g = parse_pprm(&printed, false).unwrap();
            assert_eq!(f.terms(), g.terms(), "roundtrip of {s:?} via {printed:?}");
        }
    }
}
