//! Factorization of equal-degree product-term groups into `(group)(vars)`
//! terms.
//!
//! Terms of one degree form an occurrence table (rows = terms, columns =
//! variables). The variable with the highest column sum is extracted
//! repeatedly; its rows, minus the variable, become factor groups. A
//! second pass looks for the common product part inside each extraction
//! and for identical factor-group sets across extractions, and emits
//! Definition-style `(g)(v1 ⊕ v2 ⊕ ..)` terms where that succeeds.

use crate::error::SynthError;
use crate::pprm::{BoolFunction, FactorVars, Group, GvTerm, Literal, ProductTerm, Term};

/// Binary occurrence table for one equal-degree group of product terms.
#[derive(Debug, Clone)]
pub struct FactTable {
    pub group_degree: usize,
    pub rows: Vec<ProductTerm>,
    pub cols: Vec<u32>,
    /// `cells[r][c]` is true iff variable `cols[c]` occurs in `rows[r]`.
    pub cells: Vec<Vec<bool>>,
}

impl FactTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Occurrence count per column over the remaining rows.
    pub fn column_sums(&self) -> Vec<usize> {
        self.cols
            .iter()
            .enumerate()
            .map(|(c, _)| self.cells.iter().filter(|row| row[c]).count())
            .collect()
    }

    fn remove_rows_with(&mut self, var: u32) -> Vec<ProductTerm> {
        let col = match self.cols.iter().position(|&v| v == var) {
            Some(c) => c,
            None => return Vec::new(),
        };
        let mut removed = Vec::new();
        let mut r = 0;
        while r < self.rows.len() {
            if self.cells[r][col] {
                removed.push(self.rows.remove(r));
                self.cells.remove(r);
            } else {
                r += 1;
            }
        }
        removed
    }
}

/// One step of the extraction loop: a factor variable and its factor
/// groups (the removed rows with the variable deleted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorExtraction {
    pub factor_var: u32,
    pub factor_groups: Vec<ProductTerm>,
}

/// Builds the occurrence table for a group of positive product terms of
/// one degree `d >= 2`. Groups of fewer than two terms are rejected.
pub fn build_fact_table(group: &[ProductTerm]) -> Result<FactTable, SynthError> {
    if group.len() < 2 {
        return Err(SynthError::GroupTooSmall);
    }
    let d = group[0].degree();
    let mut cols: Vec<u32> = Vec::new();
    for t in group {
        if t.degree() != d {
            return Err(SynthError::MixedDegrees(d, t.degree()));
        }
        for l in t.literals() {
            if !l.positive {
                return Err(SynthError::NegativeInTable(l.var));
            }
            if !cols.contains(&l.var) {
                cols.push(l.var);
            }
        }
    }
    cols.sort_unstable();
    let cells = group
        .iter()
        .map(|t| cols.iter().map(|&v| t.contains_var(v)).collect())
        .collect();
    Ok(FactTable { group_degree: d, rows: group.to_vec(), cols, cells })
}

/// The factor variable: lowest index among the columns with maximal sum.
pub fn select_factor(table: &FactTable) -> Result<u32, SynthError> {
    if table.is_empty() {
        return Err(SynthError::EmptyTable);
    }
    let sums = table.column_sums();
    let max = *sums.iter().max().expect("non-empty");
    let idx = sums.iter().position(|&s| s == max).expect("max exists");
    Ok(table.cols[idx])
}

/// Runs the selection loop to exhaustion. Each step removes at least one
/// row, so the loop terminates in at most `rows` iterations.
pub fn extract_all(table: &FactTable) -> Vec<FactorExtraction> {
    let mut work = table.clone();
    let mut out = Vec::new();
    while !work.is_empty() {
        let var = select_factor(&work).expect("non-empty table");
        let removed = work.remove_rows_with(var);
        debug_assert!(!removed.is_empty());
        out.push(FactorExtraction {
            factor_var: var,
            factor_groups: removed.iter().map(|t| t.without_var(var)).collect(),
        });
    }
    out
}

/// Common product part of a set of terms (intersection of literal sets).
fn common_part(groups: &[ProductTerm]) -> ProductTerm {
    let mut lits: Vec<Literal> = groups[0].literals().to_vec();
    for g in &groups[1..] {
        lits.retain(|l| g.literals().contains(l));
    }
    ProductTerm::new(lits).expect("subset of a valid term")
}

/// Pending extractions that did not reduce to the single-variable form;
/// matched across factor variables by their factor-group set.
struct Pending {
    factor_var: u32,
    groups: Vec<ProductTerm>,
    key: Vec<ProductTerm>,
}

/// Turns the extractions of one degree group into terms: the
/// `(product)(x ⊕ y ⊕ ..)` form where the factor groups share a common
/// part and leave single-variable remainders, the `(g1 ⊕ g2)(xs ⊕ xt)`
/// form where several factor variables share one factor-group set, and
/// plain product terms otherwise. A shared group set is refactored once:
/// a lone common literal with single-variable remainders becomes the
/// nested `x(v1 ⊕ v2 ⊕ ..)` group shape.
pub fn analyze_common_factor(extractions: &[FactorExtraction]) -> Vec<Term> {
    let mut out: Vec<(usize, Vec<Term>)> = Vec::new();
    let mut pending: Vec<(usize, Pending)> = Vec::new();

    for (pos, ex) in extractions.iter().enumerate() {
        if ex.factor_groups.len() >= 2 {
            let fg = common_part(&ex.factor_groups);
            let remainders: Vec<ProductTerm> = ex
                .factor_groups
                .iter()
                .map(|g| {
                    let mut r = g.clone();
                    for l in fg.literals() {
                        r = r.without_var(l.var);
                    }
                    r
                })
                .collect();
            if remainders.iter().all(|r| r.degree() == 1) {
                let group_product = fg
                    .and(&ProductTerm::from_vars(&[ex.factor_var]))
                    .expect("factor var absent from its groups");
                let vars: Vec<u32> = remainders.iter().map(|r| r.literals()[0].var).collect();
                let gv = GvTerm::new(Group::Xor(vec![group_product]), FactorVars::new(vars, false))
                    .expect("disjoint by construction");
                out.push((pos, vec![Term::Gv(gv)]));
                continue;
            }
        }
        let mut key = ex.factor_groups.clone();
        key.sort_by(|a, b| a.literals().cmp(b.literals()));
        pending.push((pos, Pending {
            factor_var: ex.factor_var,
            groups: ex.factor_groups.clone(),
            key,
        }));
    }

    // Match pending extractions with identical factor-group sets.
    while let Some((pos, first)) = pending.first().map(|(p, x)| (*p, x.key.clone())) {
        let matched: Vec<(usize, Pending)> = {
            let mut taken = Vec::new();
            let mut i = 0;
            while i < pending.len() {
                if pending[i].1.key == first {
                    taken.push(pending.remove(i));
                } else {
                    i += 1;
                }
            }
            taken
        };
        let vars: Vec<u32> = matched.iter().map(|(_, p)| p.factor_var).collect();
        let groups = matched[0].1.groups.clone();
        let group_vars: Vec<u32> = groups.iter().flat_map(|g| g.literals()).map(|l| l.var).collect();
        if vars.len() >= 2 && vars.iter().all(|v| !group_vars.contains(v)) {
            let group = refactor_group(&groups);
            let gv = GvTerm::new(group, FactorVars::new(vars, false))
                .expect("overlap checked above");
            out.push((pos, vec![Term::Gv(gv)]));
        } else {
            // No partner (or variables overlap): emit unfactored.
            for (p, pend) in matched {
                let terms = pend
                    .groups
                    .iter()
                    .map(|g| {
                        Term::Product(
                            g.and(&ProductTerm::from_vars(&[pend.factor_var]))
                                .expect("factor var absent from its groups"),
                        )
                    })
                    .collect();
                out.push((p, terms));
            }
        }
    }

    out.sort_by_key(|(pos, _)| *pos);
    out.into_iter().flat_map(|(_, ts)| ts).collect()
}

/// One refactoring attempt on a shared group set: a lone common literal
/// over single-variable remainders becomes the nested literal-times-XOR
/// shape; anything else stays an XOR of products.
fn refactor_group(groups: &[ProductTerm]) -> Group {
    if groups.len() >= 2 {
        let fg = common_part(groups);
        if fg.degree() == 1 {
            let lit = fg.literals()[0].var;
            let rem: Vec<ProductTerm> = groups.iter().map(|g| g.without_var(lit)).collect();
            if rem.iter().all(|r| r.degree() == 1) {
                let vars: Vec<u32> = rem.iter().map(|r| r.literals()[0].var).collect();
                return Group::LitXor(lit, FactorVars::new(vars, false));
            }
        }
    }
    Group::Xor(groups.to_vec())
}

/// Factorizes a product-term function: positive terms of degree two or
/// more are grouped by degree and factored; degree-one terms, the
/// constant term and terms with complemented literals pass through
/// untouched after the factored groups. Duplicate terms are cancelled
/// first, so the occurrence tables never hold repeated rows.
pub fn factorize(f: &BoolFunction) -> BoolFunction {
    let f = f.normalize();
    let mut by_degree: Vec<(usize, Vec<ProductTerm>)> = Vec::new();
    let mut passthrough: Vec<Term> = Vec::new();

    for t in f.terms() {
        match t {
            Term::Product(p) if p.all_positive() && p.degree() >= 2 => {
                let d = p.degree();
                match by_degree.iter_mut().find(|(deg, _)| *deg == d) {
                    Some((_, v)) => v.push(p.clone()),
                    None => by_degree.push((d, vec![p.clone()])),
                }
            }
            other => passthrough.push(other.clone()),
        }
    }
    by_degree.sort_by_key(|(d, _)| *d);

    let mut terms = Vec::new();
    for (_, group) in &by_degree {
        if group.len() < 2 {
            terms.push(Term::Product(group[0].clone()));
            continue;
        }
        let table = build_fact_table(group).expect("group pre-validated");
        let extractions = extract_all(&table);
        terms.extend(analyze_common_factor(&extractions));
    }
    terms.extend(passthrough);
    f.with_terms(terms)
}
