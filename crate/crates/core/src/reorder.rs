//! Term ordering: form classification of factor groups, the two
//! merge/exchange rules, sorting by factor-variable count, grouping by
//! shared factor variables, and the final move-the-heaviest-term-last
//! rearrangement that the synthesis cost rides on.

use crate::pprm::{BoolFunction, FactorVars, Group, GvTerm, ProductTerm, Term};

/// Syntactic class of a factor group. The declaration order is the sort
/// order used inside equal-`LenF` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FormTag {
    /// XOR of product terms.
    F1,
    /// A single product term of two or more literals.
    F2,
    /// A single positive literal.
    F3,
    /// A literal times an XOR of literals.
    F4,
    /// XOR of single positive literals.
    F5,
}

/// Total, mutually exclusive classification of a legal factor group.
pub fn classify_form(g: &Group) -> FormTag {
    match g {
        Group::LitXor(..) => FormTag::F4,
        Group::Xor(terms) => match terms.as_slice() {
            [t] if t.degree() == 1 => FormTag::F3,
            [_] => FormTag::F2,
            ts if ts.iter().all(|t| t.degree() == 1) => FormTag::F5,
            _ => FormTag::F1,
        },
    }
}

/// Degree-of-term metric deciding which term synthesizes last.
pub fn d_term(t: &Term) -> usize {
    match t {
        Term::Product(p) => p.degree(),
        Term::Gv(gv) => match classify_form(&gv.group) {
            FormTag::F1 => gv
                .group
                .products()
                .iter()
                .map(ProductTerm::degree)
                .max()
                .unwrap_or(0),
            FormTag::F2 => match &gv.group {
                Group::Xor(ts) => ts[0].degree() + 1,
                _ => unreachable!(),
            },
            FormTag::F3 | FormTag::F5 => 2,
            FormTag::F4 => 3,
        },
    }
}

/// Does `candidate` denote the same function as factor group `g`?
/// Products match single-product groups; `x(v..)`-shaped terms match the
/// nested group with the same literal and variable set.
fn term_matches_group(candidate: &Term, g: &Group) -> bool {
    match (candidate, g) {
        (Term::Product(p), Group::Xor(ts)) => ts.len() == 1 && &ts[0] == p,
        (Term::Gv(gv), Group::LitXor(lit, inner)) => {
            matches!(&gv.group, Group::Xor(ts)
                if ts.len() == 1 && ts[0].degree() == 1 && ts[0].literals()[0].var == *lit)
                && gv.vars.plus_one == inner.plus_one
                && gv.vars.sorted_vars() == inner.sorted_vars()
        }
        _ => false,
    }
}

/// Merge rule: a term equal to some factor group is deleted and the
/// constant 1 is toggled into that group's factor variables. Applied to
/// fixpoint; every application removes one term.
pub fn apply_r1(f: &BoolFunction) -> BoolFunction {
    let mut terms: Vec<Term> = f.terms().to_vec();
    'restart: loop {
        for j in 0..terms.len() {
            let group = match &terms[j] {
                Term::Gv(gv) => gv.group.clone(),
                _ => continue,
            };
            for i in 0..terms.len() {
                if i == j || !term_matches_group(&terms[i], &group) {
                    continue;
                }
                let Term::Gv(gv) = terms[j].clone() else { unreachable!() };
                let vars = FactorVars::new(gv.vars.vars.clone(), !gv.vars.plus_one);
                let replacement = Term::gv_or_collapse(gv.group, vars)
                    .expect("toggling the constant keeps sides disjoint");
                if i > j {
                    terms.remove(i);
                    terms.splice(j..=j, replacement);
                } else {
                    terms.splice(j..=j, replacement);
                    terms.remove(i);
                }
                continue 'restart;
            }
        }
        break;
    }
    f.with_terms(terms)
}

/// Exchange rule: when a factor group in the literal-times-XOR or
/// XOR-of-literals shape mentions more variables than `LenF`, the group
/// and the factor variables swap.
pub fn apply_r2(t: &GvTerm) -> GvTerm {
    let form = classify_form(&t.group);
    let group_var_count = t.group.vars().len();
    if group_var_count <= t.len_f() {
        return t.clone();
    }
    match (&t.group, form) {
        (Group::LitXor(lit, inner), FormTag::F4) => {
            // Inner XOR swaps with the factor variables. A constant in
            // either XOR has no nested representation, so leave those.
            if t.vars.plus_one || inner.plus_one {
                return t.clone();
            }
            GvTerm::new(
                Group::LitXor(*lit, t.vars.clone()),
                inner.clone(),
            )
            .expect("swap keeps sides disjoint")
        }
        (Group::Xor(lits), FormTag::F5) => {
            if t.vars.plus_one {
                return t.clone();
            }
            let new_group: Vec<ProductTerm> = t
                .vars
                .vars
                .iter()
                .map(|&v| ProductTerm::from_vars(&[v]))
                .collect();
            let new_vars: Vec<u32> = lits.iter().map(|p| p.literals()[0].var).collect();
            GvTerm::new(Group::Xor(new_group), FactorVars::new(new_vars, false))
                .expect("swap keeps sides disjoint")
        }
        _ => t.clone(),
    }
}

/// Key identifying terms that share factor variables (the constant entry
/// does not participate).
fn group_key(gv: &GvTerm) -> Vec<u32> {
    gv.vars.sorted_vars()
}

/// The two-stage reordering. Stage one sorts product terms by degree
/// ahead of factored terms sorted by `(LenF, form)`. Stage two applies
/// the merge and exchange rules, collects terms with shared factor
/// variables, orders members by `(form, LenF)` and the groups by their
/// maximum `LenF`.
pub fn reorder_method(f: &BoolFunction) -> BoolFunction {
    let mut products: Vec<ProductTerm> = Vec::new();
    let mut gvs: Vec<GvTerm> = Vec::new();
    for t in f.terms() {
        match t {
            Term::Product(p) => products.push(p.clone()),
            Term::Gv(g) => gvs.push(g.clone()),
        }
    }
    products.sort_by_key(|p| p.degree());
    gvs.sort_by_key(|g| (g.len_f(), classify_form(&g.group)));

    let stage1: Vec<Term> = products
        .iter()
        .cloned()
        .map(Term::Product)
        .chain(gvs.iter().cloned().map(Term::Gv))
        .collect();
    let merged = apply_r1(&f.with_terms(stage1));

    let mut products: Vec<ProductTerm> = Vec::new();
    let mut gvs: Vec<GvTerm> = Vec::new();
    for t in merged.terms() {
        match t {
            Term::Product(p) => products.push(p.clone()),
            Term::Gv(g) => gvs.push(apply_r2(g)),
        }
    }

    // Collect terms with common factor variables, preserving first-seen
    // group order, then sort groups by their maximum LenF.
    let mut groups: Vec<(Vec<u32>, Vec<GvTerm>)> = Vec::new();
    for gv in gvs {
        let key = group_key(&gv);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(gv),
            None => groups.push((key, vec![gv])),
        }
    }
    for (_, members) in groups.iter_mut() {
        members.sort_by_key(|g| (classify_form(&g.group), g.len_f()));
    }
    groups.sort_by_key(|(_, members)| {
        members.iter().map(GvTerm::len_f).max().unwrap_or(0)
    });

    let terms: Vec<Term> = products
        .into_iter()
        .map(Term::Product)
        .chain(
            groups
                .into_iter()
                .flat_map(|(_, members)| members.into_iter().map(Term::Gv)),
        )
        .collect();
    merged.with_terms(terms)
}

/// Moves one term of maximal `d_term` to the end; among ties the latest
/// one moves, so an already-last maximum leaves the order untouched.
pub fn rearrange_max_last(f: &BoolFunction) -> BoolFunction {
    if f.terms().len() < 2 {
        return f.clone();
    }
    let mut terms = f.terms().to_vec();
    let max = terms.iter().map(d_term).max().expect("non-empty");
    let idx = terms
        .iter()
        .rposition(|t| d_term(t) == max)
        .expect("max exists");
    let t = terms.remove(idx);
    terms.push(t);
    f.with_terms(terms)
}
