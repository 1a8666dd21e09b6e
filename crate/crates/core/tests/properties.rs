//! Randomized invariants across the whole stack: parsing, normalization,
//! factorization, reordering, synthesis and lowering.

use pprm_synth::factor::factorize;
use pprm_synth::mct::{elide_trailing, synth_terms};
use pprm_synth::ncv::{lower_circuit_with, simplify, LowerOptions, VariantPolicy};
use pprm_synth::pprm::{parse_pprm, BoolFunction, Literal, ProductTerm, Term};
use pprm_synth::reorder::{classify_form, d_term, rearrange_max_last, reorder_method, FormTag};
use pprm_synth::sim::{check_equivalence_ncv, check_unitary_equiv, simulate_mct};
use pprm_synth::{Circuit, LineKind, LineMeta, NcvGate, Polarity};
use proptest::prelude::*;

fn arb_product(n: u32, mixed: bool) -> impl Strategy<Value = ProductTerm> {
    prop::collection::btree_map(1..=n, any::<bool>(), 0..=(n as usize)).prop_map(move |m| {
        let lits: Vec<Literal> = m
            .into_iter()
            .map(|(v, pos)| Literal { var: v, positive: pos || !mixed })
            .collect();
        ProductTerm::new(lits).expect("distinct keys")
    })
}

fn arb_function(max_n: u32, mixed: bool) -> impl Strategy<Value = BoolFunction> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(arb_product(n, mixed), 0..=10).prop_map(move |ps| {
            BoolFunction::new(n, ps.into_iter().map(Term::Product).collect())
                .expect("vars in range")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_roundtrip(f in arb_function(6, true)) {
        let printed = format!("{f}");
        let back = parse_pprm(&printed, false).unwrap();
        prop_assert_eq!(f.terms(), back.terms());
    }

    #[test]
    fn normalize_idempotent_and_preserving(f in arb_function(6, true)) {
        let n1 = f.normalize();
        let n2 = n1.normalize();
        prop_assert_eq!(&n1, &n2);
        prop_assert_eq!(f.truth_table().unwrap(), n1.truth_table().unwrap());
    }

    #[test]
    fn factorize_expand_is_normalize(f in arb_function(8, false)) {
        let n = f.normalize();
        let z = factorize(&n);
        prop_assert_eq!(
            z.expand().truth_table().unwrap(),
            n.truth_table().unwrap()
        );
        // every factored term is well-formed: two or more factor entries
        for t in z.terms() {
            if let Term::Gv(gv) = t {
                prop_assert!(gv.len_f() >= 2);
                classify_form(&gv.group); // total over emitted groups
            }
        }
    }

    #[test]
    fn reorder_preserves_truth_table(f in arb_function(7, false)) {
        let z = factorize(&f.normalize());
        let r = reorder_method(&z);
        prop_assert_eq!(
            r.expand().truth_table().unwrap(),
            f.normalize().truth_table().unwrap()
        );
        // factored terms follow products, grouped by shared factor
        // variables with non-decreasing group maxima
        let gvs: Vec<_> = r.terms().iter().filter_map(|t| match t {
            Term::Gv(g) => Some(g.clone()),
            _ => None,
        }).collect();
        let mut seen_groups: Vec<(Vec<u32>, usize)> = Vec::new();
        for g in &gvs {
            let key = g.vars.sorted_vars();
            match seen_groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, max)) => *max = (*max).max(g.len_f()),
                None => seen_groups.push((key, g.len_f())),
            }
        }
        let maxima: Vec<usize> = seen_groups.iter().map(|(_, m)| *m).collect();
        prop_assert!(maxima.windows(2).all(|w| w[0] <= w[1]), "group maxima {maxima:?}");
        // within each group the (form, LenF) keys never decrease
        let mut by_key: Vec<(Vec<u32>, Vec<(FormTag, usize)>)> = Vec::new();
        for g in &gvs {
            let key = g.vars.sorted_vars();
            let entry = (classify_form(&g.group), g.len_f());
            match by_key.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(entry),
                None => by_key.push((key, vec![entry])),
            }
        }
        for (_, keys) in &by_key {
            prop_assert!(keys.windows(2).all(|w| w[0] <= w[1]), "member keys {keys:?}");
        }
    }

    #[test]
    fn rearrange_moves_one_and_keeps_multiset(f in arb_function(7, false)) {
        let r = reorder_method(&factorize(&f.normalize()));
        let out = rearrange_max_last(&r);
        let mut a: Vec<String> = r.terms().iter().map(|t| t.to_string()).collect();
        let mut b: Vec<String> = out.terms().iter().map(|t| t.to_string()).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        if let Some(last) = out.terms().last() {
            let max = out.terms().iter().map(d_term).max().unwrap();
            prop_assert_eq!(d_term(last), max);
        }
        prop_assert_eq!(
            out.expand().truth_table().unwrap(),
            f.normalize().truth_table().unwrap()
        );
    }

    #[test]
    fn synthesis_is_sound(f in arb_function(6, true)) {
        // full transform chain, then MCT synthesis, then lowering; the
        // result line must compute the function everywhere
        let form = rearrange_max_last(&reorder_method(&factorize(&f.normalize())));
        let mut mct = synth_terms(&form).unwrap();
        elide_trailing(&mut mct);
        let ncv = lower_circuit_with(
            &mct,
            LowerOptions { policy: VariantPolicy::Greedy, simplify: true, elide: true },
        ).unwrap();
        let report = check_equivalence_ncv(&ncv, &f, 16, 0, 0).unwrap();
        prop_assert!(report.is_equivalent(), "{:?}", report.status);
    }

    #[test]
    fn unelided_circuits_restore_inputs(f in arb_function(5, true)) {
        let form = rearrange_max_last(&reorder_method(&factorize(&f.normalize())));
        let mct = synth_terms(&form).unwrap();
        for pattern in 0u64..(1 << f.n()) {
            let mut input: Vec<bool> = (0..mct.width()).map(|i| (pattern >> i) & 1 == 1).collect();
            input[f.n() as usize] = false;
            let out = simulate_mct(&mct, &input).unwrap();
            for l in 0..f.n() as usize {
                prop_assert_eq!(out[l], input[l], "line {} not restored", l);
            }
        }
    }

    #[test]
    fn simplify_sound_and_monotone(gates in prop::collection::vec(
        (0usize..4, 0usize..4, any::<bool>(), 0u8..4), 1..24)) {
        let w = 4;
        let lines: Vec<LineMeta> = (0..w)
            .map(|i| LineMeta::new(LineKind::Input(format!("q{i}"))))
            .collect();
        let mut c = Circuit::new(lines);
        for (t, cl, pol_pos, kind) in gates {
            let cl = if cl == t { (cl + 1) % w } else { cl };
            let pol = if pol_pos { Polarity::Positive } else { Polarity::Negative };
            let g = match kind {
                0 => NcvGate::not(t),
                1 => NcvGate::cnot(cl, pol, t),
                2 => NcvGate::cv(cl, pol, t),
                _ => NcvGate::cvdag(cl, pol, t),
            };
            c.push(g);
        }
        let s = simplify(&c);
        prop_assert!(s.gates.len() <= c.gates.len());
        prop_assert!(check_unitary_equiv(&c, &s, 1e-9).unwrap());
    }
}
