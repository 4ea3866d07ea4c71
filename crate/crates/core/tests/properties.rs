//! Property tests: every structural invariant is checked against randomly
//! generated automata, with the brute-force oracle as the reference.

use proptest::prelude::*;

use uafa_core::bits::BitSeq;
use uafa_core::chrobak::{chrobak_to_nfa, determinize, equalize_stems, nfa_to_chrobak, normalize};
use uafa_core::numtheory::{crt_solve, ResidueClass};
use uafa_core::oracle::{oracle_relation, Relation};
use uafa_core::{
    ambiguity_chrobak, ambiguity_nfa, complement_ufa, concat_nfa, nfa_subset, ufa_inclusion,
    ufa_universal, AmbiguityVerdict, Automaton, ChrobakNF, UnaryNfa, UniversalityMode,
};

fn bitseq(len: usize) -> impl Strategy<Value = BitSeq> {
    proptest::collection::vec(any::<bool>(), len..=len).prop_map(|v| BitSeq::from_bools(&v))
}

fn chrobak_strategy() -> impl Strategy<Value = ChrobakNF> {
    let stem = (0usize..4).prop_flat_map(bitseq);
    let cycles = proptest::collection::vec((1usize..7).prop_flat_map(bitseq), 0..4);
    (stem, cycles).prop_map(|(stem, cycles)| ChrobakNF::new(stem, cycles))
}

fn nfa_strategy() -> impl Strategy<Value = UnaryNfa> {
    (2usize..10).prop_flat_map(|n| {
        let edges = proptest::collection::vec((0..n, 0..n), 0..2 * n);
        let starts = proptest::collection::vec(0..n, 1..3);
        let accepts = proptest::collection::vec(0..n, 0..4);
        (edges, starts, accepts)
            .prop_map(move |(e, s, a)| UnaryNfa::new(n, s, a, e).expect("ids in range"))
    })
}

fn ufa_strategy() -> impl Strategy<Value = ChrobakNF> {
    chrobak_strategy().prop_filter("unambiguous", |c| ambiguity_chrobak(c).is_unambiguous())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conversion_preserves_language(a in nfa_strategy()) {
        let c = nfa_to_chrobak(&a, 1_000_000).unwrap();
        let window = c.num_states() + 2 * c.cycle_lengths().iter().product::<u64>().max(1) as usize;
        let window = window.min(4000).max(120);
        prop_assert_eq!(a.membership_bits(window), c.membership_bits(window));
    }

    #[test]
    fn graph_form_preserves_language(c in chrobak_strategy()) {
        let a = chrobak_to_nfa(&c);
        prop_assert_eq!(a.num_states(), c.num_states());
        prop_assert_eq!(a.membership_bits(150), c.membership_bits(150));
    }

    #[test]
    fn ambiguity_verdicts_agree(c in chrobak_strategy()) {
        let direct = ambiguity_chrobak(&c);
        let on_graph = ambiguity_nfa(&chrobak_to_nfa(&c), 100_000);
        if on_graph.verdict != AmbiguityVerdict::UnknownBeyondBound {
            prop_assert_eq!(direct.verdict, on_graph.verdict);
        }
        if let Some(w) = &direct.witness {
            // witness accepted along at least two cycles
            let off = &w.value - num_bigint::BigUint::from(c.stem_len());
            let hits = c
                .cycles
                .iter()
                .filter(|cy| {
                    use num_traits::ToPrimitive;
                    let idx = (&off % num_bigint::BigUint::from(cy.len())).to_usize().unwrap();
                    cy.get(idx)
                })
                .count();
            prop_assert!(hits >= 2);
            prop_assert!(w.satisfies_derivation());
        }
    }

    #[test]
    fn normalize_and_stems_preserve_bits(c1 in chrobak_strategy(), c2 in chrobak_strategy()) {
        let window = 200;
        prop_assert_eq!(normalize(&c1).membership_bits(window), c1.membership_bits(window));
        let (d1, d2) = equalize_stems(&c1, &c2);
        prop_assert_eq!(d1.stem_len(), d2.stem_len());
        prop_assert_eq!(d1.membership_bits(window), c1.membership_bits(window));
        prop_assert_eq!(d2.membership_bits(window), c2.membership_bits(window));
    }

    #[test]
    fn determinize_is_dfa_shaped_and_equal(c in chrobak_strategy()) {
        if let Ok(d) = determinize(&c, 10_000) {
            prop_assert!(d.cycles.len() <= 1);
            prop_assert_eq!(d.membership_bits(300), c.membership_bits(300));
        }
    }

    #[test]
    fn subset_matches_oracle(c1 in chrobak_strategy(), c2 in chrobak_strategy()) {
        let fast = nfa_subset(&c1, &c2).unwrap();
        let slow = oracle_relation(
            Relation::Subset,
            &Automaton::Chrobak(c1.clone()),
            &Automaton::Chrobak(c2.clone()),
            100_000,
        )
        .unwrap();
        prop_assert_eq!(fast.holds, slow.holds);
        if let Some(w) = &fast.witness {
            prop_assert!(c1.accepts(&w.value));
            prop_assert!(!c2.accepts(&w.value));
            prop_assert!(w.satisfies_derivation());
        }
    }

    #[test]
    fn complement_is_exact_and_unambiguous(c in ufa_strategy()) {
        let comp = complement_ufa(&c).unwrap();
        prop_assert!(ambiguity_chrobak(&comp).is_unambiguous());
        let window = 400;
        let mut want = c.membership_bits(window);
        want.not_in_place();
        prop_assert_eq!(comp.membership_bits(window), want);
        // double complement gives the original language back
        let back = complement_ufa(&comp).unwrap();
        prop_assert_eq!(back.membership_bits(window), c.membership_bits(window));
    }

    #[test]
    fn universality_routes_agree(c in ufa_strategy()) {
        let exact = ufa_universal(&c, UniversalityMode::Exact).unwrap();
        let modular = ufa_universal(&c, UniversalityMode::Modular).unwrap();
        let thm2 = uafa_core::nfa_universal(&c).unwrap().holds;
        prop_assert_eq!(exact, modular);
        prop_assert_eq!(exact, thm2);
    }

    #[test]
    fn inclusion_agrees_with_subset(c1 in ufa_strategy(), c2 in ufa_strategy()) {
        let incl = ufa_inclusion(&c1, &c2).unwrap();
        let sub = nfa_subset(&c1, &c2).unwrap();
        prop_assert_eq!(incl.holds, sub.holds);
        if let Some(w) = &incl.witness {
            prop_assert!(c1.accepts(&w.value));
            prop_assert!(!c2.accepts(&w.value));
        }
    }

    #[test]
    fn concat_nfa_size_and_language(c1 in chrobak_strategy(), c2 in chrobak_strategy()) {
        let (a, b) = (chrobak_to_nfa(&c1), chrobak_to_nfa(&c2));
        let cat = concat_nfa(&a, &b);
        prop_assert_eq!(cat.num_states(), a.num_states() + b.num_states());
        let w = 80;
        let (b1, b2, bc) = (a.membership_bits(w), b.membership_bits(w), cat.membership_bits(w));
        for l in 0..w {
            let want = (0..=l).any(|i| b1.get(i) && b2.get(l - i));
            prop_assert_eq!(bc.get(l), want, "length {}", l);
        }
    }

    #[test]
    fn crt_agrees_with_scan(
        classes in proptest::collection::vec((1u64..30, 0u64..30), 1..4)
    ) {
        let classes: Vec<ResidueClass> = classes
            .into_iter()
            .map(|(m, r)| ResidueClass::from_u64(m, r % m))
            .collect();
        let sol = crt_solve(&classes);
        let lcm: u64 = classes
            .iter()
            .fold(1u64, |acc, c| {
                use num_traits::ToPrimitive;
                let m = c.modulus.to_u64().unwrap();
                acc / num_integer::Integer::gcd(&acc, &m) * m
            });
        let scan = (0..lcm).find(|&x| {
            classes.iter().all(|c| {
                use num_traits::ToPrimitive;
                x % c.modulus.to_u64().unwrap() == c.residue.to_u64().unwrap()
            })
        });
        match (sol, scan) {
            (Some(s), Some(x)) => {
                use num_traits::ToPrimitive;
                prop_assert_eq!(s.residue.to_u64().unwrap(), x);
                prop_assert_eq!(s.modulus.to_u64().unwrap(), lcm);
            }
            (None, None) => {}
            (a, b) => prop_assert!(false, "crt {:?} vs scan {:?}", a.is_some(), b),
        }
    }
}
