//! Exact brute-force references.
//!
//! Everything else in the crate is tested against this module, so it is
//! deliberately naive: reachable-set iteration until the trajectory
//! repeats, pointwise bit comparison, exhaustive SAT search. Anything that
//! cannot be decided exactly within its cap is reported as such, never
//! guessed.

use std::collections::HashMap;

use crate::automaton::{Automaton, ChrobakNF, UnaryNfa, WitnessLength};
use crate::bits::BitSeq;
use crate::decision::RelationVerdict;
use crate::error::{Error, Result};
use crate::hardness::CnfInstance;
use crate::numtheory::lcm_u64_checked;

/// Membership bits together with an exact eventual-periodicity certificate
/// when one was found: `bits(ℓ) = bits(ℓ + period)` for all `ℓ >= threshold`.
#[derive(Clone, Debug)]
pub struct TrajectoryResult {
    pub bits: BitSeq,
    pub threshold: usize,
    pub period: u64,
    pub exact: bool,
}

/// Default cap on subset iterations.
pub const DEFAULT_ORACLE_CAP: usize = 100_000;

fn oracle_bits_nfa(a: &UnaryNfa, cap: usize) -> TrajectoryResult {
    assert!(cap >= 1);
    let n = a.num_states;
    let mut masks: Vec<BitSeq> = Vec::with_capacity(n);
    for vs in &a.succ {
        let mut m = BitSeq::zeros(n);
        for &v in vs {
            m.set(v, true);
        }
        masks.push(m);
    }
    let mut accept = BitSeq::zeros(n);
    for &s in &a.accepts {
        accept.set(s, true);
    }

    let mut cur = BitSeq::zeros(n);
    for &s in &a.starts {
        cur.set(s, true);
    }
    let mut seen: HashMap<BitSeq, usize> = HashMap::new();
    let mut bits = BitSeq::zeros(0);
    for step in 0..cap {
        if let Some(&first) = seen.get(&cur) {
            return TrajectoryResult {
                bits,
                threshold: first,
                period: (step - first) as u64,
                exact: true,
            };
        }
        seen.insert(cur.clone(), step);
        let mut hit = cur.clone();
        hit.and_assign(&accept);
        bits.push(!hit.all_zeros());
        let mut next = BitSeq::zeros(n);
        for u in cur.iter_ones() {
            next.or_assign(&masks[u]);
        }
        cur = next;
    }
    TrajectoryResult {
        bits,
        threshold: cap,
        period: 0,
        exact: false,
    }
}

fn oracle_bits_chrobak(c: &ChrobakNF, cap: usize) -> TrajectoryResult {
    assert!(cap >= 1);
    // stem/cycle structure gives the certificate directly
    let period = c
        .cycle_lengths()
        .iter()
        .try_fold(1u64, |acc, &l| lcm_u64_checked(acc, l));
    match period {
        Some(p) if (c.stem.len() as u64).saturating_add(p) <= cap as u64 => {
            let window = c.stem.len() + p as usize;
            TrajectoryResult {
                bits: c.membership_bits(window),
                threshold: c.stem.len(),
                period: p,
                exact: true,
            }
        }
        _ => TrajectoryResult {
            bits: c.membership_bits(cap),
            threshold: cap,
            period: 0,
            exact: false,
        },
    }
}

/// Exact membership bits with a periodicity certificate when the
/// trajectory closes within `cap`.
pub fn oracle_bits(a: &Automaton, cap: usize) -> TrajectoryResult {
    match a {
        Automaton::Nfa(n) => oracle_bits_nfa(n, cap),
        Automaton::Chrobak(c) => oracle_bits_chrobak(c, cap),
    }
}

/// Relations decidable by pointwise comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Subset,
    Equal,
    Universal,
}

fn comparison_window(ta: &TrajectoryResult, tb: &TrajectoryResult) -> Result<usize> {
    if !ta.exact || !tb.exact {
        return Err(Error::Inexact);
    }
    let lcm = lcm_u64_checked(ta.period.max(1), tb.period.max(1)).ok_or(Error::Inexact)?;
    let window = (ta.threshold.max(tb.threshold) as u64)
        .checked_add(lcm)
        .ok_or(Error::Inexact)?;
    usize::try_from(window).map_err(|_| Error::Inexact)
}

fn extended_bits(t: &TrajectoryResult, upto: usize) -> BitSeq {
    let mut out = BitSeq::zeros(upto);
    let prefix_len = t.bits.len().min(upto).min(t.threshold);
    out.or_assign_shifted(&t.bits.slice(0, prefix_len), 0);
    if upto > t.threshold {
        let p = t.period as usize;
        debug_assert!(p > 0 && t.bits.len() >= t.threshold + p);
        let pattern = t.bits.slice(t.threshold, p);
        let mut tail = BitSeq::zeros(upto - t.threshold);
        tail.or_assign_repeat(&pattern, 0);
        out.or_assign_shifted(&tail, t.threshold);
    }
    out
}

/// Decides a relation by exact pointwise comparison out to
/// `max threshold + lcm of periods`. For `Universal`, only `a` is
/// consulted. Fails with [`Error::Inexact`] when a trajectory did not
/// close within `cap`.
pub fn oracle_relation(
    rel: Relation,
    a: &Automaton,
    b: &Automaton,
    cap: usize,
) -> Result<RelationVerdict> {
    let ta = oracle_bits(a, cap);
    let (tb, window) = match rel {
        Relation::Universal => {
            if !ta.exact {
                return Err(Error::Inexact);
            }
            let w = ta
                .threshold
                .checked_add(ta.period.max(1) as usize)
                .ok_or(Error::Inexact)?;
            (None, w)
        }
        _ => {
            let tb = oracle_bits(b, cap);
            let w = comparison_window(&ta, &tb)?;
            (Some(tb), w)
        }
    };
    let bits_a = extended_bits(&ta, window);
    let failing = match rel {
        Relation::Universal => bits_a.first_zero(),
        Relation::Subset => {
            let bits_b = extended_bits(tb.as_ref().unwrap(), window);
            bits_a.first_and_not(&bits_b)
        }
        Relation::Equal => {
            let bits_b = extended_bits(tb.as_ref().unwrap(), window);
            bits_a.first_diff(&bits_b)
        }
    };
    Ok(match failing {
        None => RelationVerdict::holds(),
        Some(i) => RelationVerdict::fails(WitnessLength::plain(i as u64)),
    })
}

/// Exhaustive SAT search: the lexicographically first model with
/// false < true and `x1` most significant, or `None` when unsatisfiable.
pub fn brute_sat(c: &CnfInstance) -> Result<Option<Vec<bool>>> {
    const CAP: usize = 25;
    if c.num_vars > CAP {
        return Err(Error::TooLarge {
            vars: c.num_vars,
            cap: CAP,
        });
    }
    let n = c.num_vars;
    for a in 0u64..1u64 << n {
        let value = |var: usize| -> bool {
            // x1 is the most significant position
            a >> (n - var) & 1 == 1
        };
        let ok = c.clauses.iter().all(|cl| {
            cl.iter().any(|&lit| {
                let v = value(lit.unsigned_abs() as usize);
                if lit > 0 {
                    v
                } else {
                    !v
                }
            })
        });
        if ok {
            return Ok(Some((1..=n).map(value).collect()));
        }
    }
    Ok(None)
}

/// Least `p >= 1` with `bits(ℓ) = bits(ℓ + p)` for all in-window
/// `ℓ >= threshold`.
pub fn minimal_period(bits: &BitSeq, threshold: usize) -> Result<u64> {
    let len = bits.len();
    if threshold >= len {
        return Err(Error::NoPeriodInWindow { threshold });
    }
    for p in 1..len - threshold {
        if bits.mismatch_at_shift(p, threshold).is_none() {
            return Ok(p as u64);
        }
    }
    Err(Error::NoPeriodInWindow { threshold })
}

/// Oracle universality of a single automaton (convenience wrapper).
pub fn oracle_universal(a: &Automaton, cap: usize) -> Result<RelationVerdict> {
    oracle_relation(Relation::Universal, a, a, cap)
}

/// Witness length extracted as `u64` when it fits (test helper).
pub fn witness_u64(v: &RelationVerdict) -> Option<u64> {
    use num_traits::ToPrimitive;
    v.witness.as_ref().and_then(|w| w.value.to_u64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(s: &str) -> BitSeq {
        BitSeq::from_str01(s).unwrap()
    }

    fn chrobak(stem: &str, cycles: &[&str]) -> Automaton {
        Automaton::Chrobak(ChrobakNF::new(
            BitSeq::from_str01(stem).unwrap(),
            cycles.iter().map(|c| cyc(c)).collect(),
        ))
    }

    #[test]
    fn evens_trajectory() {
        let a = UnaryNfa::new(2, vec![0], vec![0], vec![(0, 1), (1, 0)]).unwrap();
        let t = oracle_bits(&Automaton::Nfa(a), 100);
        assert!(t.exact);
        assert_eq!(t.threshold, 0);
        assert_eq!(t.period, 2);
        assert_eq!(t.bits.to_string01(), "10");
    }

    #[test]
    fn finite_language_trajectory() {
        let a = UnaryNfa::new(3, vec![0], vec![2], vec![(0, 1), (1, 2)]).unwrap();
        let t = oracle_bits(&Automaton::Nfa(a), 100);
        assert!(t.exact);
        assert_eq!(t.period, 1);
        let ext = extended_bits(&t, 10);
        assert_eq!(ext.to_string01(), "0010000000");
    }

    #[test]
    fn random_nfa_self_consistent() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(2..=20);
            let mut edges = Vec::new();
            for u in 0..n {
                for _ in 0..rng.gen_range(1..=2) {
                    edges.push((u, rng.gen_range(0..n)));
                }
            }
            let a = UnaryNfa::new(
                n,
                vec![rng.gen_range(0..n)],
                (0..n).filter(|_| rng.gen_bool(0.3)).collect(),
                edges,
            )
            .unwrap();
            let t = oracle_bits(&Automaton::Nfa(a.clone()), 100_000);
            assert!(t.exact, "subset trajectory should close for 20 states");
            let window = t.threshold + 2 * t.period.max(1) as usize;
            let bits = a.membership_bits(window);
            for l in t.threshold..window - t.period as usize {
                assert_eq!(bits.get(l), bits.get(l + t.period as usize));
            }
        }
    }

    #[test]
    fn relations() {
        let evens = chrobak("", &["10"]);
        let all = chrobak("", &["1"]);
        let odds = chrobak("", &["01"]);
        assert!(oracle_relation(Relation::Subset, &evens, &all, 1000)
            .unwrap()
            .holds);
        assert!(oracle_relation(Relation::Equal, &evens, &evens, 1000)
            .unwrap()
            .holds);
        let v = oracle_universal(&odds, 1000).unwrap();
        assert!(!v.holds);
        assert_eq!(witness_u64(&v), Some(0));
    }

    #[test]
    fn inexact_reported() {
        let a = UnaryNfa::new(2, vec![0], vec![0], vec![(0, 1), (1, 0)]).unwrap();
        let t = oracle_bits(&Automaton::Nfa(a.clone()), 2);
        // trajectory of evens closes at step 2 exactly; cap 2 cuts it off
        assert!(!t.exact);
        let r = oracle_relation(
            Relation::Equal,
            &Automaton::Nfa(a.clone()),
            &Automaton::Nfa(a),
            2,
        );
        assert!(matches!(r, Err(Error::Inexact)));
    }

    #[test]
    fn brute_sat_examples() {
        let unsat = CnfInstance::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(brute_sat(&unsat).unwrap(), None);

        let or2 = CnfInstance::new(2, vec![vec![1, 2]]).unwrap();
        assert_eq!(brute_sat(&or2).unwrap(), Some(vec![false, true]));

        let empty = CnfInstance::new(3, vec![]).unwrap();
        assert_eq!(brute_sat(&empty).unwrap(), Some(vec![false, false, false]));

        let big = CnfInstance::new(26, vec![vec![1]]).unwrap();
        assert!(matches!(brute_sat(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn minimal_period_examples() {
        assert_eq!(minimal_period(&cyc("10101010"), 0).unwrap(), 2);
        assert_eq!(minimal_period(&cyc("11111"), 0).unwrap(), 1);
        assert_eq!(minimal_period(&cyc("1101101"), 1).unwrap(), 3);
        assert!(minimal_period(&cyc("10"), 2).is_err());
    }
}
