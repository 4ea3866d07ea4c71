//! Data model for unary automata and exact ambiguity analysis.
//!
//! A unary automaton is a directed graph: words are identified by their
//! length, so a run is just a walk from a start state. [`UnaryNfa`] is the
//! graph form; [`ChrobakNF`] is the stem-plus-cycles normal form every
//! decision procedure in this crate operates on. Acceptance is stored as
//! packed bit sequences: stem bit `i` covers the word of length `i`, cycle
//! bit `j` covers the lengths `stem + j'` with `j' ≡ j (mod cycle length)`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bits::BitSeq;
use crate::numtheory::{crt_solve, gcd_u64, ResidueClass};

/// State id within a [`UnaryNfa`].
pub type StateId = usize;

/// A unary NFA as a directed graph with start and accept sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryNfa {
    pub num_states: usize,
    /// Sorted, deduplicated start states.
    pub starts: Vec<StateId>,
    /// Sorted, deduplicated accepting states.
    pub accepts: Vec<StateId>,
    /// Successor sets, one sorted vector per state.
    pub succ: Vec<Vec<StateId>>,
}

impl UnaryNfa {
    /// Builds an NFA, normalising the sets and checking that every id is in
    /// range and `succ` is total over states.
    pub fn new(
        num_states: usize,
        starts: Vec<StateId>,
        accepts: Vec<StateId>,
        edges: Vec<(StateId, StateId)>,
    ) -> crate::Result<Self> {
        let mut succ = vec![Vec::new(); num_states];
        for (u, v) in edges {
            if u >= num_states || v >= num_states {
                return Err(crate::Error::InvalidInput(format!(
                    "edge ({u},{v}) out of range for {num_states} states"
                )));
            }
            succ[u].push(v);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let mut starts = starts;
        let mut accepts = accepts;
        for set in [&mut starts, &mut accepts] {
            set.sort_unstable();
            set.dedup();
            if set.last().is_some_and(|&x| x >= num_states) {
                return Err(crate::Error::InvalidInput(
                    "state id out of range".to_string(),
                ));
            }
        }
        Ok(UnaryNfa {
            num_states,
            starts,
            accepts,
            succ,
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    fn accept_mask(&self) -> BitSeq {
        let mut m = BitSeq::zeros(self.num_states);
        for &a in &self.accepts {
            m.set(a, true);
        }
        m
    }

    /// Successor masks for the subset iteration.
    fn succ_masks(&self) -> Vec<BitSeq> {
        self.succ
            .iter()
            .map(|vs| {
                let mut m = BitSeq::zeros(self.num_states);
                for &v in vs {
                    m.set(v, true);
                }
                m
            })
            .collect()
    }

    /// Acceptance bits for word lengths `0..upto`, by iterating the
    /// reachable-state set.
    pub fn membership_bits(&self, upto: usize) -> BitSeq {
        let mut bits = BitSeq::zeros(upto);
        if upto == 0 {
            return bits;
        }
        let masks = self.succ_masks();
        let accept = self.accept_mask();
        let mut cur = BitSeq::zeros(self.num_states);
        for &s in &self.starts {
            cur.set(s, true);
        }
        for len in 0..upto {
            let mut hit = cur.clone();
            hit.and_assign(&accept);
            if !hit.all_zeros() {
                bits.set(len, true);
            }
            if len + 1 < upto {
                let mut next = BitSeq::zeros(self.num_states);
                for u in cur.iter_ones() {
                    next.or_assign(&masks[u]);
                }
                cur = next;
            }
        }
        bits
    }

    /// Membership of a single small length.
    pub fn accepts_length(&self, len: usize) -> bool {
        let bits = self.membership_bits(len + 1);
        bits.get(len)
    }
}

/// Chrobak Normal Form: a stem of acceptance bits followed by parallel
/// cycles of acceptance bits. The empty language is the empty stem with
/// zero cycles.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChrobakNF {
    pub stem: BitSeq,
    pub cycles: Vec<BitSeq>,
}

impl ChrobakNF {
    pub fn new(stem: BitSeq, cycles: Vec<BitSeq>) -> Self {
        assert!(cycles.iter().all(|c| !c.is_empty()), "cycles need length >= 1");
        ChrobakNF { stem, cycles }
    }

    /// The language of all words: no stem, one all-accepting cycle.
    pub fn all_words() -> Self {
        ChrobakNF::new(BitSeq::zeros(0), vec![BitSeq::ones(1)])
    }

    /// The empty language.
    pub fn empty() -> Self {
        ChrobakNF::default()
    }

    /// The finite language of exactly the lengths `0..n` (stem of ones).
    pub fn lengths_below(n: usize) -> Self {
        ChrobakNF::new(BitSeq::ones(n), Vec::new())
    }

    pub fn stem_len(&self) -> usize {
        self.stem.len()
    }

    /// Total states: stem states plus cycle states.
    pub fn num_states(&self) -> usize {
        self.stem.len() + self.cycles.iter().map(|c| c.len()).sum::<usize>()
    }

    pub fn cycle_lengths(&self) -> Vec<u64> {
        self.cycles.iter().map(|c| c.len() as u64).collect()
    }

    /// Acceptance bits for word lengths `0..upto`, read off the stem and
    /// cycles directly.
    pub fn membership_bits(&self, upto: usize) -> BitSeq {
        let mut bits = BitSeq::zeros(upto);
        let s = self.stem.len().min(upto);
        for i in 0..s {
            if self.stem.get(i) {
                bits.set(i, true);
            }
        }
        if upto > self.stem.len() {
            let mut tail = BitSeq::zeros(upto - self.stem.len());
            for c in &self.cycles {
                tail.or_assign_repeat(c, 0);
            }
            bits.or_assign_shifted(&tail, self.stem.len());
        }
        bits
    }

    /// Membership of an arbitrary-precision length.
    pub fn accepts(&self, len: &BigUint) -> bool {
        if let Some(l) = len.to_usize() {
            if l < self.stem.len() {
                return self.stem.get(l);
            }
        }
        let stem = BigUint::from(self.stem.len());
        if len < &stem {
            // too large for usize yet below the stem cannot happen
            unreachable!();
        }
        let off = len - stem;
        self.cycles.iter().any(|c| {
            let p = BigUint::from(c.len());
            let idx = (&off % p).to_usize().expect("cycle index fits usize");
            c.get(idx)
        })
    }

    pub fn accepts_u64(&self, len: u64) -> bool {
        self.accepts(&BigUint::from(len))
    }

    /// True when no word is accepted.
    pub fn is_empty_language(&self) -> bool {
        self.stem.all_zeros() && self.cycles.iter().all(|c| c.all_zeros())
    }
}

/// Outcome of an ambiguity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmbiguityVerdict {
    Unambiguous,
    Ambiguous,
    UnknownBeyondBound,
}

/// A word length certifying a failed relation or an ambiguity, with the
/// residue classes it was assembled from when it came out of a CRT step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessLength {
    pub value: BigUint,
    pub derivation: Option<Vec<ResidueClass>>,
}

impl WitnessLength {
    pub fn plain(value: impl Into<BigUint>) -> Self {
        WitnessLength {
            value: value.into(),
            derivation: None,
        }
    }

    pub fn with_derivation(value: BigUint, classes: Vec<ResidueClass>) -> Self {
        debug_assert!(classes.iter().all(|c| c.contains(&value)));
        WitnessLength {
            value,
            derivation: Some(classes),
        }
    }

    /// Re-checks that the value satisfies every recorded residue class.
    pub fn satisfies_derivation(&self) -> bool {
        self.derivation
            .as_ref()
            .is_none_or(|cs| cs.iter().all(|c| c.contains(&self.value)))
    }
}

/// Report of an ambiguity analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguityReport {
    pub verdict: AmbiguityVerdict,
    /// Present iff the verdict is `Ambiguous`.
    pub witness: Option<WitnessLength>,
    /// Present iff the input was a general NFA (the bound that was used).
    pub bound_used: Option<usize>,
}

impl AmbiguityReport {
    pub fn is_unambiguous(&self) -> bool {
        self.verdict == AmbiguityVerdict::Unambiguous
    }
}

/// Exact ambiguity test for Chrobak Normal Form.
///
/// Beyond the stem, the number of accepting runs of a word equals the
/// number of cycles accepting it, so two distinct cycles conflict iff they
/// share an accepted length: accepting offsets `a` (cycle length `p`) and
/// `b` (cycle length `q`) collide iff `a ≡ b (mod gcd(p, q))`. The witness
/// is the least common accepted length, assembled by CRT and lifted above
/// the stem.
pub fn ambiguity_chrobak(c: &ChrobakNF) -> AmbiguityReport {
    let stem_len = BigUint::from(c.stem.len());
    let mut best: Option<BigUint> = None;
    let mut best_classes: Option<Vec<ResidueClass>> = None;
    for (i, ci) in c.cycles.iter().enumerate() {
        for cj in c.cycles.iter().skip(i + 1) {
            let (p, q) = (ci.len() as u64, cj.len() as u64);
            let g = gcd_u64(p, q);
            for a in ci.iter_ones() {
                for b in cj.iter_ones() {
                    if a as u64 % g != b as u64 % g {
                        continue;
                    }
                    let classes = vec![
                        ResidueClass::from_u64(p, a as u64),
                        ResidueClass::from_u64(q, b as u64),
                    ];
                    let sol = crt_solve(&classes).expect("classes agree mod gcd");
                    // offset -> length: shift by the stem
                    let value = sol.smallest_at_least(&BigUint::ZERO) + &stem_len;
                    if best.as_ref().is_none_or(|b| &value < b) {
                        let shifted = classes
                            .iter()
                            .map(|cl| {
                                ResidueClass::new(
                                    cl.modulus.clone(),
                                    (&cl.residue + &stem_len) % &cl.modulus,
                                )
                            })
                            .collect();
                        best = Some(value);
                        best_classes = Some(shifted);
                    }
                }
            }
        }
    }
    match best {
        Some(value) => AmbiguityReport {
            verdict: AmbiguityVerdict::Ambiguous,
            witness: Some(WitnessLength::with_derivation(
                value,
                best_classes.unwrap(),
            )),
            bound_used: None,
        },
        None => AmbiguityReport {
            verdict: AmbiguityVerdict::Unambiguous,
            witness: None,
            bound_used: None,
        },
    }
}

/// Bounded-exact ambiguity test for general unary NFAs.
///
/// Per-state accepting-run counts capped at 2 are iterated length by
/// length. The capped vector evolves deterministically, so a repeated
/// vector proves the verdict exactly; only when no repeat occurs within
/// `max_steps` vectors does the result stay open.
pub fn ambiguity_nfa(a: &UnaryNfa, max_steps: usize) -> AmbiguityReport {
    assert!(max_steps >= 1);
    let mut counts = vec![0u8; a.num_states];
    for &s in &a.starts {
        counts[s] = counts[s].saturating_add(1).min(2);
    }
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    for step in 0..max_steps {
        let accepting_runs: u32 = a.accepts.iter().map(|&s| counts[s] as u32).sum();
        if accepting_runs >= 2 {
            return AmbiguityReport {
                verdict: AmbiguityVerdict::Ambiguous,
                witness: Some(WitnessLength::plain(step as u64)),
                bound_used: Some(max_steps),
            };
        }
        if seen.insert(counts.clone(), step).is_some() {
            return AmbiguityReport {
                verdict: AmbiguityVerdict::Unambiguous,
                witness: None,
                bound_used: Some(max_steps),
            };
        }
        let mut next = vec![0u8; a.num_states];
        for (u, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &v in &a.succ[u] {
                next[v] = (next[v] + c).min(2);
            }
        }
        counts = next;
    }
    AmbiguityReport {
        verdict: AmbiguityVerdict::UnknownBeyondBound,
        witness: None,
        bound_used: Some(max_steps),
    }
}

/// Default vector budget for [`ambiguity_nfa`].
pub const DEFAULT_AMBIGUITY_STEPS: usize = 1_000_000;

/// Either automaton representation; several operations accept both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automaton {
    Nfa(UnaryNfa),
    Chrobak(ChrobakNF),
}

impl Automaton {
    pub fn membership_bits(&self, upto: usize) -> BitSeq {
        match self {
            Automaton::Nfa(a) => a.membership_bits(upto),
            Automaton::Chrobak(c) => c.membership_bits(upto),
        }
    }

    pub fn num_states(&self) -> usize {
        match self {
            Automaton::Nfa(a) => a.num_states(),
            Automaton::Chrobak(c) => c.num_states(),
        }
    }
}

/// The seven-state example automaton: a two-state stem branching into
/// cycles of lengths 2 and 3 (test fixture).
#[cfg(test)]
pub(crate) fn two_three_example() -> UnaryNfa {
    // 0=s 1=u 2=v 3=w 4=x 5=y 6=z
    UnaryNfa::new(
        7,
        vec![0],
        vec![1, 2, 4],
        vec![(0, 1), (1, 2), (1, 4), (2, 3), (3, 2), (4, 5), (5, 6), (6, 4)],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(s: &str) -> BitSeq {
        BitSeq::from_str01(s).unwrap()
    }

    #[test]
    fn membership_bits_chrobak() {
        let all = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("1")]);
        assert_eq!(all.membership_bits(3).to_string01(), "111");

        let evens = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10")]);
        assert_eq!(evens.membership_bits(5).to_string01(), "10101");
    }

    #[test]
    fn membership_bits_nfa_path() {
        // 3-state path accepting only length 2
        let a = UnaryNfa::new(3, vec![0], vec![2], vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(a.membership_bits(4).to_string01(), "0010");
    }

    #[test]
    fn membership_respects_stem_boundary() {
        let c = ChrobakNF::new(cyc("01"), vec![cyc("100")]);
        // lengths: 0 no, 1 yes (stem), then offsets 0,3,6.. from length 2
        assert_eq!(c.membership_bits(9).to_string01(), "011001001");
        assert!(c.accepts(&BigUint::from(2u32 + 3 * 1000u32)));
        assert!(!c.accepts(&BigUint::from(3u32)));
    }

    #[test]
    fn ambiguity_chrobak_examples() {
        let ok = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10"), cyc("01")]);
        assert!(ambiguity_chrobak(&ok).is_unambiguous());

        let bad = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10"), cyc("0010")]);
        let rep = ambiguity_chrobak(&bad);
        assert_eq!(rep.verdict, AmbiguityVerdict::Ambiguous);
        let w = rep.witness.unwrap();
        assert_eq!(w.value, BigUint::from(2u32));
        assert!(w.satisfies_derivation());

        let ok2 = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10"), cyc("0001")]);
        assert!(ambiguity_chrobak(&ok2).is_unambiguous());
    }

    #[test]
    fn ambiguity_chrobak_counts_match_runs() {
        // run-count simulation to length 8 for the two DERIVED cases above
        let count_runs = |c: &ChrobakNF, len: usize| -> usize {
            c.cycles.iter().filter(|cy| cy.get(len % cy.len())).count()
        };
        let bad = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10"), cyc("0010")]);
        assert!((0..=8).any(|l| count_runs(&bad, l) >= 2));
        let ok = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10"), cyc("0001")]);
        assert!((0..=8).all(|l| count_runs(&ok, l) <= 1));
    }

    #[test]
    fn ambiguity_nfa_dfa_shaped() {
        let a = UnaryNfa::new(3, vec![0], vec![1], vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let rep = ambiguity_nfa(&a, 1000);
        assert!(rep.is_unambiguous());
        assert_eq!(rep.bound_used, Some(1000));
    }

    #[test]
    fn ambiguity_nfa_parallel_loops() {
        let a = UnaryNfa::new(2, vec![0, 1], vec![0, 1], vec![(0, 0), (1, 1)]).unwrap();
        let rep = ambiguity_nfa(&a, 1000);
        assert_eq!(rep.verdict, AmbiguityVerdict::Ambiguous);
        assert_eq!(rep.witness.unwrap().value, BigUint::ZERO);
    }

    #[test]
    fn ambiguity_nfa_stem_cycle_example() {
        let rep = ambiguity_nfa(&super::two_three_example(), 1000);
        assert_eq!(rep.verdict, AmbiguityVerdict::Ambiguous);
        assert_eq!(rep.witness.unwrap().value, BigUint::from(2u32));
    }

    #[test]
    fn unknown_beyond_bound() {
        let a = super::two_three_example();
        let rep = ambiguity_nfa(&a, 2);
        assert_eq!(rep.verdict, AmbiguityVerdict::UnknownBeyondBound);
        assert_eq!(rep.bound_used, Some(2));
    }
}
