//! Conversion to and normalisation of Chrobak Normal Form.
//!
//! The conversion here trades size for robustness: a stem of `n²` bits
//! (the classical eventual-periodicity threshold), one candidate cycle per
//! distinct strongly-connected-component period, and a verified fallback to
//! a single lcm-length cycle when the small cycles fail to cover every
//! accepting residue. Whether the per-period decomposition always covers is
//! not settled, hence the coverage check instead of an assumption.

use crate::automaton::{ChrobakNF, UnaryNfa};
use crate::bits::BitSeq;
use crate::error::{Error, Result};
use crate::numtheory::gcd_u64;

/// Strongly connected components of an NFA with the digraph period of each
/// nontrivial component.
#[derive(Clone, Debug)]
pub struct SccSummary {
    /// `component_of[state] = component index`.
    pub component_of: Vec<usize>,
    pub num_components: usize,
    /// `(component, period)` for each component containing a cycle.
    pub periods: Vec<(usize, u64)>,
}

/// Tarjan-style SCC computation (iterative), then the period of each
/// nontrivial component as the gcd of `level[u] + 1 - level[v]` over its
/// internal edges, levels from a BFS inside the component.
pub fn scc_summary(a: &UnaryNfa) -> SccSummary {
    let n = a.num_states;
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component_of = vec![usize::MAX; n];
    let mut next_index = 0usize;
    let mut num_components = 0usize;

    // explicit DFS stack: (state, next child position)
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut ci)) = call.last_mut() {
            if *ci == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ci < a.succ[v].len() {
                let w = a.succ[v][*ci];
                *ci += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        component_of[w] = num_components;
                        if w == v {
                            break;
                        }
                    }
                    num_components += 1;
                }
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }

    let mut periods = Vec::new();
    for comp in 0..num_components {
        let members: Vec<usize> = (0..n).filter(|&s| component_of[s] == comp).collect();
        let internal: Vec<(usize, usize)> = members
            .iter()
            .flat_map(|&u| {
                a.succ[u]
                    .iter()
                    .filter(|&&v| component_of[v] == comp)
                    .map(move |&v| (u, v))
            })
            .collect();
        if internal.is_empty() {
            continue; // trivial component, no cycle through it
        }
        // BFS levels from an arbitrary member over internal edges
        let mut level = vec![i64::MIN; n];
        let start = members[0];
        level[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &a.succ[u] {
                if component_of[v] == comp && level[v] == i64::MIN {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut g = 0u64;
        for (u, v) in internal {
            let diff = (level[u] + 1 - level[v]).unsigned_abs();
            g = gcd_u64(g, diff);
        }
        // an SCC with a cycle always yields g >= 1
        periods.push((comp, g.max(1)));
    }

    SccSummary {
        component_of,
        num_components,
        periods,
    }
}

/// Converts a unary NFA into a language-equivalent Chrobak Normal Form.
///
/// Stem length is fixed at `n²`. `G` is the lcm of all SCC periods; bits
/// must satisfy `acc(ℓ) = acc(ℓ + G)` on the verification window, one cycle
/// of length `g` is emitted per distinct period `g` (a residue accepts only
/// if every window position in it accepts), and if those cycles fail to
/// jointly cover the accepting residues the construction falls back to a
/// single exact cycle of length `G`.
pub fn nfa_to_chrobak(a: &UnaryNfa, guard: u64) -> Result<ChrobakNF> {
    let n = a.num_states;
    let stem_len = n * n;
    let summary = scc_summary(a);
    let mut g_lcm = 1u64;
    for &(_, g) in &summary.periods {
        g_lcm = match crate::numtheory::lcm_u64_checked(g_lcm, g) {
            Some(v) if v <= guard => v,
            _ => {
                return Err(Error::GuardExceeded {
                    what: "chrobak conversion period lcm",
                    needed: summary
                        .periods
                        .iter()
                        .fold(1u128, |acc, &(_, g)| acc.saturating_mul(g as u128)),
                    guard: guard as u128,
                })
            }
        };
    }
    let big_g = g_lcm as usize;
    let window = stem_len + 2 * big_g;
    let bits = a.membership_bits(window);

    // periodicity of the bit sequence beyond the stem
    for l in stem_len..stem_len + big_g {
        if bits.get(l) != bits.get(l + big_g) {
            // A failure here would contradict the n² threshold; treat it as
            // invalid input rather than emitting a wrong automaton.
            return Err(Error::InvalidInput(format!(
                "membership bits not {big_g}-periodic at length {l}"
            )));
        }
    }

    let stem = bits.slice(0, stem_len);

    let mut distinct: Vec<u64> = summary.periods.iter().map(|&(_, g)| g).collect();
    distinct.sort_unstable();
    distinct.dedup();

    let mut cycles = Vec::new();
    for &g in &distinct {
        let g = g as usize;
        let mut cyc = BitSeq::zeros(g);
        'res: for j in 0..g {
            // cycle bit j covers the offsets ≡ j (mod g) past the stem
            let mut l = stem_len + j;
            while l < stem_len + big_g {
                if !bits.get(l) {
                    continue 'res;
                }
                l += g;
            }
            cyc.set(j, true);
        }
        cycles.push(cyc);
    }

    // coverage: every accepting offset in the window must be explained
    let covered = |off: usize| -> bool {
        cycles.iter().any(|c| c.get(off % c.len()))
    };
    let mut all_covered = true;
    for l in stem_len..stem_len + big_g {
        if bits.get(l) && !covered(l - stem_len) {
            all_covered = false;
            break;
        }
    }
    if !all_covered {
        let mut exact = BitSeq::zeros(big_g);
        for off in 0..big_g {
            if bits.get(stem_len + off) {
                exact.set(off, true);
            }
        }
        cycles = vec![exact];
    }

    Ok(normalize(&ChrobakNF::new(stem, cycles)))
}

/// Default state guard used by the conversion and determinisation.
pub const DEFAULT_GUARD: u64 = 1_000_000;

/// Graph form of a Chrobak automaton: stem states, then each cycle laid out
/// consecutively with an entry edge from the last stem state (or a start
/// state per cycle when the stem is empty).
pub fn chrobak_to_nfa(c: &ChrobakNF) -> UnaryNfa {
    let stem_len = c.stem.len();
    let mut num_states = stem_len;
    let mut edges = Vec::new();
    let mut starts = Vec::new();
    let mut accepts = Vec::new();
    for i in 0..stem_len {
        if c.stem.get(i) {
            accepts.push(i);
        }
        if i + 1 < stem_len {
            edges.push((i, i + 1));
        }
    }
    if stem_len > 0 {
        starts.push(0);
    }
    for cyc in &c.cycles {
        let base = num_states;
        let p = cyc.len();
        num_states += p;
        for j in 0..p {
            edges.push((base + j, base + (j + 1) % p));
            if cyc.get(j) {
                accepts.push(base + j);
            }
        }
        if stem_len > 0 {
            edges.push((stem_len - 1, base));
        } else {
            starts.push(base);
        }
    }
    // A stem-only automaton still needs its walk; an empty automaton has no
    // states at all.
    UnaryNfa::new(num_states, starts, accepts, edges).expect("constructed ids in range")
}

/// Extends both stems to a common length, one step at a time: the appended
/// stem bit is the disjunction of the cycle entry bits, and every cycle
/// rotates left by one. Language preserved.
pub fn equalize_stems(c1: &ChrobakNF, c2: &ChrobakNF) -> (ChrobakNF, ChrobakNF) {
    let target = c1.stem.len().max(c2.stem.len());
    (pad_stem_to(c1, target), pad_stem_to(c2, target))
}

/// Extends one stem to `target` length by repeated entry-point moves.
pub fn pad_stem_to(c: &ChrobakNF, target: usize) -> ChrobakNF {
    assert!(target >= c.stem.len());
    let delta = target - c.stem.len();
    if delta == 0 {
        return c.clone();
    }
    let mut stem = c.stem.clone();
    for j in 0..delta {
        let bit = c.cycles.iter().any(|cyc| cyc.get(j % cyc.len()));
        stem.push(bit);
    }
    let cycles = c
        .cycles
        .iter()
        .map(|cyc| cyc.rotate_left(delta % cyc.len()))
        .collect();
    ChrobakNF::new(stem, cycles)
}

/// Merges equal-length cycles by bitwise disjunction and removes cycles
/// without accepting states. Idempotent; preserves the language.
pub fn normalize(c: &ChrobakNF) -> ChrobakNF {
    let mut by_len: Vec<(usize, BitSeq)> = Vec::new();
    for cyc in &c.cycles {
        match by_len.iter_mut().find(|(l, _)| *l == cyc.len()) {
            Some((_, merged)) => merged.or_assign(cyc),
            None => by_len.push((cyc.len(), cyc.clone())),
        }
    }
    let cycles = by_len
        .into_iter()
        .filter(|(_, c)| !c.all_zeros())
        .map(|(_, c)| c)
        .collect();
    ChrobakNF::new(c.stem.clone(), cycles)
}

/// Collapses the cycle part to a single cycle of lcm length with bits by
/// disjunction (a DFA-shaped automaton). Stem unchanged.
pub fn determinize(c: &ChrobakNF, guard: u64) -> Result<ChrobakNF> {
    if c.cycles.is_empty() {
        return Ok(c.clone());
    }
    let mut lcm = 1u64;
    for cyc in &c.cycles {
        lcm = match crate::numtheory::lcm_u64_checked(lcm, cyc.len() as u64) {
            Some(v) if v <= guard => v,
            _ => {
                return Err(Error::GuardExceeded {
                    what: "determinize cycle lcm",
                    needed: c
                        .cycles
                        .iter()
                        .fold(1u128, |acc, cy| acc.saturating_mul(cy.len() as u128)),
                    guard: guard as u128,
                })
            }
        };
    }
    let mut merged = BitSeq::zeros(lcm as usize);
    for cyc in &c.cycles {
        merged.or_assign_repeat(cyc, 0);
    }
    Ok(ChrobakNF::new(c.stem.clone(), vec![merged]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::ambiguity_chrobak;

    fn cyc(s: &str) -> BitSeq {
        BitSeq::from_str01(s).unwrap()
    }

    fn bits_equal(a: &ChrobakNF, b: &ChrobakNF, upto: usize) -> bool {
        a.membership_bits(upto) == b.membership_bits(upto)
    }

    #[test]
    fn convert_two_cycle_dfa() {
        // DFA-shaped 2-cycle accepting even lengths
        let a = UnaryNfa::new(2, vec![0], vec![0], vec![(0, 1), (1, 0)]).unwrap();
        let c = nfa_to_chrobak(&a, DEFAULT_GUARD).unwrap();
        assert_eq!(c.stem.to_string01(), "1010");
        assert_eq!(c.cycles.len(), 1);
        assert_eq!(c.cycles[0].to_string01(), "10");
        // oracle bit comparison to length 20
        assert_eq!(
            c.membership_bits(20),
            a.membership_bits(20)
        );
    }

    #[test]
    fn convert_finite_language() {
        let a = UnaryNfa::new(3, vec![0], vec![2], vec![(0, 1), (1, 2)]).unwrap();
        let c = nfa_to_chrobak(&a, DEFAULT_GUARD).unwrap();
        assert_eq!(c.stem.len(), 9);
        assert!(c.stem.get(2));
        assert_eq!(c.stem.count_ones(), 1);
        assert!(c.cycles.is_empty());
    }

    #[test]
    fn convert_stem_and_two_cycles() {
        let a = crate::automaton::two_three_example();
        let c = nfa_to_chrobak(&a, DEFAULT_GUARD).unwrap();
        let mut lens = c.cycle_lengths();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 3]);
        assert!(bits_equal(
            &c,
            &nfa_to_chrobak(&a, DEFAULT_GUARD).unwrap(),
            60
        ));
        assert_eq!(c.membership_bits(60), a.membership_bits(60));
    }

    #[test]
    fn equalize_moves_entry_points() {
        let c1 = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10")]);
        let c2 = ChrobakNF::new(cyc("1"), vec![cyc("10")]);
        let (d1, d2) = equalize_stems(&c1, &c2);
        assert_eq!(d1.stem.to_string01(), "1");
        assert_eq!(d1.cycles[0].to_string01(), "01");
        assert_eq!(d2, c2);
        assert!(bits_equal(&c1, &d1, 12));
        assert!(bits_equal(&c2, &d2, 12));
    }

    #[test]
    fn equalize_equal_stems_is_identity() {
        let c = ChrobakNF::new(cyc("01"), vec![cyc("110")]);
        let (d1, d2) = equalize_stems(&c, &c);
        assert_eq!(d1, c);
        assert_eq!(d2, c);
    }

    #[test]
    fn pad_twice_all_ones_cycle() {
        let c = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("1")]);
        let padded = pad_stem_to(&c, 2);
        assert_eq!(padded.stem.to_string01(), "11");
        assert_eq!(padded.cycles[0].to_string01(), "1");
    }

    #[test]
    fn normalize_merges_and_drops() {
        let c = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10"), cyc("01")]);
        let n = normalize(&c);
        assert_eq!(n.cycles.len(), 1);
        assert_eq!(n.cycles[0].to_string01(), "11");

        let c = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("00"), cyc("100")]);
        let n = normalize(&c);
        assert_eq!(n.cycles.len(), 1);
        assert_eq!(n.cycles[0].to_string01(), "100");

        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn normalize_keeps_disjoint_unambiguous() {
        let c = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10"), cyc("01")]);
        assert!(ambiguity_chrobak(&c).is_unambiguous());
        assert!(ambiguity_chrobak(&normalize(&c)).is_unambiguous());
    }

    #[test]
    fn determinize_examples() {
        let c = ChrobakNF::new(BitSeq::zeros(0), vec![cyc("10"), cyc("100")]);
        let d = determinize(&c, DEFAULT_GUARD).unwrap();
        assert_eq!(d.cycles.len(), 1);
        assert_eq!(d.cycles[0].len(), 6);
        // accepting residues mod 6: even or ≡ 0 mod 3
        assert_eq!(d.cycles[0].to_string01(), "101110");
        assert!(bits_equal(&c, &d, 24));

        let single = ChrobakNF::new(cyc("1"), vec![cyc("101")]);
        assert_eq!(determinize(&single, DEFAULT_GUARD).unwrap(), single);

        let big = ChrobakNF::new(BitSeq::zeros(0), vec![BitSeq::ones(7), BitSeq::ones(11)]);
        assert!(matches!(
            determinize(&big, 50),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn chrobak_to_nfa_roundtrip_bits() {
        let c = ChrobakNF::new(cyc("011"), vec![cyc("10"), cyc("001")]);
        let a = chrobak_to_nfa(&c);
        assert_eq!(a.num_states(), c.num_states());
        assert_eq!(a.membership_bits(40), c.membership_bits(40));
        let back = nfa_to_chrobak(&a, DEFAULT_GUARD).unwrap();
        assert_eq!(back.membership_bits(40), c.membership_bits(40));
    }

    #[test]
    fn scc_periods_of_example() {
        let a = crate::automaton::two_three_example();
        let s = scc_summary(&a);
        let mut ps: Vec<u64> = s.periods.iter().map(|&(_, g)| g).collect();
        ps.sort_unstable();
        assert_eq!(ps, vec![2, 3]);
    }
}
