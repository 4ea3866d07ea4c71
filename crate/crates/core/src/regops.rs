//! Regular operations on unary automata with their size bounds.
//!
//! Complementation of an unambiguous automaton is the centrepiece: a
//! recursive descent over residue classes `(d, k)` that either settles a
//! class (all-accepted or all-rejected) or refines the modulus by the lcm
//! with a partially-accepting cycle. Everything else is built from it, from
//! products, or from guarded membership-bit windows.

use std::time::Duration;

use crate::automaton::{ambiguity_chrobak, ChrobakNF, UnaryNfa};
use crate::bits::BitSeq;
use crate::chrobak::{equalize_stems, normalize};
use crate::error::{Error, Result};
use crate::numtheory::{gcd_u64, lcm_u64_checked};

/// A residue-class node of the complement descent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueNode {
    pub modulus: u64,
    pub residue: u64,
    pub depth: usize,
}

/// Sizes and timing of one operation, for the CLI and the bench harness.
#[derive(Clone, Debug)]
pub struct OpReport {
    pub input_sizes: Vec<usize>,
    pub output_size: usize,
    pub elapsed: Duration,
}

/// Complement of an unambiguous automaton in Chrobak Normal Form.
///
/// Stem bits are flipped verbatim. The cycle part is complemented by the
/// residue-class descent starting at `(1, 0)`: a class whose words are all
/// accepted by a single cycle is dropped, a class no cycle touches becomes
/// one accepting state on a cycle of the class modulus, and a class some
/// cycle accepts partially is split along `lcm(d, |C_h|)`. Equal-length
/// output cycles are merged afterwards. The output is again unambiguous.
pub fn complement_ufa(c: &ChrobakNF) -> Result<ChrobakNF> {
    let report = ambiguity_chrobak(c);
    if !report.is_unambiguous() {
        return Err(Error::AmbiguousInput(report.witness.expect("ambiguous has witness")));
    }
    let mut stem = c.stem.clone();
    stem.not_in_place();

    let total: usize = c.cycles.iter().map(|cy| cy.len()).sum();
    let depth_cap = (total.max(2) as f64).log2().ceil() as usize + 2;

    let mut out: Vec<ResidueNode> = Vec::new();
    let mut stack: Vec<ResidueNode> = vec![ResidueNode {
        modulus: 1,
        residue: 0,
        depth: 0,
    }];
    while let Some(node) = stack.pop() {
        if node.depth > depth_cap {
            return Err(Error::RecursionOverflow { depth: node.depth });
        }
        let d = node.modulus;
        let k = node.residue;
        // how each cycle meets the class k mod d
        let mut splitter: Option<&BitSeq> = None;
        let mut class_fully_accepted = false;
        let mut any_accept = false;
        for cy in &c.cycles {
            let p = cy.len() as u64;
            let g = gcd_u64(d, p);
            let reach = p / g; // distinct offsets (k + s·d) mod p
            let mut accepts = 0u64;
            for s in 0..reach {
                let off = ((k + s.checked_mul(d).expect("offset fits u64")) % p) as usize;
                if cy.get(off) {
                    accepts += 1;
                }
            }
            if accepts == reach {
                class_fully_accepted = true;
                break;
            }
            if accepts > 0 {
                any_accept = true;
                let better = match splitter {
                    None => true,
                    Some(prev) => cy.len() < prev.len(),
                };
                if better {
                    splitter = Some(cy);
                }
            }
        }
        if class_fully_accepted {
            continue;
        }
        if !any_accept {
            out.push(node);
            continue;
        }
        let h = splitter.expect("partial acceptance implies a splitter");
        let d2 = lcm_u64_checked(d, h.len() as u64).ok_or(Error::RecursionOverflow {
            depth: node.depth,
        })?;
        for s in (0..d2 / d).rev() {
            stack.push(ResidueNode {
                modulus: d2,
                residue: k + s * d,
                depth: node.depth + 1,
            });
        }
    }

    // merge nodes of equal modulus into single cycles
    out.sort_by_key(|n| (n.modulus, n.residue));
    let mut cycles: Vec<BitSeq> = Vec::new();
    let mut i = 0;
    while i < out.len() {
        let d = out[i].modulus;
        let mut cyc = BitSeq::zeros(d as usize);
        while i < out.len() && out[i].modulus == d {
            cyc.set(out[i].residue as usize, true);
            i += 1;
        }
        cycles.push(cyc);
    }
    Ok(ChrobakNF::new(stem, cycles))
}

/// Product automaton on state pairs; recognises the intersection and
/// preserves unambiguity. Exactly `|a| · |b|` states.
pub fn intersect(a: &UnaryNfa, b: &UnaryNfa) -> UnaryNfa {
    let n = a.num_states;
    let m = b.num_states;
    let id = |u: usize, v: usize| u * m + v;
    let mut edges = Vec::new();
    for u in 0..n {
        for &u2 in &a.succ[u] {
            for v in 0..m {
                for &v2 in &b.succ[v] {
                    edges.push((id(u, v), id(u2, v2)));
                }
            }
        }
    }
    let starts = a
        .starts
        .iter()
        .flat_map(|&u| b.starts.iter().map(move |&v| id(u, v)))
        .collect();
    let accepts = a
        .accepts
        .iter()
        .flat_map(|&u| b.accepts.iter().map(move |&v| id(u, v)))
        .collect();
    UnaryNfa::new(n * m, starts, accepts, edges).expect("product ids in range")
}

/// Intersection directly on Chrobak forms: stems are equalized and
/// conjoined, and each cycle pair becomes one cycle of lcm length. Output
/// size is at most the product of the cycle-state counts; unambiguity is
/// preserved.
pub fn intersect_chrobak(c1: &ChrobakNF, c2: &ChrobakNF) -> ChrobakNF {
    let (d1, d2) = equalize_stems(c1, c2);
    let mut stem = d1.stem.clone();
    stem.and_assign(&d2.stem);
    let mut cycles = Vec::new();
    for x in &d1.cycles {
        for y in &d2.cycles {
            let l = lcm_u64_checked(x.len() as u64, y.len() as u64)
                .expect("cycle lcm fits u64") as usize;
            let mut both = BitSeq::zeros(l);
            both.or_assign_repeat(x, 0);
            let mut other = BitSeq::zeros(l);
            other.or_assign_repeat(y, 0);
            both.and_assign(&other);
            if !both.all_zeros() {
                cycles.push(both);
            }
        }
    }
    ChrobakNF::new(stem, cycles)
}

/// Side-by-side union of two NFAs; exactly `|a| + |b|` states. The caller
/// asserts disjointness when unambiguity must be preserved.
pub fn disjoint_union(a: &UnaryNfa, b: &UnaryNfa) -> UnaryNfa {
    let shift = a.num_states;
    let mut edges = Vec::new();
    for (u, vs) in a.succ.iter().enumerate() {
        for &v in vs {
            edges.push((u, v));
        }
    }
    for (u, vs) in b.succ.iter().enumerate() {
        for &v in vs {
            edges.push((u + shift, v + shift));
        }
    }
    let starts = a
        .starts
        .iter()
        .copied()
        .chain(b.starts.iter().map(|&s| s + shift))
        .collect();
    let accepts = a
        .accepts
        .iter()
        .copied()
        .chain(b.accepts.iter().map(|&s| s + shift))
        .collect();
    UnaryNfa::new(a.num_states + b.num_states, starts, accepts, edges)
        .expect("shifted ids in range")
}

/// Disjoint union on Chrobak forms: equalized stems disjoined, cycle lists
/// concatenated.
pub fn disjoint_union_chrobak(c1: &ChrobakNF, c2: &ChrobakNF) -> ChrobakNF {
    let (mut d1, d2) = equalize_stems(c1, c2);
    d1.stem.or_assign(&d2.stem);
    d1.cycles.extend(d2.cycles);
    d1
}

/// Union of two unambiguous automata as `L ∪ (H − L)`: the disjoint union
/// of `c1` with `complement(c1) ∩ c2`. Requires both inputs unambiguous;
/// the output is unambiguous.
pub fn union_ufa(c1: &ChrobakNF, c2: &ChrobakNF) -> Result<ChrobakNF> {
    require_unambiguous(c2)?;
    let not1 = complement_ufa(c1)?;
    let only2 = intersect_chrobak(&not1, c2);
    Ok(normalize(&disjoint_union_chrobak(c1, &only2)))
}

/// Symmetric difference as the disjoint union of the two one-sided
/// differences. Requires both inputs unambiguous; output unambiguous.
pub fn symdiff_ufa(c1: &ChrobakNF, c2: &ChrobakNF) -> Result<ChrobakNF> {
    let not1 = complement_ufa(c1)?;
    let not2 = complement_ufa(c2)?;
    let left = intersect_chrobak(c1, &not2);
    let right = intersect_chrobak(c2, &not1);
    Ok(normalize(&disjoint_union_chrobak(&left, &right)))
}

fn require_unambiguous(c: &ChrobakNF) -> Result<()> {
    let rep = ambiguity_chrobak(c);
    if rep.is_unambiguous() {
        Ok(())
    } else {
        Err(Error::AmbiguousInput(rep.witness.expect("witness")))
    }
}

/// Kleene star as a DFA-shaped Chrobak form with at most `(n−1)² + 1`
/// states for an `n`-state input.
///
/// Closure bits are computed by additive dynamic programming over a window
/// of three times the state bound; the stem/period pair is then the
/// shortest one consistent with the window, which is enough because the
/// true language has a DFA within the bound and two eventually periodic
/// sequences agreeing that long agree everywhere.
pub fn star(a: &UnaryNfa) -> ChrobakNF {
    let n = a.num_states();
    let bound = if n == 0 { 1 } else { (n - 1) * (n - 1) + 1 };
    let window = 3 * bound + 2;
    let lang = a.membership_bits(window);

    let mut closure = BitSeq::zeros(window);
    closure.set(0, true);
    // generators: every accepted nonzero length in the window
    let gens: Vec<usize> = lang.iter_ones().filter(|&i| i >= 1).collect();
    if gens.is_empty() {
        return ChrobakNF::new(BitSeq::from_bools(&[true]), Vec::new());
    }
    // saturate: the smallest generator alone forces convergence within
    // window/g passes, but each pass is a cheap shifted OR
    loop {
        let before = closure.count_ones();
        for &g in &gens {
            let shifted = closure.clone();
            closure.or_assign_shifted(&shifted, g);
        }
        if closure.count_ones() == before {
            break;
        }
    }

    // find (stem, period) with stem + period <= bound, consistent on the window
    for period in 1..=bound {
        let mismatch = closure.last_mismatch_at_shift(period, 0);
        let stem_needed = match mismatch {
            None => 0,
            Some(i) => i + 1,
        };
        if stem_needed + period <= bound {
            let stem = closure.slice(0, stem_needed);
            let cyc = closure.slice(stem_needed, period);
            return ChrobakNF::new(stem, vec![cyc]);
        }
    }
    unreachable!("a star language of an n-state automaton fits in (n-1)^2+1 states");
}

/// Concatenation on the graph form: both automata side by side, bridge
/// edges from accepting states of `a` to the one-step successors of the
/// starts of `b`. Exactly `|a| + |b|` states.
pub fn concat_nfa(a: &UnaryNfa, b: &UnaryNfa) -> UnaryNfa {
    let shift = a.num_states;
    let b_accepts_empty = b.starts.iter().any(|s| b.accepts.binary_search(s).is_ok());
    let a_accepts_empty = a.starts.iter().any(|s| a.accepts.binary_search(s).is_ok());
    let mut edges = Vec::new();
    for (u, vs) in a.succ.iter().enumerate() {
        for &v in vs {
            edges.push((u, v));
        }
    }
    for (u, vs) in b.succ.iter().enumerate() {
        for &v in vs {
            edges.push((u + shift, v + shift));
        }
    }
    let b_entry: Vec<usize> = {
        let mut t: Vec<usize> = b
            .starts
            .iter()
            .flat_map(|&s| b.succ[s].iter().copied())
            .collect();
        t.sort_unstable();
        t.dedup();
        t
    };
    for &f in &a.accepts {
        for &t in &b_entry {
            edges.push((f, t + shift));
        }
    }
    let mut starts: Vec<usize> = a.starts.clone();
    if a_accepts_empty {
        starts.extend(b.starts.iter().map(|&s| s + shift));
    }
    let mut accepts: Vec<usize> = b.accepts.iter().map(|&s| s + shift).collect();
    if b_accepts_empty {
        accepts.extend(a.accepts.iter().copied());
    }
    UnaryNfa::new(a.num_states + b.num_states, starts, accepts, edges)
        .expect("shifted ids in range")
}

/// Exact concatenation through membership bits: both inputs are expanded
/// over the window `stem₁ + stem₂ + 2·lcm(all cycle lengths) + 2`, the
/// boolean convolution is taken, and a DFA-shaped Chrobak form is read off
/// by threshold/period extraction.
pub fn concat_via_bits(c1: &ChrobakNF, c2: &ChrobakNF, guard: u64) -> Result<ChrobakNF> {
    let mut lcm: u64 = 1;
    for l in c1.cycle_lengths().into_iter().chain(c2.cycle_lengths()) {
        lcm = lcm_u64_checked(lcm, l).ok_or(Error::GuardExceeded {
            what: "concatenation window",
            needed: u128::MAX,
            guard: guard as u128,
        })?;
    }
    let window_u64 = (c1.stem_len() as u64 + c2.stem_len() as u64)
        .checked_add(2 * lcm + 2)
        .ok_or(Error::GuardExceeded {
            what: "concatenation window",
            needed: u128::MAX,
            guard: guard as u128,
        })?;
    if window_u64 > guard {
        return Err(Error::GuardExceeded {
            what: "concatenation window",
            needed: window_u64 as u128,
            guard: guard as u128,
        });
    }
    let window = window_u64 as usize;
    let bits1 = c1.membership_bits(window);
    let bits2 = c2.membership_bits(window);
    let mut conv = BitSeq::zeros(window);
    // drive the convolution from the sparser side
    let (xs, ys) = if bits1.count_ones() <= bits2.count_ones() {
        (&bits1, &bits2)
    } else {
        (&bits2, &bits1)
    };
    for i in xs.iter_ones() {
        conv.or_assign_shifted(ys, i);
    }

    let threshold = c1.stem_len() + c2.stem_len() + lcm as usize;
    let period = lcm as usize;
    // the window proves (threshold, period); shrink both where the bits allow
    let period = {
        let mut best = period;
        let mut d = 1;
        while d * d <= period {
            if period % d == 0 {
                for cand in [d, period / d] {
                    if cand < best && conv.mismatch_at_shift(cand, threshold).is_none() {
                        best = cand;
                    }
                }
            }
            d += 1;
        }
        best
    };
    let mut stem_len = threshold;
    while stem_len > 0 {
        let last = stem_len - 1;
        if conv.get(last) == conv.get(last + period) {
            stem_len -= 1;
        } else {
            break;
        }
    }
    let stem = conv.slice(0, stem_len);
    let cyc = conv.slice(stem_len, period);
    Ok(normalize(&ChrobakNF::new(stem, vec![cyc])))
}

/// Structured intersection for inputs whose accepting states are aligned
/// to residues modulo `m`: for each residue with an accepting cycle on
/// both sides, one cycle of lcm length accepting where both do.
///
/// Preconditions (checked): every cycle length on either side is divisible
/// by `m`, and within each input no two cycles accept at positions sharing
/// a residue modulo `m`.
pub fn structured_intersection(c1: &ChrobakNF, c2: &ChrobakNF, m: u64) -> Result<ChrobakNF> {
    if m == 0 {
        return Err(Error::StructureViolation("modulus must be >= 1".into()));
    }
    let (d1, d2) = equalize_stems(c1, c2);
    let assign = |c: &ChrobakNF, side: &str| -> Result<Vec<Option<BitSeq>>> {
        let mut by_residue: Vec<Option<BitSeq>> = vec![None; m as usize];
        for cyc in &c.cycles {
            if cyc.all_zeros() {
                continue;
            }
            if cyc.len() as u64 % m != 0 {
                return Err(Error::StructureViolation(format!(
                    "{side}: cycle length {} not divisible by modulus {m}",
                    cyc.len()
                )));
            }
            let mut residues: Vec<u64> = cyc.iter_ones().map(|t| t as u64 % m).collect();
            residues.sort_unstable();
            residues.dedup();
            for &r in &residues {
                let slot = &mut by_residue[r as usize];
                if slot.is_some() {
                    return Err(Error::StructureViolation(format!(
                        "{side}: two cycles accept at residue {r} mod {m}"
                    )));
                }
                *slot = Some(cyc.clone());
            }
        }
        Ok(by_residue)
    };
    let left = assign(&d1, "first input")?;
    let right = assign(&d2, "second input")?;

    let mut stem = d1.stem.clone();
    stem.and_assign(&d2.stem);
    let mut cycles = Vec::new();
    for r in 0..m as usize {
        let (Some(a), Some(b)) = (&left[r], &right[r]) else {
            continue;
        };
        let l = lcm_u64_checked(a.len() as u64, b.len() as u64).ok_or_else(|| {
            Error::StructureViolation("cycle lcm overflows".into())
        })? as usize;
        let mut cyc = BitSeq::zeros(l);
        let mut t = r;
        while t < l {
            if a.get(t % a.len()) && b.get(t % b.len()) {
                cyc.set(t, true);
            }
            t += m as usize;
        }
        if !cyc.all_zeros() {
            cycles.push(cyc);
        }
    }
    Ok(ChrobakNF::new(stem, cycles))
}

/// Complement state bound `n^(log₂ n + 10)` as a float, for bound checks.
pub fn complement_state_bound(n: usize) -> f64 {
    if n <= 1 {
        return 2.0;
    }
    let nf = n as f64;
    nf.powf(nf.log2() + 10.0)
}

/// Guard default shared by the windowed operations.
pub use crate::chrobak::DEFAULT_GUARD;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{ambiguity_nfa, AmbiguityVerdict};
    use crate::chrobak::chrobak_to_nfa;

    fn cyc(s: &str) -> BitSeq {
        BitSeq::from_str01(s).unwrap()
    }

    fn cnf(stem: &str, cycles: &[&str]) -> ChrobakNF {
        ChrobakNF::new(
            BitSeq::from_str01(stem).unwrap(),
            cycles.iter().map(|c| cyc(c)).collect(),
        )
    }

    fn bits_of(c: &ChrobakNF, upto: usize) -> String {
        c.membership_bits(upto).to_string01()
    }

    #[test]
    fn complement_trivial_cases() {
        let all = cnf("", &["1"]);
        let comp = complement_ufa(&all).unwrap();
        assert!(comp.is_empty_language());

        let evens = cnf("", &["10"]);
        let comp = complement_ufa(&evens).unwrap();
        assert_eq!(comp.cycles.len(), 1);
        assert_eq!(comp.cycles[0].to_string01(), "01");
    }

    #[test]
    fn complement_two_cycles() {
        let c = cnf("", &["10", "0100"]);
        let comp = complement_ufa(&c).unwrap();
        assert_eq!(comp.cycles.len(), 1);
        assert_eq!(comp.cycles[0].len(), 4);
        assert_eq!(comp.cycles[0].to_string01(), "0001");
        // oracle bit complement to length 32
        let mut want = c.membership_bits(32);
        want.not_in_place();
        assert_eq!(comp.membership_bits(32), want);
    }

    #[test]
    fn complement_rejects_ambiguous() {
        let amb = cnf("", &["10", "0010"]);
        assert!(matches!(
            complement_ufa(&amb),
            Err(Error::AmbiguousInput(_))
        ));
    }

    #[test]
    fn complement_flips_stem() {
        let c = cnf("10", &["10"]);
        let comp = complement_ufa(&c).unwrap();
        assert_eq!(comp.stem.to_string01(), "01");
        let mut want = c.membership_bits(20);
        want.not_in_place();
        assert_eq!(comp.membership_bits(20), want);
        assert!(ambiguity_chrobak(&comp).is_unambiguous());
    }

    #[test]
    fn complement_of_empty_is_all() {
        let comp = complement_ufa(&ChrobakNF::empty()).unwrap();
        assert_eq!(bits_of(&comp, 8), "11111111");
    }

    #[test]
    fn intersect_examples() {
        let evens = chrobak_to_nfa(&cnf("", &["10"]));
        let all = chrobak_to_nfa(&cnf("", &["1"]));
        let prod = intersect(&evens, &all);
        assert_eq!(prod.num_states(), 2);
        assert_eq!(prod.membership_bits(10).to_string01(), "1010101010");

        let mult2 = chrobak_to_nfa(&cnf("", &["10"]));
        let mult3 = chrobak_to_nfa(&cnf("", &["100"]));
        let prod = intersect(&mult2, &mult3);
        assert_eq!(prod.num_states(), 6);
        let bits = prod.membership_bits(36);
        for l in 0..36 {
            assert_eq!(bits.get(l), l % 6 == 0, "length {l}");
        }

        let empty = chrobak_to_nfa(&ChrobakNF::empty());
        let prod = intersect(&mult2, &empty);
        assert!(prod.membership_bits(20).all_zeros());
    }

    #[test]
    fn intersect_preserves_unambiguity() {
        let a = chrobak_to_nfa(&cnf("", &["10"]));
        let b = chrobak_to_nfa(&cnf("", &["100"]));
        let prod = intersect(&a, &b);
        assert_eq!(
            ambiguity_nfa(&prod, 10_000).verdict,
            AmbiguityVerdict::Unambiguous
        );
    }

    #[test]
    fn disjoint_union_examples() {
        let evens = chrobak_to_nfa(&cnf("", &["10"]));
        let odds = chrobak_to_nfa(&cnf("", &["01"]));
        let u = disjoint_union(&evens, &odds);
        assert_eq!(u.num_states(), 4);
        assert!(u.membership_bits(16).all_ones());

        let l = chrobak_to_nfa(&cnf("", &["110"]));
        let empty = chrobak_to_nfa(&ChrobakNF::empty());
        let u = disjoint_union(&l, &empty);
        assert_eq!(u.num_states(), 3);
        assert_eq!(u.membership_bits(12), l.membership_bits(12));

        let a5 = chrobak_to_nfa(&cnf("", &["10000"]));
        let b7 = chrobak_to_nfa(&cnf("", &["0100000"]));
        assert_eq!(disjoint_union(&a5, &b7).num_states(), 12);
    }

    #[test]
    fn union_examples() {
        let evens = cnf("", &["10"]);
        let odds = cnf("", &["01"]);
        let mult4 = cnf("", &["1000"]);

        let u = union_ufa(&evens, &evens).unwrap();
        assert_eq!(bits_of(&u, 16), bits_of(&evens, 16));

        let u = union_ufa(&evens, &odds).unwrap();
        assert!(u.membership_bits(16).all_ones());

        let u = union_ufa(&mult4, &evens).unwrap();
        assert_eq!(bits_of(&u, 32), bits_of(&evens, 32));
        assert!(ambiguity_chrobak(&u).is_unambiguous());
    }

    #[test]
    fn symdiff_examples() {
        let evens = cnf("", &["10"]);
        let mult3 = cnf("", &["100"]);

        let d = symdiff_ufa(&evens, &evens).unwrap();
        assert!(d.is_empty_language());

        let d = symdiff_ufa(&evens, &ChrobakNF::empty()).unwrap();
        assert_eq!(bits_of(&d, 16), bits_of(&evens, 16));

        let d = symdiff_ufa(&evens, &mult3).unwrap();
        let bits = d.membership_bits(36);
        for l in 0..36 {
            assert_eq!(bits.get(l), (l % 2 == 0) ^ (l % 3 == 0), "length {l}");
        }
        assert!(ambiguity_chrobak(&d).is_unambiguous());
    }

    #[test]
    fn star_examples() {
        // L = {2}: star is the even lengths, within 5 states
        let len2 = chrobak_to_nfa(&cnf("001", &[]));
        let s = star(&len2);
        assert!(s.num_states() <= 5);
        let bits = s.membership_bits(30);
        for l in 0..30 {
            assert_eq!(bits.get(l), l % 2 == 0, "length {l}");
        }

        // L = {} : star is {0}
        let empty = chrobak_to_nfa(&ChrobakNF::empty());
        let s = star(&empty);
        assert_eq!(bits_of(&s, 6), "100000");

        // L = {1}: star is everything
        let len1 = chrobak_to_nfa(&cnf("01", &[]));
        let s = star(&len1);
        assert!(s.membership_bits(20).all_ones());
    }

    #[test]
    fn star_closure_matches_naive_dp() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(1..=9);
            let mut edges = Vec::new();
            for u in 0..n {
                for _ in 0..rng.gen_range(0..=2) {
                    edges.push((u, rng.gen_range(0..n)));
                }
            }
            let a = UnaryNfa::new(
                n,
                vec![0],
                (0..n).filter(|_| rng.gen_bool(0.4)).collect(),
                edges,
            )
            .unwrap();
            let s = star(&a);
            let window = 120;
            let lang = a.membership_bits(window);
            let mut naive = vec![false; window];
            naive[0] = true;
            for l in 1..window {
                naive[l] = (1..=l).any(|i| lang.get(i) && naive[l - i]);
            }
            let got = s.membership_bits(window);
            for l in 0..window {
                assert_eq!(got.get(l), naive[l], "length {l}");
            }
            assert!(s.num_states() <= (n - 1) * (n - 1) + 1);
        }
    }

    #[test]
    fn concat_nfa_examples() {
        let len1 = chrobak_to_nfa(&cnf("01", &[]));
        let c = concat_nfa(&len1, &len1);
        assert_eq!(c.num_states(), 4);
        assert_eq!(c.membership_bits(5).to_string01(), "00100");

        let l = chrobak_to_nfa(&cnf("", &["110"]));
        let eps = chrobak_to_nfa(&cnf("1", &[]));
        let c = concat_nfa(&l, &eps);
        assert_eq!(c.num_states(), 4);
        assert_eq!(c.membership_bits(20), l.membership_bits(20));

        let evens = chrobak_to_nfa(&cnf("", &["10"]));
        let c = concat_nfa(&evens, &len1);
        // oracle convolution to length 20
        let b1 = evens.membership_bits(20);
        let b2 = len1.membership_bits(20);
        let bits = c.membership_bits(20);
        for l in 0..20 {
            let want = (0..=l).any(|i| b1.get(i) && b2.get(l - i));
            assert_eq!(bits.get(l), want, "length {l}");
        }
    }

    #[test]
    fn concat_via_bits_examples() {
        let evens = cnf("", &["10"]);
        let odds = cnf("", &["01"]);
        let out = concat_via_bits(&evens, &odds, 1_000).unwrap();
        // an even plus an odd length is always odd
        assert_eq!(bits_of(&out, 10), "0101010101");

        let out = concat_via_bits(&ChrobakNF::empty(), &evens, 1_000).unwrap();
        assert!(out.is_empty_language());

        let tight = concat_via_bits(&evens, &odds, 3);
        assert!(matches!(tight, Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn concat_via_bits_matches_convolution() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let stem_len = rng.gen_range(0..3);
                let stem: String = (0..stem_len)
                    .map(|_| if rng.gen_bool(0.5) { '1' } else { '0' })
                    .collect();
                let ncyc = rng.gen_range(0..3);
                let cycles: Vec<String> = (0..ncyc)
                    .map(|_| {
                        let l = rng.gen_range(1..5);
                        (0..l).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect()
                    })
                    .collect();
                ChrobakNF::new(
                    BitSeq::from_str01(&stem).unwrap(),
                    cycles
                        .iter()
                        .map(|c| BitSeq::from_str01(c).unwrap())
                        .collect(),
                )
            };
            let c1 = mk(&mut rng);
            let c2 = mk(&mut rng);
            let out = concat_via_bits(&c1, &c2, 10_000).unwrap();
            let w = 160;
            let b1 = c1.membership_bits(w);
            let b2 = c2.membership_bits(w);
            let got = out.membership_bits(w);
            for l in 0..w {
                let want = (0..=l).any(|i| b1.get(i) && b2.get(l - i));
                assert_eq!(got.get(l), want, "length {l}");
            }
        }
    }

    #[test]
    fn structured_intersection_identity() {
        let c = cnf("", &["100100"]);
        let out = structured_intersection(&c, &c, 6).unwrap();
        assert_eq!(bits_of(&out, 24), bits_of(&c, 24));
    }

    #[test]
    fn structured_intersection_rejects_collisions() {
        let c = cnf("", &["10", "1000"]);
        assert!(matches!(
            structured_intersection(&c, &c, 2),
            Err(Error::StructureViolation(_))
        ));
    }
}
