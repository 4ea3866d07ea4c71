//! SAT-to-automaton generators: benchmark factories that turn CNF
//! instances into automata whose universality (or formula value) encodes
//! satisfiability.
//!
//! Three constructions are provided. The universality generator spreads
//! clause groups over prime-length cycles and cross-checks shared
//! variables on product-length cycles. The formula generator builds a pair
//! of unambiguous automata whose intersection misses a run of consecutive
//! lengths exactly when a satisfying assignment exists, plus the finite
//! window language that turns the gap into a universality failure. The
//! concatenation generator produces the fixed family whose complement
//! collapses to a single residue class.

use num_traits::ToPrimitive;

use crate::automaton::ChrobakNF;
use crate::bits::BitSeq;
use crate::error::{Error, Result};
use crate::numtheory::{crt_solve, first_primes_ge, PrimeBasis, ResidueClass};
use crate::regops::structured_intersection;

/// A CNF formula: clauses of nonzero signed variable indices (DIMACS
/// convention, variables numbered from 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for cl in &clauses {
            if cl.is_empty() {
                return Err(Error::InvalidInput("empty clause".into()));
            }
            for &lit in cl {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::InvalidInput(format!("literal {lit} out of range")));
                }
            }
        }
        Ok(CnfInstance { num_vars, clauses })
    }

    /// Occurrence count per variable (1-based; index 0 unused).
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0usize; self.num_vars + 1];
        for cl in &self.clauses {
            for &lit in cl {
                occ[lit.unsigned_abs() as usize] += 1;
            }
        }
        occ
    }

    /// Is every variable used at most three times?
    pub fn is_three_occur(&self) -> bool {
        self.occurrences().iter().all(|&c| c <= 3)
    }

    fn require_three_occur(&self) -> Result<()> {
        let occ = self.occurrences();
        match occ.iter().enumerate().find(|&(_, &c)| c > 3) {
            Some((var, &occurrences)) => Err(Error::NotThreeOccur { var, occurrences }),
            None => Ok(()),
        }
    }
}

/// Rewrites an instance so every variable occurs at most three times:
/// a variable with `d > 3` occurrences becomes `d` fresh variables, one per
/// occurrence, tied together by the implication cycle
/// `(¬y_i ∨ y_{i+1 mod d})`. Equisatisfiable.
pub fn to_three_occur(c: &CnfInstance) -> CnfInstance {
    let occ = c.occurrences();
    let mut clauses = c.clauses.clone();
    let mut num_vars = c.num_vars;
    for var in 1..=c.num_vars {
        let d = occ[var];
        if d <= 3 {
            continue;
        }
        let fresh: Vec<usize> = (0..d).map(|k| num_vars + 1 + k).collect();
        num_vars += d;
        let mut next = 0usize;
        for cl in clauses.iter_mut() {
            for lit in cl.iter_mut() {
                if lit.unsigned_abs() as usize == var {
                    let y = fresh[next] as i32;
                    next += 1;
                    *lit = if *lit > 0 { y } else { -y };
                }
            }
        }
        debug_assert_eq!(next, d);
        for k in 0..d {
            let y = fresh[k] as i32;
            let z = fresh[(k + 1) % d] as i32;
            clauses.push(vec![-y, z]);
        }
    }
    CnfInstance { num_vars, clauses }
}

/// Bookkeeping of the universality generator: clause grouping, prime
/// assignment and per-group variable order (assignments are indexed in
/// binary over this order, first variable least significant).
#[derive(Clone, Debug)]
pub struct Prop1Meta {
    /// clauses per prime
    pub clauses_per_prime: usize,
    /// number of groups/primes
    pub group_count: usize,
    pub primes: PrimeBasis,
    pub assignment_order: Vec<Vec<usize>>,
    /// pairs of group indices sharing a variable (cross-check cycles)
    pub linked_pairs: Vec<(usize, usize)>,
}

fn group_vars(clauses: &[Vec<i32>]) -> Vec<usize> {
    let mut vars: Vec<usize> = clauses
        .iter()
        .flat_map(|cl| cl.iter().map(|l| l.unsigned_abs() as usize))
        .collect();
    vars.sort_unstable();
    vars.dedup();
    vars
}

fn clause_satisfied(clause: &[i32], value_of: &dyn Fn(usize) -> bool) -> bool {
    clause.iter().any(|&lit| {
        let v = value_of(lit.unsigned_abs() as usize);
        if lit > 0 {
            v
        } else {
            !v
        }
    })
}

/// Builds the universality-hardness automaton: one cycle of prime length
/// per clause group (state `k` rejecting iff the `k`-th assignment to the
/// group's variables satisfies all its clauses, out-of-range states
/// accepting), plus one cycle of length `p_i·p_j` per variable-sharing
/// group pair (state accepting iff the induced assignments disagree on a
/// shared variable). Universal iff the instance is unsatisfiable.
pub fn gen_universality_nfa(c: &CnfInstance) -> Result<(ChrobakNF, Prop1Meta)> {
    c.require_three_occur()?;
    let m = c.num_vars as u64;
    let clauses_per_prime = ((m.max(1) as f64).log2() / 3.0).floor().max(1.0) as usize;
    let group_count = c.clauses.len().div_ceil(clauses_per_prime);
    let primes = first_primes_ge(group_count, 8 * m);

    let groups: Vec<&[Vec<i32>]> = c.clauses.chunks(clauses_per_prime).collect();
    debug_assert_eq!(groups.len(), group_count);
    let orders: Vec<Vec<usize>> = groups.iter().map(|g| group_vars(g)).collect();

    let mut cycles = Vec::new();
    for (i, group) in groups.iter().enumerate() {
        let p = primes.primes[i] as usize;
        let vars = &orders[i];
        let count = 1usize << vars.len();
        assert!(count <= p, "assignment range must fit in the prime");
        let mut cyc = BitSeq::ones(p);
        for k in 0..count {
            let value_of = |var: usize| -> bool {
                let pos = vars.iter().position(|&v| v == var).expect("group var");
                k >> pos & 1 == 1
            };
            let satisfied = group.iter().all(|cl| clause_satisfied(cl, &value_of));
            if satisfied {
                cyc.set(k, false);
            }
        }
        cycles.push(cyc);
    }

    let mut linked_pairs = Vec::new();
    for i in 0..group_count {
        for j in i + 1..group_count {
            if orders[i].iter().any(|v| orders[j].binary_search(v).is_ok()) {
                linked_pairs.push((i, j));
            }
        }
    }

    for &(i, j) in &linked_pairs {
        let (pi, pj) = (primes.primes[i] as usize, primes.primes[j] as usize);
        let shared: Vec<usize> = orders[i]
            .iter()
            .copied()
            .filter(|v| orders[j].binary_search(v).is_ok())
            .collect();
        let mut cyc = BitSeq::zeros(pi * pj);
        for k in 0..pi * pj {
            let (ki, kj) = (k % pi, k % pj);
            if ki >= 1 << orders[i].len() || kj >= 1 << orders[j].len() {
                continue;
            }
            let inconsistent = shared.iter().any(|&v| {
                let bi = ki >> orders[i].iter().position(|&x| x == v).unwrap() & 1;
                let bj = kj >> orders[j].iter().position(|&x| x == v).unwrap() & 1;
                bi != bj
            });
            if inconsistent {
                cyc.set(k, true);
            }
        }
        cycles.push(cyc);
    }

    Ok((
        ChrobakNF::new(BitSeq::zeros(0), cycles),
        Prop1Meta {
            clauses_per_prime,
            group_count,
            primes,
            assignment_order: orders,
            linked_pairs,
        },
    ))
}

/// One equality constraint between two renamed copies of a variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityClause {
    pub left: usize,
    pub right: usize,
}

/// Bookkeeping of the formula-hardness generator.
#[derive(Clone, Debug)]
pub struct FormulaInstanceMeta {
    /// clause index ranges per group, over the renamed instance
    pub groups: Vec<std::ops::Range<usize>>,
    /// `(original var, group, renamed var)` for every copy introduced
    pub renamed: Vec<(usize, usize, usize)>,
    pub equalities: Vec<EqualityClause>,
    /// clause count before adding equalities
    pub m: usize,
    /// clause count including equalities
    pub m_prime: usize,
    pub primes: PrimeBasis,
    /// cycle-length block `2(m' + 1)`
    pub block: usize,
    /// per-group variable order for assignment indexing
    pub assignment_order: Vec<Vec<usize>>,
}

impl FormulaInstanceMeta {
    /// group of a renamed variable, when it is group-bound
    fn group_of_var(&self, var: usize) -> Option<usize> {
        self.assignment_order
            .iter()
            .position(|vars| vars.binary_search(&var).is_ok())
    }
}

/// Output of [`gen_formula_instance`].
pub struct FormulaInstance {
    pub h1: ChrobakNF,
    pub h2: ChrobakNF,
    pub k: ChrobakNF,
    pub meta: FormulaInstanceMeta,
}

/// Builds the formula-hardness triple `(H1, H2, K)`.
///
/// Clauses are divided into groups of `⌊log₂ m⌋` (at least 1); a variable
/// occurring in several groups is renamed per group with equality
/// constraints chaining the copies. `H1` and `H2` consist of one cycle per
/// group, of length `2(m'+1)·p_i`, accepting per the satisfaction and
/// equality rows; `K` is the finite window language of lengths
/// `0..2m'−1`. `(H1 ∩ H2)·K` is universal iff the instance is
/// unsatisfiable.
pub fn gen_formula_instance(c: &CnfInstance) -> Result<FormulaInstance> {
    c.require_three_occur()?;
    let m = c.clauses.len();
    if m == 0 {
        // no clauses: satisfiable, empty automata
        return Ok(FormulaInstance {
            h1: ChrobakNF::empty(),
            h2: ChrobakNF::empty(),
            k: ChrobakNF::empty(),
            meta: FormulaInstanceMeta {
                groups: Vec::new(),
                renamed: Vec::new(),
                equalities: Vec::new(),
                m: 0,
                m_prime: 0,
                primes: first_primes_ge(0, 0),
                block: 2,
                assignment_order: Vec::new(),
            },
        });
    }

    let width = (m as f64).log2().floor().max(1.0) as usize;
    let group_count = m.div_ceil(width);
    let groups: Vec<std::ops::Range<usize>> = (0..group_count)
        .map(|i| i * width..((i + 1) * width).min(m))
        .collect();

    // rename variables so none spans two groups
    let mut clauses = c.clauses.clone();
    let mut num_vars = c.num_vars;
    let mut renamed = Vec::new();
    let mut equalities = Vec::new();
    for var in 1..=c.num_vars {
        let touching: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                clauses[g.start..g.end]
                    .iter()
                    .any(|cl| cl.iter().any(|l| l.unsigned_abs() as usize == var))
            })
            .map(|(i, _)| i)
            .collect();
        if touching.len() <= 1 {
            continue;
        }
        let mut copies = Vec::new();
        for &g in &touching {
            let copy = num_vars + 1;
            num_vars += 1;
            renamed.push((var, g, copy));
            copies.push(copy);
            for ci in groups[g].clone() {
                for lit in clauses[ci].iter_mut() {
                    if lit.unsigned_abs() as usize == var {
                        *lit = if *lit > 0 { copy as i32 } else { -(copy as i32) };
                    }
                }
            }
        }
        for pair in copies.windows(2) {
            equalities.push(EqualityClause {
                left: pair[0],
                right: pair[1],
            });
        }
    }

    let m_prime = m + equalities.len();
    let block = 2 * (m_prime + 1);
    let primes = first_primes_ge(group_count, 8 * m as u64 + 1);
    let orders: Vec<Vec<usize>> = groups
        .iter()
        .map(|g| group_vars(&clauses[g.start..g.end]))
        .collect();

    let meta = FormulaInstanceMeta {
        groups: groups.clone(),
        renamed,
        equalities: equalities.clone(),
        m,
        m_prime,
        primes: primes.clone(),
        block,
        assignment_order: orders.clone(),
    };

    let assignment_value = |group: usize, k: usize, var: usize| -> bool {
        let vars = &orders[group];
        let count = 1usize << vars.len();
        let k = if k < count { k } else { 0 };
        let pos = vars.iter().position(|&v| v == var).expect("group var");
        k >> pos & 1 == 1
    };

    let build = |side_one: bool| -> ChrobakNF {
        let mut cycles = Vec::new();
        for (i, group) in groups.iter().enumerate() {
            let p = primes.primes[i] as usize;
            let mut cyc = BitSeq::zeros(block * p);
            for k in 0..p {
                let base = k * block;
                // j = 0: anchor states, group 0 only
                if i == 0 {
                    cyc.set(base, true);
                    cyc.set(base + 1, true);
                }
                // clause rows
                for ci in group.clone() {
                    let j = ci + 1; // clauses are 1-indexed in the layout
                    let satisfied = clause_satisfied(&clauses[ci], &|var| {
                        assignment_value(i, k, var)
                    });
                    if !satisfied {
                        cyc.set(base + 2 * j, true);
                        cyc.set(base + 2 * j + 1, true);
                    }
                }
                // equality rows
                for (e, eq) in equalities.iter().enumerate() {
                    let j = m + e + 1;
                    let var = if side_one { eq.left } else { eq.right };
                    if meta.group_of_var(var) != Some(i) {
                        continue;
                    }
                    let value = assignment_value(i, k, var);
                    // H1 marks the copy's value directly, H2 inverted
                    let (even_state, odd_state) = if side_one {
                        (value, !value)
                    } else {
                        (!value, value)
                    };
                    if even_state {
                        cyc.set(base + 2 * j, true);
                    }
                    if odd_state {
                        cyc.set(base + 2 * j + 1, true);
                    }
                }
            }
            cycles.push(cyc);
        }
        ChrobakNF::new(BitSeq::zeros(0), cycles)
    };

    let h1 = build(true);
    let h2 = build(false);
    // window language turning a gap of 2m' missing lengths into a
    // universality failure; includes the empty word so anchors cover the
    // block boundaries
    let k = ChrobakNF::lengths_below(2 * m_prime);

    Ok(FormulaInstance { h1, h2, k, meta })
}

/// Bookkeeping of the concatenation blow-up generator.
#[derive(Clone, Debug)]
pub struct BlowupInstanceMeta {
    pub m: usize,
    pub k: usize,
    pub primes: PrimeBasis,
    /// the complement of `L(U)·L(H)` is exactly this class
    pub expected_complement: ResidueClass,
}

/// Builds the concatenation blow-up pair `(U, H)`.
///
/// `U` has one cycle of length `p_ℓ·(k+3)` per prime, accepting at the
/// states `ℓ+2+h·(k+3)` for `h < p_ℓ−1`, plus one cycle of length `k+3`
/// accepting at states 0, 1 and `k+2`. `H` is the finite language of
/// lengths `0..k−1`. The complement of `L(U)·L(H)` is one residue class:
/// `k+1+(k+3)(p_ℓ−1) mod (k+3)p_ℓ` for every `ℓ`.
pub fn gen_concat_blowup(m: usize) -> (ChrobakNF, ChrobakNF, BlowupInstanceMeta) {
    assert!(m >= 4, "blow-up construction needs m >= 4");
    let k = ((m as f64) / (m as f64).log2()).floor().max(1.0) as usize;
    let primes = first_primes_ge(k, m as u64);
    let period = k + 3;

    let mut cycles = Vec::new();
    for (l, &p) in primes.primes.iter().enumerate() {
        let p = p as usize;
        let mut cyc = BitSeq::zeros(p * period);
        for h in 0..p - 1 {
            cyc.set(l + 2 + h * period, true);
        }
        cycles.push(cyc);
    }
    let mut corner = BitSeq::zeros(period);
    corner.set(0, true);
    corner.set(1, true);
    corner.set(k + 2, true);
    cycles.push(corner);
    let u = ChrobakNF::new(BitSeq::zeros(0), cycles);

    let h = ChrobakNF::lengths_below(k);

    let classes: Vec<ResidueClass> = primes
        .primes
        .iter()
        .map(|&p| {
            let modulus = (k as u64 + 3) * p;
            let residue = (k as u64 + 1 + (k as u64 + 3) * (p - 1)) % modulus;
            ResidueClass::from_u64(modulus, residue)
        })
        .collect();
    let expected_complement = crt_solve(&classes).expect("prime moduli share only k+3");

    (
        u,
        h,
        BlowupInstanceMeta {
            m,
            k,
            primes,
            expected_complement,
        },
    )
}

/// Structured intersection of a generated pair, delegating to the
/// residue-aligned product with modulus `2(m'+1)`.
pub fn gen_intersection_ufa(
    h1: &ChrobakNF,
    h2: &ChrobakNF,
    meta: &FormulaInstanceMeta,
) -> Result<ChrobakNF> {
    structured_intersection(h1, h2, meta.block as u64)
}

/// Verifies the meta invariant of the blow-up instance: the expected class
/// reduces correctly modulo every `(k+3)·p_ℓ`.
pub fn blowup_meta_consistent(meta: &BlowupInstanceMeta) -> bool {
    meta.primes.primes.iter().all(|&p| {
        let modulus = (meta.k as u64 + 3) * p;
        let want = (meta.k as u64 + 1 + (meta.k as u64 + 3) * (p - 1)) % modulus;
        (&meta.expected_complement.residue % modulus)
            .to_u64()
            .is_some_and(|r| r == want)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::ambiguity_chrobak;
    use crate::oracle::{brute_sat, oracle_universal, witness_u64};

    fn inst(num_vars: usize, clauses: &[&[i32]]) -> CnfInstance {
        CnfInstance::new(num_vars, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn three_occur_transform() {
        let c = inst(2, &[&[1, 2]]);
        assert_eq!(to_three_occur(&c), c);

        // one variable, four occurrences
        let c = inst(1, &[&[1], &[1], &[-1], &[1]]);
        let t = to_three_occur(&c);
        assert!(t.is_three_occur());
        assert_eq!(t.num_vars, 5);
        assert_eq!(t.clauses.len(), 8);
        // equisatisfiable: both unsatisfiable here
        assert_eq!(brute_sat(&c).unwrap().is_some(), brute_sat(&t).unwrap().is_some());

        // satisfiable case stays satisfiable
        let c = inst(2, &[&[1, 2], &[1], &[1], &[1]]);
        let t = to_three_occur(&c);
        assert!(t.is_three_occur());
        assert_eq!(
            brute_sat(&c).unwrap().is_some(),
            brute_sat(&t).unwrap().is_some()
        );

        let empty = inst(0, &[]);
        assert_eq!(to_three_occur(&empty), empty);
    }

    #[test]
    fn universality_generator_tiny() {
        // {(x1), (¬x1)}: unsatisfiable, so the automaton is universal
        let c = inst(1, &[&[1], &[-1]]);
        let (a, meta) = gen_universality_nfa(&c).unwrap();
        assert!(meta.primes.primes.iter().all(|&p| p >= 8));
        assert!(oracle_universal(&crate::automaton::Automaton::Chrobak(a), 1_000_000)
            .unwrap()
            .holds);

        // {(x1)}: satisfiable; a rejected length encodes x1 = true
        let c = inst(1, &[&[1]]);
        let (a, meta) = gen_universality_nfa(&c).unwrap();
        let v = oracle_universal(&crate::automaton::Automaton::Chrobak(a), 1_000_000).unwrap();
        assert!(!v.holds);
        let w = witness_u64(&v).unwrap();
        let p = meta.primes.primes[0];
        assert_eq!(w % p, 1, "rejected length encodes assignment k = 1");

        // empty clause set: nothing is rejected by no cycle; language empty
        let c = inst(0, &[]);
        let (a, _) = gen_universality_nfa(&c).unwrap();
        assert!(a.cycles.is_empty());
        let v = oracle_universal(&crate::automaton::Automaton::Chrobak(a), 1000).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn universality_generator_rejects_heavy_vars() {
        let c = inst(1, &[&[1], &[1], &[1], &[1]]);
        assert!(matches!(
            gen_universality_nfa(&c),
            Err(Error::NotThreeOccur { var: 1, .. })
        ));
    }

    #[test]
    fn formula_generator_shapes() {
        let c = inst(2, &[&[1, 2], &[-1, -2]]);
        let out = gen_formula_instance(&c).unwrap();
        assert!(ambiguity_chrobak(&out.h1).is_unambiguous());
        assert!(ambiguity_chrobak(&out.h2).is_unambiguous());
        assert_eq!(out.meta.block, 2 * (out.meta.m_prime + 1));
        for cyc in out.h1.cycles.iter().chain(out.h2.cycles.iter()) {
            assert_eq!(cyc.len() % out.meta.block, 0);
        }
        assert!(out.meta.primes.primes.iter().all(|&p| p > 16));
        // K covers lengths 0..2m'-1
        assert_eq!(out.k.stem_len(), 2 * out.meta.m_prime);
        assert!(out.k.stem.all_ones());
    }

    #[test]
    fn blowup_m4() {
        let (u, h, meta) = gen_concat_blowup(4);
        assert_eq!(meta.k, 2);
        assert_eq!(meta.primes.primes, vec![5, 7]);
        let mut lens = u.cycle_lengths();
        lens.sort_unstable();
        assert_eq!(lens, vec![5, 25, 35]);
        assert_eq!(h.stem_len(), 2);
        assert!(h.stem.all_ones());
        assert!(blowup_meta_consistent(&meta));
        assert_eq!(
            meta.expected_complement,
            ResidueClass::from_u64(175, 173)
        );
        assert!(ambiguity_chrobak(&u).is_unambiguous());
    }
}
