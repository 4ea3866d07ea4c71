//! Decision procedures: NFA inclusion/equality via a comparison basis,
//! universality and inclusion of unambiguous automata via cycle densities,
//! and evaluation of quantifier-free formulas over unary languages.
//!
//! The comparison basis splits the primes up to the automaton size into a
//! set `P` (small primes and primes paired inside a single cycle length)
//! whose prime-power parts form the modulus `r`, and a set `Q` of leftover
//! primes. Every cycle length then divides `r·q²` for some `q ∈ Q ∪ {1}`,
//! and inclusion reduces to, for every residue `s < r`, either one q-cycle
//! of the second automaton accepting its whole class or a pointwise
//! implication between the two sides. Failures produce a concrete witness
//! length by Chinese remaindering, so every negative answer is checkable.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::automaton::{ambiguity_chrobak, ChrobakNF, WitnessLength};
use crate::bits::BitSeq;
use crate::chrobak::{chrobak_to_nfa, equalize_stems};
use crate::error::{Error, Result};
use crate::numtheory::{crt_solve, first_primes_ge, ResidueClass};
use crate::regops;

/// Outcome of a relation query, with a separating length on failure.
#[derive(Clone, Debug)]
pub struct RelationVerdict {
    pub holds: bool,
    pub witness: Option<WitnessLength>,
}

impl RelationVerdict {
    pub fn holds() -> Self {
        RelationVerdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fails(witness: WitnessLength) -> Self {
        RelationVerdict {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// One normalized cycle of length `r·q²`, stored row-major: row `s < r`
/// holds the `q²` bits `t ↦ state (s + t·r)` of that cycle.
struct QCycle {
    q: u64,
    /// bits of one side, `r` rows of `qq` bits each
    data: BitSeq,
    qq: usize,
}

impl QCycle {
    fn build(c: &ChrobakNF, q: u64, r: u64) -> QCycle {
        let qq = (q * q) as usize;
        let rows = r as usize;
        let mut data = BitSeq::zeros(rows * qq);
        let modulus = rows as u128 * qq as u128;
        for cyc in &c.cycles {
            let p = cyc.len();
            if modulus % p as u128 != 0 {
                continue;
            }
            if qq == 1 {
                // row s is the single state s of an r-length cycle
                data.or_assign_repeat(cyc, 0);
                continue;
            }
            for s in 0..rows {
                let base = s * qq;
                let mut idx = s % p;
                let step = r as usize % p;
                for t in 0..qq {
                    if cyc.get(idx) {
                        data.set(base + t, true);
                    }
                    idx += step;
                    if idx >= p {
                        idx -= p;
                    }
                }
            }
        }
        QCycle { q, data, qq }
    }

    fn row_all_ones(&self, s: usize) -> bool {
        let start = s * self.qq;
        let mut i = 0;
        while i < self.qq {
            let take = (self.qq - i).min(64);
            let w = self.data.read_word(start + i);
            let want = if take == 64 { !0u64 } else { (1u64 << take) - 1 };
            if w & want != want {
                return false;
            }
            i += take;
        }
        true
    }

    /// First `t` in row `s` where `self` has a 1 and `other` a 0.
    fn row_first_and_not(&self, other: &QCycle, s: usize) -> Option<usize> {
        let start = s * self.qq;
        let mut i = 0;
        while i < self.qq {
            let take = (self.qq - i).min(64);
            let a = self.data.read_word(start + i);
            let b = other.data.read_word(start + i);
            let mut d = a & !b;
            if take < 64 {
                d &= (1u64 << take) - 1;
            }
            if d != 0 {
                return Some(i + d.trailing_zeros() as usize);
            }
            i += take;
        }
        None
    }

    fn row_first_zero(&self, s: usize) -> Option<usize> {
        let start = s * self.qq;
        let mut i = 0;
        while i < self.qq {
            let take = (self.qq - i).min(64);
            let mut d = !self.data.read_word(start + i);
            if take < 64 {
                d &= (1u64 << take) - 1;
            }
            if d != 0 {
                return Some(i + d.trailing_zeros() as usize);
            }
            i += take;
        }
        None
    }
}

/// The prime split and normalized cycles backing one comparison.
pub struct ComparisonBasis {
    /// `ceil((n · log₂ n)^(1/3))`, floored at 2.
    pub threshold: u64,
    /// Primes folded into the modulus `r` (small ones and pair-linked ones),
    /// restricted to primes that actually divide a cycle length.
    pub p_primes: Vec<u64>,
    /// Leftover primes hosting their own `r·q²` cycles.
    pub q_primes: Vec<u64>,
    /// Product of the maximal prime powers of `p_primes` appearing in any
    /// cycle length.
    pub r: u64,
    first: Vec<QCycle>,
    second: Vec<QCycle>,
}

/// Memory guard on basis construction (total bits across all q-cycles).
const BASIS_BIT_CAP: u128 = 1 << 31;

fn comparison_threshold(n: u64) -> u64 {
    let nf = n.max(1) as f64;
    let t = (nf * nf.log2()).cbrt().ceil();
    (t as u64).max(2)
}

impl ComparisonBasis {
    /// Builds the basis for comparing the cycle parts of two stem-equalized
    /// automata.
    pub fn build(first: &ChrobakNF, second: &ChrobakNF) -> Result<ComparisonBasis> {
        let n = first.num_states().max(second.num_states()).max(1) as u64;
        let t = comparison_threshold(n);
        let lengths: Vec<u64> = first
            .cycle_lengths()
            .into_iter()
            .chain(second.cycle_lengths())
            .collect();

        // prime -> max exponent across all cycle lengths
        let mut exponents: std::collections::BTreeMap<u64, u32> = std::collections::BTreeMap::new();
        // pair-linked primes: p·q divides one length with p, q >= t distinct
        let mut paired: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
        for &l in &lengths {
            let fac = crate::numtheory::factorize(l);
            for &(p, e) in &fac {
                let entry = exponents.entry(p).or_insert(0);
                *entry = (*entry).max(e);
            }
            let big: Vec<u64> = fac.iter().map(|&(p, _)| p).filter(|&p| p >= t).collect();
            if big.len() >= 2 {
                paired.extend(big);
            }
        }

        let mut p_primes = Vec::new();
        let mut q_primes = Vec::new();
        let mut r: u64 = 1;
        for (&p, &e) in &exponents {
            if p < t || paired.contains(&p) {
                p_primes.push(p);
                let power = p.checked_pow(e).ok_or(Error::GuardExceeded {
                    what: "comparison basis modulus",
                    needed: u128::MAX,
                    guard: BASIS_BIT_CAP,
                })?;
                r = r.checked_mul(power).ok_or(Error::GuardExceeded {
                    what: "comparison basis modulus",
                    needed: u128::MAX,
                    guard: BASIS_BIT_CAP,
                })?;
            } else {
                q_primes.push(p);
            }
        }

        // every cycle length must divide r·q² for exactly the q it contains
        let mut total_bits: u128 = 0;
        for &q in q_primes.iter().chain(std::iter::once(&1)) {
            let modulus = r as u128 * (q as u128) * (q as u128);
            total_bits += 2 * modulus;
        }
        if total_bits > BASIS_BIT_CAP {
            return Err(Error::GuardExceeded {
                what: "comparison basis size",
                needed: total_bits,
                guard: BASIS_BIT_CAP,
            });
        }
        for &l in &lengths {
            let ok = std::iter::once(1u64).chain(q_primes.iter().copied()).any(|q| {
                let m = r as u128 * q as u128 * q as u128;
                m % l as u128 == 0
            });
            assert!(ok, "cycle length {l} divides no r·q²");
        }

        let build_side = |c: &ChrobakNF| -> Vec<QCycle> {
            std::iter::once(1u64)
                .chain(q_primes.iter().copied())
                .map(|q| QCycle::build(c, q, r))
                .collect()
        };

        let first = build_side(first);
        let second = build_side(second);
        Ok(ComparisonBasis {
            threshold: t,
            p_primes,
            q_primes,
            r,
            first,
            second,
        })
    }

    /// Checks the per-residue conditions; on failure returns the failing
    /// residue `s` and witness classes.
    ///
    /// Evaluated word-parallel over the `r` residues: `accept_all` collects,
    /// per residue, whether some q-cycle of the second side accepts its
    /// whole class, `implied` whether every position accepted by the first
    /// side is accepted by the second.
    fn subset_cycles(&self) -> Option<(u64, Vec<ResidueClass>)> {
        let rows = self.r as usize;
        let mut accept_all = BitSeq::zeros(rows);
        let mut implied = BitSeq::ones(rows);
        for (f, g) in self.first.iter().zip(&self.second) {
            if g.qq == 1 {
                // rows are single bits: vector ops straight on the data
                accept_all.or_assign(&g.data);
                let mut ok = f.data.clone();
                ok.not_in_place();
                ok.or_assign(&g.data);
                implied.and_assign(&ok);
            } else {
                for s in 0..rows {
                    if !accept_all.get(s) && g.row_all_ones(s) {
                        accept_all.set(s, true);
                    }
                    if implied.get(s) && f.row_first_and_not(g, s).is_some() {
                        implied.set(s, false);
                    }
                }
            }
        }
        let mut ok = accept_all;
        ok.or_assign(&implied);
        let s = ok.first_zero()?;

        // (C): assemble the witness classes at the failing residue
        let mut classes = Vec::new();
        let mut anchor = false;
        for (f, g) in self.first.iter().zip(&self.second) {
            let modulus = self.r * g.q * g.q;
            // prefer a position the first side accepts and the second
            // rejects; otherwise any rejected position
            let t = match f.row_first_and_not(g, s) {
                Some(t) if !anchor => {
                    anchor = true;
                    t as u64
                }
                _ => g
                    .row_first_zero(s)
                    .expect("condition (A) failed, a zero exists") as u64,
            };
            classes.push(ResidueClass::from_u64(modulus, s as u64 + t * self.r));
        }
        assert!(anchor, "condition (B) failed, an anchor exists");
        Some((s as u64, classes))
    }
}

/// Bounded scan for the least separating length below a known witness.
fn minimize_witness(
    c1: &ChrobakNF,
    c2: &ChrobakNF,
    upper: &BigUint,
) -> Option<u64> {
    const SCAN_CAP: u64 = 1 << 14;
    let cap = upper.to_u64().map_or(SCAN_CAP, |u| u.min(SCAN_CAP));
    (0..cap).find(|&l| c1.accepts_u64(l) && !c2.accepts_u64(l))
}

/// Does the first automaton accept a subset of the second?
///
/// Stems are equalized and compared pointwise; the cycle parts go through
/// the comparison basis. Witnesses are built from the failing residue by
/// CRT, lifted above the stem, then replaced by a smaller separating
/// length when a bounded scan finds one.
pub fn nfa_subset(c1: &ChrobakNF, c2: &ChrobakNF) -> Result<RelationVerdict> {
    let (d1, d2) = equalize_stems(c1, c2);
    if let Some(l) = d1.stem.first_and_not(&d2.stem) {
        return Ok(RelationVerdict::fails(WitnessLength::plain(l as u64)));
    }
    let basis = ComparisonBasis::build(&d1, &d2)?;
    match basis.subset_cycles() {
        None => Ok(RelationVerdict::holds()),
        Some((_, classes)) => {
            let sol = crt_solve(&classes).expect("classes agree modulo r");
            let stem_len = BigUint::from(d1.stem.len());
            let offset = sol.smallest_at_least(&BigUint::ZERO);
            let value = &offset + &stem_len;
            // shift the derivation classes from offsets to lengths
            let shifted: Vec<ResidueClass> = classes
                .iter()
                .map(|c| {
                    ResidueClass::new(
                        c.modulus.clone(),
                        (&c.residue + &stem_len) % &c.modulus,
                    )
                })
                .collect();
            debug_assert!(c1.accepts(&value) && !c2.accepts(&value));
            let witness = match minimize_witness(c1, c2, &value) {
                Some(small) if BigUint::from(small) < value => WitnessLength::plain(small),
                _ => WitnessLength::with_derivation(value, shifted),
            };
            Ok(RelationVerdict::fails(witness))
        }
    }
}

/// Equality as inclusion both ways; the witness comes from whichever side
/// fails first.
pub fn nfa_equal(c1: &ChrobakNF, c2: &ChrobakNF) -> Result<RelationVerdict> {
    let forward = nfa_subset(c1, c2)?;
    if !forward.holds {
        return Ok(forward);
    }
    nfa_subset(c2, c1)
}

/// Universality by comparing the all-words automaton against `c`.
pub fn nfa_universal(c: &ChrobakNF) -> Result<RelationVerdict> {
    nfa_subset(&ChrobakNF::all_words(), c)
}

/// Arithmetic mode for the density-sum universality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniversalityMode {
    /// Arbitrary-precision numerator/denominator.
    Exact,
    /// The same loop repeated modulo each of the first `ceil(5·√n) + 2`
    /// primes.
    Modular,
}

/// Running density sum `Σ i_k / j_k` kept as exact or modular
/// numerator/denominator pairs via `s = s·j + i·p; p = p·j`.
pub enum DensityAccumulator {
    Exact { s: BigUint, p: BigUint },
    Modular { residues: Vec<(u64, u64, u64)> },
}

impl DensityAccumulator {
    pub fn exact() -> Self {
        DensityAccumulator::Exact {
            s: BigUint::ZERO,
            p: BigUint::from(1u32),
        }
    }

    pub fn modular(primes: &[u64]) -> Self {
        DensityAccumulator::Modular {
            residues: primes.iter().map(|&q| (q, 0, 1 % q)).collect(),
        }
    }

    /// Folds in one cycle with `accepting` accepting states and length `len`.
    pub fn push_cycle(&mut self, accepting: u64, len: u64) {
        match self {
            DensityAccumulator::Exact { s, p } => {
                *s = &*s * len + BigUint::from(accepting) * &*p;
                *p = &*p * len;
            }
            DensityAccumulator::Modular { residues } => {
                for (q, s, p) in residues.iter_mut() {
                    *s = (*s * (len % *q) + accepting % *q * *p) % *q;
                    *p = *p * (len % *q) % *q;
                }
            }
        }
    }

    /// Is the accumulated sum exactly 1 (i.e. `s = p`)?
    pub fn is_unit_sum(&self) -> bool {
        match self {
            DensityAccumulator::Exact { s, p } => s == p,
            DensityAccumulator::Modular { residues } => {
                residues.iter().all(|&(_, s, p)| s == p)
            }
        }
    }
}

fn require_unambiguous(c: &ChrobakNF) -> Result<()> {
    let rep = ambiguity_chrobak(c);
    if rep.is_unambiguous() {
        Ok(())
    } else {
        Err(Error::AmbiguousInput(rep.witness.expect("witness")))
    }
}

/// Universality of an unambiguous automaton: all stem bits set and the
/// cycle densities summing to exactly 1.
///
/// Equal-length cycles are merged first so the cycle count obeys the
/// √(2n) bound the modular prime count is calibrated for.
pub fn ufa_universal(c: &ChrobakNF, mode: UniversalityMode) -> Result<bool> {
    require_unambiguous(c)?;
    if !c.stem.all_ones() {
        return Ok(false);
    }
    let n = c.num_states().max(1);
    let merged = crate::chrobak::normalize(c);
    let mut acc = match mode {
        UniversalityMode::Exact => DensityAccumulator::exact(),
        UniversalityMode::Modular => {
            let count = (5.0 * (n as f64).sqrt()).ceil() as usize + 2;
            DensityAccumulator::modular(&first_primes_ge(count, 2).primes)
        }
    };
    if merged.cycles.is_empty() {
        return Ok(false);
    }
    for cyc in &merged.cycles {
        acc.push_cycle(cyc.count_ones() as u64, cyc.len() as u64);
    }
    Ok(acc.is_unit_sum())
}

/// Inclusion `L(u1) ⊆ L(u2)` for unambiguous `u2`.
///
/// Finite members of `u1` (stem hits and cycle members below their entry
/// into the periodic regime) are checked by membership. Every accepting
/// cycle offset of `u1` yields a progression `v·w*`; the second automaton
/// is shifted to `|v|` and strided by `|w|`, and the result must be
/// universal, which the density test decides. Witnesses come from the
/// comparison basis of the strided automaton via CRT.
pub fn ufa_inclusion(u1: &ChrobakNF, u2: &ChrobakNF) -> Result<RelationVerdict> {
    require_unambiguous(u2)?;

    // window for the finite checks: stem hits of u1 plus progression
    // members below their entry into the periodic regime of u2
    let max_w = u1.cycles.iter().map(|c| c.len()).max().unwrap_or(0);
    let check_upto = u1.stem_len().max(u2.stem_len() + max_w) + 1;
    let bits2 = u2.membership_bits(check_upto + 1);

    // group (i): finitely many lengths checked directly
    for l in 0..u1.stem_len() {
        if u1.stem.get(l) && !bits2.get(l) {
            return Ok(RelationVerdict::fails(WitnessLength::plain(l as u64)));
        }
    }

    // group (ii): one progression per accepting cycle offset
    for cyc in &u1.cycles {
        let w = cyc.len();
        for j in cyc.iter_ones() {
            // members: u1.stem_len + j + h·w; v = first member >= stem of u2
            let first_member = u1.stem_len() + j;
            let v = if first_member >= u2.stem_len() {
                first_member
            } else {
                let deficit = u2.stem_len() - first_member;
                first_member + deficit.div_ceil(w) * w
            };
            for l in (first_member..v).step_by(w) {
                if !bits2.get(l) {
                    return Ok(RelationVerdict::fails(WitnessLength::plain(l as u64)));
                }
            }
            let strided = stride_automaton(u2, v - u2.stem_len(), w);
            if !ufa_universal(&strided, UniversalityMode::Exact)? {
                let verdict = nfa_universal(&strided)?;
                let wit = verdict
                    .witness
                    .expect("density and comparison agree on non-universality");
                let value = BigUint::from(v as u64) + wit.value * BigUint::from(w as u64);
                debug_assert!(u1.accepts(&value) && !u2.accepts(&value));
                let witness = match minimize_witness(u1, u2, &value) {
                    Some(small) if BigUint::from(small) < value => WitnessLength::plain(small),
                    _ => WitnessLength {
                        value,
                        derivation: None,
                    },
                };
                return Ok(RelationVerdict::fails(witness));
            }
        }
    }
    Ok(RelationVerdict::holds())
}

/// The automaton accepting `{ i : shift + i·stride ∈ L(c) beyond the stem }`:
/// same cycle lengths, bits resampled along the stride.
fn stride_automaton(c: &ChrobakNF, shift: usize, stride: usize) -> ChrobakNF {
    let cycles = c
        .cycles
        .iter()
        .map(|cyc| {
            let p = cyc.len();
            let mut out = BitSeq::zeros(p);
            for i in 0..p {
                if cyc.get((shift + i * stride) % p) {
                    out.set(i, true);
                }
            }
            out
        })
        .collect();
    ChrobakNF::new(BitSeq::zeros(0), cycles)
}

/// A language expression over named unambiguous automata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LangExpr {
    Name(String),
    All,
    Empty,
    Complement(Box<LangExpr>),
    Union(Box<LangExpr>, Box<LangExpr>),
    Intersect(Box<LangExpr>, Box<LangExpr>),
    SymDiff(Box<LangExpr>, Box<LangExpr>),
    Star(Box<LangExpr>),
    Concat(Box<LangExpr>, Box<LangExpr>),
}

/// A boolean-valued formula over language expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Equal(LangExpr, LangExpr),
    NotEqual(LangExpr, LangExpr),
    Subset(LangExpr, LangExpr),
    Universal(LangExpr),
    IsEmpty(LangExpr),
}

/// Evaluation switches: concatenation must be allowed explicitly because it
/// forfeits the quasipolynomial guarantee of the other operations.
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub allow_concat: bool,
    pub concat_guard: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            allow_concat: false,
            concat_guard: 50_000_000,
        }
    }
}

/// Result of evaluating either kind of node.
pub enum EvalResult {
    Lang(ChrobakNF),
    Bool(bool),
}

/// Evaluates a language expression bottom-up through the regular
/// operations.
pub fn eval_lang(
    expr: &LangExpr,
    bindings: &dyn Fn(&str) -> Option<ChrobakNF>,
    opts: &EvalOptions,
) -> Result<ChrobakNF> {
    match expr {
        LangExpr::Name(n) => bindings(n)
            .ok_or_else(|| Error::InvalidInput(format!("unbound language name {n}"))),
        LangExpr::All => Ok(ChrobakNF::all_words()),
        LangExpr::Empty => Ok(ChrobakNF::empty()),
        LangExpr::Complement(e) => regops::complement_ufa(&eval_lang(e, bindings, opts)?),
        LangExpr::Union(a, b) => regops::union_ufa(
            &eval_lang(a, bindings, opts)?,
            &eval_lang(b, bindings, opts)?,
        ),
        LangExpr::Intersect(a, b) => Ok(regops::intersect_chrobak(
            &eval_lang(a, bindings, opts)?,
            &eval_lang(b, bindings, opts)?,
        )),
        LangExpr::SymDiff(a, b) => regops::symdiff_ufa(
            &eval_lang(a, bindings, opts)?,
            &eval_lang(b, bindings, opts)?,
        ),
        LangExpr::Star(e) => Ok(regops::star(&chrobak_to_nfa(&eval_lang(
            e, bindings, opts,
        )?))),
        LangExpr::Concat(a, b) => {
            if !opts.allow_concat {
                return Err(Error::ConcatDisallowed);
            }
            regops::concat_via_bits(
                &eval_lang(a, bindings, opts)?,
                &eval_lang(b, bindings, opts)?,
                opts.concat_guard,
            )
        }
    }
}

/// Evaluates a boolean formula; comparisons go through the comparison
/// basis so every negative answer carries a witness.
pub fn eval_formula(
    f: &Formula,
    bindings: &dyn Fn(&str) -> Option<ChrobakNF>,
    opts: &EvalOptions,
) -> Result<RelationVerdict> {
    match f {
        Formula::Equal(a, b) => nfa_equal(
            &eval_lang(a, bindings, opts)?,
            &eval_lang(b, bindings, opts)?,
        ),
        Formula::NotEqual(a, b) => {
            let v = nfa_equal(
                &eval_lang(a, bindings, opts)?,
                &eval_lang(b, bindings, opts)?,
            )?;
            Ok(RelationVerdict {
                holds: !v.holds,
                witness: v.witness,
            })
        }
        Formula::Subset(a, b) => nfa_subset(
            &eval_lang(a, bindings, opts)?,
            &eval_lang(b, bindings, opts)?,
        ),
        Formula::Universal(e) => nfa_universal(&eval_lang(e, bindings, opts)?),
        Formula::IsEmpty(e) => {
            let c = eval_lang(e, bindings, opts)?;
            if c.is_empty_language() {
                Ok(RelationVerdict::holds())
            } else {
                let bits = c.membership_bits(c.num_states() + 1);
                let l = bits.first_one().expect("non-empty language has a member");
                Ok(RelationVerdict::fails(WitnessLength::plain(l as u64)))
            }
        }
    }
}
