//! Measurement harness: seeded case families, size/time rows, CSV-ready.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{ambiguity_chrobak, Automaton, ChrobakNF};
use crate::bits::BitSeq;
use crate::chrobak::chrobak_to_nfa;
use crate::decision::{nfa_subset, ufa_universal, UniversalityMode};
use crate::error::Result;
use crate::hardness::{gen_universality_nfa, CnfInstance};
use crate::oracle::{oracle_relation, Relation};
use crate::regops::{complement_ufa, complement_state_bound, intersect, star};

/// One measured case.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub case: String,
    pub algorithm: String,
    pub n_in: usize,
    pub n_out: usize,
    pub time_ms: f64,
    pub verdict: String,
}

impl BenchRow {
    pub fn csv_header() -> &'static str {
        "case,algorithm,n_in,n_out,time_ms,verdict"
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.3},{}",
            self.case, self.algorithm, self.n_in, self.n_out, self.time_ms, self.verdict
        )
    }
}

/// A named generator+algorithm pairing with a recorded seed, so reruns are
/// byte-identical.
#[derive(Clone, Debug)]
pub struct BenchCase {
    pub name: String,
    pub seed: u64,
    kind: CaseKind,
}

#[derive(Clone, Debug)]
enum CaseKind {
    ComplementGrowth { n: usize },
    StarBound { n: usize },
    ProductBound { n: usize },
    Thm2VsOracle { n: usize },
    HardnessRoundtrip { vars: usize, clauses: usize },
}

/// Samples an unambiguous Chrobak automaton with about `n` cycle states:
/// distinct cycle lengths sharing a common factor, accepting residues kept
/// disjoint across cycles, re-sampled until the ambiguity check passes.
pub fn random_ufa(rng: &mut ChaCha8Rng, n: usize) -> ChrobakNF {
    loop {
        let base = [1usize, 2, 2, 3, 4][rng.gen_range(0..5)];
        let mut lengths = Vec::new();
        let mut budget = n.max(2);
        let mut mult = 1usize;
        while budget >= base * mult && lengths.len() < 5 {
            let l = base * mult;
            if rng.gen_bool(0.7) && l <= budget {
                lengths.push(l);
                budget -= l;
            }
            mult += 1;
        }
        if lengths.is_empty() {
            lengths.push(base);
        }
        let cycles: Vec<BitSeq> = lengths
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let mut c = BitSeq::zeros(l);
                for j in 0..l {
                    // residues ≡ i (mod base) keep the cycles CRT-disjoint
                    if j % base == i % base && rng.gen_bool(0.6) {
                        c.set(j, true);
                    }
                }
                c
            })
            .collect();
        let candidate = ChrobakNF::new(BitSeq::zeros(0), cycles);
        if ambiguity_chrobak(&candidate).is_unambiguous() {
            return candidate;
        }
    }
}

/// Random Chrobak automaton with no unambiguity requirement.
pub fn random_chrobak(rng: &mut ChaCha8Rng, max_states: usize) -> ChrobakNF {
    let stem_len = rng.gen_range(0..4usize);
    let mut stem = BitSeq::zeros(stem_len);
    for i in 0..stem_len {
        stem.set(i, rng.gen_bool(0.5));
    }
    let mut cycles = Vec::new();
    let mut budget = max_states.saturating_sub(stem_len).max(1);
    while budget > 0 && cycles.len() < 4 && rng.gen_bool(0.8) {
        let l = rng.gen_range(1..=budget.min(9));
        let mut c = BitSeq::zeros(l);
        for i in 0..l {
            c.set(i, rng.gen_bool(0.4));
        }
        cycles.push(c);
        budget -= l;
    }
    ChrobakNF::new(stem, cycles)
}

/// Random 3-occur CNF instance.
pub fn random_three_occur(rng: &mut ChaCha8Rng, vars: usize, clauses: usize) -> CnfInstance {
    loop {
        let cls: Vec<Vec<i32>> = (0..clauses)
            .map(|_| {
                let len = rng.gen_range(1..=3usize);
                (0..len)
                    .map(|_| {
                        let v = rng.gen_range(1..=vars) as i32;
                        if rng.gen_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let inst = CnfInstance::new(vars, cls).expect("literals in range");
        if inst.is_three_occur() {
            return inst;
        }
    }
}

fn case_list(suite: &str) -> Result<Vec<BenchCase>> {
    let mk = |name: String, seed: u64, kind: CaseKind| BenchCase { name, seed, kind };
    let cases = match suite {
        "complement-growth" => (8..=64)
            .step_by(8)
            .enumerate()
            .map(|(i, n)| {
                mk(
                    format!("complement-n{n:02}"),
                    0x5eed_0000 + i as u64,
                    CaseKind::ComplementGrowth { n },
                )
            })
            .collect(),
        "star-bound" => (4..=20)
            .step_by(4)
            .enumerate()
            .map(|(i, n)| {
                mk(
                    format!("star-n{n:02}"),
                    0x5eed_1000 + i as u64,
                    CaseKind::StarBound { n },
                )
            })
            .collect(),
        "product-bound" => (4..=12)
            .step_by(4)
            .enumerate()
            .map(|(i, n)| {
                mk(
                    format!("product-n{n:02}"),
                    0x5eed_2000 + i as u64,
                    CaseKind::ProductBound { n },
                )
            })
            .collect(),
        "thm2-vs-oracle" => (6..=24)
            .step_by(6)
            .enumerate()
            .map(|(i, n)| {
                mk(
                    format!("compare-n{n:02}"),
                    0x5eed_3000 + i as u64,
                    CaseKind::Thm2VsOracle { n },
                )
            })
            .collect(),
        "hardness-roundtrip" => (1..=4)
            .map(|i| {
                mk(
                    format!("hardness-v{}c{}", i + 1, i),
                    0x5eed_4000 + i as u64,
                    CaseKind::HardnessRoundtrip {
                        vars: i + 1,
                        clauses: i,
                    },
                )
            })
            .collect(),
        other => {
            return Err(crate::Error::InvalidInput(format!(
                "unknown bench suite {other} (expected complement-growth, star-bound, \
                 product-bound, thm2-vs-oracle or hardness-roundtrip)"
            )))
        }
    };
    Ok(cases)
}

fn run_case(case: &BenchCase) -> BenchRow {
    let mut rng = ChaCha8Rng::seed_from_u64(case.seed);
    let started = Instant::now();
    let (algorithm, n_in, n_out, verdict) = match case.kind {
        CaseKind::ComplementGrowth { n } => {
            let c = random_ufa(&mut rng, n);
            let n_in = c.num_states();
            let comp = complement_ufa(&c).expect("sampled automaton is unambiguous");
            let ok = (comp.num_states() as f64) <= complement_state_bound(n_in.max(1));
            (
                "complement_ufa".to_string(),
                n_in,
                comp.num_states(),
                if ok { "within-bound" } else { "OVER-BOUND" }.to_string(),
            )
        }
        CaseKind::StarBound { n } => {
            let c = random_chrobak(&mut rng, n);
            let a = chrobak_to_nfa(&c);
            let n_in = a.num_states().max(1);
            let s = star(&a);
            let ok = s.num_states() <= (n_in - 1) * (n_in - 1) + 1;
            (
                "star".to_string(),
                n_in,
                s.num_states(),
                if ok { "within-bound" } else { "OVER-BOUND" }.to_string(),
            )
        }
        CaseKind::ProductBound { n } => {
            let a = chrobak_to_nfa(&random_ufa(&mut rng, n));
            let b = chrobak_to_nfa(&random_ufa(&mut rng, n));
            let p = intersect(&a, &b);
            let ok = p.num_states() <= a.num_states() * b.num_states();
            (
                "intersect".to_string(),
                a.num_states().max(b.num_states()),
                p.num_states(),
                if ok { "within-bound" } else { "OVER-BOUND" }.to_string(),
            )
        }
        CaseKind::Thm2VsOracle { n } => {
            let c1 = random_chrobak(&mut rng, n);
            let c2 = random_chrobak(&mut rng, n);
            let fast = nfa_subset(&c1, &c2).expect("basis fits");
            let slow = oracle_relation(
                Relation::Subset,
                &Automaton::Chrobak(c1.clone()),
                &Automaton::Chrobak(c2.clone()),
                1_000_000,
            )
            .expect("oracle closes");
            (
                "nfa_subset".to_string(),
                c1.num_states().max(c2.num_states()),
                0,
                if fast.holds == slow.holds {
                    "agree"
                } else {
                    "DISAGREE"
                }
                .to_string(),
            )
        }
        CaseKind::HardnessRoundtrip { vars, clauses } => {
            let inst = random_three_occur(&mut rng, vars, clauses);
            let (a, _) = gen_universality_nfa(&inst).expect("3-occur by construction");
            let n_in = a.num_states();
            let sat = crate::oracle::brute_sat(&inst)
                .expect("few variables")
                .is_some();
            let universal = crate::oracle::oracle_universal(&Automaton::Chrobak(a), 100_000_000)
                .expect("structured instance closes")
                .holds;
            (
                "gen_universality_nfa".to_string(),
                n_in,
                0,
                if universal == !sat { "agree" } else { "DISAGREE" }.to_string(),
            )
        }
    };
    BenchRow {
        case: case.name.clone(),
        algorithm,
        n_in,
        n_out,
        time_ms: started.elapsed().as_secs_f64() * 1e3,
        verdict,
    }
}

/// Runs a named suite, optionally fanning the independent cases out over
/// `jobs` threads; rows come back ordered by case name.
pub fn run_suite(suite: &str, jobs: usize) -> Result<Vec<BenchRow>> {
    let cases = case_list(suite)?;
    let jobs = jobs.max(1).min(cases.len().max(1));
    let mut rows: Vec<BenchRow> = if jobs <= 1 {
        cases.iter().map(run_case).collect()
    } else {
        std::thread::scope(|scope| {
            let chunks: Vec<&[BenchCase]> = cases.chunks(cases.len().div_ceil(jobs)).collect();
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| scope.spawn(move || chunk.iter().map(run_case).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("bench worker"))
                .collect()
        })
    };
    rows.sort_by(|a, b| a.case.cmp(&b.case));
    Ok(rows)
}

/// The suites known to [`run_suite`].
pub const SUITES: &[&str] = &[
    "complement-growth",
    "star-bound",
    "product-bound",
    "thm2-vs-oracle",
    "hardness-roundtrip",
];

/// Cross-check helper used by tests: universality of a sampled family in
/// both density modes.
pub fn universality_modes_agree(c: &ChrobakNF) -> Result<bool> {
    let exact = ufa_universal(c, UniversalityMode::Exact)?;
    let modular = ufa_universal(c, UniversalityMode::Modular)?;
    Ok(exact == modular)
}
