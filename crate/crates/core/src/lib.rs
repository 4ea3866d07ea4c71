//! Unary-alphabet finite automata: Chrobak Normal Form, exact decision
//! procedures, regular operations with their state bounds, and
//! SAT-to-automaton hardness-instance generators, all validated against a
//! brute-force oracle.
//!
//! Over a one-letter alphabet a word is its length and a language is a set
//! of naturals, so every regular language is a finite set plus finitely
//! many arithmetic progressions. The crate leans on that shape everywhere:
//! automata are stems plus cycles of packed acceptance bits
//! ([`ChrobakNF`]), decisions reduce to residue arithmetic, and witnesses
//! of failed relations are concrete lengths assembled by Chinese
//! remaindering.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so values may be shared across threads freely.

pub mod automaton;
pub mod bench;
pub mod bits;
pub mod chrobak;
pub mod decision;
mod error;
pub mod hardness;
pub mod numtheory;
pub mod oracle;
pub mod regops;

pub use automaton::{
    ambiguity_chrobak, ambiguity_nfa, AmbiguityReport, AmbiguityVerdict, Automaton, ChrobakNF,
    UnaryNfa, WitnessLength,
};
pub use chrobak::{chrobak_to_nfa, determinize, equalize_stems, nfa_to_chrobak, normalize};
pub use decision::{
    eval_formula, eval_lang, nfa_equal, nfa_subset, nfa_universal, ufa_inclusion, ufa_universal,
    ComparisonBasis, EvalOptions, Formula, LangExpr, RelationVerdict, UniversalityMode,
};
pub use error::{Error, Result};
pub use hardness::{
    gen_concat_blowup, gen_formula_instance, gen_intersection_ufa, gen_universality_nfa,
    to_three_occur, CnfInstance,
};
pub use numtheory::{crt_solve, first_primes_ge, lcm_guarded, PrimeBasis, ResidueClass};
pub use oracle::{brute_sat, minimal_period, oracle_bits, oracle_relation, Relation, TrajectoryResult};
pub use regops::{
    complement_ufa, concat_nfa, concat_via_bits, disjoint_union, intersect, intersect_chrobak,
    star, structured_intersection, symdiff_ufa, union_ufa, OpReport,
};
