//! `uafa` — command-line front end for the unary-automata toolkit.
//!
//! Exit codes: 0 operation succeeded / relation holds, 1 relation fails
//! (witness printed in decimal on stdout), 2 input error, 3 guard exceeded
//! or inexact oracle.

mod dimacs;
mod formula;
mod uaf;

use std::collections::HashMap;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use uafa_core::bench::{run_suite, BenchRow};
use uafa_core::oracle::{self, Relation};
use uafa_core::regops::OpReport;
use uafa_core::{
    ambiguity_chrobak, ambiguity_nfa, chrobak_to_nfa, complement_ufa, concat_nfa, concat_via_bits,
    determinize, disjoint_union, eval_formula, gen_concat_blowup, gen_formula_instance,
    gen_universality_nfa, intersect, nfa_equal, nfa_subset, nfa_to_chrobak, nfa_universal,
    normalize, star, to_three_occur, ufa_inclusion, ufa_universal, Automaton, ChrobakNF, Error,
    EvalOptions, RelationVerdict, UnaryNfa, UniversalityMode, WitnessLength,
};

#[derive(Parser)]
#[command(name = "uafa", version, about = "Unary finite automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Chrobak,
    Nfa,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    Subset,
    Equal,
}

#[derive(Clone, Copy, ValueEnum)]
enum UniversalMode {
    Exact,
    Modular,
    Thm2,
}

#[derive(Clone, Copy, ValueEnum)]
enum BinaryOp {
    Intersect,
    Union,
    Symdiff,
    Star,
    Concat,
    ConcatBits,
    DisjointUnion,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleQuery {
    Subset,
    Equal,
    Universal,
    Bits,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Prop1,
    Formula,
    ConcatBlowup,
}

#[derive(Subcommand)]
enum Command {
    /// Convert between representations and normal forms.
    Convert {
        #[arg(long, value_enum)]
        to: ConvertTarget,
        /// Merge equal-length cycles and drop empty ones.
        #[arg(long)]
        normalize: bool,
        /// Collapse the cycle part to a single lcm-length cycle.
        #[arg(long)]
        determinize: bool,
        #[arg(long, default_value_t = uafa_core::regops::DEFAULT_GUARD)]
        guard: u64,
        input: String,
    },
    /// Complement an unambiguous automaton.
    Complement { input: String },
    /// Apply a regular operation.
    Op {
        #[arg(value_enum)]
        op: BinaryOp,
        a: String,
        b: Option<String>,
        #[arg(long, default_value_t = uafa_core::regops::DEFAULT_GUARD)]
        guard: u64,
    },
    /// Decide subset or equality of two automata.
    Compare {
        #[arg(long, value_enum)]
        relation: RelationArg,
        a: String,
        b: String,
    },
    /// Decide universality.
    Universal {
        #[arg(long, value_enum, default_value = "thm2")]
        mode: UniversalMode,
        input: String,
    },
    /// Decide inclusion of the first language in the second (unambiguous).
    Inclusion { a: String, b: String },
    /// Report ambiguity of an automaton.
    Ambiguity {
        #[arg(long, default_value_t = uafa_core::automaton::DEFAULT_AMBIGUITY_STEPS)]
        max_steps: usize,
        input: String,
    },
    /// Evaluate a formula over named automata.
    Eval {
        formula: String,
        /// NAME=FILE bindings; repeatable.
        #[arg(long = "bind")]
        bind: Vec<String>,
        #[arg(long)]
        allow_concat: bool,
        #[arg(long, default_value_t = 50_000_000)]
        guard: u64,
    },
    /// Generate hardness instances.
    Gen {
        #[arg(value_enum)]
        generator: Generator,
        #[arg(long)]
        cnf: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        /// Output prefix for multi-file generators.
        #[arg(long)]
        prefix: Option<String>,
        /// Manifest destination ('-' for stderr).
        #[arg(long, default_value = "-")]
        manifest: String,
    },
    /// Brute-force reference checks.
    Oracle {
        #[arg(value_enum)]
        query: OracleQuery,
        a: String,
        b: Option<String>,
        #[arg(long, default_value_t = oracle::DEFAULT_ORACLE_CAP)]
        cap: usize,
        /// Window for the bits query.
        #[arg(long, default_value_t = 64)]
        upto: usize,
    },
    /// Run a measurement suite and write CSV.
    Bench {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        csv: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn load_automaton(path: &str) -> Result<Automaton, String> {
    uaf::parse(&read_input(path)?).map_err(|e| e.to_string())
}

fn as_chrobak(a: Automaton, guard: u64) -> Result<ChrobakNF, Error> {
    match a {
        Automaton::Chrobak(c) => Ok(c),
        Automaton::Nfa(n) => nfa_to_chrobak(&n, guard),
    }
}

fn as_nfa(a: &Automaton) -> UnaryNfa {
    match a {
        Automaton::Nfa(n) => n.clone(),
        Automaton::Chrobak(c) => chrobak_to_nfa(c),
    }
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_GUARD: u8 = 3;

fn fail_input(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

fn core_error(e: Error) -> ExitCode {
    let code = match e {
        Error::GuardExceeded { .. } | Error::Inexact => EXIT_GUARD,
        _ => EXIT_INPUT,
    };
    eprintln!("error: {e}");
    ExitCode::from(code)
}

/// Prints a verified witness and returns the failure exit code.
fn report_verdict(v: RelationVerdict, check: impl Fn(&WitnessLength) -> bool) -> ExitCode {
    if v.holds {
        println!("holds");
        ExitCode::SUCCESS
    } else {
        let w = v.witness.expect("failed relation carries a witness");
        assert!(check(&w), "witness failed its membership re-check");
        println!("witness {}", w.value);
        ExitCode::from(EXIT_FAIL)
    }
}

fn emit_automaton(a: &Automaton, report: Option<OpReport>) {
    if let Some(r) = report {
        eprintln!(
            "# in={:?} out={} time_ms={:.3}",
            r.input_sizes,
            r.output_size,
            r.elapsed.as_secs_f64() * 1e3
        );
    }
    print!("{}", uaf::print(a));
}

fn run() -> Result<ExitCode, ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Convert {
            to,
            normalize: do_norm,
            determinize: do_det,
            guard,
            input,
        } => {
            let a = load_automaton(&input).map_err(fail_input)?;
            let out = match to {
                ConvertTarget::Chrobak => {
                    let mut c = as_chrobak(a, guard).map_err(core_error)?;
                    if do_norm {
                        c = normalize(&c);
                    }
                    if do_det {
                        c = determinize(&c, guard).map_err(core_error)?;
                    }
                    Automaton::Chrobak(c)
                }
                ConvertTarget::Nfa => {
                    if do_norm || do_det {
                        return Err(fail_input("--normalize/--determinize apply to chrobak output"));
                    }
                    Automaton::Nfa(as_nfa(&a))
                }
            };
            emit_automaton(&out, None);
            Ok(ExitCode::SUCCESS)
        }
        Command::Complement { input } => {
            let a = load_automaton(&input).map_err(fail_input)?;
            let c = as_chrobak(a, uafa_core::regops::DEFAULT_GUARD).map_err(core_error)?;
            let started = Instant::now();
            let out = complement_ufa(&c).map_err(core_error)?;
            let report = OpReport {
                input_sizes: vec![c.num_states()],
                output_size: out.num_states(),
                elapsed: started.elapsed(),
            };
            emit_automaton(&Automaton::Chrobak(out), Some(report));
            Ok(ExitCode::SUCCESS)
        }
        Command::Op { op, a, b, guard } => {
            let a = load_automaton(&a).map_err(fail_input)?;
            let b = match &b {
                Some(p) => Some(load_automaton(p).map_err(fail_input)?),
                None => None,
            };
            let need_b = || b.clone().ok_or_else(|| fail_input("operation needs two inputs"));
            let started = Instant::now();
            let mut sizes = vec![a.num_states()];
            let out = match op {
                BinaryOp::Star => {
                    if b.is_some() {
                        return Err(fail_input("star takes one input"));
                    }
                    Automaton::Chrobak(star(&as_nfa(&a)))
                }
                BinaryOp::Intersect => {
                    let b = need_b()?;
                    sizes.push(b.num_states());
                    Automaton::Nfa(intersect(&as_nfa(&a), &as_nfa(&b)))
                }
                BinaryOp::DisjointUnion => {
                    let b = need_b()?;
                    sizes.push(b.num_states());
                    Automaton::Nfa(disjoint_union(&as_nfa(&a), &as_nfa(&b)))
                }
                BinaryOp::Concat => {
                    let b = need_b()?;
                    sizes.push(b.num_states());
                    Automaton::Nfa(concat_nfa(&as_nfa(&a), &as_nfa(&b)))
                }
                BinaryOp::Union => {
                    let b = need_b()?;
                    sizes.push(b.num_states());
                    let (ca, cb) = (
                        as_chrobak(a, guard).map_err(core_error)?,
                        as_chrobak(b, guard).map_err(core_error)?,
                    );
                    Automaton::Chrobak(uafa_core::union_ufa(&ca, &cb).map_err(core_error)?)
                }
                BinaryOp::Symdiff => {
                    let b = need_b()?;
                    sizes.push(b.num_states());
                    let (ca, cb) = (
                        as_chrobak(a, guard).map_err(core_error)?,
                        as_chrobak(b, guard).map_err(core_error)?,
                    );
                    Automaton::Chrobak(uafa_core::symdiff_ufa(&ca, &cb).map_err(core_error)?)
                }
                BinaryOp::ConcatBits => {
                    let b = need_b()?;
                    sizes.push(b.num_states());
                    let (ca, cb) = (
                        as_chrobak(a, guard).map_err(core_error)?,
                        as_chrobak(b, guard).map_err(core_error)?,
                    );
                    Automaton::Chrobak(concat_via_bits(&ca, &cb, guard).map_err(core_error)?)
                }
            };
            let report = OpReport {
                input_sizes: sizes,
                output_size: out.num_states(),
                elapsed: started.elapsed(),
            };
            emit_automaton(&out, Some(report));
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { relation, a, b } => {
            let ca = as_chrobak(load_automaton(&a).map_err(fail_input)?, u64::MAX)
                .map_err(core_error)?;
            let cb = as_chrobak(load_automaton(&b).map_err(fail_input)?, u64::MAX)
                .map_err(core_error)?;
            let v = match relation {
                RelationArg::Subset => nfa_subset(&ca, &cb),
                RelationArg::Equal => nfa_equal(&ca, &cb),
            }
            .map_err(core_error)?;
            Ok(report_verdict(v, |w| match relation {
                RelationArg::Subset => ca.accepts(&w.value) && !cb.accepts(&w.value),
                RelationArg::Equal => ca.accepts(&w.value) != cb.accepts(&w.value),
            }))
        }
        Command::Universal { mode, input } => {
            let c = as_chrobak(load_automaton(&input).map_err(fail_input)?, u64::MAX)
                .map_err(core_error)?;
            match mode {
                UniversalMode::Thm2 => {
                    let v = nfa_universal(&c).map_err(core_error)?;
                    Ok(report_verdict(v, |w| !c.accepts(&w.value)))
                }
                UniversalMode::Exact | UniversalMode::Modular => {
                    let m = if matches!(mode, UniversalMode::Exact) {
                        UniversalityMode::Exact
                    } else {
                        UniversalityMode::Modular
                    };
                    if ufa_universal(&c, m).map_err(core_error)? {
                        println!("holds");
                        Ok(ExitCode::SUCCESS)
                    } else {
                        println!("non-universal");
                        Ok(ExitCode::from(EXIT_FAIL))
                    }
                }
            }
        }
        Command::Inclusion { a, b } => {
            let ca = as_chrobak(load_automaton(&a).map_err(fail_input)?, u64::MAX)
                .map_err(core_error)?;
            let cb = as_chrobak(load_automaton(&b).map_err(fail_input)?, u64::MAX)
                .map_err(core_error)?;
            let v = ufa_inclusion(&ca, &cb).map_err(core_error)?;
            Ok(report_verdict(v, |w| {
                ca.accepts(&w.value) && !cb.accepts(&w.value)
            }))
        }
        Command::Ambiguity { max_steps, input } => {
            let a = load_automaton(&input).map_err(fail_input)?;
            let report = match &a {
                Automaton::Chrobak(c) => ambiguity_chrobak(c),
                Automaton::Nfa(n) => ambiguity_nfa(n, max_steps),
            };
            match report.verdict {
                uafa_core::AmbiguityVerdict::Unambiguous => {
                    println!("unambiguous");
                    Ok(ExitCode::SUCCESS)
                }
                uafa_core::AmbiguityVerdict::Ambiguous => {
                    println!(
                        "ambiguous witness {}",
                        report.witness.expect("ambiguous carries witness").value
                    );
                    Ok(ExitCode::from(EXIT_FAIL))
                }
                uafa_core::AmbiguityVerdict::UnknownBeyondBound => {
                    println!("unknown beyond bound {max_steps}");
                    Ok(ExitCode::from(EXIT_GUARD))
                }
            }
        }
        Command::Eval {
            formula: text,
            bind,
            allow_concat,
            guard,
        } => {
            let f = formula::parse_formula(&text).map_err(fail_input)?;
            let mut bindings: HashMap<String, ChrobakNF> = HashMap::new();
            for spec in &bind {
                let (name, path) = spec
                    .split_once('=')
                    .ok_or_else(|| fail_input(format!("--bind needs NAME=FILE, got '{spec}'")))?;
                let c = as_chrobak(load_automaton(path).map_err(fail_input)?, u64::MAX)
                    .map_err(core_error)?;
                bindings.insert(name.to_string(), c);
            }
            let opts = EvalOptions {
                allow_concat,
                concat_guard: guard,
            };
            let lookup = |name: &str| bindings.get(name).cloned();
            let v = eval_formula(&f, &lookup, &opts).map_err(core_error)?;
            if v.holds {
                println!("true");
                Ok(ExitCode::SUCCESS)
            } else {
                match &v.witness {
                    Some(w) => println!("false witness {}", w.value),
                    None => println!("false"),
                }
                Ok(ExitCode::from(EXIT_FAIL))
            }
        }
        Command::Gen {
            generator,
            cnf,
            m,
            prefix,
            manifest,
        } => run_gen(generator, cnf, m, prefix, manifest),
        Command::Oracle {
            query,
            a,
            b,
            cap,
            upto,
        } => {
            let a = load_automaton(&a).map_err(fail_input)?;
            match query {
                OracleQuery::Bits => {
                    let bits = a.membership_bits(upto);
                    println!("{}", bits.to_string01());
                    Ok(ExitCode::SUCCESS)
                }
                OracleQuery::Universal => {
                    let v = oracle::oracle_universal(&a, cap).map_err(core_error)?;
                    Ok(report_verdict(v, |_| true))
                }
                OracleQuery::Subset | OracleQuery::Equal => {
                    let b = b.ok_or_else(|| fail_input("oracle comparison needs two inputs"))?;
                    let b = load_automaton(&b).map_err(fail_input)?;
                    let rel = if matches!(query, OracleQuery::Subset) {
                        Relation::Subset
                    } else {
                        Relation::Equal
                    };
                    let v = oracle::oracle_relation(rel, &a, &b, cap).map_err(core_error)?;
                    Ok(report_verdict(v, |_| true))
                }
            }
        }
        Command::Bench { suite, csv, jobs } => {
            let rows = run_suite(&suite, jobs).map_err(core_error)?;
            let mut out = String::from(BenchRow::csv_header());
            out.push('\n');
            for r in &rows {
                out.push_str(&r.to_csv());
                out.push('\n');
            }
            if csv == "-" {
                print!("{out}");
            } else {
                std::fs::write(&csv, out).map_err(|e| fail_input(format!("{csv}: {e}")))?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_gen(
    generator: Generator,
    cnf: Option<String>,
    m: Option<usize>,
    prefix: Option<String>,
    manifest_dest: String,
) -> Result<ExitCode, ExitCode> {
    let mut manifest = String::new();
    let write_file = |path: &str, content: &str| -> Result<(), ExitCode> {
        std::fs::write(path, content).map_err(|e| fail_input(format!("{path}: {e}")))
    };
    match generator {
        Generator::Prop1 => {
            let path = cnf.ok_or_else(|| fail_input("gen prop1 needs --cnf FILE"))?;
            let inst = dimacs::parse(&read_input(&path).map_err(fail_input)?)
                .map_err(fail_input)?;
            let inst3 = to_three_occur(&inst);
            if inst3 != inst {
                eprintln!("# instance rewritten to 3-occur form");
            }
            let (a, meta) = gen_universality_nfa(&inst3).map_err(core_error)?;
            manifest.push_str(&format!(
                "primes {}\n",
                join_u64(&meta.primes.primes)
            ));
            manifest.push_str(&format!("groups {}\n", meta.group_count));
            manifest.push_str(&format!("clauses-per-prime {}\n", meta.clauses_per_prime));
            emit_manifest(&manifest_dest, &manifest)?;
            print!("{}", uaf::print(&Automaton::Chrobak(a)));
            Ok(ExitCode::SUCCESS)
        }
        Generator::Formula => {
            let path = cnf.ok_or_else(|| fail_input("gen formula needs --cnf FILE"))?;
            let prefix = prefix.ok_or_else(|| fail_input("gen formula needs --prefix P"))?;
            let inst = dimacs::parse(&read_input(&path).map_err(fail_input)?)
                .map_err(fail_input)?;
            let inst3 = to_three_occur(&inst);
            let out = gen_formula_instance(&inst3).map_err(core_error)?;
            write_file(
                &format!("{prefix}_h1.uaf"),
                &uaf::print(&Automaton::Chrobak(out.h1)),
            )?;
            write_file(
                &format!("{prefix}_h2.uaf"),
                &uaf::print(&Automaton::Chrobak(out.h2)),
            )?;
            write_file(
                &format!("{prefix}_k.uaf"),
                &uaf::print(&Automaton::Chrobak(out.k)),
            )?;
            manifest.push_str(&format!("modulus {}\n", out.meta.block));
            manifest.push_str(&format!(
                "primes {}\n",
                join_u64(&out.meta.primes.primes)
            ));
            manifest.push_str(&format!("groups {}\n", out.meta.groups.len()));
            manifest.push_str(&format!("clauses {}\n", out.meta.m));
            manifest.push_str(&format!("clauses-with-equalities {}\n", out.meta.m_prime));
            emit_manifest(&manifest_dest, &manifest)?;
            eprintln!("# wrote {prefix}_h1.uaf {prefix}_h2.uaf {prefix}_k.uaf");
            Ok(ExitCode::SUCCESS)
        }
        Generator::ConcatBlowup => {
            let m = m.ok_or_else(|| fail_input("gen concat-blowup needs --m N"))?;
            if m < 4 {
                return Err(fail_input("concat-blowup needs m >= 4"));
            }
            let prefix = prefix.ok_or_else(|| fail_input("gen concat-blowup needs --prefix P"))?;
            let (u, h, meta) = gen_concat_blowup(m);
            write_file(
                &format!("{prefix}_u.uaf"),
                &uaf::print(&Automaton::Chrobak(u)),
            )?;
            write_file(
                &format!("{prefix}_h.uaf"),
                &uaf::print(&Automaton::Chrobak(h)),
            )?;
            manifest.push_str(&format!("modulus {}\n", meta.expected_complement.modulus));
            manifest.push_str(&format!("residue {}\n", meta.expected_complement.residue));
            manifest.push_str(&format!("primes {}\n", join_u64(&meta.primes.primes)));
            manifest.push_str(&format!("k {}\n", meta.k));
            emit_manifest(&manifest_dest, &manifest)?;
            eprintln!("# wrote {prefix}_u.uaf {prefix}_h.uaf");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit_manifest(dest: &str, manifest: &str) -> Result<(), ExitCode> {
    if dest == "-" {
        eprint!("{manifest}");
        Ok(())
    } else {
        std::fs::write(dest, manifest).map_err(|e| fail_input(format!("{dest}: {e}")))
    }
}

fn join_u64(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(code) => code,
    }
}
