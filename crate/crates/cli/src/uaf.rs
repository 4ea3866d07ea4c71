//! The UAF text format: a line-based ASCII encoding of unary automata.
//!
//! ```text
//! uaf 1
//! kind nfa            |  kind chrobak
//! states N            |  stem <bits or ->
//! start i j ...       |  cycle <bits>
//! accept i j ...      |  cycle <bits>
//! edge u v
//! ```
//!
//! `#` starts a comment, state ids are 0-based, `-` denotes the empty
//! stem. Printing then parsing a document reproduces it exactly.

use uafa_core::bits::BitSeq;
use uafa_core::{Automaton, ChrobakNF, UnaryNfa};

#[derive(Debug)]
pub struct UafError(pub String);

impl std::fmt::Display for UafError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "uaf: {}", self.0)
    }
}

impl std::error::Error for UafError {}

fn err<T>(msg: impl Into<String>) -> Result<T, UafError> {
    Err(UafError(msg.into()))
}

/// Parses a UAF document of either kind.
pub fn parse(text: &str) -> Result<Automaton, UafError> {
    let mut lines = text
        .lines()
        .map(|l| match l.find('#') {
            Some(i) => &l[..i],
            None => l,
        })
        .map(str::trim)
        .filter(|l| !l.is_empty());

    match lines.next() {
        Some("uaf 1") => {}
        other => return err(format!("expected header 'uaf 1', got {other:?}")),
    }
    match lines.next() {
        Some("kind nfa") => parse_nfa(lines),
        Some("kind chrobak") => parse_chrobak(lines),
        other => return err(format!("expected 'kind nfa' or 'kind chrobak', got {other:?}")),
    }
}

fn parse_ids(rest: &str) -> Result<Vec<usize>, UafError> {
    rest.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| UafError(format!("bad state id {t}"))))
        .collect()
}

fn parse_nfa<'a>(lines: impl Iterator<Item = &'a str>) -> Result<Automaton, UafError> {
    let mut num_states: Option<usize> = None;
    let mut starts = Vec::new();
    let mut accepts = Vec::new();
    let mut edges = Vec::new();
    for line in lines {
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "states" => {
                let n = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| UafError(format!("bad state count {rest}")))?;
                num_states = Some(n);
            }
            "start" => starts.extend(parse_ids(rest)?),
            "accept" => accepts.extend(parse_ids(rest)?),
            "edge" => {
                let ids = parse_ids(rest)?;
                if ids.len() != 2 {
                    return err(format!("edge needs two ids: {line}"));
                }
                edges.push((ids[0], ids[1]));
            }
            other => return err(format!("unknown nfa line '{other}'")),
        }
    }
    let num_states = match num_states {
        Some(n) => n,
        None => return err("missing 'states' line"),
    };
    UnaryNfa::new(num_states, starts, accepts, edges)
        .map(Automaton::Nfa)
        .map_err(|e| UafError(e.to_string()))
}

fn parse_bits(token: &str) -> Result<BitSeq, UafError> {
    BitSeq::from_str01(token).ok_or_else(|| UafError(format!("bad bit string '{token}'")))
}

fn parse_chrobak<'a>(lines: impl Iterator<Item = &'a str>) -> Result<Automaton, UafError> {
    let mut stem: Option<BitSeq> = None;
    let mut cycles = Vec::new();
    for line in lines {
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "stem" => {
                if stem.is_some() {
                    return err("duplicate stem line");
                }
                stem = Some(if rest == "-" {
                    BitSeq::zeros(0)
                } else {
                    parse_bits(rest)?
                });
            }
            "cycle" => {
                let bits = parse_bits(rest)?;
                if bits.is_empty() {
                    return err("cycle needs length >= 1");
                }
                cycles.push(bits);
            }
            other => return err(format!("unknown chrobak line '{other}'")),
        }
    }
    let stem = match stem {
        Some(s) => s,
        None => return err("missing 'stem' line"),
    };
    Ok(Automaton::Chrobak(ChrobakNF::new(stem, cycles)))
}

/// Prints an automaton in UAF form.
pub fn print(a: &Automaton) -> String {
    let mut out = String::from("uaf 1\n");
    match a {
        Automaton::Nfa(n) => {
            out.push_str("kind nfa\n");
            out.push_str(&format!("states {}\n", n.num_states));
            if !n.starts.is_empty() {
                out.push_str(&format!("start {}\n", join_ids(&n.starts)));
            }
            if !n.accepts.is_empty() {
                out.push_str(&format!("accept {}\n", join_ids(&n.accepts)));
            }
            for (u, vs) in n.succ.iter().enumerate() {
                for &v in vs {
                    out.push_str(&format!("edge {u} {v}\n"));
                }
            }
        }
        Automaton::Chrobak(c) => {
            out.push_str("kind chrobak\n");
            if c.stem.is_empty() {
                out.push_str("stem -\n");
            } else {
                out.push_str(&format!("stem {}\n", c.stem.to_string01()));
            }
            for cyc in &c.cycles {
                out.push_str(&format!("cycle {}\n", cyc.to_string01()));
            }
        }
    }
    out
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_nfa() {
        let text = "uaf 1\nkind nfa\nstates 3\nstart 0\naccept 2\nedge 0 1\nedge 1 2\n";
        let a = parse(text).unwrap();
        assert_eq!(print(&a), text);
    }

    #[test]
    fn roundtrip_chrobak() {
        for text in [
            "uaf 1\nkind chrobak\nstem -\ncycle 10\ncycle 001\n",
            "uaf 1\nkind chrobak\nstem 0110\n",
        ] {
            let a = parse(text).unwrap();
            assert_eq!(print(&a), text);
        }
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let text = "# header\nuaf 1\n\nkind chrobak # trailing\nstem - # empty\ncycle 1\n";
        let a = parse(text).unwrap();
        match a {
            Automaton::Chrobak(c) => {
                assert_eq!(c.stem_len(), 0);
                assert_eq!(c.cycles.len(), 1);
            }
            _ => panic!("expected chrobak"),
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse("uaf 2\nkind nfa\nstates 1\n").is_err());
        assert!(parse("uaf 1\nkind nfa\nstart 0\n").is_err());
        assert!(parse("uaf 1\nkind nfa\nstates 1\nedge 0 4\n").is_err());
        assert!(parse("uaf 1\nkind chrobak\nstem 012\n").is_err());
        assert!(parse("uaf 1\nkind chrobak\nstem -\ncycle\n").is_err());
    }
}
