//! DIMACS CNF reader: `c` comments, `p cnf V C` header, 0-terminated
//! clauses possibly spanning lines.

use uafa_core::CnfInstance;

pub fn parse(text: &str) -> Result<CnfInstance, String> {
    let mut num_vars: Option<usize> = None;
    let mut declared_clauses: Option<usize> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let mut it = rest.split_whitespace();
            if it.next() != Some("cnf") {
                return Err("expected 'p cnf V C'".into());
            }
            num_vars = Some(
                it.next()
                    .and_then(|t| t.parse().ok())
                    .ok_or("bad variable count")?,
            );
            declared_clauses = Some(
                it.next()
                    .and_then(|t| t.parse().ok())
                    .ok_or("bad clause count")?,
            );
            continue;
        }
        if num_vars.is_none() {
            return Err("clause before 'p cnf' header".into());
        }
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| format!("bad literal '{tok}'"))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err("empty clause".into());
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let num_vars = num_vars.ok_or("missing 'p cnf' header")?;
    if let Some(d) = declared_clauses {
        if d != clauses.len() {
            return Err(format!("header declares {d} clauses, found {}", clauses.len()));
        }
    }
    CnfInstance::new(num_vars, clauses).map_err(|e| e.to_string())
}

#[cfg(test)]
pub fn print(c: &CnfInstance) -> String {
    let mut out = format!("p cnf {} {}\n", c.num_vars, c.clauses.len());
    for cl in &c.clauses {
        for lit in cl {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_standard_form() {
        let text = "c comment\np cnf 3 2\n1 -2 3 0\n-1 0\n";
        let c = parse(text).unwrap();
        assert_eq!(c.num_vars, 3);
        assert_eq!(c.clauses, vec![vec![1, -2, 3], vec![-1]]);
        assert_eq!(parse(&print(&c)).unwrap(), c);
    }

    #[test]
    fn multiline_clause() {
        let c = parse("p cnf 2 1\n1\n2 0\n").unwrap();
        assert_eq!(c.clauses, vec![vec![1, 2]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse("1 2 0\n").is_err());
        assert!(parse("p cnf 1 1\n0\n").is_err());
        assert!(parse("p cnf 1 2\n1 0\n").is_err());
        assert!(parse("p cnf 1 1\n5 0\n").is_err());
    }
}
