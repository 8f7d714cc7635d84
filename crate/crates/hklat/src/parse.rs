//! Text formats: lattice expressions, Gram files, and Mukai vectors.
//!
//! Lattice expression grammar (whitespace ignored):
//!
//! ```text
//! expr := atom ('+' atom)*
//! atom := 'U' scale? | 'E8' scale? | 'D4' scale? | '<' int '>'
//! scale := '(' int ')'
//! ```
//!
//! Gram file format: line 1 is the rank r; the next r lines hold r integers
//! each, whitespace-separated. `#` starts a comment anywhere on a line;
//! blank lines are skipped.
//!
//! Mukai vectors: `(r; c1,...,ck; s)`.

use crate::lattice::{direct_sum, make_standard, Lattice, StandardName};
use crate::{Error, Result};
use num::bigint::BigInt;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError { line, msg: msg.into() }
}

/// Parse a lattice expression such as `U(2) + E8(-2) + <2>`.
pub fn parse_lattice_expr(input: &str) -> Result<Lattice> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0usize;

    fn parse_int(chars: &[char], pos: &mut usize) -> Result<i64> {
        let start = *pos;
        let mut s = String::new();
        if *pos < chars.len() && (chars[*pos] == '-' || chars[*pos] == '+') {
            s.push(chars[*pos]);
            *pos += 1;
        }
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            s.push(chars[*pos]);
            *pos += 1;
        }
        s.parse::<i64>().map_err(|_| perr(1, format!("expected integer at position {}", start)))
    }

    let mut parts: Vec<Lattice> = Vec::new();
    loop {
        if pos >= chars.len() {
            return Err(perr(1, "expected a lattice atom"));
        }
        let atom = match chars[pos] {
            'U' => {
                pos += 1;
                Some(StandardName::U)
            }
            'E' => {
                if pos + 1 < chars.len() && chars[pos + 1] == '8' {
                    pos += 2;
                    Some(StandardName::E8)
                } else {
                    return Err(perr(1, format!("unknown lattice name at position {}", pos)));
                }
            }
            'D' => {
                if pos + 1 < chars.len() && chars[pos + 1] == '4' {
                    pos += 2;
                    Some(StandardName::D4)
                } else {
                    return Err(perr(1, format!("unknown lattice name at position {}", pos)));
                }
            }
            '<' => {
                pos += 1;
                let m = parse_int(&chars, &mut pos)?;
                if pos >= chars.len() || chars[pos] != '>' {
                    return Err(perr(1, "expected '>' closing a rank-1 lattice"));
                }
                pos += 1;
                parts.push(make_standard(StandardName::Diag(m), 1)?);
                None
            }
            c => return Err(perr(1, format!("unexpected character '{}'", c))),
        };
        if let Some(name) = atom {
            let scale = if pos < chars.len() && chars[pos] == '(' {
                pos += 1;
                let n = parse_int(&chars, &mut pos)?;
                if pos >= chars.len() || chars[pos] != ')' {
                    return Err(perr(1, "expected ')' closing a scale"));
                }
                pos += 1;
                n
            } else {
                1
            };
            parts.push(make_standard(name, scale)?);
        }
        if pos >= chars.len() {
            break;
        }
        if chars[pos] != '+' {
            return Err(perr(1, format!("expected '+' at position {}", pos)));
        }
        pos += 1;
    }
    let refs: Vec<&Lattice> = parts.iter().collect();
    direct_sum(&refs)
}

/// Parse a Gram file (see module docs). Errors carry 1-based line numbers.
pub fn parse_gram_file(content: &str) -> Result<Lattice> {
    let mut lines: Vec<(usize, String)> = Vec::new();
    for (idx, raw) in content.lines().enumerate() {
        let no_comment = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = no_comment.trim();
        if !trimmed.is_empty() {
            lines.push((idx + 1, trimmed.to_string()));
        }
    }
    if lines.is_empty() {
        return Err(perr(1, "empty Gram file"));
    }
    let (rank_line, rank_str) = &lines[0];
    let rank: usize = rank_str
        .parse()
        .map_err(|_| perr(*rank_line, format!("expected rank, found '{}'", rank_str)))?;
    if lines.len() != rank + 1 {
        let at = lines.last().map(|(l, _)| *l).unwrap_or(1);
        return Err(perr(at, format!("expected {} matrix rows, found {}", rank, lines.len() - 1)));
    }
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(rank);
    for (line_no, text) in &lines[1..] {
        let mut row = Vec::with_capacity(rank);
        for tok in text.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| perr(*line_no, format!("expected integer, found '{}'", tok)))?;
            row.push(v);
        }
        if row.len() != rank {
            return Err(perr(*line_no, format!("expected {} entries, found {}", rank, row.len())));
        }
        rows.push(row);
    }
    Lattice::from_rows_i64(&rows, None).map_err(|e| match e {
        Error::ParseError { .. } => e,
        other => perr(1, format!("invalid Gram matrix: {}", other)),
    })
}

/// Render a lattice as a Gram file (inverse of [`parse_gram_file`]).
pub fn format_gram(l: &Lattice) -> String {
    let mut out = String::new();
    if let Some(lbl) = l.label() {
        out.push_str(&format!("# {}\n", lbl));
    }
    out.push_str(&format!("{}\n", l.rank()));
    for i in 0..l.rank() {
        let row: Vec<String> = (0..l.rank()).map(|j| l.gram().get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parse a Mukai vector `(r; c1,...,ck; s)`.
pub fn parse_mukai(input: &str) -> Result<(BigInt, Vec<BigInt>, BigInt)> {
    let s = input.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| perr(1, "Mukai vector must be parenthesized: (r; c1,...,ck; s)"))?;
    let parts: Vec<&str> = inner.split(';').collect();
    if parts.len() != 3 {
        return Err(perr(1, "Mukai vector needs exactly three ';'-separated fields"));
    }
    let parse_one = |t: &str| -> Result<BigInt> {
        t.trim().parse::<BigInt>().map_err(|_| perr(1, format!("expected integer, found '{}'", t.trim())))
    };
    let r = parse_one(parts[0])?;
    let c: Vec<BigInt> = if parts[1].trim().is_empty() {
        vec![]
    } else {
        parts[1].split(',').map(parse_one).collect::<Result<_>>()?
    };
    let s_comp = parse_one(parts[2])?;
    Ok((r, c, s_comp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bi;

    #[test]
    fn expressions() {
        let l = parse_lattice_expr("U(2)+E8(-2)").unwrap();
        assert_eq!(l.rank(), 10);
        assert_eq!(l.det().magnitude().to_string(), "1024");

        let l = parse_lattice_expr(" U ( 2 ) + D4 ( - 1 ) + < 2 > ").unwrap();
        assert_eq!(l.rank(), 7);

        let l = parse_lattice_expr("<-2>+<-2>+<-2>+<-2>+<2>+U").unwrap();
        assert_eq!(l.rank(), 7);
        assert_eq!(l.signature(), (2, 5));

        assert!(matches!(parse_lattice_expr("U(2"), Err(Error::ParseError { .. })));
        assert!(matches!(parse_lattice_expr("E9"), Err(Error::ParseError { .. })));
        assert!(matches!(parse_lattice_expr("<3>"), Err(Error::NotEven)));
        assert!(matches!(parse_lattice_expr(""), Err(Error::ParseError { .. })));
    }

    #[test]
    fn gram_files() {
        let text = "# hyperbolic plane\n2\n0 1  # first row\n1 0\n";
        let l = parse_gram_file(text).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(l.det(), &bi(-1));

        // malformed: wrong entry count reports the offending line
        let bad = "2\n0 1\n1\n";
        match parse_gram_file(bad) {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected ParseError, got {:?}", other),
        }

        // roundtrip
        let l2 = parse_gram_file(&format_gram(&l)).unwrap();
        assert_eq!(l2.gram(), l.gram());
    }

    #[test]
    fn mukai_vectors() {
        let (r, c, s) = parse_mukai("(0; 1,0,0; 0)").unwrap();
        assert_eq!(r, bi(0));
        assert_eq!(c, vec![bi(1), bi(0), bi(0)]);
        assert_eq!(s, bi(0));

        let (r, c, s) = parse_mukai("(2; -1; 3)").unwrap();
        assert_eq!((r, c.len(), s), (bi(2), 1, bi(3)));

        assert!(parse_mukai("(1; 2)").is_err());
        assert!(parse_mukai("1; 2; 3").is_err());
    }
}
