//! The `.fam` text format.
//!
//! ```text
//! n 3
//! A: 2
//! A: 1,3
//! %%
//! B: 1,2
//! B: 2,3
//! ell 1
//! ```
//!
//! A family file stops after the `A:` block. Elements are 1-based and
//! strictly ascending; `-` stands for the empty set. Members are written in
//! ascending mask order. Every line, including the last, ends in a single
//! LF and carries no trailing whitespace.

use crate::error::{Error, Result};
use crate::family::{CrossPair, Family, SubsetMask};

fn write_member(out: &mut String, tag: char, m: SubsetMask) {
    out.push(tag);
    out.push_str(": ");
    if m.is_empty() {
        out.push('-');
    } else {
        for (i, e) in m.elements().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&e.to_string());
        }
    }
    out.push('\n');
}

pub fn encode_family(f: &Family) -> String {
    let mut out = format!("n {}\n", f.n());
    for m in f.iter() {
        write_member(&mut out, 'A', m);
    }
    out
}

pub fn encode_pair(p: &CrossPair) -> String {
    let mut out = format!("n {}\n", p.n());
    for m in p.a().iter() {
        write_member(&mut out, 'A', m);
    }
    out.push_str("%%\n");
    for m in p.b().iter() {
        write_member(&mut out, 'B', m);
    }
    out.push_str(&format!("ell {}\n", p.ell()));
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Strict non-negative decimal: no sign, no leading zeros.
fn parse_uint(s: &str, line: usize) -> Result<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0'))
    {
        return Err(perr(line, format!("expected a non-negative integer, got {s:?}")));
    }
    s.parse()
        .map_err(|_| perr(line, format!("integer {s:?} out of range")))
}

fn split_lines(text: &str) -> Result<Vec<&str>> {
    if text.is_empty() {
        return Err(perr(1, "empty input"));
    }
    if !text.ends_with('\n') {
        return Err(perr(text.lines().count(), "missing final LF"));
    }
    let lines: Vec<&str> = text[..text.len() - 1].split('\n').collect();
    for (i, l) in lines.iter().enumerate() {
        if l.ends_with('\r') {
            return Err(perr(i + 1, "CR before LF"));
        }
        if l.ends_with(' ') || l.ends_with('\t') {
            return Err(perr(i + 1, "trailing whitespace"));
        }
    }
    Ok(lines)
}

fn parse_header(lines: &[&str]) -> Result<usize> {
    let n = lines
        .first()
        .and_then(|l| l.strip_prefix("n "))
        .ok_or_else(|| perr(1, "expected `n <int>`"))?;
    parse_uint(n, 1)
}

fn parse_member(body: &str, n: usize, line: usize) -> Result<SubsetMask> {
    if body == "-" {
        return Ok(SubsetMask::EMPTY);
    }
    let mut prev = 0usize;
    let mut elems = Vec::new();
    for tok in body.split(',') {
        let e = parse_uint(tok, line)?;
        if e <= prev {
            return Err(perr(line, "elements must be strictly ascending and 1-based"));
        }
        if e > n {
            return Err(perr(line, format!("element {e} exceeds n = {n}")));
        }
        prev = e;
        elems.push(e);
    }
    SubsetMask::from_elements(elems, n).map_err(|e| perr(line, e.to_string()))
}

fn parse_block(
    lines: &[&str],
    start: usize,
    tag: &str,
    n: usize,
) -> Result<(Vec<SubsetMask>, usize)> {
    let mut members = Vec::new();
    let mut i = start;
    while i < lines.len() {
        let Some(body) = lines[i].strip_prefix(tag) else {
            break;
        };
        let m = parse_member(body, n, i + 1)?;
        if members.contains(&m) {
            return Err(perr(i + 1, "duplicate member"));
        }
        members.push(m);
        i += 1;
    }
    Ok((members, i))
}

fn build(n: usize, members: Vec<SubsetMask>) -> Result<Family> {
    Family::new(n, members).map_err(|e| perr(1, e.to_string()))
}

pub fn decode_family(text: &str) -> Result<Family> {
    let lines = split_lines(text)?;
    let n = parse_header(&lines)?;
    let (members, end) = parse_block(&lines, 1, "A: ", n)?;
    if end != lines.len() {
        return Err(perr(end + 1, "unexpected line in family file"));
    }
    build(n, members)
}

pub fn decode_pair(text: &str) -> Result<CrossPair> {
    let lines = split_lines(text)?;
    let n = parse_header(&lines)?;
    let (a, i) = parse_block(&lines, 1, "A: ", n)?;
    if lines.get(i) != Some(&"%%") {
        return Err(perr(i + 1, "expected `%%` separator"));
    }
    let (b, j) = parse_block(&lines, i + 1, "B: ", n)?;
    let ell = lines
        .get(j)
        .and_then(|l| l.strip_prefix("ell "))
        .ok_or_else(|| perr(j + 1, "expected `ell <int>` trailer"))?;
    let ell = parse_uint(ell, j + 1)?;
    if j + 1 != lines.len() {
        return Err(perr(j + 2, "content after `ell` trailer"));
    }
    CrossPair::new(build(n, a)?, build(n, b)?, ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N3: &str = "n 3\nA: 2\nA: 1,3\n%%\nB: 1,2\nB: 2,3\nell 1\n";

    #[test]
    fn pair_round_trip_is_exact() {
        let p = decode_pair(N3).unwrap();
        assert_eq!(p.a().len(), 2);
        assert_eq!(p.b().len(), 2);
        assert_eq!(encode_pair(&p), N3);
    }

    #[test]
    fn empty_set_and_empty_block() {
        let text = "n 2\nA: -\n%%\nell 0\n";
        let p = decode_pair(text).unwrap();
        assert_eq!(p.a().members(), &[SubsetMask::EMPTY]);
        assert!(p.b().is_empty());
        assert_eq!(encode_pair(&p), text);
    }

    #[test]
    fn members_are_canonically_reordered() {
        let p = decode_pair("n 3\nA: 1,3\nA: 2\n%%\nB: 2,3\nB: 1,2\nell 1\n").unwrap();
        assert_eq!(encode_pair(&p), N3);
    }

    #[test]
    fn family_file() {
        let f = decode_family("n 4\nA: 1,2\nA: -\n").unwrap();
        assert_eq!(encode_family(&f), "n 4\nA: -\nA: 1,2\n");
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let bad = [
            "",
            "n 3\nA: 1\n%%\nB: 2\nell 1",          // no final LF
            "n 3\r\nA: 1\n%%\nB: 2\nell 1\n",      // CRLF
            "n 3\nA: 1 \n%%\nB: 2\nell 1\n",       // trailing space
            "n 3\nA: 3,1\n%%\nB: 2\nell 1\n",      // not ascending
            "n 3\nA: 1,1\n%%\nB: 2\nell 1\n",      // repeated element
            "n 3\nA: 4\n%%\nB: 2\nell 1\n",        // out of range
            "n 3\nA: 0\n%%\nB: 2\nell 1\n",        // 0 is not an element
            "n 3\nA: 1\nB: 2\nell 1\n",            // missing separator
            "n 3\nA: 1\n%%\nB: 2\n",               // missing trailer
            "n 3\nA: 1\n%%\nB: 2\nell 1\nA: 2\n",  // junk after trailer
            "n 3\nA: 1\nA: 1\n%%\nB: 2\nell 1\n",  // duplicate member
            "n 03\nA: 1\n%%\nB: 2\nell 1\n",       // leading zero
            "n 0\nA: -\n%%\nB: -\nell 0\n",        // empty ground set
            "n 3\nA: 1\n%%\nA: 2\nell 1\n",        // wrong tag in B block
        ];
        for text in bad {
            assert!(decode_pair(text).is_err(), "accepted {text:?}");
        }
    }
}
