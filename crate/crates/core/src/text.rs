//! Plain-text formats.
//!
//! ```text
//! kleinian 2        binary 8          lattice 2 2
//! aa                11110000          2 0
//! bb                ...               1 1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Lattice rows hold
//! coordinates in units of `alpha_i / d`; an optional `ambient a_1 ... a_n`
//! line right after the header sets the frame norms (default 2).

use crate::bincodes::BinaryCode;
use crate::error::{Error, Result};
use crate::f2;
use crate::kleinian::{KleinianCode, KleinianWord};
use crate::lattices::Lattice;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn header<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, keyword: &str, fields: usize) -> Result<(usize, Vec<i64>)> {
    let (ln, l) = it.next().ok_or_else(|| perr(1, 1, format!("missing `{keyword}` header")))?;
    let mut parts = l.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(perr(ln, 1, format!("expected `{keyword}` header")));
    }
    let mut out = Vec::with_capacity(fields);
    for _ in 0..fields {
        let tok = parts.next().ok_or_else(|| perr(ln, l.len() + 1, "header is missing a field"))?;
        let col = l.find(tok).unwrap_or(0) + 1;
        let v: i64 = tok.parse().map_err(|_| perr(ln, col, format!("bad integer {tok:?}")))?;
        if v <= 0 {
            return Err(perr(ln, col, "header fields must be positive"));
        }
        out.push(v);
    }
    if let Some(extra) = parts.next() {
        let col = l.find(extra).unwrap_or(0) + 1;
        return Err(perr(ln, col, "unexpected token after header"));
    }
    Ok((ln, out))
}

pub fn parse_kleinian(src: &str) -> Result<KleinianCode> {
    let mut it = lines(src);
    let (_, h) = header(&mut it, "kleinian", 1)?;
    let n = h[0] as usize;
    let mut gens = Vec::new();
    for (ln, l) in it {
        let t = l.trim();
        if t.chars().count() != n {
            return Err(perr(ln, 1, format!("expected {n} symbols, found {}", t.chars().count())));
        }
        if let Some((col, ch)) = t.chars().enumerate().find(|(_, c)| !"0abc".contains(*c)) {
            return Err(perr(ln, col + 1, format!("bad symbol {ch:?}")));
        }
        gens.push(KleinianWord::parse(t).expect("validated"));
    }
    KleinianCode::new(n, &gens)
}

pub fn parse_binary(src: &str) -> Result<BinaryCode> {
    let mut it = lines(src);
    let (hl, h) = header(&mut it, "binary", 1)?;
    let n = h[0] as usize;
    if n > 64 {
        return Err(perr(hl, 8, "binary codes are limited to length 64"));
    }
    let mut rows = Vec::new();
    for (ln, l) in it {
        let t = l.trim();
        if t.len() != n {
            return Err(perr(ln, 1, format!("expected {n} bits, found {}", t.len())));
        }
        if let Some((col, ch)) = t.chars().enumerate().find(|(_, c)| *c != '0' && *c != '1') {
            return Err(perr(ln, col + 1, format!("bad bit {ch:?}")));
        }
        rows.push(f2::from_bitstring(t).expect("validated"));
    }
    Ok(BinaryCode::new(n, &rows))
}

pub fn parse_lattice(src: &str) -> Result<Lattice> {
    let mut it = lines(src).peekable();
    let (hl, h) = header(&mut it, "lattice", 2)?;
    let (n, d) = (h[0] as usize, h[1]);
    if 8 % d != 0 {
        return Err(perr(hl, 1, "denominator must divide 8"));
    }
    let mut ambient = vec![2i64; n];
    if let Some((ln, l)) = it.peek().copied() {
        if l.trim_start().starts_with("ambient") {
            it.next();
            let vals = ints(ln, l.trim_start().trim_start_matches("ambient"), n)?;
            if vals.iter().any(|&a| a <= 0) {
                return Err(perr(ln, 1, "ambient norms must be positive"));
            }
            ambient = vals;
        }
    }
    let mut rows = Vec::with_capacity(n);
    let mut last = hl;
    for (ln, l) in it {
        if rows.len() == n {
            return Err(perr(ln, 1, format!("more than {n} basis rows")));
        }
        let scale = 8 / d;
        rows.push(ints(ln, l, n)?.into_iter().map(|v| v * scale).collect::<Vec<i64>>());
        last = ln;
    }
    if rows.len() != n {
        return Err(perr(last + 1, 1, format!("expected {n} basis rows, found {}", rows.len())));
    }
    Lattice::from_generators(ambient, &rows).map_err(|e| perr(hl, 1, e.to_string()))
}

fn ints(ln: usize, l: &str, n: usize) -> Result<Vec<i64>> {
    let mut out = Vec::with_capacity(n);
    let mut col = 1;
    for tok in l.split_whitespace() {
        col = l.find(tok).map(|c| c + 1).unwrap_or(col);
        out.push(tok.parse().map_err(|_| perr(ln, col, format!("bad integer {tok:?}")))?);
    }
    if out.len() != n {
        return Err(perr(ln, col, format!("expected {n} entries, found {}", out.len())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kleinian_round_trip() {
        let k = parse_kleinian("kleinian 2\naa\nbb\n").unwrap();
        assert_eq!(k, KleinianCode::epsilon2());
        assert_eq!(parse_kleinian(&k.to_string()).unwrap(), k);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_kleinian("kleinian 2\naa\nbx\n") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_binary("binary 4\n1101\n11\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_lattice("lattice 2 1\n2 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_binary(""), Err(Error::Parse { .. })));
    }
}
