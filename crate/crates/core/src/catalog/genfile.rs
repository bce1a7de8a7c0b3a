//! Reader for plain-text generator files.
//!
//! ```text
//! # comment
//! group G2_3 mat 7 over GF(3)
//! a = [[1,0,...],...]
//! x = [[z+1,0],[0,1]] @ frob^1      (only with `fieldauto` after the field)
//! gens a, b                        (optional; default: every named element)
//! ```
//! Permutation files use `group S9 perm 9` and 1-based cycles such as `(1,2,3)(4,5)`.

use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::element::{Ambient, GroupElement};
use crate::field::{FieldElement, FieldSpec};
use crate::group::Group;
use crate::matrix::{SemilinearElement, SquareMatrix};
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { line, column, message: message.into() }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorFile {
    pub name: String,
    pub ambient: Ambient,
    pub elements: Vec<(String, GroupElement)>,
    pub generator_names: Option<Vec<String>>,
}

impl GeneratorFile {
    pub fn get(&self, name: &str) -> Option<&GroupElement> {
        self.elements.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        match &self.generator_names {
            Some(names) => names.iter().filter_map(|n| self.get(n).cloned()).collect(),
            None => self.elements.iter().map(|(_, e)| e.clone()).collect(),
        }
    }

    pub fn group(&self) -> crate::error::Result<Group> {
        Group::new(self.name.clone(), self.ambient.clone(), self.generators())
    }
}

pub fn parse_generator_file(path: impl AsRef<Path>) -> Result<GeneratorFile, ParseError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| ParseError::Io { path: path.display().to_string(), source })?;
    parse_generator_text(&text)
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, _src: src }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::at(self.line, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.err(format!("expected '{c}', found '{d}'"))),
            None => Err(self.err(format!("expected '{c}', found end of line"))),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| ParseError::at(self.line, start + 1, "number out of range"))
    }

    fn word(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || "_-.'".contains(self.chars[self.pos])) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let col = self.pos;
        let w = self.word()?;
        if w != kw {
            return Err(ParseError::at(self.line, col + 1, format!("expected '{kw}', found '{w}'")));
        }
        Ok(())
    }
}

fn parse_header(c: &mut Cursor) -> Result<(String, Ambient), ParseError> {
    c.keyword("group")?;
    let name = c.word()?;
    let col = c.pos;
    match c.word()?.as_str() {
        "perm" => {
            let n = c.number()? as usize;
            if !c.at_end() {
                return Err(c.err("unexpected text after header"));
            }
            Ok((name, Ambient::Perm { degree: n }))
        }
        "mat" => {
            let d = c.number()? as usize;
            c.keyword("over")?;
            c.skip_ws();
            let gf_col = c.pos;
            c.keyword("GF")?;
            c.expect('(')?;
            let q = c.number()?;
            c.expect(')')?;
            let field = FieldSpec::shipped(q as u32).map_err(|e| ParseError::at(c.line, gf_col + 1, e.to_string()))?;
            let semilinear = if c.at_end() {
                false
            } else {
                c.keyword("fieldauto")?;
                true
            };
            if !c.at_end() {
                return Err(c.err("unexpected text after header"));
            }
            if d == 0 {
                return Err(ParseError::at(c.line, 1, "dimension must be positive"));
            }
            Ok((name, if semilinear { Ambient::Semilinear { field, dim: d } } else { Ambient::Matrix { field, dim: d } }))
        }
        other => Err(ParseError::at(c.line, col + 1, format!("expected 'perm' or 'mat', found '{other}'"))),
    }
}

fn parse_perm(c: &mut Cursor, degree: usize) -> Result<GroupElement, ParseError> {
    let start_col = c.pos;
    let mut cycles = Vec::new();
    while c.peek() == Some('(') {
        c.expect('(')?;
        let mut cyc = Vec::new();
        if !c.eat(')') {
            loop {
                let col = c.pos;
                let p = c.number()?;
                if p == 0 || p as usize > degree {
                    return Err(ParseError::at(c.line, col + 1, format!("point {p} outside 1..={degree}")));
                }
                cyc.push(p as u32 - 1);
                if c.eat(')') {
                    break;
                }
                c.expect(',')?;
            }
        }
        if !cyc.is_empty() {
            cycles.push(cyc);
        }
    }
    if cycles.is_empty() && c.pos == start_col {
        return Err(c.err("expected a permutation in cycle notation"));
    }
    Permutation::from_cycles(degree, &cycles)
        .map(GroupElement::Perm)
        .map_err(|e| ParseError::at(c.line, start_col + 1, e.to_string()))
}

/// A polynomial in `z` with integer coefficients, e.g. `2*z^2+z-1`.
fn parse_field_element(c: &mut Cursor, field: &FieldSpec) -> Result<FieldElement, ParseError> {
    let mut coeffs: Vec<i64> = Vec::new();
    let mut first = true;
    loop {
        let mut sign = 1i64;
        match c.peek() {
            Some('-') => {
                c.pos += 1;
                sign = -1;
            }
            Some('+') if !first => c.pos += 1,
            _ if !first => break,
            _ => {}
        }
        first = false;
        let mut coef = 1i64;
        let mut saw_number = false;
        if matches!(c.peek(), Some(d) if d.is_ascii_digit()) {
            coef = c.number()? as i64;
            saw_number = true;
            c.eat('*');
        }
        let mut power = 0usize;
        if c.peek() == Some('z') {
            c.pos += 1;
            power = 1;
            if c.eat('^') {
                power = c.number()? as usize;
            }
        } else if !saw_number {
            return Err(c.err("expected a field element"));
        }
        if power >= 64 {
            return Err(c.err("exponent too large"));
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] += sign * coef;
        if !matches!(c.peek(), Some('+') | Some('-')) {
            break;
        }
    }
    if field.degree() == 1 && coeffs.len() > 1 && coeffs[1..].iter().any(|&x| x != 0) {
        return Err(c.err("'z' is only meaningful over non-prime fields"));
    }
    // reduce powers of z beyond the degree through field arithmetic
    let z = field.generator_z();
    let mut acc = field.zero();
    for (i, &a) in coeffs.iter().enumerate() {
        let mono = if i == 0 { field.one() } else { field.pow(z, i as u64) };
        acc = field.add(acc, field.mul(field.from_int(a), mono));
    }
    Ok(acc)
}

fn parse_matrix(c: &mut Cursor, field: &Arc<FieldSpec>, dim: usize, semilinear: bool) -> Result<GroupElement, ParseError> {
    let start = c.pos;
    c.expect('[')?;
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        if i > 0 {
            c.expect(',')?;
        }
        c.expect('[')?;
        for j in 0..dim {
            if j > 0 {
                c.expect(',')?;
            }
            entries.push(parse_field_element(c, field)?);
        }
        if c.peek() == Some(',') {
            return Err(c.err(format!("row {} has more than {dim} entries", i + 1)));
        }
        c.expect(']')?;
    }
    if c.peek() == Some(',') {
        return Err(c.err(format!("matrix has more than {dim} rows")));
    }
    c.expect(']')?;
    let mut frob = 0u32;
    if c.eat('@') {
        c.keyword("frob")?;
        c.expect('^')?;
        let col = c.pos;
        frob = c.number()? as u32;
        if !semilinear && frob % field.degree() != 0 {
            return Err(ParseError::at(c.line, col + 1, "field automorphisms need 'fieldauto' in the header"));
        }
        frob %= field.degree();
    }
    let m = SquareMatrix::from_entries(field, dim, entries).map_err(|e| ParseError::at(c.line, start + 1, e.to_string()))?;
    let el = if semilinear {
        SemilinearElement::new(m, frob).and_then(GroupElement::semilinear)
    } else {
        GroupElement::matrix(m)
    };
    el.map_err(|e| ParseError::at(c.line, start + 1, e.to_string()))
}

pub fn parse_generator_text(text: &str) -> Result<GeneratorFile, ParseError> {
    let mut header: Option<(String, Ambient)> = None;
    let mut elements: Vec<(String, GroupElement)> = Vec::new();
    let mut generator_names: Option<Vec<String>> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(body, line_no);
        let Some((_, ambient)) = &header else {
            header = Some(parse_header(&mut c)?);
            continue;
        };
        let col = {
            c.skip_ws();
            c.pos
        };
        let name = c.word()?;
        if name == "gens" && c.peek() != Some('=') {
            let mut names = Vec::new();
            loop {
                let ncol = c.pos;
                let n = c.word()?;
                if !elements.iter().any(|(e, _)| *e == n) {
                    return Err(ParseError::at(line_no, ncol + 1, format!("unknown element '{n}'")));
                }
                names.push(n);
                if c.at_end() {
                    break;
                }
                c.expect(',')?;
            }
            generator_names = Some(names);
            continue;
        }
        if name == "group" {
            return Err(ParseError::at(line_no, col + 1, "duplicate group header"));
        }
        if elements.iter().any(|(e, _)| *e == name) {
            return Err(ParseError::at(line_no, col + 1, format!("element '{name}' defined twice")));
        }
        c.expect('=')?;
        let el = match ambient {
            Ambient::Perm { degree } => parse_perm(&mut c, *degree)?,
            Ambient::Matrix { field, dim } => parse_matrix(&mut c, field, *dim, false)?,
            Ambient::Semilinear { field, dim } => parse_matrix(&mut c, field, *dim, true)?,
        };
        if !c.at_end() {
            return Err(c.err("unexpected text after element"));
        }
        elements.push((name, el));
    }
    let (name, ambient) = header.ok_or_else(|| ParseError::at(last_line.max(1), 1, "missing 'group' header"))?;
    Ok(GeneratorFile { name, ambient, elements, generator_names })
}

/// Render a generator file that [`parse_generator_text`] reads back.
pub fn render_generator_file(name: &str, ambient: &Ambient, elements: &[(String, GroupElement)]) -> String {
    let mut out = format!("group {name} {}\n", ambient.header_text());
    for (n, e) in elements {
        let text = match e {
            GroupElement::Perm(p) => p.to_cycle_string(),
            _ => e.to_text(),
        };
        out.push_str(&format!("{n} = {text}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn permutation_file() {
        let text = "# Z3 wr Z3 inside S9\ngroup W perm 9\nx = (1,2,3)\ny = (1,4,7)(2,5,8)(3,6,9)\n";
        let gf = parse_generator_text(text).unwrap();
        assert_eq!(gf.elements.len(), 2);
        assert_eq!(gf.group().unwrap().order().unwrap(), BigUint::from(81u32));
    }

    #[test]
    fn matrix_file_with_polynomial_entries() {
        let text = "group D mat 2 over GF(9)\na = [[0,1],[1,0]]\nb = [[z+1, 0],[0, 2*z^2]]\ngens a\n";
        let gf = parse_generator_text(text).unwrap();
        assert_eq!(gf.generators().len(), 1);
        let f = FieldSpec::shipped(9).unwrap();
        let b = gf.get("b").unwrap().as_matrix().unwrap();
        assert_eq!(b.get(0, 0), f.add(f.generator_z(), f.one()));
        let z2 = f.mul(f.generator_z(), f.generator_z());
        assert_eq!(b.get(1, 1), f.mul(f.from_int(2), z2));
    }

    #[test]
    fn semilinear_needs_fieldauto() {
        let bad = "group G mat 1 over GF(4)\nf = [[1]] @ frob^1\n";
        match parse_generator_text(bad).unwrap_err() {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
        let good = "group G mat 1 over GF(4) fieldauto\nf = [[1]] @ frob^1\n";
        let gf = parse_generator_text(good).unwrap();
        assert_eq!(gf.group().unwrap().order().unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("group G perm 3\nx = (1,4)\n", 2, 8),
            ("group G mat 2 over GF(3)\nx = [[1,0],[0]]\n", 2, 14),
            ("group G mat 2 over GF(6)\n", 1, 20),
            ("x = (1,2)\n", 1, 1),
            ("group G perm 3\nx = (1,2)\nx = (2,3)\n", 3, 1),
        ];
        for (text, line, column) in cases {
            match parse_generator_text(text).unwrap_err() {
                ParseError::Syntax { line: l, column: c, .. } => assert_eq!((l, c), (line, column), "{text}"),
                e => panic!("{e}"),
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        assert!(parse_generator_text("group G mat 2 over GF(3)\nx = [[1,1],[1,1]]\n").is_err());
    }

    #[test]
    fn render_round_trips() {
        let text = "group W mat 2 over GF(9) fieldauto\nx = [[z,1],[0,1]] @ frob^1\ny = [[2,0],[0,1]]\n";
        let gf = parse_generator_text(text).unwrap();
        let again = parse_generator_text(&render_generator_file(&gf.name, &gf.ambient, &gf.elements)).unwrap();
        assert_eq!(gf.elements.len(), again.elements.len());
        for ((_, a), (_, b)) in gf.elements.iter().zip(&again.elements) {
            assert_eq!(a, b);
        }
    }
}
