//! Words over named generators and a small parser for relator text such as
//! `(s0 s1)^4`, `q^-1 p q = p^3` or `r^2 = 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A free-group word stored as syllables `(generator, exponent)`.
///
/// Adjacent syllables on the same generator are merged and zero exponents are
/// dropped, so the stored form is freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(Vec<(String, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(name: &str, exp: i64) -> Self {
        let mut w = Word::identity();
        w.push(name, exp);
        w
    }

    pub fn from_syllables<S: AsRef<str>>(parts: impl IntoIterator<Item = (S, i64)>) -> Self {
        let mut w = Word::identity();
        for (g, e) in parts {
            w.push(g.as_ref(), e);
        }
        w
    }

    pub fn syllables(&self) -> &[(String, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of letters, counting `g^e` as `|e|` letters.
    pub fn len(&self) -> u64 {
        self.0.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, name: &str, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == name {
                last.1 += exp;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((name.to_string(), exp));
    }

    pub fn append(&mut self, other: &Word) {
        for (g, e) in &other.0 {
            self.push(g, *e);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word::from_syllables(self.0.iter().rev().map(|(g, e)| (g.as_str(), -e)))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..n.unsigned_abs() {
            w.append(&base);
        }
        w
    }

    /// `self^-1 · x · self`
    pub fn conjugate(x: &Word, by: &Word) -> Word {
        by.inverse().concat(x).concat(by)
    }

    /// Sum of the exponents of `name` in the word.
    pub fn exponent_sum(&self, name: &str) -> i64 {
        self.0.iter().filter(|(g, _)| g == name).map(|(_, e)| e).sum()
    }

    pub fn generators(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(g, _)| g.as_str())
    }

    /// Parses a word. `1` denotes the identity.
    pub fn parse(text: &str) -> Result<Word> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let w = p.product()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(w)
    }

    /// Parses either a relator `w` or a relation `lhs = rhs` (returned as
    /// `lhs · rhs^-1`).
    pub fn parse_relator(text: &str) -> Result<Word> {
        match text.split_once('=') {
            Some((lhs, rhs)) => {
                let l = Word::parse(lhs)?;
                let r = Word::parse(rhs).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::Parse { pos: pos + lhs.len() + 1, msg },
                    other => other,
                })?;
                Ok(l.concat(&r.inverse()))
            }
            None => Word::parse(text),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_whitespace() || self.src[self.pos] == b'*') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn product(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        while let Some(c) = self.peek() {
            if c == b')' {
                break;
            }
            let factor = self.factor()?;
            w.append(&factor);
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.product()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                inner
            }
            Some(b'1') => {
                self.pos += 1;
                Word::identity()
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Word::gen(name, 1)
            }
            _ => return Err(self.err("expected generator, `1` or `(`")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.exponent()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        self.skip_ws();
        let wrapped = self.src.get(self.pos) == Some(&b'(');
        if wrapped {
            self.pos += 1;
            self.skip_ws();
        }
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let e: i64 = text.parse().map_err(|_| Error::Parse { pos: start, msg: "bad exponent".into() })?;
        if wrapped {
            self.skip_ws();
            if self.src.get(self.pos) != Some(&b')') {
                return Err(self.err("expected `)` after exponent"));
            }
            self.pos += 1;
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_grouped_power() {
        let w = Word::parse("(s0 s1)^2").unwrap();
        assert_eq!(w.to_string(), "s0 s1 s0 s1");
    }

    #[test]
    fn parse_relation() {
        let w = Word::parse_relator("q^-1 p q = p^3").unwrap();
        assert_eq!(w, Word::from_syllables([("q", -1), ("p", 1), ("q", 1), ("p", -3)]));
        assert!(Word::parse_relator("r^2 = 1").unwrap() == Word::gen("r", 2));
    }

    #[test]
    fn free_reduction() {
        let w = Word::parse("a b b^-1 a^-1").unwrap();
        assert!(w.is_identity());
        assert_eq!(Word::parse("a^(-2) a^2 b").unwrap(), Word::gen("b", 1));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Word::parse("(a b"), Err(Error::Parse { .. })));
        assert!(matches!(Word::parse("a ^ x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn inverse_roundtrip() {
        let w = Word::parse("p^3 q^-1 r").unwrap();
        assert!(w.concat(&w.inverse()).is_identity());
        assert_eq!(w.inverse().inverse(), w);
    }
}
