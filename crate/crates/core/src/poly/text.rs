//! Plain-text polynomial syntax: `3/2 * x0^2 x1 - x1^3 + 2u v1`.
//!
//! A term is an optional rational coefficient followed by variable powers,
//! separated by whitespace or `*`. Terms are joined by `+`, `-` or `−`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::SparsePoly;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Num(String),
    Ident(String),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let den_start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if den_start == i {
                        return Err(Error::Parse(format!("missing denominator at offset {start}")));
                    }
                }
                out.push(Tok::Num(chars[start..i].iter().collect()));
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

/// Maps a variable name to its index.
enum Names<'a> {
    Indexed { prefix: &'a str },
    Explicit(&'a [&'a str]),
}

impl Names<'_> {
    fn index(&self, name: &str) -> Result<usize> {
        match self {
            Names::Indexed { prefix } => name
                .strip_prefix(prefix)
                .and_then(|rest| rest.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}"))),
            Names::Explicit(list) => list
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}"))),
        }
    }
}

type RawTerm = (Vec<(usize, u32)>, Rational);

fn parse_terms(s: &str, names: &Names<'_>) -> Result<Vec<RawTerm>> {
    let toks = tokenize(s)?;
    let mut terms = Vec::new();
    let mut pos = 0;
    let mut first = true;
    while pos < toks.len() {
        let mut negative = false;
        let mut saw_sign = false;
        while let Some(t @ (Tok::Plus | Tok::Minus)) = toks.get(pos) {
            if *t == Tok::Minus {
                negative = !negative;
            }
            saw_sign = true;
            pos += 1;
        }
        if !first && !saw_sign {
            return Err(Error::Parse("missing '+' or '-' between terms".into()));
        }
        first = false;

        let mut coeff = Rational::one();
        let mut vars = Vec::new();
        let mut any = false;
        loop {
            match toks.get(pos) {
                Some(Tok::Num(n)) => {
                    coeff *= parse_rational(n)?;
                    pos += 1;
                    any = true;
                }
                Some(Tok::Ident(name)) => {
                    let idx = names.index(name)?;
                    pos += 1;
                    let mut power = 1u32;
                    if toks.get(pos) == Some(&Tok::Caret) {
                        pos += 1;
                        match toks.get(pos) {
                            Some(Tok::Num(k)) if !k.contains('/') => {
                                power = k
                                    .parse()
                                    .map_err(|_| Error::Parse(format!("bad exponent {k:?}")))?;
                                pos += 1;
                            }
                            _ => return Err(Error::Parse(format!("expected exponent after {name}^"))),
                        }
                    }
                    vars.push((idx, power));
                    any = true;
                }
                Some(Tok::Star) => pos += 1,
                _ => break,
            }
        }
        if !any {
            return Err(Error::Parse("empty term".into()));
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((vars, coeff));
    }
    Ok(terms)
}

fn assemble(raw: Vec<RawTerm>, nvars: Option<usize>) -> Result<SparsePoly> {
    let max_index = raw
        .iter()
        .flat_map(|(v, _)| v.iter().map(|(i, _)| *i))
        .max();
    let nvars = match (nvars, max_index) {
        (Some(n), Some(m)) if m >= n => {
            return Err(Error::IndexOutOfRange { index: m, limit: n })
        }
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => 1,
    };
    let exps: Vec<(Exponent, Rational)> = raw
        .into_iter()
        .map(|(vars, c)| {
            let mut e = vec![0u32; nvars];
            for (i, k) in vars {
                e[i] += k;
            }
            (Exponent::new(e), c)
        })
        .collect();
    let degree = exps.first().map_or(0, |(e, _)| e.total());
    SparsePoly::from_terms(nvars, degree, exps)
}

impl SparsePoly {
    /// Parses `x0, x1, …` syntax. With `nvars = None` the variable count is one
    /// more than the largest index used.
    pub fn parse(s: &str, nvars: Option<usize>) -> Result<SparsePoly> {
        let raw = parse_terms(s, &Names::Indexed { prefix: "x" })?;
        assemble(raw, nvars)
    }

    /// Parses with explicit variable names, e.g. `["u", "v1", "v2"]`.
    pub fn parse_named(s: &str, names: &[&str]) -> Result<SparsePoly> {
        let raw = parse_terms(s, &Names::Explicit(names))?;
        assemble(raw, Some(names.len()))
    }

    /// Renders with the given variable names, largest exponent first.
    pub fn to_string_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars, "one name per variable");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mono: Vec<String> = e
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{a}", names[i])
                    }
                })
                .collect();
            let mono = mono.join(" ");
            if mono.is_empty() {
                out.push_str(&format_coeff(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if mag.is_integer() {
                out.push_str(&format!("{}{mono}", mag.numer()));
            } else {
                out.push_str(&format!("{} * {mono}", format_coeff(&mag)));
            }
        }
        out
    }

    pub fn default_names(&self) -> Vec<String> {
        (0..self.nvars).map(|i| format!("x{i}")).collect()
    }
}

fn format_coeff(c: &Rational) -> String {
    if c.denom().is_one() || c.is_zero() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&self.default_names()))
    }
}

impl FromStr for SparsePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SparsePoly::parse(s, None)
    }
}
