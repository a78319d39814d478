//! Finitely presented groups: words, presentations, Smith normal form,
//! coset enumeration, Reidemeister–Schreier, Tietze moves, identification.

mod coset;
mod identify;
mod schreier;
mod snf;
mod tietze;

pub use coset::{coset_enumerate, CosetTable};
pub use identify::{identify, word_is_trivial, Element, ElementOracle, GroupId};
pub use schreier::subgroup_presentation;
pub use snf::{
    abelianize, mat_mul, smith_normal_form, verify_snf, AbelianInvariants, AbelianMap, Snf,
};
pub use tietze::{tietze_simplify, tietze_simplify_tracked, Simplified};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Signed 1-based generator indices: `k` is g_k, `-k` its inverse.
pub type Word = Vec<i32>;

/// Three-valued answer for undecidable-in-general questions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

/// Free reduction.
pub fn reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

pub fn concat(a: &[i32], b: &[i32]) -> Word {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    reduce(&v)
}

pub fn power(w: &[i32], k: i64) -> Word {
    let base = if k < 0 { inverse(w) } else { w.to_vec() };
    let mut out = Vec::new();
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    reduce(&out)
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut v = reduce(w);
    let mut lo = 0;
    let mut hi = v.len();
    while hi - lo >= 2 && v[lo] == -v[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    v.truncate(hi);
    v.drain(..lo);
    v
}

/// Least rotation of `w` or of its inverse, letters ordered a < a⁻¹ < b;
/// equal for relators that generate the same normal closure trivially.
pub fn canonical_cyclic(w: &[i32]) -> Word {
    let w = cyclic_reduce(w);
    if w.is_empty() {
        return w;
    }
    let key = |v: &[i32]| -> Vec<i32> { v.iter().map(|&x| 2 * x.abs() + (x < 0) as i32).collect() };
    let mut best: Option<(Vec<i32>, Word)> = None;
    for cand in [w.clone(), inverse(&w)] {
        for s in 0..cand.len() {
            let rot: Word = cand[s..].iter().chain(&cand[..s]).copied().collect();
            let k = key(&rot);
            if best.as_ref().map_or(true, |b| k < b.0) {
                best = Some((k, rot));
            }
        }
    }
    best.unwrap().1
}

pub fn commutator(a: i32, b: i32) -> Word {
    vec![a, b, -a, -b]
}

/// Exponent sums per generator.
pub fn exponent_vector(w: &[i32], ngens: usize) -> Vec<i64> {
    let mut v = vec![0i64; ngens];
    for &x in w {
        v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Presentation> {
        let n = generators.len() as i32;
        for r in &relators {
            if let Some(&x) = r.iter().find(|&&x| x == 0 || x.abs() > n) {
                return Err(Error::Validation(format!(
                    "generator index {x} out of range"
                )));
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    /// Generators named `g1..gn`.
    pub fn numbered(n: usize, relators: Vec<Word>) -> Presentation {
        Presentation {
            generators: (1..=n).map(|i| format!("g{i}")).collect(),
            relators,
        }
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    pub fn parse(text: &str) -> Result<Presentation> {
        let t = text.trim();
        let t = t
            .strip_prefix('<')
            .and_then(|s| s.strip_suffix('>'))
            .ok_or_else(|| Error::Parse("presentation must be <gens | relators>".into()))?;
        let (g, r) = t.split_once('|').unwrap_or((t, ""));
        let generators: Vec<String> = g
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        for name in &generators {
            if !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::Parse(format!("bad generator name {name}")));
            }
        }
        let mut relators = Vec::new();
        for part in r.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let w = match part.split_once('=') {
                Some((l, rr)) => {
                    let a = parse_word(l, &generators)?;
                    let b = parse_word(rr, &generators)?;
                    concat(&a, &inverse(&b))
                }
                None => parse_word(part, &generators)?,
            };
            relators.push(w);
        }
        Presentation::new(generators, relators)
    }

    pub fn format_word(&self, w: &[i32]) -> String {
        format_word(w, &self.generators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "<{} | {}>", self.generators.join(","), rels.join(", "))
    }
}

/// Renders a word with powers collapsed; factors are separated by `*`
/// unless every generator name is a single character.
pub fn format_word(w: &[i32], names: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let short = names.iter().all(|n| n.chars().count() == 1);
    let mut parts = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let e = (j - i) as i64 * w[i].signum() as i64;
        let name = &names[w[i].unsigned_abs() as usize - 1];
        parts.push(if e == 1 {
            name.clone()
        } else {
            format!("{name}^{e}")
        });
        i = j;
    }
    parts.join(if short { "" } else { "*" })
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl<'a> Lexer<'a> {
    fn skip(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] == b' ' || self.s[self.pos] == b'*') {
            self.pos += 1;
        }
    }

    fn product(&mut self) -> Result<Word> {
        let mut out = Vec::new();
        loop {
            self.skip();
            if self.pos >= self.s.len() || self.s[self.pos] == b')' {
                return Ok(out);
            }
            let atom = self.atom()?;
            self.skip();
            let e = if self.pos < self.s.len() && self.s[self.pos] == b'^' {
                self.pos += 1;
                self.skip();
                let start = self.pos;
                if self.pos < self.s.len() && self.s[self.pos] == b'-' {
                    self.pos += 1;
                }
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                std::str::from_utf8(&self.s[start..self.pos])
                    .unwrap()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse("bad exponent".into()))?
            } else {
                1
            };
            out.extend(power(&atom, e));
        }
    }

    fn atom(&mut self) -> Result<Word> {
        if self.s[self.pos] == b'(' {
            self.pos += 1;
            let w = self.product()?;
            if self.pos >= self.s.len() || self.s[self.pos] != b')' {
                return Err(Error::Parse("unbalanced parenthesis".into()));
            }
            self.pos += 1;
            return Ok(w);
        }
        if self.s[self.pos] == b'1' {
            let next = self.s.get(self.pos + 1);
            if next.map_or(true, |c| !c.is_ascii_alphanumeric()) {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        let rest = &self.s[self.pos..];
        let mut best: Option<(usize, usize)> = None;
        for (i, n) in self.names.iter().enumerate() {
            if rest.starts_with(n.as_bytes()) && best.map_or(true, |(_, l)| n.len() > l) {
                best = Some((i, n.len()));
            }
        }
        match best {
            Some((i, l)) => {
                self.pos += l;
                Ok(vec![i as i32 + 1])
            }
            None => Err(Error::Parse(format!(
                "unknown generator at '{}'",
                String::from_utf8_lossy(rest)
            ))),
        }
    }
}

/// Parses a word over the given generator names.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let mut lx = Lexer {
        s: text.trim().as_bytes(),
        pos: 0,
        names,
    };
    let w = lx.product()?;
    if lx.pos != lx.s.len() {
        return Err(Error::Parse(format!("trailing input in '{text}'")));
    }
    Ok(reduce(&w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction() {
        assert_eq!(reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(cyclic_reduce(&[-1, 2, 3, 1]), vec![2, 3]);
        assert_eq!(canonical_cyclic(&[2, 1]), canonical_cyclic(&[-1, -2]));
    }

    #[test]
    fn parse_and_print() {
        let p = Presentation::parse("<a,b | a^2, abab, (ab)^-1 = b^-1a^-1>").unwrap();
        assert_eq!(p.relators[0], vec![1, 1]);
        assert_eq!(p.relators[1], vec![1, 2, 1, 2]);
        assert!(p.relators[2].is_empty());
        assert_eq!(p.to_string(), "<a,b | a^2, abab, 1>");
        let q = Presentation::parse("<g1,g2 | g1^3*g2^-1, g12>");
        assert!(q.is_err());
        let q = Presentation::parse("<g1,g12 | g1^3*g12^-1>").unwrap();
        assert_eq!(q.relators[0], vec![1, 1, 1, -2]);
        assert_eq!(Presentation::parse(&q.to_string()).unwrap(), q);
        let e = Presentation::parse("<a | >").unwrap();
        assert!(e.relators.is_empty());
    }

    #[test]
    fn json_mirror() {
        let p = Presentation::parse("<a,b | a^2b^2, a^4>").unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<Presentation>(&s).unwrap(), p);
    }
}
