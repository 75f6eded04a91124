//! Freely reduced words. A word `x_1 x_2 ... x_n` acts right to left: `x_n` is applied first.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator `a_i` or `b_i` of the standard presentation, with 1-based handle index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    A(u16),
    B(u16),
}

impl Generator {
    pub fn handle(self) -> u16 {
        match self {
            Generator::A(i) | Generator::B(i) => i,
        }
    }

    /// `a1`, `b2`, ...
    pub fn indexed_name(self) -> String {
        match self {
            Generator::A(i) => format!("a{i}"),
            Generator::B(i) => format!("b{i}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let w = Word::parse(s)?;
        match w.letters() {
            [(g, 1)] => Ok(*g),
            _ => Err(Error::WordParse(format!("{s:?} is not a single generator"))),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.indexed_name())
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.indexed_name())
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Generator::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A freely reduced word over an ordered alphabet, stored as syllables `(letter, exponent)`
/// with nonzero exponents and no two adjacent syllables on the same letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord<L> {
    syllables: Vec<(L, i32)>,
}

pub type Word = FreeWord<Generator>;

impl<L: Copy + Eq> Default for FreeWord<L> {
    fn default() -> Self {
        FreeWord { syllables: Vec::new() }
    }
}

impl<L: Copy + Eq> FreeWord<L> {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letter(l: L, exp: i32) -> Self {
        Self::from_syllables([(l, exp)])
    }

    pub fn gen(l: L) -> Self {
        Self::letter(l, 1)
    }

    /// Reduces as it goes.
    pub fn from_syllables<I: IntoIterator<Item = (L, i32)>>(it: I) -> Self {
        let mut w = Self::empty();
        for (l, e) in it {
            w.push(l, e);
        }
        w
    }

    fn push(&mut self, l: L, e: i32) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((last, le)) if *last == l => {
                *le += e;
                if *le == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((l, e)),
        }
    }

    pub fn letters(&self) -> &[(L, i32)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Length in unit letters.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for &(l, e) in &other.syllables {
            w.push(l, e);
        }
        w
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            syllables: self.syllables.iter().rev().map(|&(l, e)| (l, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Self::empty();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `[u, v] = v⁻¹ u⁻¹ v u`.
    pub fn commutator(u: &Self, v: &Self) -> Self {
        v.inverse().mul(&u.inverse()).mul(v).mul(u)
    }

    pub fn conjugate(&self, by: &Self) -> Self {
        by.mul(self).mul(&by.inverse())
    }

    /// Unit letters with inverse flags.
    pub fn units(&self) -> Vec<(L, bool)> {
        self.syllables
            .iter()
            .flat_map(|&(l, e)| std::iter::repeat_n((l, e < 0), e.unsigned_abs() as usize))
            .collect()
    }

    fn from_units(units: &[(L, bool)]) -> Self {
        Self::from_syllables(units.iter().map(|&(l, inv)| (l, if inv { -1 } else { 1 })))
    }

    /// Removes letters cancelling cyclically at the two ends.
    pub fn cyclic_reduce(&self) -> Self {
        let u = self.units();
        let (mut i, mut j) = (0, u.len());
        while j - i >= 2 && u[i].0 == u[j - 1].0 && u[i].1 != u[j - 1].1 {
            i += 1;
            j -= 1;
        }
        Self::from_units(&u[i..j])
    }

    /// True when the cyclic reductions of `self` and `other` are cyclic rotations of each other.
    pub fn conjugate_in_free_group(&self, other: &Self) -> bool {
        let a = self.cyclic_reduce().units();
        let b = other.cyclic_reduce().units();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let n = a.len();
        (0..n).any(|r| (0..n).all(|k| a[(r + k) % n] == b[k]))
    }

    pub fn substitute<M: Copy + Eq>(&self, f: impl Fn(L) -> FreeWord<M>) -> FreeWord<M> {
        let mut w = FreeWord::empty();
        for &(l, e) in &self.syllables {
            w = w.mul(&f(l).pow(e as i64));
        }
        w
    }
}

impl Word {
    /// Parses whitespace-separated or contiguous tokens. A token is either a single letter
    /// (`a` = a_1, `b` = a_2, ..., `A` = b_1, `B` = b_2, ...) or `a<i>` / `b<i>` with an
    /// explicit handle index, followed by `'` or `^n` for exponents. `1` and the empty
    /// string denote the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        let err = |msg: &str| Error::WordParse(format!("{s:?}: {msg}"));
        let chars: Vec<char> = s.chars().collect();
        let mut w = Word::empty();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '.' {
                i += 1;
                continue;
            }
            if c == '1' && (i + 1 == chars.len() || !chars[i + 1].is_ascii_digit()) {
                i += 1;
                continue;
            }
            if !c.is_ascii_alphabetic() {
                return Err(err(&format!("unexpected {c:?}")));
            }
            i += 1;
            let digits_start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let gen = if i > digits_start {
                let idx: u16 = chars[digits_start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("bad index"))?;
                if idx == 0 {
                    return Err(err("handle indices start at 1"));
                }
                match c {
                    'a' => Generator::A(idx),
                    'b' => Generator::B(idx),
                    _ => return Err(err("indexed generators are a<i> or b<i>")),
                }
            } else if c.is_ascii_lowercase() {
                Generator::A((c as u8 - b'a' + 1) as u16)
            } else {
                Generator::B((c as u8 - b'A' + 1) as u16)
            };
            let mut exp: i32 = 1;
            if i < chars.len() && chars[i] == '\'' {
                exp = -1;
                i += 1;
            } else if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                exp = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err("bad exponent"))?;
            }
            w = w.mul(&Word::letter(gen, exp));
        }
        Ok(w)
    }

    /// Largest handle index used, 0 for the empty word.
    pub fn max_handle(&self) -> u16 {
        self.syllables.iter().map(|(g, _)| g.handle()).max().unwrap_or(0)
    }

    pub fn homology(&self) -> Homology {
        let mut h = Homology::default();
        for &(g, e) in &self.syllables {
            *h.0.entry(g).or_insert(0) += e as i64;
        }
        h.0.retain(|_, v| *v != 0);
        h
    }

    /// `{gen, exp}` array form.
    pub fn to_json_array(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.syllables
                .iter()
                .map(|(g, e)| serde_json::json!({"gen": g.indexed_name(), "exp": e}))
                .collect(),
        )
    }
}

impl fmt::Display for Word {
    /// Indexed unit letters separated by spaces, e.g. `a2 a1 b2' b1'`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let toks: Vec<String> = self
            .units()
            .into_iter()
            .map(|(g, inv)| if inv { format!("{g}'") } else { g.to_string() })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

impl std::str::FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WordWire {
    Text(String),
    Syllables(Vec<SyllableWire>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SyllableWire {
    gen: Generator,
    exp: i32,
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match WordWire::deserialize(d)? {
            WordWire::Text(s) => Word::parse(&s).map_err(serde::de::Error::custom),
            WordWire::Syllables(v) => Ok(Word::from_syllables(v.into_iter().map(|s| (s.gen, s.exp)))),
        }
    }
}

/// Homology class as integer coordinates on the basis `[a_i], [b_i]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Homology(pub BTreeMap<Generator, i64>);

impl Homology {
    pub fn coeff(&self, g: Generator) -> i64 {
        self.0.get(&g).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Symplectic pairing with `⟨[a_i], [b_i]⟩ = 1`.
pub fn algebraic_intersection(u: &Word, v: &Word) -> i64 {
    let hu = u.homology();
    let hv = v.homology();
    let handles = u.max_handle().max(v.max_handle());
    (1..=handles)
        .map(|i| {
            let (a, b) = (Generator::A(i), Generator::B(i));
            hu.coeff(a) * hv.coeff(b) - hu.coeff(b) * hv.coeff(a)
        })
        .sum()
}

/// An endomorphism of the free group given on generators; unlisted generators are fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    images: BTreeMap<Generator, Word>,
}

impl Substitution {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn set(&mut self, g: Generator, image: Word) {
        self.images.insert(g, image);
    }

    pub fn image(&self, g: Generator) -> Word {
        self.images.get(&g).cloned().unwrap_or_else(|| Word::gen(g))
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|g| self.image(g))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = self.clone();
        for (g, w) in &other.images {
            out.images.insert(*g, self.apply(w));
        }
        out
    }
}

/// Twist along a separating word `c`: generators on the far side are conjugated, `x ↦ cⁿ x c⁻ⁿ`.
pub fn separating_twist(c: &Word, far_side: &[Generator], n: i64) -> Substitution {
    let cn = c.pow(n);
    let mut s = Substitution::identity();
    for &g in far_side {
        s.set(g, Word::gen(g).conjugate(&cn));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn commutator_convention() {
        let a1 = w("a1");
        let b1 = w("b1");
        assert_eq!(Word::commutator(&a1, &b1), w("b1' a1' b1 a1"));
        assert_eq!(Word::commutator(&a1, &b1).to_string(), "b1' a1' b1 a1");
        assert!(a1.mul(&a1.inverse()).is_empty());
    }

    #[test]
    fn both_text_forms_parse() {
        assert_eq!(w("B a B' A'"), w("b2 a1 b2' b1'"));
        assert_eq!(w("a^3 a^-1"), w("a a"));
        assert_eq!(w("a2b1'"), w("b A'"));
        assert!(w("1").is_empty());
        assert!(Word::parse("c1").is_err());
        assert!(Word::parse("a0").is_err());
    }

    #[test]
    fn serde_forms() {
        let x = w("B a B' A' a a");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#""b2 a1 b2' b1' a1 a1""#);
        assert_eq!(serde_json::from_str::<Word>(&s).unwrap(), x);
        let arr = x.to_json_array();
        assert_eq!(arr[4], serde_json::json!({"gen": "a1", "exp": 2}));
        assert_eq!(serde_json::from_value::<Word>(arr).unwrap(), x);
    }

    #[test]
    fn intersections() {
        assert_eq!(algebraic_intersection(&w("a1"), &w("b1")), 1);
        assert_eq!(algebraic_intersection(&w("a1"), &w("a2")), 0);
        assert_eq!(algebraic_intersection(&w("a1 b1"), &w("b1")), 1);
        assert_eq!(algebraic_intersection(&w("b1"), &w("a1")), -1);
    }

    #[test]
    fn cyclic_conjugacy() {
        let r = w("b1' a1' b1 a1 b2' a2' b2 a2");
        assert!(r.conjugate(&w("a1 b2")).conjugate_in_free_group(&r));
        assert!(!r.conjugate_in_free_group(&r.inverse()));
        assert_eq!(w("a b a'").cyclic_reduce(), w("b"));
    }
}
