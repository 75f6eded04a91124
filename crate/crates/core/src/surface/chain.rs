//! Directed chains of curves and Dehn twists acting on them.

use serde::{Deserialize, Serialize};

use super::word::{algebraic_intersection, FreeWord, Word};
use crate::error::{Error, Result};

/// Words `γ_1 … γ_k` with declared signs `i(γ_j, γ_{j+1}) = ±1`, checked against the
/// homological pairing. Non-consecutive pairs must pair to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ChainWire", into = "ChainWire")]
pub struct DirectedChain {
    words: Vec<Word>,
    signs: Vec<i8>,
}

#[derive(Serialize, Deserialize)]
struct ChainWire {
    words: Vec<Word>,
    signs: Vec<i8>,
}

impl TryFrom<ChainWire> for DirectedChain {
    type Error = Error;
    fn try_from(w: ChainWire) -> Result<Self> {
        DirectedChain::new(w.words, w.signs)
    }
}

impl From<DirectedChain> for ChainWire {
    fn from(c: DirectedChain) -> Self {
        ChainWire {
            words: c.words,
            signs: c.signs,
        }
    }
}

impl DirectedChain {
    pub fn new(words: Vec<Word>, signs: Vec<i8>) -> Result<Self> {
        let k = words.len();
        if k == 0 || signs.len() + 1 != k {
            return Err(Error::InvalidChain(format!("{k} words need {} signs", k.saturating_sub(1))));
        }
        for i in 0..k {
            for j in i + 1..k {
                let got = algebraic_intersection(&words[i], &words[j]);
                let want = if j == i + 1 {
                    let s = signs[i];
                    if s != 1 && s != -1 {
                        return Err(Error::InvalidChain(format!("sign {s} is not ±1")));
                    }
                    s as i64
                } else {
                    0
                };
                if got != want {
                    return Err(Error::InvalidChain(format!(
                        "i(γ{}, γ{}) = {got}, expected {want}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(DirectedChain { words, signs })
    }

    /// Reads the signs off the homological pairing.
    pub fn from_words(words: Vec<Word>) -> Result<Self> {
        let signs = words
            .windows(2)
            .map(|p| algebraic_intersection(&p[0], &p[1]).clamp(-2, 2) as i8)
            .collect();
        DirectedChain::new(words, signs)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// 1-based.
    pub fn get(&self, i: usize) -> Result<&Word> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.len() });
        }
        Ok(&self.words[i - 1])
    }
}

/// The shipped genus-two 5-chain `(a1, b1', a2 a1', b2', b2' a2' b2)`.
pub fn builtin_chain_genus2() -> DirectedChain {
    let words = ["a1", "b1'", "a2 a1'", "b2'", "b2' a2' b2"]
        .iter()
        .map(|s| Word::parse(s).expect("fixture parses"))
        .collect();
    DirectedChain::from_words(words).expect("fixture chain is valid")
}

/// Index `j` stands for the chain element `γ_j` (1-based).
pub type ChainWord = FreeWord<usize>;

/// A substitution on chain elements, `γ_j ↦ images[j-1]`, with images written in chain
/// symbols so that substitutions compose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSubstitution {
    images: Vec<ChainWord>,
}

impl ChainSubstitution {
    pub fn identity(k: usize) -> Self {
        ChainSubstitution {
            images: (1..=k).map(ChainWord::gen).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, j: usize) -> &ChainWord {
        &self.images[j - 1]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.len())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ChainSubstitution) -> ChainSubstitution {
        ChainSubstitution {
            images: other
                .images
                .iter()
                .map(|w| w.substitute(|j| self.images[j - 1].clone()))
                .collect(),
        }
    }

    /// The image of `γ_j` as a word in the surface generators.
    pub fn apply(&self, chain: &DirectedChain, j: usize) -> Result<Word> {
        chain.get(j)?;
        Ok(self.images[j - 1].substitute(|s| chain.words[s - 1].clone()))
    }

    pub fn realize(&self, chain: &DirectedChain) -> Vec<Word> {
        (1..=self.len())
            .map(|j| self.apply(chain, j).expect("index in range"))
            .collect()
    }
}

/// `N`-th power of the twist along `γ_i`: `γ_{i-1} ↦ γ_i^{-N} γ_{i-1}`,
/// `γ_{i+1} ↦ γ_{i+1} γ_i^N`, all other elements fixed.
pub fn dehn_twist(chain: &DirectedChain, i: usize, n: i64) -> Result<ChainSubstitution> {
    let k = chain.len();
    if i == 0 || i > k {
        return Err(Error::IndexOutOfRange { index: i, len: k });
    }
    let mut s = ChainSubstitution::identity(k);
    let gi = ChainWord::gen(i);
    if i > 1 {
        s.images[i - 2] = gi.pow(-n).mul(&ChainWord::gen(i - 1));
    }
    if i < k {
        s.images[i] = ChainWord::gen(i + 1).mul(&gi.pow(n));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn degenerate_chain_twist() {
        let chain = DirectedChain::from_words(vec![w("a1"), w("b1"), w("a1'")]).unwrap();
        let t = dehn_twist(&chain, 2, 1).unwrap();
        assert_eq!(t.realize(&chain), vec![w("b1' a1"), w("b1"), w("a1' b1")]);
        assert!(dehn_twist(&chain, 2, 0).unwrap().is_identity());
        let back = dehn_twist(&chain, 2, -3).unwrap().compose(&dehn_twist(&chain, 2, 3).unwrap());
        assert!(back.is_identity());
        assert!(matches!(dehn_twist(&chain, 4, 1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn builtin_chain() {
        let c = builtin_chain_genus2();
        assert_eq!(c.len(), 5);
        assert_eq!(c.words()[0], w("a1"));
        assert!(c.signs().iter().all(|s| s.abs() == 1));
        for i in 0..5 {
            for j in i + 2..5 {
                assert_eq!(algebraic_intersection(&c.words()[i], &c.words()[j]), 0);
            }
        }
    }

    #[test]
    fn rejects_bad_declared_sign() {
        assert!(DirectedChain::new(vec![w("a1"), w("b1")], vec![-1]).is_err());
        assert!(DirectedChain::new(vec![w("a1"), w("b1"), w("b1")], vec![1, 0]).is_err());
    }
}
