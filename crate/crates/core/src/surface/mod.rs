//! The genus-g surface group: presentation, words, chains, twists and pants.

mod chain;
mod pants;
mod word;

pub use chain::{builtin_chain_genus2, dehn_twist, ChainSubstitution, ChainWord, DirectedChain};
pub use pants::{
    four_holed_sphere_genus2, standard_pants_decomposition, trivial_mod_relator, FourHoledSphere, Gluing, Pants,
    PantsDecomposition, Slot,
};
pub use word::{algebraic_intersection, separating_twist, FreeWord, Generator, Homology, Substitution, Word};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `⟨a_1, b_1, …, a_g, b_g | [a_1, b_1] ⋯ [a_g, b_g]⟩` with `g ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct SurfacePresentation {
    genus: usize,
}

impl TryFrom<usize> for SurfacePresentation {
    type Error = Error;
    fn try_from(g: usize) -> Result<Self> {
        SurfacePresentation::new(g)
    }
}

impl From<SurfacePresentation> for usize {
    fn from(p: SurfacePresentation) -> usize {
        p.genus
    }
}

impl SurfacePresentation {
    pub fn new(genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::PreconditionViolated(format!("genus {genus} < 2")));
        }
        if genus > u16::MAX as usize {
            return Err(Error::PreconditionViolated(format!("genus {genus} too large")));
        }
        Ok(SurfacePresentation { genus })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `a_1, b_1, a_2, b_2, …`
    pub fn generators(&self) -> Vec<Generator> {
        (1..=self.genus as u16)
            .flat_map(|i| [Generator::A(i), Generator::B(i)])
            .collect()
    }

    pub fn contains(&self, g: Generator) -> bool {
        (1..=self.genus).contains(&(g.handle() as usize))
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|(g, _)| !self.contains(*g)) {
            Some((g, _)) => Err(Error::UnknownGenerator(format!("{g} in genus {}", self.genus))),
            None => Ok(()),
        }
    }

    /// `[a_1, b_1] ⋯ [a_g, b_g]`.
    pub fn relator(&self) -> Word {
        (1..=self.genus as u16).fold(Word::empty(), |acc, i| {
            acc.mul(&Word::commutator(&Word::gen(Generator::A(i)), &Word::gen(Generator::B(i))))
        })
    }

    /// The handle pairs `(a_i, b_i)`.
    pub fn handle_pairs(&self) -> Vec<(Word, Word)> {
        (1..=self.genus as u16)
            .map(|i| (Word::gen(Generator::A(i)), Word::gen(Generator::B(i))))
            .collect()
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        self.check_word(u)?;
        self.check_word(v)?;
        Ok(u.mul(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relator_shape() {
        let p = SurfacePresentation::new(2).unwrap();
        let r = p.relator();
        assert_eq!(r.len(), 4 * p.genus());
        assert_eq!(r, Word::parse("b1' a1' b1 a1 b2' a2' b2 a2").unwrap());
        assert!(SurfacePresentation::new(1).is_err());
        for g in p.generators() {
            assert_eq!(algebraic_intersection(&r, &Word::gen(g)), 0);
        }
        assert!(p.check_word(&Word::parse("a3").unwrap()).is_err());
    }
}
