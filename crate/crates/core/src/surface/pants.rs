//! Pants decompositions described by boundary words.

use serde::{Deserialize, Serialize};

use super::word::{Generator, Word};
use super::SurfacePresentation;
use crate::error::{Error, Result};

/// Boundary triple `(x, y, (yx)⁻¹)`, so `z y x = 1` in the free group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pants {
    pub label: String,
    pub boundary: [Word; 3],
}

impl Pants {
    pub fn new(label: impl Into<String>, x: Word, y: Word) -> Self {
        let z = y.mul(&x).inverse();
        Pants {
            label: label.into(),
            boundary: [x, y, z],
        }
    }

    pub fn from_triple(label: impl Into<String>, boundary: [Word; 3]) -> Result<Self> {
        let p = Pants {
            label: label.into(),
            boundary,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let [x, y, z] = &self.boundary;
        if !z.mul(y).mul(x).is_empty() {
            return Err(Error::InvalidPants(format!("{}: z y x = {} is not trivial", self.label, z.mul(y).mul(x))));
        }
        Ok(())
    }

    pub fn x(&self) -> &Word {
        &self.boundary[0]
    }

    pub fn y(&self) -> &Word {
        &self.boundary[1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub pants: usize,
    pub boundary: usize,
}

/// Glues `first` to `second` when `first = w⁻¹ second⁻¹ w` with `w = conjugator`,
/// modulo the surface relator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub first: Slot,
    pub second: Slot,
    pub conjugator: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsDecomposition {
    pub genus: usize,
    pub pants: Vec<Pants>,
    pub gluings: Vec<Gluing>,
}

/// Whether `w` is trivial in the surface group as far as free reduction and cyclic
/// rotations of the relator can tell.
pub fn trivial_mod_relator(w: &Word, relator: &Word) -> bool {
    let c = w.cyclic_reduce();
    c.is_empty() || c.conjugate_in_free_group(relator) || c.conjugate_in_free_group(&relator.inverse())
}

impl PantsDecomposition {
    pub fn new(genus: usize, pants: Vec<Pants>, gluings: Vec<Gluing>) -> Result<Self> {
        let d = PantsDecomposition { genus, pants, gluings };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let relator = SurfacePresentation::new(self.genus)?.relator();
        for p in &self.pants {
            p.validate()?;
        }
        let mut used = vec![[false; 3]; self.pants.len()];
        for g in &self.gluings {
            for s in [g.first, g.second] {
                if s.pants >= self.pants.len() || s.boundary >= 3 {
                    return Err(Error::InvalidPants(format!("slot {s:?} out of range")));
                }
                if std::mem::replace(&mut used[s.pants][s.boundary], true) {
                    return Err(Error::InvalidPants(format!("slot {s:?} glued twice")));
                }
            }
            let x = self.word(g.first);
            let y = self.word(g.second);
            let check = x.inverse().mul(&g.conjugator.inverse()).mul(&y.inverse()).mul(&g.conjugator);
            if !trivial_mod_relator(&check, &relator) {
                return Err(Error::InvalidPants(format!(
                    "gluing {x} to {y} by {} leaves {check}",
                    g.conjugator
                )));
            }
        }
        Ok(())
    }

    pub fn word(&self, s: Slot) -> &Word {
        &self.pants[s.pants].boundary[s.boundary]
    }

    /// Slots not glued to anything.
    pub fn free_boundary(&self) -> Vec<Slot> {
        let mut out = Vec::new();
        for p in 0..self.pants.len() {
            for b in 0..3 {
                let s = Slot { pants: p, boundary: b };
                if !self.gluings.iter().any(|g| g.first == s || g.second == s) {
                    out.push(s);
                }
            }
        }
        out
    }
}

fn gen_word(g: Generator) -> Word {
    Word::gen(g)
}

/// One-holed tori `(b_i⁻¹ a_i b_i, a_i⁻¹, [a_i, b_i])` for every handle, joined by planar pants
/// `(d_{i-1}⁻¹, c_i⁻¹, d_i)` with `c_i = [a_i, b_i]` and `d_i = c_1 ⋯ c_i`.
pub fn standard_pants_decomposition(pres: &SurfacePresentation) -> PantsDecomposition {
    let g = pres.genus();
    let c: Vec<Word> = (1..=g as u16)
        .map(|i| Word::commutator(&gen_word(Generator::A(i)), &gen_word(Generator::B(i))))
        .collect();
    let mut d = vec![c[0].clone()];
    for ci in &c[1..] {
        let next = d.last().unwrap().mul(ci);
        d.push(next);
    }
    let mut pants = Vec::new();
    let mut gluings = Vec::new();
    for i in 1..=g as u16 {
        let a = gen_word(Generator::A(i));
        let b = gen_word(Generator::B(i));
        let p = pants.len();
        pants.push(Pants::new(format!("T{i}"), a.conjugate(&b.inverse()), a.inverse()));
        gluings.push(Gluing {
            first: Slot { pants: p, boundary: 0 },
            second: Slot { pants: p, boundary: 1 },
            conjugator: b,
        });
    }
    // planar pants P_i for i = 2..g-1 sit after the g tori
    for i in 2..g {
        pants.push(Pants::new(format!("P{i}"), d[i - 2].inverse(), c[i - 1].inverse()));
    }
    let torus = |i: usize| i - 1;
    let planar = |i: usize| g + i - 2;
    let z = |p: usize| Slot { pants: p, boundary: 2 };
    let slot = |p: usize, b: usize| Slot { pants: p, boundary: b };
    let empty = Word::empty();
    if g == 2 {
        gluings.push(Gluing {
            first: z(torus(1)),
            second: z(torus(2)),
            conjugator: empty.clone(),
        });
    } else {
        gluings.push(Gluing {
            first: z(torus(1)),
            second: slot(planar(2), 0),
            conjugator: empty.clone(),
        });
        for i in 2..g {
            gluings.push(Gluing {
                first: z(torus(i)),
                second: slot(planar(i), 1),
                conjugator: empty.clone(),
            });
            if i + 1 < g {
                gluings.push(Gluing {
                    first: z(planar(i)),
                    second: slot(planar(i + 1), 0),
                    conjugator: empty.clone(),
                });
            }
        }
        gluings.push(Gluing {
            first: z(torus(g)),
            second: z(planar(g - 1)),
            conjugator: empty,
        });
    }
    PantsDecomposition::new(g, pants, gluings).expect("standard decomposition is valid")
}

/// A four-holed sphere in the genus-two surface with boundary words `a, b, c, d`,
/// `d c b a = 1`, and its two pants decompositions related by an elementary move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourHoledSphere {
    pub boundary: [Word; 4],
    /// Cut along the curve around `a, b`.
    pub ab_cd: PantsDecomposition,
    /// Cut along the curve around `b, c`.
    pub bc_da: PantsDecomposition,
}

/// The complement of `a1 ∪ a2`: `a = b2⁻¹ a2 b2`, `b = a2⁻¹`, `c = b1⁻¹ a1 b1`, `d = a1⁻¹`.
pub fn four_holed_sphere_genus2() -> FourHoledSphere {
    let p = |s: &str| Word::parse(s).expect("fixture parses");
    let (a, b, c, d) = (p("b2' a2 b2"), p("a2'"), p("b1' a1 b1"), p("a1'"));
    let empty = Word::empty();
    let slot = |pants, boundary| Slot { pants, boundary };
    let ab_cd = PantsDecomposition::new(
        2,
        vec![Pants::new("ab", a.clone(), b.clone()), Pants::new("cd", c.clone(), d.clone())],
        vec![Gluing {
            first: slot(0, 2),
            second: slot(1, 2),
            conjugator: empty.clone(),
        }],
    )
    .expect("fixture decomposition is valid");
    let bc_da = PantsDecomposition::new(
        2,
        vec![Pants::new("bc", b.clone(), c.clone()), Pants::new("da", d.clone(), a.clone())],
        vec![Gluing {
            first: slot(0, 2),
            second: slot(1, 2),
            conjugator: empty,
        }],
    )
    .expect("fixture decomposition is valid");
    let relator = SurfacePresentation::new(2).unwrap().relator();
    debug_assert!(trivial_mod_relator(&d.mul(&c).mul(&b).mul(&a), &relator));
    FourHoledSphere {
        boundary: [a, b, c, d],
        ab_cd,
        bc_da,
    }
}
