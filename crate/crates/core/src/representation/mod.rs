//! Representations of the surface group (and of free subgroups) by circle homeomorphisms.

mod euler;
mod fuchsian;
mod order;
pub mod random;
mod report;

pub use euler::{detect_fuchsian_torus, lifted_commutator_translation, pants_euler, subsurface_euler, TorusWitness};
pub use fuchsian::{fuchsian_closed, fuchsian_matrices, fuchsian_once_punctured_torus};
pub use order::{fixed_point_table, verify_chain_order, verify_separation, FixedPointTable};
pub use report::Report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homeo::{canonicalize, CircleHomeo, LiftedMap};
use crate::rotnum::{displacement_spread, integer_translation_value};
use crate::surface::{Generator, SurfacePresentation, Word};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RelatorStatus {
    /// The lifted relator is an integer translation in exact arithmetic.
    VerifiedExact,
    /// Displacement of the lifted relator is within `spread < tol` of an integer on samples.
    VerifiedWithin { tol: f64, spread: f64 },
    /// A free-group representation; no relator is checked.
    UnverifiedFree,
}

/// Per-generator integer shifts applied to the canonical lifts.
pub type LiftChoice = BTreeMap<Generator, i64>;

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    handles: usize,
    presentation: Option<SurfacePresentation>,
    images: BTreeMap<Generator, CircleHomeo>,
    status: RelatorStatus,
    euler: Option<i64>,
    tol: f64,
}

fn generators_of(handles: usize) -> Vec<Generator> {
    (1..=handles as u16)
        .flat_map(|i| [Generator::A(i), Generator::B(i)])
        .collect()
}

fn check_coverage(handles: usize, images: &BTreeMap<Generator, CircleHomeo>) -> Result<()> {
    for g in generators_of(handles) {
        if !images.contains_key(&g) {
            return Err(Error::PreconditionViolated(format!("no image for {g}")));
        }
    }
    if let Some(g) = images.keys().find(|g| g.handle() as usize > handles || g.handle() == 0) {
        return Err(Error::UnknownGenerator(g.to_string()));
    }
    Ok(())
}

/// Checks the relator and caches the Euler number.
pub fn new_representation(
    pres: SurfacePresentation,
    assignment: BTreeMap<Generator, CircleHomeo>,
    tol: f64,
) -> Result<Representation> {
    check_coverage(pres.genus(), &assignment)?;
    let mut rep = Representation {
        handles: pres.genus(),
        presentation: Some(pres),
        images: assignment,
        status: RelatorStatus::UnverifiedFree,
        euler: None,
        tol,
    };
    let rel = rep.evaluate_word_lift(&pres.relator(), &LiftChoice::new())?;
    let k = integer_translation_value(&rel, tol).map_err(|e| match e {
        Error::NotIdentityLift { spread, tol } => {
            Error::RelatorNotSatisfied(format!("relator displacement spread {spread:e} exceeds {tol:e}"))
        }
        other => other,
    })?;
    rep.status = if rel.is_exact() {
        RelatorStatus::VerifiedExact
    } else {
        RelatorStatus::VerifiedWithin {
            tol,
            spread: displacement_spread(&rel, k),
        }
    };
    let bound = 2 * pres.genus() as i64 - 2;
    if k.abs() > bound {
        return Err(Error::Internal(format!("Milnor-Wood violated: eu = {k}, bound {bound}")));
    }
    rep.euler = Some(k);
    Ok(rep)
}

/// A representation of the free group on `a_i, b_i` for `i <= handles`.
pub fn free_representation(handles: usize, assignment: BTreeMap<Generator, CircleHomeo>, tol: f64) -> Result<Representation> {
    check_coverage(handles, &assignment)?;
    Ok(Representation {
        handles,
        presentation: None,
        images: assignment,
        status: RelatorStatus::UnverifiedFree,
        euler: None,
        tol,
    })
}

impl Representation {
    /// Every generator sent to the identity.
    pub fn trivial(genus: usize) -> Result<Representation> {
        let pres = SurfacePresentation::new(genus)?;
        let images = pres.generators().into_iter().map(|g| (g, CircleHomeo::identity())).collect();
        new_representation(pres, images, DEFAULT_TOL)
    }

    pub fn handles(&self) -> usize {
        self.handles
    }

    pub fn presentation(&self) -> Option<&SurfacePresentation> {
        self.presentation.as_ref()
    }

    pub fn generators(&self) -> Vec<Generator> {
        generators_of(self.handles)
    }

    pub fn image(&self, g: Generator) -> Result<&CircleHomeo> {
        self.images.get(&g).ok_or_else(|| Error::UnknownGenerator(g.to_string()))
    }

    pub fn images(&self) -> &BTreeMap<Generator, CircleHomeo> {
        &self.images
    }

    pub fn status(&self) -> RelatorStatus {
        self.status
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_free(&self) -> bool {
        self.presentation.is_none()
    }

    /// Right-to-left composition of the chosen lifts.
    pub fn evaluate_word_lift(&self, w: &Word, choice: &LiftChoice) -> Result<LiftedMap> {
        let mut out = LiftedMap::identity();
        for &(g, e) in w.letters() {
            let base = self.image(g)?.lift();
            let lift = match choice.get(&g) {
                Some(&k) if k != 0 => base.shift(k),
                _ => base.clone(),
            };
            out = out.compose(&lift.power(e as i64));
        }
        Ok(out)
    }

    pub fn evaluate_word(&self, w: &Word) -> Result<CircleHomeo> {
        Ok(canonicalize(&self.evaluate_word_lift(w, &LiftChoice::new())?))
    }

    /// The integer translation of the lifted relator.
    pub fn euler_number(&self) -> Result<i64> {
        self.euler.ok_or(Error::NotClosed)
    }

    /// Same generators with some images replaced; the relator is checked again.
    pub fn with_images(&self, images: BTreeMap<Generator, CircleHomeo>) -> Result<Representation> {
        match self.presentation {
            Some(p) => new_representation(p, images, self.tol),
            None => free_representation(self.handles, images, self.tol),
        }
    }

    /// Same images under a new tolerance; the relator is checked again.
    pub fn with_tol(&self, tol: f64) -> Result<Representation> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::PreconditionViolated(format!("tolerance {tol} must be positive")));
        }
        match self.presentation {
            Some(p) => new_representation(p, self.images.clone(), tol),
            None => free_representation(self.handles, self.images.clone(), tol),
        }
    }

    /// `g ↦ c ρ(g) c⁻¹`.
    pub fn conjugate_by(&self, c: &CircleHomeo) -> Result<Representation> {
        let images = self.images.iter().map(|(g, f)| (*g, f.conjugate_by(c))).collect();
        self.with_images(images)
    }

    /// Conjugation by `x ↦ -x`.
    pub fn reflect(&self) -> Result<Representation> {
        let images = self.images.iter().map(|(g, f)| (*g, f.reflect())).collect();
        self.with_images(images)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepWire {
    genus: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    free: bool,
    assignment: BTreeMap<Generator, CircleHomeo>,
    tol: f64,
}

impl Serialize for Representation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepWire {
            genus: self.handles,
            free: self.is_free(),
            assignment: self.images.clone(),
            tol: self.tol,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Representation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = RepWire::deserialize(d)?;
        let r = if w.free {
            free_representation(w.genus, w.assignment, w.tol)
        } else {
            SurfacePresentation::new(w.genus).and_then(|p| new_representation(p, w.assignment, w.tol))
        };
        r.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::Mat2;
    use crate::numeric::rat;

    fn rotations() -> Representation {
        let pres = SurfacePresentation::new(2).unwrap();
        let images = pres
            .generators()
            .into_iter()
            .enumerate()
            .map(|(i, g)| (g, canonicalize(&LiftedMap::rotation(rat(i as i64 + 1, 7)))))
            .collect();
        new_representation(pres, images, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn trivial_and_rotation_reps() {
        let t = Representation::trivial(2).unwrap();
        assert_eq!(t.euler_number().unwrap(), 0);
        assert_eq!(t.status(), RelatorStatus::VerifiedExact);
        let r = rotations();
        assert_eq!(r.euler_number().unwrap(), 0);
        assert_eq!(r.status(), RelatorStatus::VerifiedExact);
        let c = r.evaluate_word(&Word::parse("A' a' A a").unwrap()).unwrap();
        assert_eq!(c, CircleHomeo::identity());
        assert_eq!(r.evaluate_word(&Word::empty()).unwrap(), CircleHomeo::identity());
    }

    #[test]
    fn relator_failure() {
        let pres = SurfacePresentation::new(2).unwrap();
        let mut images: BTreeMap<_, _> = pres.generators().into_iter().map(|g| (g, CircleHomeo::identity())).collect();
        images.insert(Generator::A(1), canonicalize(&LiftedMap::mobius(Mat2::diag(2.0), 0).unwrap()));
        images.insert(Generator::B(1), canonicalize(&LiftedMap::rotation(rat(1, 4))));
        assert!(matches!(
            new_representation(pres, images, DEFAULT_TOL),
            Err(Error::RelatorNotSatisfied(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let r = rotations();
        let s = serde_json::to_string(&r).unwrap();
        let back: Representation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(s.starts_with(r#"{"genus":2,"assignment":{"a1":{"kind":"rotation","angle":"1/7"}"#));
    }
}
