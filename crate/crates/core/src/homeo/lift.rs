use std::fmt;

use num_traits::{One, Zero};

use super::flow::FlowLift;
use super::mobius::{Mat2, MobiusLift};
use super::pl::PlLift;
use crate::error::{Error, Result};
use crate::numeric::{floor_i64, int, to_f64, Rational};

/// An element of Homeo_Z(R): a homeomorphism of the line commuting with `x ↦ x + 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum LiftedMap {
    Rotation(Rational),
    Pl(PlLift),
    Mobius(MobiusLift),
    /// Time-`t` map of a piecewise-linear flow; not finitely PL in general.
    Flow(FlowLift),
    /// Composition `factors[0] ∘ factors[1] ∘ ...`; at least two factors, none composite.
    Composite(Vec<LiftedMap>),
}

impl LiftedMap {
    pub fn identity() -> Self {
        LiftedMap::Rotation(Rational::zero())
    }

    pub fn rotation(tau: Rational) -> Self {
        LiftedMap::Rotation(tau)
    }

    pub fn pl(points: Vec<(Rational, Rational)>) -> Result<Self> {
        Ok(LiftedMap::from_pl(PlLift::new(points)?))
    }

    pub fn mobius(m: Mat2, branch: i64) -> Result<Self> {
        Ok(LiftedMap::Mobius(MobiusLift::new(m, branch)?))
    }

    /// PL lifts that are translations are stored as rotations.
    pub fn from_pl(p: PlLift) -> Self {
        match p.as_translation() {
            Some(tau) => LiftedMap::Rotation(tau),
            None => LiftedMap::Pl(p),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            LiftedMap::Rotation(_) => "rotation",
            LiftedMap::Pl(_) => "pl",
            LiftedMap::Mobius(_) => "mobius",
            LiftedMap::Flow(_) => "flow",
            LiftedMap::Composite(_) => "composite",
        }
    }

    /// Rotation and PL lifts: every value at a rational point is rational.
    pub fn is_exact(&self) -> bool {
        matches!(self, LiftedMap::Rotation(_) | LiftedMap::Pl(_))
    }

    pub fn to_pl(&self) -> Option<PlLift> {
        match self {
            LiftedMap::Rotation(t) => Some(PlLift::translation(t.clone())),
            LiftedMap::Pl(p) => Some(p.clone()),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            LiftedMap::Rotation(t) => x + to_f64(t),
            LiftedMap::Pl(p) => p.eval(x),
            LiftedMap::Mobius(m) => m.eval(x),
            LiftedMap::Flow(f) => f.eval(x),
            LiftedMap::Composite(fs) => fs.iter().rev().fold(x, |acc, f| f.eval(acc)),
        }
    }

    pub fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        match self {
            LiftedMap::Rotation(t) => Some(x + t),
            LiftedMap::Pl(p) => Some(p.eval_exact(x)),
            _ => None,
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LiftedMap) -> LiftedMap {
        use LiftedMap::*;
        match (self, inner) {
            (Rotation(a), Rotation(b)) => Rotation(a + b),
            (a, b) if a.is_exact() && b.is_exact() => {
                let (pa, pb) = (a.to_pl().expect("exact"), b.to_pl().expect("exact"));
                LiftedMap::from_pl(pa.compose(&pb))
            }
            (Mobius(a), Mobius(b)) => Mobius(a.compose(b)),
            (Flow(a), Flow(b)) if a.same_flow(b) => Flow(a.add_time(b)),
            _ => {
                let mut factors = Vec::new();
                for f in [self, inner] {
                    match f {
                        Composite(fs) => {
                            for g in fs {
                                push_factor(&mut factors, g.clone());
                            }
                        }
                        g => push_factor(&mut factors, g.clone()),
                    }
                }
                from_factors(factors)
            }
        }
    }

    pub fn invert(&self) -> LiftedMap {
        use LiftedMap::*;
        match self {
            Rotation(t) => Rotation(-t),
            Pl(p) => LiftedMap::from_pl(p.inverse()),
            Mobius(m) => Mobius(m.inverse()),
            Flow(f) => Flow(f.inverse()),
            Composite(fs) => Composite(fs.iter().rev().map(LiftedMap::invert).collect()),
        }
    }

    pub fn power(&self, n: i64) -> LiftedMap {
        use LiftedMap::*;
        match self {
            Rotation(t) => Rotation(t * int(n)),
            Pl(p) => LiftedMap::from_pl(p.power(n)),
            Mobius(m) => Mobius(m.power(n)),
            Flow(f) => Flow(f.times(n as f64)),
            Composite(_) => {
                let mut base = if n < 0 { self.invert() } else { self.clone() };
                let mut e = n.unsigned_abs();
                let mut acc = LiftedMap::identity();
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc.compose(&base);
                    }
                    e >>= 1;
                    if e > 0 {
                        base = base.compose(&base);
                    }
                }
                acc
            }
        }
    }

    /// `x ↦ F(x) + k`.
    pub fn shift(&self, k: i64) -> LiftedMap {
        use LiftedMap::*;
        if k == 0 {
            return self.clone();
        }
        match self {
            Rotation(t) => Rotation(t + int(k)),
            Pl(p) => Pl(p.shift(k)),
            Mobius(m) => Mobius(m.shift(k)),
            Flow(f) => Flow(f.shift(k)),
            Composite(fs) => {
                let mut fs = fs.clone();
                fs[0] = fs[0].shift(k);
                Composite(fs)
            }
        }
    }

    /// Conjugate by `x ↦ -x`, i.e. `x ↦ -F(-x)`.
    pub fn reflect(&self) -> LiftedMap {
        use LiftedMap::*;
        match self {
            Rotation(t) => Rotation(-t),
            Pl(p) => LiftedMap::from_pl(p.reflect()),
            Mobius(m) => Mobius(m.reflect()),
            Flow(f) => Flow(f.reflect()),
            Composite(fs) => Composite(fs.iter().map(LiftedMap::reflect).collect()),
        }
    }

    /// `c ∘ self ∘ c⁻¹`.
    pub fn conjugate_by(&self, c: &LiftedMap) -> LiftedMap {
        c.compose(self).compose(&c.invert())
    }

    /// Integer part of `F(0)`, exact whenever the kind allows.
    pub fn floor_at_zero(&self) -> i64 {
        match self.eval_exact(&Rational::zero()) {
            Some(v) => floor_i64(&v),
            None => self.eval(0.0).floor() as i64,
        }
    }

    pub fn is_identity_exact(&self) -> bool {
        match self {
            LiftedMap::Rotation(t) => t.is_zero(),
            LiftedMap::Mobius(m) => *m.matrix() == Mat2::IDENTITY && m.branch() == 0,
            LiftedMap::Flow(f) => f.time() == 0.0 && f.shift_amount() == 0,
            _ => false,
        }
    }

    /// Sample points useful for seeding numerical iteration.
    pub fn hint_points(&self) -> Vec<f64> {
        match self {
            LiftedMap::Pl(p) => p.breakpoints_f64().iter().copied().take(8).collect(),
            _ => vec![0.0, 0.25, 0.5, 0.75],
        }
    }
}

fn push_factor(factors: &mut Vec<LiftedMap>, f: LiftedMap) {
    if f.is_identity_exact() {
        return;
    }
    if let Some(last) = factors.last() {
        let merges = (last.is_exact() && f.is_exact())
            || matches!((last, &f), (LiftedMap::Mobius(_), LiftedMap::Mobius(_)))
            || matches!((last, &f), (LiftedMap::Flow(a), LiftedMap::Flow(b)) if a.same_flow(b));
        if merges {
            let last = factors.pop().expect("nonempty");
            let merged = last.compose(&f);
            if !merged.is_identity_exact() {
                factors.push(merged);
            }
            return;
        }
    }
    factors.push(f);
}

fn from_factors(mut factors: Vec<LiftedMap>) -> LiftedMap {
    match factors.len() {
        0 => LiftedMap::identity(),
        1 => factors.pop().expect("one factor"),
        _ => LiftedMap::Composite(factors),
    }
}

/// A circle homeomorphism, stored through its canonical lift (value at 0 in [0,1)).
#[derive(Clone, Debug, PartialEq)]
pub struct CircleHomeo {
    lift: LiftedMap,
}

impl CircleHomeo {
    pub fn identity() -> Self {
        CircleHomeo {
            lift: LiftedMap::identity(),
        }
    }

    pub fn lift(&self) -> &LiftedMap {
        &self.lift
    }

    pub fn into_lift(self) -> LiftedMap {
        self.lift
    }

    pub fn eval(&self, x: f64) -> f64 {
        let y = self.lift.eval(x);
        y - y.floor()
    }

    pub fn compose(&self, inner: &CircleHomeo) -> CircleHomeo {
        canonicalize(&self.lift.compose(&inner.lift))
    }

    pub fn invert(&self) -> CircleHomeo {
        canonicalize(&self.lift.invert())
    }

    pub fn power(&self, n: i64) -> CircleHomeo {
        canonicalize(&self.lift.power(n))
    }

    pub fn reflect(&self) -> CircleHomeo {
        canonicalize(&self.lift.reflect())
    }

    pub fn conjugate_by(&self, c: &CircleHomeo) -> CircleHomeo {
        canonicalize(&self.lift.conjugate_by(&c.lift))
    }

    /// Largest `|f(x) - g(x)|` in circle distance over `n` uniform samples.
    pub fn sup_distance(&self, other: &CircleHomeo, n: usize) -> f64 {
        (0..n)
            .map(|i| {
                let x = i as f64 / n as f64;
                let d = self.lift.eval(x) - other.lift.eval(x);
                let d = d - d.round();
                d.abs()
            })
            .fold(0.0, f64::max)
    }
}

impl From<CircleHomeo> for LiftedMap {
    fn from(h: CircleHomeo) -> Self {
        h.lift
    }
}

pub fn canonicalize(f: &LiftedMap) -> CircleHomeo {
    let k = f.floor_at_zero();
    CircleHomeo { lift: f.shift(-k) }
}

impl fmt::Display for LiftedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftedMap::Rotation(t) => write!(f, "rotation({t})"),
            LiftedMap::Pl(p) => {
                write!(f, "pl[")?;
                for (i, (x, y)) in p.breakpoints().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({x}, {y})")?;
                }
                write!(f, "]")
            }
            LiftedMap::Mobius(m) => {
                let a = m.matrix();
                write!(f, "mobius[[{}, {}], [{}, {}]]+{}", a.a, a.b, a.c, a.d, m.branch())
            }
            LiftedMap::Flow(fl) => write!(f, "flow(t = {})", fl.time()),
            LiftedMap::Composite(fs) => {
                write!(f, "composite(")?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ∘ ")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Fails when the map breaks monotonicity or the equivariance `F(x + 1) = F(x) + 1` on samples.
pub fn check_lift(f: &LiftedMap, samples: usize) -> Result<()> {
    let one = Rational::one();
    let mut prev = f.eval(0.0);
    for i in 1..=samples {
        let x = i as f64 / samples as f64;
        let y = f.eval(x);
        if y <= prev {
            return Err(Error::InvalidMap(format!("not increasing near x = {x}")));
        }
        let e = (f.eval(x + 1.0) - y - 1.0).abs();
        if e > 1e-12 * (1.0 + y.abs()) {
            return Err(Error::InvalidMap(format!("equivariance defect {e:e} at x = {x}")));
        }
        prev = y;
    }
    if let Some(v0) = f.eval_exact(&Rational::zero()) {
        if f.eval_exact(&one) != Some(v0 + one) {
            return Err(Error::InvalidMap("exact equivariance fails at 0".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn rotation_examples() {
        let r = LiftedMap::rotation(rat(1, 3));
        assert_eq!(r.eval_exact(&rat(0, 1)), Some(rat(1, 3)));
        let q = LiftedMap::rotation(rat(1, 4));
        assert_eq!(q.compose(&q), LiftedMap::rotation(rat(1, 2)));
        assert_eq!(canonicalize(&LiftedMap::rotation(rat(7, 3))).lift(), &LiftedMap::rotation(rat(1, 3)));
        assert_eq!(canonicalize(&LiftedMap::rotation(rat(-1, 4))).lift(), &LiftedMap::rotation(rat(3, 4)));
    }

    #[test]
    fn pl_inverse_example() {
        let f = LiftedMap::pl(vec![(rat(0, 1), rat(2, 5)), (rat(1, 2), rat(4, 5))]).unwrap();
        assert_eq!(f.invert().eval_exact(&rat(2, 5)), Some(rat(0, 1)));
    }

    #[test]
    fn mobius_power_is_matrix_power() {
        let f = LiftedMap::mobius(Mat2::diag(2.0), 0).unwrap();
        let LiftedMap::Mobius(m) = f.power(2) else { panic!("kind changed") };
        assert!(m.matrix().distance(&Mat2::diag(4.0)) < 1e-15);
    }

    #[test]
    fn mixed_kinds_become_composite() {
        let f = LiftedMap::mobius(Mat2::diag(2.0), 0).unwrap();
        let r = LiftedMap::rotation(rat(1, 4));
        let c = f.compose(&r);
        assert_eq!(c.kind_name(), "composite");
        assert!((c.eval(0.1) - f.eval(0.35)).abs() < 1e-15);
        let back = c.compose(&c.invert());
        for i in 0..10 {
            let x = i as f64 / 10.0;
            assert!((back.eval(x) - x).abs() < 1e-12);
        }
        // adjacent exact factors merge
        let cc = r.compose(&c);
        assert!(matches!(&cc, LiftedMap::Composite(fs) if fs.len() == 3));
    }

    #[test]
    fn canonical_shift_on_composite() {
        let f = LiftedMap::mobius(Mat2::diag(2.0), 3).unwrap();
        let r = LiftedMap::rotation(rat(5, 4));
        let h = canonicalize(&f.compose(&r));
        let v = h.lift().eval(0.0);
        assert!((0.0..1.0).contains(&v));
        assert_eq!(canonicalize(h.lift()), h);
    }
}
