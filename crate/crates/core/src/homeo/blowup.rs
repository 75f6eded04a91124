//! Blowing up a periodic orbit into wandering intervals, and the collapsing semi-conjugacy.

use num_traits::{One, Zero};

use super::lift::{canonicalize, CircleHomeo, LiftedMap};
use super::pl::PlLift;
use crate::error::{Error, Result};
use crate::numeric::{frac, int, Rational};

/// A nondecreasing degree-one PL map given by breakpoints on one period. Unlike [`PlLift`]
/// consecutive values may be equal, so whole intervals can collapse to points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiConjugacyMap {
    points: Vec<(Rational, Rational)>,
}

impl SemiConjugacyMap {
    pub fn new(mut points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMap("semi-conjugacy needs breakpoints".into()));
        }
        points.sort_by(|a, b| a.0.cmp(&b.0));
        let one = Rational::one();
        let ok_x = points.windows(2).all(|w| w[0].0 < w[1].0)
            && points[0].0 >= Rational::zero()
            && points[points.len() - 1].0 < one;
        let ok_y = points.windows(2).all(|w| w[0].1 <= w[1].1) && points[points.len() - 1].1 <= &points[0].1 + &one;
        if !(ok_x && ok_y) {
            return Err(Error::InvalidMap("semi-conjugacy breakpoints not monotone".into()));
        }
        Ok(SemiConjugacyMap { points })
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let n = x.floor();
        let r = x - &n;
        let k = self.points.len();
        let one = Rational::one();
        let idx = self.points.partition_point(|p| p.0 <= r);
        let ((x0, y0), (x1, y1)) = match idx {
            0 => {
                let (xl, yl) = &self.points[k - 1];
                ((xl - &one, yl - &one), self.points[0].clone())
            }
            i if i == k => {
                let (xf, yf) = &self.points[0];
                (self.points[k - 1].clone(), (xf + &one, yf + &one))
            }
            i => (self.points[i - 1].clone(), self.points[i].clone()),
        };
        &y0 + (&r - &x0) * (&y1 - &y0) / (&x1 - &x0) + n
    }

    /// Nondecreasing on breakpoints and `h(x + 1) = h(x) + 1` there.
    pub fn is_degree_one_monotone(&self) -> bool {
        let one = Rational::one();
        self.points.windows(2).all(|w| w[0].1 <= w[1].1)
            && self.points.iter().all(|(x, y)| self.eval(&(x + &one)) == y + &one)
    }
}

/// Result of inserting intervals at a periodic orbit.
#[derive(Clone, Debug)]
pub struct Blowup {
    pub map: CircleHomeo,
    pub collapse: SemiConjugacyMap,
    /// Inserted intervals `[lo, hi]`, indexed like the orbit.
    pub intervals: Vec<(Rational, Rational)>,
    pub orbit: Vec<Rational>,
}

/// Replaces the orbit of `start` (of period `weights.len()`) by intervals of the given lengths.
pub fn denjoy_blowup(f: &CircleHomeo, start: &Rational, weights: &[Rational]) -> Result<Blowup> {
    let lift = f
        .lift()
        .to_pl()
        .ok_or(Error::UnsupportedKind(f.lift().kind_name()))?;
    let q = weights.len();
    if q == 0 || weights.iter().any(|w| w <= &Rational::zero()) {
        return Err(Error::PreconditionViolated("weights must be positive".into()));
    }
    let total: Rational = weights.iter().sum();
    if total >= Rational::one() {
        return Err(Error::PreconditionViolated("weights must sum to less than 1".into()));
    }
    let mut orbit = vec![frac(start)];
    for j in 0..q {
        let next = frac(&lift.eval_exact(&orbit[j]));
        if j + 1 == q {
            if next != orbit[0] {
                return Err(Error::NotPeriodic(format!("{} does not return after {q} steps", orbit[0])));
            }
        } else {
            if orbit.contains(&next) {
                return Err(Error::NotPeriodic(format!("orbit of {} has period below {q}", orbit[0])));
            }
            orbit.push(next);
        }
    }
    let scale = Rational::one() - &total;
    // left end of the interval inserted at orbit[j], in the new coordinate
    let left: Vec<Rational> = orbit
        .iter()
        .map(|o| {
            let before: Rational = orbit
                .iter()
                .zip(weights)
                .filter(|(p, _)| *p < o)
                .map(|(_, w)| w.clone())
                .sum();
            &scale * o + before
        })
        .collect();
    let right: Vec<Rational> = left.iter().zip(weights).map(|(l, w)| l + w).collect();
    let new_coord = |x: &Rational| -> Rational {
        let n = x.floor();
        let r = x - &n;
        let before: Rational = orbit
            .iter()
            .zip(weights)
            .filter(|(p, _)| **p < r)
            .map(|(_, w)| w.clone())
            .sum();
        &scale * &r + before + n
    };
    let mut pts = Vec::new();
    for j in 0..q {
        let image = lift.eval_exact(&orbit[j]);
        let m = image.floor();
        let nj = (j + 1) % q;
        pts.push((left[j].clone(), &left[nj] + &m));
        pts.push((right[j].clone(), &right[nj] + &m));
    }
    for (b, _) in lift.breakpoints() {
        if !orbit.contains(b) {
            pts.push((new_coord(b), new_coord(&lift.eval_exact(b))));
        }
    }
    let new_lift = PlLift::new(pts)?;
    let mut hpts = Vec::new();
    for j in 0..q {
        hpts.push((left[j].clone(), orbit[j].clone()));
        if right[j] < int(1) {
            hpts.push((right[j].clone(), orbit[j].clone()));
        }
    }
    let collapse = SemiConjugacyMap::new(hpts)?;
    let map = canonicalize(&LiftedMap::from_pl(new_lift));
    let out = Blowup {
        map,
        collapse,
        intervals: left.into_iter().zip(right).collect(),
        orbit,
    };
    out.check_semiconjugacy(f)?;
    Ok(out)
}

impl Blowup {
    /// Verifies `h ∘ f' = f ∘ h` at every breakpoint of `f'` and `h`, exactly.
    fn check_semiconjugacy(&self, f: &CircleHomeo) -> Result<()> {
        let fl = f.lift();
        let gl = self.map.lift();
        let mut xs: Vec<Rational> = self.collapse.breakpoints().iter().map(|p| p.0.clone()).collect();
        if let Some(p) = gl.to_pl() {
            xs.extend(p.breakpoints().map(|(x, _)| x.clone()));
        }
        xs.push(Rational::zero());
        for x in xs {
            let lhs = self.collapse.eval(&gl.eval_exact(&x).expect("exact"));
            let rhs = fl.eval_exact(&self.collapse.eval(&x)).expect("exact");
            if frac(&(lhs - rhs)) != Rational::zero() {
                return Err(Error::Internal(format!("semi-conjugacy fails at {x}")));
            }
        }
        if !self.collapse.is_degree_one_monotone() {
            return Err(Error::Internal("collapse map not monotone".into()));
        }
        Ok(())
    }
}
