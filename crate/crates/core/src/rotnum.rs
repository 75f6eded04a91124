//! Translation and rotation numbers with certified enclosures.

use std::f64::consts::PI;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homeo::{CircleHomeo, FixedComponent, LiftedMap, Mat2, MobiusLift, PlLift};
use crate::numeric::{frac, int, rat, rational_string, to_f64, Rational, Real};

pub const DEFAULT_MAX_ITER: u64 = 1_000_000;
pub const DEFAULT_Q_MAX: u64 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WitnessKind {
    /// `F^q(x) = x + p` verified in rational arithmetic.
    Exact,
    /// `F^q(t) - t - p` changes sign on `[lo, hi]` by more than the evaluation error.
    SignChange { lo: f64, hi: f64 },
    /// `x` is an eigen-direction of the matrix.
    EigenDirection,
}

/// A periodic orbit `F^q(x) = x + p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Real,
    pub period: u64,
    pub winding: i64,
    pub certificate: WitnessKind,
}

/// An enclosure `[lo, hi]` of a translation number, with an exact value when certified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotBound {
    pub lo: f64,
    pub hi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub exact: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => rational_string::serialize(r, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| crate::numeric::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl RotBound {
    pub fn interval(lo: f64, hi: f64) -> Self {
        RotBound {
            lo,
            hi,
            exact: None,
            witness: None,
        }
    }

    pub fn exact(value: Rational, witness: Option<Witness>) -> Self {
        let v = to_f64(&value);
        // one ulp of slack either way keeps the rational inside the float interval
        RotBound {
            lo: v - v.abs() * f64::EPSILON,
            hi: v + v.abs() * f64::EPSILON,
            exact: Some(value),
            witness,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        match &self.exact {
            Some(r) => to_f64(r),
            None => 0.5 * (self.lo + self.hi),
        }
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lo - slack <= x && x <= self.hi + slack
    }

    /// The integer value, when exactly certified as one.
    pub fn exact_integer(&self) -> Option<i64> {
        self.exact
            .as_ref()
            .filter(|r| r.is_integer())
            .and_then(|r| r.to_integer().to_i64())
    }

    pub fn add(&self, o: &RotBound) -> RotBound {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => RotBound::exact(a + b, None),
            _ => RotBound::interval(self.lo + o.lo, self.hi + o.hi),
        }
    }

    pub fn neg(&self) -> RotBound {
        RotBound {
            lo: -self.hi,
            hi: -self.lo,
            exact: self.exact.as_ref().map(|r| -r),
            witness: None,
        }
    }

    pub fn sub(&self, o: &RotBound) -> RotBound {
        self.add(&o.neg())
    }

    pub fn scale(&self, n: i64) -> RotBound {
        let (a, b) = (self.lo * n as f64, self.hi * n as f64);
        RotBound {
            lo: a.min(b),
            hi: a.max(b),
            exact: self.exact.as_ref().map(|r| r * int(n)),
            witness: None,
        }
    }

    /// Shift by an integer (used to reduce mod 1).
    fn shifted(&self, k: i64) -> RotBound {
        RotBound {
            lo: self.lo + k as f64,
            hi: self.hi + k as f64,
            exact: self.exact.as_ref().map(|r| r + int(k)),
            witness: self.witness.clone().map(|w| Witness {
                winding: w.winding + k * w.period as i64,
                ..w
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotOptions {
    pub tol: f64,
    pub max_iter: u64,
    pub q_max: u64,
}

impl RotOptions {
    pub fn new(tol: f64) -> Self {
        RotOptions {
            tol,
            max_iter: DEFAULT_MAX_ITER,
            q_max: DEFAULT_Q_MAX,
        }
    }
}

pub fn translation_number(f: &LiftedMap, tol: f64, max_iter: u64) -> Result<RotBound> {
    translation_number_with(
        f,
        &RotOptions {
            tol,
            max_iter,
            q_max: DEFAULT_Q_MAX,
        },
    )
}

pub fn translation_number_with(f: &LiftedMap, opts: &RotOptions) -> Result<RotBound> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::PreconditionViolated("tolerance must be positive".into()));
    }
    match f {
        LiftedMap::Rotation(t) => {
            let (p, q) = (t.numer().to_i64(), t.denom().to_u64());
            let witness = match (p, q) {
                (Some(p), Some(q)) => Some(Witness {
                    x: Real::Exact(Rational::zero()),
                    period: q,
                    winding: p,
                    certificate: WitnessKind::Exact,
                }),
                _ => None,
            };
            return Ok(RotBound::exact(t.clone(), witness));
        }
        LiftedMap::Pl(p) => {
            if let Some(w) = pl_periodic_orbit(p, opts.q_max) {
                return Ok(RotBound::exact(rat(w.winding, w.period as i64), Some(w)));
            }
        }
        LiftedMap::Mobius(m) => {
            if let Some(b) = mobius_translation(m) {
                if b.exact.is_some() || b.width() <= opts.tol {
                    return Ok(b);
                }
            }
        }
        LiftedMap::Flow(_) | LiftedMap::Composite(_) => {
            if let Some(b) = sign_change_certificate(f, 4) {
                return Ok(b);
            }
        }
    }
    iterate_to_tolerance(f, opts)
}

/// Translation number of the canonical lift reduced into [0,1).
pub fn rotation_number(f: &CircleHomeo, tol: f64) -> Result<RotBound> {
    let b = translation_number(f.lift(), tol, DEFAULT_MAX_ITER)?;
    let k = match &b.exact {
        Some(r) => r.floor().to_integer().to_i64().unwrap_or(0),
        None => b.mid().floor() as i64,
    };
    Ok(b.shifted(-k))
}

/// A periodic orbit `F^q(x) = x + p` with `q <= q_max`, for rotation and PL kinds.
pub fn periodic_certificate(f: &CircleHomeo, q_max: u64) -> Result<Option<(Rational, u64, i64)>> {
    let orbit = match f.lift() {
        LiftedMap::Rotation(t) => {
            let q = t.denom().to_u64().unwrap_or(u64::MAX);
            (q <= q_max).then(|| Witness {
                x: Real::Exact(Rational::zero()),
                period: q,
                winding: t.numer().to_i64().expect("small numerator"),
                certificate: WitnessKind::Exact,
            })
        }
        LiftedMap::Pl(p) => pl_periodic_orbit(p, q_max),
        other => return Err(Error::UnsupportedKind(other.kind_name())),
    };
    Ok(orbit.map(|w| {
        let x = w.x.exact().cloned().expect("exact witness");
        (x, w.period, w.winding)
    }))
}

/// Screens candidates `p/q` with a certified float enclosure, then verifies each exactly.
fn pl_periodic_orbit(f: &PlLift, q_max: u64) -> Option<Witness> {
    // the enclosure width is 2/n whatever the sample count, so two orbits suffice
    let screen = iterate_enclosure(&LiftedMap::Pl(f.clone()), &f.breakpoints_f64()[..f.len().min(2)], 8192);
    let mut candidates: Vec<(u64, i64)> = Vec::new();
    for q in 1..=q_max {
        let lo = (screen.0 * q as f64).ceil() as i64;
        let hi = (screen.1 * q as f64).floor() as i64;
        for p in lo..=hi {
            if crate::numeric::gcd(p, q as i64) == 1 {
                candidates.push((q, p));
            }
        }
    }
    let mut powers: Vec<(u64, PlLift)> = vec![(1, f.clone())];
    for (q, p) in candidates {
        let fq = pl_power_cached(&mut powers, q);
        let target = int(p);
        let (dlo, dhi) = fq.displacement_range();
        if dlo > target || dhi < target {
            continue;
        }
        let comps = fq.solve_displacement(&target);
        let x = match comps.first() {
            Some(FixedComponent::Point(x)) => x.clone(),
            Some(FixedComponent::Interval(a, _)) => a.clone(),
            None => continue,
        };
        let x = frac(&x);
        debug_assert_eq!(fq.eval_exact(&x), &x + &target);
        return Some(Witness {
            x: Real::Exact(x),
            period: q,
            winding: p,
            certificate: WitnessKind::Exact,
        });
    }
    None
}

fn pl_power_cached(cache: &mut Vec<(u64, PlLift)>, q: u64) -> PlLift {
    if let Some((_, p)) = cache.iter().find(|(k, _)| *k == q) {
        return p.clone();
    }
    // build from the largest cached power not exceeding q
    let (k, base) = cache
        .iter()
        .filter(|(k, _)| *k <= q)
        .max_by_key(|(k, _)| *k)
        .cloned()
        .expect("power 1 is cached");
    let one = cache[0].1.clone();
    let rest = one.power((q - k) as i64);
    let p = base.compose(&rest);
    cache.push((q, p.clone()));
    p
}

/// Exact value for hyperbolic and parabolic matrices; a tight enclosure for elliptic ones.
fn mobius_translation(m: &MobiusLift) -> Option<RotBound> {
    let a = m.matrix();
    let tr = a.trace();
    if tr.abs() >= 2.0 {
        let disc = (tr * tr - 4.0).max(0.0).sqrt();
        let l = if tr >= 0.0 { (tr + disc) / 2.0 } else { (tr - disc) / 2.0 };
        let p = Mat2::angle_of(a.eigenvector(l));
        let d = m.eval(p) - p;
        let k = d.round();
        if (d - k).abs() < 1e-7 {
            let k = k as i64;
            return Some(RotBound::exact(
                int(k),
                Some(Witness {
                    x: Real::approx(p, 1e-12),
                    period: 1,
                    winding: k,
                    certificate: WitnessKind::EigenDirection,
                }),
            ));
        }
        return None;
    }
    let beta = (tr / 2.0).acos() / PI;
    let r = if a.c > 0.0 { beta } else { 1.0 - beta };
    let rough = iterate_enclosure(&LiftedMap::Mobius(*m), &[0.0, 0.5], 8);
    let mid = 0.5 * (rough.0 + rough.1);
    let v = r + (mid - r).round();
    let err = 1e-13 * (1.0 + a.norm_sup().powi(2)) / (1.0 - (tr / 2.0).powi(2)).max(1e-300).sqrt();
    Some(RotBound::interval(v - err, v + err))
}

/// Looks for `x` with `F^q(x) - x - p` changing sign, `q <= q_max`, on a uniform grid.
fn sign_change_certificate(f: &LiftedMap, q_max: u64) -> Option<RotBound> {
    const N: usize = 512;
    let xs: Vec<f64> = (0..=N).map(|i| i as f64 / N as f64).collect();
    let mut ys = xs.clone();
    for q in 1..=q_max {
        for y in ys.iter_mut() {
            *y = f.eval(*y);
        }
        let err = 1e-11 * q as f64;
        let d: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - x).collect();
        let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for p in lo.ceil() as i64..=hi.floor() as i64 {
            if crate::numeric::gcd(p, q as i64) != 1 {
                continue;
            }
            let s: Vec<f64> = d.iter().map(|v| v - p as f64).collect();
            for i in 0..N {
                if (s[i] > err && s[i + 1] < -err) || (s[i] < -err && s[i + 1] > err) {
                    return Some(RotBound::exact(
                        rat(p, q as i64),
                        Some(Witness {
                            x: Real::approx(0.5 * (xs[i] + xs[i + 1]), 0.5 / N as f64),
                            period: q,
                            winding: p,
                            certificate: WitnessKind::SignChange {
                                lo: xs[i],
                                hi: xs[i + 1],
                            },
                        }),
                    ));
                }
            }
        }
    }
    None
}

/// Per-step evaluation error, relative to `1 + |x|`.
fn step_error(f: &LiftedMap) -> f64 {
    match f {
        LiftedMap::Rotation(_) => 4.0 * f64::EPSILON,
        LiftedMap::Pl(_) => 8.0 * f64::EPSILON,
        LiftedMap::Mobius(m) => 1e-14 * (1.0 + m.matrix().norm_sup().powi(2)),
        LiftedMap::Flow(_) => 1e-11,
        LiftedMap::Composite(fs) => fs.iter().map(step_error).sum::<f64>() * 2.0,
    }
}

struct Orbit {
    x0: f64,
    lo: f64,
    hi: f64,
    winding: f64,
}

struct Enclosure {
    orbits: Vec<Orbit>,
    n: u64,
    pad: f64,
}

impl Enclosure {
    fn new(f: &LiftedMap, samples: &[f64]) -> Self {
        Enclosure {
            orbits: samples
                .iter()
                .map(|&x| Orbit {
                    x0: x,
                    lo: x,
                    hi: x,
                    winding: 0.0,
                })
                .collect(),
            n: 0,
            pad: step_error(f),
        }
    }

    fn advance(&mut self, f: &LiftedMap, steps: u64) {
        for o in &mut self.orbits {
            for _ in 0..steps {
                let m = o.lo.floor();
                o.lo -= m;
                o.hi -= m;
                o.winding += m;
                let a = f.eval(o.lo);
                let b = f.eval(o.hi);
                o.lo = a - self.pad * (1.0 + a.abs());
                o.hi = b + self.pad * (1.0 + b.abs());
            }
        }
        self.n += steps;
    }

    /// `[(max D_lo - 1)/n, (min D_hi + 1)/n]`, using that `F^n(x) - x` varies by less than 1.
    fn bounds(&self) -> (f64, f64) {
        let n = self.n as f64;
        let mut dmax_lo = f64::NEG_INFINITY;
        let mut dmin_hi = f64::INFINITY;
        for o in &self.orbits {
            dmax_lo = dmax_lo.max(o.lo + o.winding - o.x0);
            dmin_hi = dmin_hi.min(o.hi + o.winding - o.x0);
        }
        let lo = (dmax_lo - 1.0) / n;
        let hi = (dmin_hi + 1.0) / n;
        let slack = 4.0 * f64::EPSILON * (1.0 + lo.abs().max(hi.abs()));
        (lo - slack, hi + slack)
    }
}

fn iterate_enclosure(f: &LiftedMap, samples: &[f64], n: u64) -> (f64, f64) {
    let samples = if samples.is_empty() { &[0.0][..] } else { samples };
    let mut e = Enclosure::new(f, samples);
    e.advance(f, n);
    e.bounds()
}

fn iterate_to_tolerance(f: &LiftedMap, opts: &RotOptions) -> Result<RotBound> {
    let hints = f.hint_points();
    let mut e = Enclosure::new(f, &hints);
    let mut n = 1024u64.min(opts.max_iter.max(1));
    e.advance(f, n);
    loop {
        let (lo, hi) = e.bounds();
        if hi - lo <= opts.tol {
            return Ok(RotBound::interval(lo, hi));
        }
        if e.n >= opts.max_iter {
            return Err(Error::ToleranceNotReached {
                tol: opts.tol,
                iterations: e.n,
                best: Box::new(RotBound::interval(lo, hi)),
            });
        }
        let next = (2 * n).min(opts.max_iter);
        e.advance(f, next - n);
        n = next;
    }
}

/// The integer `k` with `F(x) = x + k`, for a lift of the identity.
pub fn integer_translation_value(f: &LiftedMap, tol: f64) -> Result<i64> {
    match f {
        LiftedMap::Rotation(t) => {
            if t.is_integer() {
                return Ok(t.to_integer().to_i64().expect("fits"));
            }
            Err(Error::NotIdentityLift {
                spread: to_f64(&frac(t)).min(1.0 - to_f64(&frac(t))),
                tol,
            })
        }
        LiftedMap::Pl(p) => match p.as_translation() {
            Some(t) if t.is_integer() => Ok(t.to_integer().to_i64().expect("fits")),
            _ => {
                let (lo, hi) = p.displacement_range();
                Err(Error::NotIdentityLift {
                    spread: to_f64(&(hi - lo)),
                    tol,
                })
            }
        },
        _ => {
            let d: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).map(|x| f.eval(x) - x).collect();
            let k = d[0].round();
            let spread = d.iter().map(|v| (v - k).abs()).fold(0.0, f64::max);
            if spread < tol {
                Ok(k as i64)
            } else {
                Err(Error::NotIdentityLift { spread, tol })
            }
        }
    }
}

/// Largest displacement deviation `|F(x) - x - k|` over 100 samples, for reporting.
pub fn displacement_spread(f: &LiftedMap, k: i64) -> f64 {
    (0..100)
        .map(|i| i as f64 / 100.0)
        .map(|x| (f.eval(x) - x - k as f64).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::canonicalize;

    #[test]
    fn rotation_certificates() {
        let b = translation_number(&LiftedMap::rotation(rat(3, 7)), 1e-9, 1000).unwrap();
        assert_eq!(b.exact, Some(rat(3, 7)));
        let w = b.witness.unwrap();
        assert_eq!((w.period, w.winding), (7, 3));
        let c = periodic_certificate(&canonicalize(&LiftedMap::rotation(rat(2, 5))), 5).unwrap();
        assert_eq!(c, Some((rat(0, 1), 5, 2)));
        let r = rotation_number(&canonicalize(&LiftedMap::rotation(rat(5, 4))), 1e-9).unwrap();
        assert_eq!(r.exact, Some(rat(1, 4)));
    }

    #[test]
    fn mobius_fixed_point_gives_zero() {
        let f = canonicalize(&LiftedMap::mobius(Mat2::diag(2.0), 0).unwrap());
        let b = translation_number(f.lift(), 1e-9, 1000).unwrap();
        assert_eq!(b.exact, Some(rat(0, 1)));
    }

    #[test]
    fn elliptic_mobius_matches_iteration() {
        let m = Mat2::rotation(0.7) * Mat2::diag(1.3);
        let f = LiftedMap::mobius(m, 2).unwrap();
        let b = translation_number(&f, 1e-9, 1_000_000).unwrap();
        let n = 100_000;
        let mut x = 0.0;
        for _ in 0..n {
            x = f.eval(x);
        }
        assert!(b.contains(x / n as f64, 1.0 / n as f64));
        assert!(b.width() < 1e-9);
    }

    #[test]
    fn pl_enclosure_contains_oracle() {
        let f = LiftedMap::pl(vec![(rat(0, 1), rat(2, 5)), (rat(1, 2), rat(4, 5))]).unwrap();
        let b = translation_number(&f, 1e-4, 1_000_000).unwrap();
        // oracle: the interpolation formula written out independently, iterated from 0
        let oracle = |x: f64| {
            let k = x.floor();
            let r = x - k;
            let y = if r < 0.5 { 0.4 + 0.8 * r } else { 0.8 + 1.2 * (r - 0.5) };
            y + k
        };
        let n = 100_000u64;
        let mut x = 0.0;
        for _ in 0..n {
            x = oracle(x);
        }
        let est = x / n as f64;
        assert!(b.width() <= 1e-4);
        assert!(b.lo <= est + 1.0 / n as f64 && est - 1.0 / n as f64 <= b.hi);
    }

    #[test]
    fn integer_values() {
        assert_eq!(integer_translation_value(&LiftedMap::rotation(int(-2)), 1e-9).unwrap(), -2);
        assert_eq!(integer_translation_value(&LiftedMap::identity(), 1e-9).unwrap(), 0);
        assert!(integer_translation_value(&LiftedMap::rotation(rat(1, 2)), 1e-9).is_err());
    }

    #[test]
    fn tolerance_not_reached_carries_best() {
        // elliptic with irrational-looking angle but iteration forced
        let f = LiftedMap::Composite(vec![
            LiftedMap::rotation(rat(1, 3)),
            LiftedMap::mobius(Mat2::rotation(0.1), 0).unwrap(),
        ]);
        match translation_number(&f, 1e-12, 2048) {
            Err(Error::ToleranceNotReached { best, .. }) => assert!(best.width() < 1e-2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
