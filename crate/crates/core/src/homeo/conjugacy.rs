//! Conjugacies between fixed-point-free interval maps along a family.

use super::lift::LiftedMap;
use crate::error::{Error, Result};

const MAX_STEPS: usize = 1_000_000;
const CHECK_POINTS: usize = 1000;

/// One sample `g_t` of the family together with its inverse.
#[derive(Clone, Debug)]
struct Sample {
    t: f64,
    g: LiftedMap,
    g_inv: LiftedMap,
}

/// The conjugators `f_t` with `f_t g_t f_t⁻¹ = g_0` on an open interval, at sampled `t`.
///
/// `f_t` maps the fundamental domain between `anchor` and `g_t(anchor)` affinely onto the one
/// between `anchor` and `g_0(anchor)` and is extended by equivariance.
#[derive(Clone, Debug)]
pub struct ConjugatingFamily {
    interval: (f64, f64),
    anchor: f64,
    base: Sample,
    samples: Vec<Sample>,
}

/// Builds `f_t` for each `t` in `ts`. The family is given by `g(t)`, restricted to `interval`
/// (endpoints may be infinite). The anchor is the midpoint, or 0 for unbounded intervals.
pub fn conjugating_family(
    g: impl Fn(f64) -> LiftedMap,
    interval: (f64, f64),
    ts: &[f64],
) -> Result<ConjugatingFamily> {
    let (lo, hi) = interval;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::PreconditionViolated("empty interval".into()));
    }
    let anchor = if lo.is_finite() && hi.is_finite() {
        0.5 * (lo + hi)
    } else if lo.is_finite() {
        lo + 1.0
    } else if hi.is_finite() {
        hi - 1.0
    } else {
        0.0
    };
    let make = |t: f64| -> Result<Sample> {
        let gt = g(t);
        check_fixed_point_free(&gt, interval, t)?;
        Ok(Sample {
            t,
            g_inv: gt.invert(),
            g: gt,
        })
    };
    let base = make(0.0)?;
    let samples = ts.iter().map(|&t| make(t)).collect::<Result<Vec<_>>>()?;
    Ok(ConjugatingFamily {
        interval,
        anchor,
        base,
        samples,
    })
}

fn check_fixed_point_free(g: &LiftedMap, (lo, hi): (f64, f64), t: f64) -> Result<()> {
    let (a, b) = (
        if lo.is_finite() { lo } else { -10.0 },
        if hi.is_finite() { hi } else { 10.0 },
    );
    let mut sign = 0.0;
    for i in 1..CHECK_POINTS {
        let x = a + (b - a) * i as f64 / CHECK_POINTS as f64;
        let d = g.eval(x) - x;
        if d == 0.0 || (sign != 0.0 && d.signum() != sign) {
            return Err(Error::FixedPointInInterval { t });
        }
        sign = d.signum();
    }
    Ok(())
}

impl ConjugatingFamily {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    fn sample(&self, i: usize) -> &Sample {
        &self.samples[i]
    }

    /// `f_t(x)` for the `i`-th sampled time.
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        transfer(self.anchor, self.sample(i), &self.base, x)
    }

    pub fn eval_inverse(&self, i: usize, x: f64) -> f64 {
        transfer(self.anchor, &self.base, self.sample(i), x)
    }

    /// `g_t(x)` for the `i`-th sampled time.
    pub fn g(&self, i: usize, x: f64) -> f64 {
        self.sample(i).g.eval(x)
    }

    pub fn g0(&self, x: f64) -> f64 {
        self.base.g.eval(x)
    }

    /// Largest `|f_t g_t f_t⁻¹(x) - g_0(x)|` over `n` interior points.
    pub fn conjugacy_defect(&self, i: usize, n: usize) -> f64 {
        let (lo, hi) = self.interval;
        let (a, b) = (
            if lo.is_finite() { lo } else { self.anchor - 5.0 },
            if hi.is_finite() { hi } else { self.anchor + 5.0 },
        );
        (1..n)
            .map(|j| {
                let x = a + (b - a) * j as f64 / n as f64;
                let y = self.eval(i, self.g(i, self.eval_inverse(i, x)));
                (y - self.g0(x)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Equivariant extension of the affine map from the domain `[a, from.g(a))` onto `[a, to.g(a))`.
fn transfer(a: f64, from: &Sample, to: &Sample, x: f64) -> f64 {
    let w_from = from.g.eval(a) - a;
    let w_to = to.g.eval(a) - a;
    let dir = w_from.signum();
    let mut y = x;
    let mut n: i64 = 0;
    for _ in 0..MAX_STEPS {
        let u = dir * (y - a);
        if u < 0.0 {
            y = from.g.eval(y);
            n += 1;
        } else if u >= w_from.abs() {
            y = from.g_inv.eval(y);
            n -= 1;
        } else {
            break;
        }
    }
    let mut z = a + (y - a) * w_to / w_from;
    for _ in 0..n.unsigned_abs() {
        z = if n > 0 { to.g_inv.eval(z) } else { to.g.eval(z) };
    }
    z
}
