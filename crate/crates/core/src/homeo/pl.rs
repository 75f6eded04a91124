//! Periodic piecewise-linear lifts with exact rational breakpoints.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{floor_i64, int, to_f64, Rational};

/// A lift determined by breakpoints `(x_i, y_i)` on one period: `0 <= x_0 < ... < x_k-1 < 1`,
/// `y_0 < ... < y_k-1 < y_0 + 1`, extended by `F(x + 1) = F(x) + 1`.
///
/// The stored list is canonical: collinear breakpoints are dropped and a translation is
/// stored as the single point `(0, tau)`, so structural equality is equality of maps.
#[derive(Clone, Debug)]
pub struct PlLift {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
    fx: Vec<f64>,
    fy: Vec<f64>,
}

impl PartialEq for PlLift {
    fn eq(&self, other: &Self) -> bool {
        self.xs == other.xs && self.ys == other.ys
    }
}

impl Eq for PlLift {}

/// A component of the solution set of `F(x) = x + k` inside one fundamental domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedComponent {
    Point(Rational),
    /// Closed interval `[lo, hi]`. `lo == hi` is not used; the whole line is `Interval(x, x + 1)`.
    Interval(Rational, Rational),
}

impl FixedComponent {
    pub fn start(&self) -> &Rational {
        match self {
            FixedComponent::Point(p) => p,
            FixedComponent::Interval(lo, _) => lo,
        }
    }

    pub fn end(&self) -> &Rational {
        match self {
            FixedComponent::Point(p) => p,
            FixedComponent::Interval(_, hi) => hi,
        }
    }
}

impl PlLift {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMap("PL lift needs at least one breakpoint".into()));
        }
        let mut pts: Vec<(Rational, Rational)> = points
            .into_iter()
            .map(|(x, y)| {
                let n = x.floor();
                (&x - &n, y - n)
            })
            .collect();
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        for w in pts.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidMap(format!("repeated breakpoint x = {}", w[0].0)));
            }
            if w[0].1 >= w[1].1 {
                return Err(Error::InvalidMap(format!(
                    "breakpoint values not increasing at x = {}",
                    w[1].0
                )));
            }
        }
        let (first, last) = (&pts[0], &pts[pts.len() - 1]);
        if pts.len() > 1 && last.1 >= &first.1 + int(1) {
            return Err(Error::InvalidMap("breakpoint values span a full period or more".into()));
        }
        Ok(Self::from_sorted(pts))
    }

    fn from_sorted(pts: Vec<(Rational, Rational)>) -> Self {
        let k = pts.len();
        let point = |i: isize| -> (Rational, Rational) {
            let n = i.div_euclid(k as isize);
            let (x, y) = &pts[i.rem_euclid(k as isize) as usize];
            let s = int(n as i64);
            (x + &s, y + &s)
        };
        let slope = |a: &(Rational, Rational), b: &(Rational, Rational)| (&b.1 - &a.1) / (&b.0 - &a.0);
        let mut kept = Vec::new();
        if k > 1 {
            for i in 0..k as isize {
                let l = slope(&point(i - 1), &point(i));
                let r = slope(&point(i), &point(i + 1));
                if l != r {
                    kept.push(pts[i as usize].clone());
                }
            }
        }
        if kept.is_empty() {
            let tau = &pts[0].1 - &pts[0].0;
            kept.push((Rational::zero(), tau));
        }
        let xs: Vec<Rational> = kept.iter().map(|p| p.0.clone()).collect();
        let ys: Vec<Rational> = kept.into_iter().map(|p| p.1).collect();
        let fx = xs.iter().map(to_f64).collect();
        let fy = ys.iter().map(to_f64).collect();
        PlLift { xs, ys, fx, fy }
    }

    pub fn translation(tau: Rational) -> Self {
        Self::from_sorted(vec![(Rational::zero(), tau)])
    }

    pub fn identity() -> Self {
        Self::translation(Rational::zero())
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn breakpoints_f64(&self) -> &[f64] {
        &self.fx
    }

    /// `Some(tau)` when the map is the translation `x + tau`.
    pub fn as_translation(&self) -> Option<Rational> {
        (self.xs.len() == 1).then(|| &self.ys[0] - &self.xs[0])
    }

    fn point(&self, i: usize) -> (Rational, Rational) {
        let k = self.xs.len();
        if i < k {
            (self.xs[i].clone(), self.ys[i].clone())
        } else {
            let one = Rational::one();
            (&self.xs[i - k] + &one, &self.ys[i - k] + one)
        }
    }

    /// Index of the piece `[x_i, x_i+1)` holding `r` in [0,1); `None` means `r < x_0`.
    fn piece_index(&self, r: &Rational) -> Option<usize> {
        let idx = self.xs.partition_point(|x| x <= r);
        idx.checked_sub(1)
    }

    fn piece_index_f64(&self, r: f64) -> Option<usize> {
        let idx = self.fx.partition_point(|&x| x <= r);
        idx.checked_sub(1)
    }

    pub fn eval_exact(&self, x: &Rational) -> Rational {
        let n = x.floor();
        let r = x - &n;
        let ((x0, y0), (x1, y1)) = match self.piece_index(&r) {
            Some(i) => (self.point(i), self.point(i + 1)),
            None => {
                let k = self.xs.len();
                let (xl, yl) = self.point(k - 1);
                let one = Rational::one();
                ((xl - &one, yl - one), self.point(0))
            }
        };
        y0.clone() + (&r - &x0) * (y1 - y0) / (x1 - x0) + n
    }

    /// `F⁻¹(y)`, without building the inverse lift.
    pub fn preimage_exact(&self, y: &Rational) -> Rational {
        let n = (y - &self.ys[0]).floor();
        let r = y - &n;
        let i = self.ys.partition_point(|v| v <= &r) - 1;
        let ((x0, y0), (x1, y1)) = (self.point(i), self.point(i + 1));
        x0.clone() + (&r - &y0) * (x1 - x0) / (y1 - y0) + n
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = x.floor();
        let r = x - n;
        let k = self.fx.len();
        let (x0, y0, x1, y1) = match self.piece_index_f64(r) {
            Some(i) if i + 1 < k => (self.fx[i], self.fy[i], self.fx[i + 1], self.fy[i + 1]),
            Some(i) => (self.fx[i], self.fy[i], self.fx[0] + 1.0, self.fy[0] + 1.0),
            None => (self.fx[k - 1] - 1.0, self.fy[k - 1] - 1.0, self.fx[0], self.fy[0]),
        };
        y0 + (r - x0) * (y1 - y0) / (x1 - x0) + n
    }

    /// Slopes of the pieces `[x_i, x_i+1]`, i = 0..k.
    pub fn slopes(&self) -> Vec<Rational> {
        (0..self.xs.len())
            .map(|i| {
                let (a, b) = (self.point(i), self.point(i + 1));
                (b.1 - a.1) / (b.0 - a.0)
            })
            .collect()
    }

    pub fn inverse(&self) -> PlLift {
        let pts = self.breakpoints().map(|(x, y)| (y.clone(), x.clone())).collect();
        PlLift::new(pts).expect("inverse of a valid PL lift is valid")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PlLift) -> PlLift {
        let mut xs: Vec<Rational> = inner.xs.clone();
        for xf in &self.xs {
            let t = inner.preimage_exact(xf);
            xs.push(&t - t.floor());
        }
        xs.sort();
        xs.dedup();
        let pts = xs
            .into_iter()
            .map(|x| {
                let y = self.eval_exact(&inner.eval_exact(&x));
                (x, y)
            })
            .collect();
        PlLift::new(pts).expect("composition of valid PL lifts is valid")
    }

    pub fn power(&self, n: i64) -> PlLift {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = PlLift::identity();
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

    pub fn shift(&self, k: i64) -> PlLift {
        let s = int(k);
        PlLift {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y + &s).collect(),
            fx: self.fx.clone(),
            fy: self.fy.iter().map(|y| y + k as f64).collect(),
        }
    }

    /// The conjugate `x ↦ -F(-x)`.
    pub fn reflect(&self) -> PlLift {
        let pts = self.breakpoints().map(|(x, y)| (-x, -y)).collect();
        PlLift::new(pts).expect("reflection of a valid PL lift is valid")
    }

    /// Displacements `F(x_i) - x_i` at the breakpoints.
    pub fn displacements(&self) -> Vec<Rational> {
        self.breakpoints().map(|(x, y)| y - x).collect()
    }

    /// The exact solution set of `F(x) = x + k` in the fundamental domain `[x_0, x_0 + 1)`,
    /// in increasing order, with adjacent pieces merged.
    pub fn solve_displacement(&self, k: &Rational) -> Vec<FixedComponent> {
        let n = self.xs.len();
        let d: Vec<Rational> = (0..=n)
            .map(|i| {
                let (x, y) = self.point(i);
                y - x - k
            })
            .collect();
        if d.iter().all(Zero::is_zero) {
            let x0 = self.xs[0].clone();
            return vec![FixedComponent::Interval(x0.clone(), x0 + int(1))];
        }
        let mut out: Vec<FixedComponent> = Vec::new();
        for i in 0..n {
            let (xa, _) = self.point(i);
            let (xb, _) = self.point(i + 1);
            let (da, db) = (&d[i], &d[i + 1]);
            if da.is_zero() && db.is_zero() {
                push_component(&mut out, FixedComponent::Interval(xa, xb));
            } else if da.is_zero() {
                push_component(&mut out, FixedComponent::Point(xa));
            } else if db.is_zero() {
                if i + 1 < n {
                    push_component(&mut out, FixedComponent::Point(xb));
                }
            } else if da.is_positive() != db.is_positive() {
                let root = &xa + da * (&xb - &xa) / (da - db);
                push_component(&mut out, FixedComponent::Point(root));
            }
        }
        // a component ending at x_0 + 1 wraps onto the one starting at x_0
        let x0 = &self.xs[0];
        let x1 = x0 + int(1);
        if out.len() > 1 {
            if let (Some(FixedComponent::Interval(_, hi)), Some(first)) = (out.last(), out.first()) {
                if *hi == x1 {
                    let starts_at_x0 = match first {
                        FixedComponent::Point(p) => p == x0,
                        FixedComponent::Interval(lo, _) => lo == x0,
                    };
                    if starts_at_x0 {
                        let first = out.remove(0);
                        let hi_new = match first {
                            FixedComponent::Point(p) => p + int(1),
                            FixedComponent::Interval(_, h) => h + int(1),
                        };
                        if let Some(FixedComponent::Interval(_, hi)) = out.last_mut() {
                            *hi = hi_new;
                        }
                    }
                }
            }
        }
        out
    }

    /// One-sided slopes `(left, right)` at `x`.
    pub fn one_sided_slopes(&self, x: &Rational) -> (Rational, Rational) {
        let slopes = self.slopes();
        let k = slopes.len();
        let r = x - x.floor();
        let right = match self.piece_index(&r) {
            Some(i) => slopes[i].clone(),
            None => slopes[k - 1].clone(),
        };
        let left = match self.xs.binary_search(&r) {
            Ok(i) => slopes[(i + k - 1) % k].clone(),
            Err(_) => right.clone(),
        };
        (left, right)
    }

    /// Minimum and maximum of `F(x) - x`, attained at breakpoints.
    pub fn displacement_range(&self) -> (Rational, Rational) {
        let d = self.displacements();
        let lo = d.iter().min().cloned().expect("nonempty");
        let hi = d.iter().max().cloned().expect("nonempty");
        (lo, hi)
    }

    /// Integer part of `F(0)`.
    pub fn floor_at_zero(&self) -> i64 {
        floor_i64(&self.eval_exact(&Rational::zero()))
    }
}

fn push_component(out: &mut Vec<FixedComponent>, c: FixedComponent) {
    use FixedComponent::*;
    let Some(last) = out.last_mut() else {
        out.push(c);
        return;
    };
    if last.end() != c.start() {
        out.push(c);
        return;
    }
    match (&*last, c) {
        (_, Point(_)) => {}
        (Point(p), Interval(_, hi)) => *last = Interval(p.clone(), hi),
        (Interval(lo, _), Interval(_, hi)) => *last = Interval(lo.clone(), hi),
    }
}
