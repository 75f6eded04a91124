//! Lifts of the projective action of SL(2,R) on the circle of directions.
//!
//! The angle θ ∈ [0,1) stands for the line through `(cos πθ, sin πθ)`.

use std::f64::consts::PI;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn diag(l: f64) -> Self {
        Mat2::new(l, 0.0, 0.0, 1.0 / l)
    }

    /// Linear rotation by `angle` radians, acting on circle angles as `θ ↦ θ + angle/π`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    /// Linear rotation acting on circle angles as translation by `turns`.
    pub fn rotation_turns(turns: f64) -> Self {
        Mat2::rotation(PI * turns)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Self {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    /// Conjugate by `diag(1,-1)`, realizing `θ ↦ -θ`.
    pub fn reflect(&self) -> Self {
        Mat2::new(self.a, -self.b, -self.c, self.d)
    }

    pub fn norm_sup(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn distance(&self, other: &Mat2) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs())
    }

    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn powi(&self, n: i64) -> Mat2 {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Mat2::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            base = base * base;
        }
        acc
    }

    /// Circle angle of the direction `v`.
    pub fn angle_of(v: (f64, f64)) -> f64 {
        let t = v.1.atan2(v.0) / PI;
        let t = t - t.floor();
        if t >= 1.0 {
            0.0
        } else {
            t
        }
    }

    /// Eigen-directions as circle angles, `(larger |λ|, smaller |λ|)`, for `|tr| > 2`.
    pub fn eigen_angles(&self) -> Option<(f64, f64)> {
        let tr = self.trace();
        let disc = tr * tr - 4.0;
        if disc <= 0.0 {
            return None;
        }
        let s = disc.sqrt();
        let big = if tr >= 0.0 { (tr + s) / 2.0 } else { (tr - s) / 2.0 };
        let small = 1.0 / big;
        Some((Mat2::angle_of(self.eigenvector(big)), Mat2::angle_of(self.eigenvector(small))))
    }

    /// An eigenvector for the eigenvalue `l`, picked from the better-conditioned row.
    pub fn eigenvector(&self, l: f64) -> (f64, f64) {
        let v1 = (self.b, l - self.a);
        let v2 = (l - self.d, self.c);
        let n1 = v1.0.hypot(v1.1);
        let n2 = v2.0.hypot(v2.1);
        if n1 == 0.0 && n2 == 0.0 {
            (1.0, 0.0)
        } else if n1 >= n2 {
            v1
        } else {
            v2
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// The lift of `m` pinned so that its value at 0 is `base(m) + branch`, where `base(m)` is the
/// reduction of the continuous lift into [0,1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusLift {
    matrix: Mat2,
    branch: i64,
    alpha: f64,
    offset: f64,
}

impl MobiusLift {
    pub fn new(matrix: Mat2, branch: i64) -> Result<Self> {
        if !(matrix.det() - 1.0).abs().le(&1e-12_f64.max(1e-12 * matrix.norm_sup().powi(2))) {
            return Err(Error::InvalidMap(format!("determinant {} is not 1", matrix.det())));
        }
        if !(matrix.a.is_finite() && matrix.b.is_finite() && matrix.c.is_finite() && matrix.d.is_finite()) {
            return Err(Error::InvalidMap("non-finite matrix entry".into()));
        }
        Ok(Self::from_parts(matrix, branch))
    }

    fn from_parts(matrix: Mat2, branch: i64) -> Self {
        let alpha = (matrix.c - matrix.b).atan2(matrix.a + matrix.d);
        let raw0 = raw_lift(&matrix, alpha, 0.0);
        let offset = branch as f64 - raw0.floor();
        MobiusLift {
            matrix,
            branch,
            alpha,
            offset,
        }
    }

    pub fn identity() -> Self {
        Self::from_parts(Mat2::IDENTITY, 0)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn branch(&self) -> i64 {
        self.branch
    }

    pub fn eval(&self, t: f64) -> f64 {
        raw_lift(&self.matrix, self.alpha, t) + self.offset
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MobiusLift) -> MobiusLift {
        let m = self.matrix * inner.matrix;
        let target = self.eval(inner.eval(0.0));
        pinned(m, target)
    }

    pub fn inverse(&self) -> MobiusLift {
        let inv = Self::from_parts(self.matrix.inverse(), 0);
        let m = (-inv.eval(self.eval(0.0))).round() as i64;
        Self::from_parts(self.matrix.inverse(), m)
    }

    pub fn power(&self, n: i64) -> MobiusLift {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = MobiusLift::identity();
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

    pub fn shift(&self, k: i64) -> MobiusLift {
        Self::from_parts(self.matrix, self.branch + k)
    }

    pub fn reflect(&self) -> MobiusLift {
        pinned(self.matrix.reflect(), -self.eval(0.0))
    }

    /// The lift of `m` whose value at 0 is (numerically) `value_at_zero`.
    pub fn through(m: Mat2, value_at_zero: f64) -> MobiusLift {
        pinned(m, value_at_zero)
    }
}

fn pinned(m: Mat2, value_at_zero: f64) -> MobiusLift {
    let base = MobiusLift::from_parts(m, 0).eval(0.0);
    let branch = (value_at_zero - base).round() as i64;
    MobiusLift::from_parts(m, branch)
}

/// Continuous lift `θ ↦ θ + α/π + ∠(R(α)v, Av)/π` where `A = R(α)P` is the polar decomposition;
/// the second angle lies in (-π/2, π/2) because `P` is positive definite.
fn raw_lift(m: &Mat2, alpha: f64, t: f64) -> f64 {
    let phi = PI * t;
    let (s, c) = phi.sin_cos();
    let w = m.apply((c, s));
    let (us, uc) = (alpha + phi).sin_cos();
    let cross = uc * w.1 - us * w.0;
    let dot = uc * w.0 + us * w.1;
    t + (alpha + cross.atan2(dot)) / PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_lift() {
        let id = MobiusLift::new(Mat2::IDENTITY, 0).unwrap();
        assert!((id.eval(0.77) - 0.77).abs() < 1e-15);
    }

    #[test]
    fn rotation_lifts_translate() {
        let r = MobiusLift::new(Mat2::rotation_turns(0.3), 0).unwrap();
        for i in 0..10 {
            let x = i as f64 / 7.0 - 0.4;
            assert!((r.eval(x) - x - 0.3).abs() < 1e-14);
        }
    }

    #[test]
    fn eval_matches_projective_action() {
        let m = Mat2::new(2.0, 1.0, 3.0, 2.0);
        let f = MobiusLift::new(m, 0).unwrap();
        for i in 0..50 {
            let x = i as f64 / 13.0 - 1.0;
            let y = f.eval(x);
            let w = m.apply(((PI * x).cos(), (PI * x).sin()));
            let expect = Mat2::angle_of(w);
            let got = y - y.floor();
            let diff = (expect - got).abs();
            assert!(diff.min(1.0 - diff) < 1e-13);
            assert!((f.eval(x + 1.0) - y - 1.0).abs() < 1e-13);
            assert!(f.eval(x + 0.01) > y);
        }
    }

    #[test]
    fn composition_tracks_branches() {
        let f = MobiusLift::new(Mat2::new(2.0, 1.0, 3.0, 2.0), 1).unwrap();
        let g = MobiusLift::new(Mat2::rotation(1.0) * Mat2::diag(3.0), -2).unwrap();
        let fg = f.compose(&g);
        for i in 0..20 {
            let x = i as f64 / 9.0;
            assert!((fg.eval(x) - f.eval(g.eval(x))).abs() < 1e-12);
        }
        let finv = f.inverse();
        for i in 0..20 {
            let x = i as f64 / 9.0 - 1.0;
            assert!((finv.eval(f.eval(x)) - x).abs() < 1e-12);
        }
        let p = g.power(3);
        assert!((p.eval(0.2) - g.eval(g.eval(g.eval(0.2)))).abs() < 1e-12);
        let q = g.power(-2);
        assert!((q.eval(g.eval(g.eval(0.2))) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn diag_fixes_axes() {
        let f = MobiusLift::new(Mat2::diag(2.0), 0).unwrap();
        assert!(f.eval(0.0).abs() < 1e-15);
        assert!((f.eval(0.5) - 0.5).abs() < 1e-15);
        assert!(f.eval(0.1) < 0.1);
        assert_eq!(Mat2::diag(2.0).eigen_angles(), Some((0.0, 0.5)));
    }

    #[test]
    fn reflection_negates() {
        let f = MobiusLift::new(Mat2::new(2.0, 1.0, 3.0, 2.0), 1).unwrap();
        let r = f.reflect();
        for i in 0..10 {
            let x = i as f64 / 7.0;
            assert!((r.eval(x) + f.eval(-x)).abs() < 1e-12);
        }
    }
}
