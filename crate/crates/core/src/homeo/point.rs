use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numeric::{frac, to_f64, Rational, Real};

/// A point of R/Z. Only cyclic-order queries are offered; there is no `Ord`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint(Real);

impl CirclePoint {
    pub fn exact(angle: Rational) -> Self {
        CirclePoint(Real::Exact(frac(&angle)))
    }

    pub fn approx(angle: f64, err: f64) -> Self {
        let mut a = angle - angle.floor();
        if a >= 1.0 {
            a = 0.0;
        }
        CirclePoint(Real::approx(a, err))
    }

    pub fn angle(&self) -> f64 {
        self.0.value()
    }

    pub fn err(&self) -> f64 {
        self.0.err()
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        self.0.exact()
    }

    pub fn real(&self) -> &Real {
        &self.0
    }

    /// Counterclockwise distance from `self` to `other`, in [0,1).
    pub fn ccw_to(&self, other: &CirclePoint) -> f64 {
        if let (Some(a), Some(b)) = (self.as_exact(), other.as_exact()) {
            return to_f64(&frac(&(b - a)));
        }
        ccw(self.angle(), other.angle())
    }

    /// Circular distance, in [0, 1/2].
    pub fn distance(&self, other: &CirclePoint) -> f64 {
        let d = self.ccw_to(other);
        d.min(1.0 - d)
    }

    /// True when `self`, `b`, `c` are distinct and appear in this counterclockwise order.
    /// Returns `None` when two of them are within `tol`.
    pub fn in_ccw_order(&self, b: &CirclePoint, c: &CirclePoint, tol: f64) -> Option<bool> {
        let ab = self.ccw_to(b);
        let ac = self.ccw_to(c);
        let pts = [self.distance(b), self.distance(c), b.distance(c)];
        if pts.iter().any(|&d| d <= tol) {
            return None;
        }
        Some(ab < ac)
    }
}

pub fn ccw(from: f64, to: f64) -> f64 {
    let d = to - from;
    let f = d - d.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Checks that `points` (each accompanying a distinct label) appear in the given cyclic
/// order, either counterclockwise or clockwise. `None` signals a coincidence within `tol`.
pub fn realizes_cyclic_order(points: &[CirclePoint], tol: f64) -> Option<bool> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            if points[i].distance(&points[j]) <= tol {
                return None;
            }
        }
    }
    let start = &points[0];
    let offsets: Vec<f64> = points.iter().map(|p| start.ccw_to(p)).collect();
    let increasing = offsets.windows(2).all(|w| w[0] < w[1]);
    let decreasing = offsets[1..].windows(2).all(|w| w[0] > w[1]);
    Some(increasing || decreasing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn normalizes_into_unit_interval() {
        assert_eq!(CirclePoint::exact(rat(-1, 4)).as_exact(), Some(&rat(3, 4)));
        assert!((CirclePoint::approx(-0.25, 0.0).angle() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn cyclic_order_is_rotation_invariant() {
        let p = |x: f64| CirclePoint::approx(x, 0.0);
        let pts: Vec<_> = [0.9, 0.1, 0.3, 0.6].iter().map(|&x| p(x)).collect();
        assert_eq!(realizes_cyclic_order(&pts, 1e-9), Some(true));
        let rev: Vec<_> = [0.6, 0.3, 0.1, 0.9].iter().map(|&x| p(x)).collect();
        assert_eq!(realizes_cyclic_order(&rev, 1e-9), Some(true));
        let bad: Vec<_> = [0.1, 0.6, 0.3, 0.9].iter().map(|&x| p(x)).collect();
        assert_eq!(realizes_cyclic_order(&bad, 1e-9), Some(false));
        let dup: Vec<_> = [0.1, 0.1 + 1e-12, 0.5].iter().map(|&x| p(x)).collect();
        assert_eq!(realizes_cyclic_order(&dup, 1e-9), None);
    }
}
