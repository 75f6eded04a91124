//! Fixed-point tables and the cyclic-order laws for chains.

use serde::Serialize;

use super::Representation;
use crate::error::{Error, Result};
use crate::homeo::{classify, realizes_cyclic_order, CirclePoint, DynClass};
use crate::surface::{DirectedChain, Word};

/// Coincidence tolerance for fixed points in order tests.
const ORDER_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointTable {
    pub entries: Vec<(Word, DynClass)>,
}

impl FixedPointTable {
    pub fn get(&self, w: &Word) -> Option<&DynClass> {
        self.entries.iter().find(|(v, _)| v == w).map(|(_, c)| c)
    }
}

pub fn fixed_point_table(rep: &Representation, words: &[Word]) -> Result<FixedPointTable> {
    let entries = words
        .iter()
        .map(|w| Ok((w.clone(), classify(&rep.evaluate_word(w)?, rep.tol())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FixedPointTable { entries })
}

/// `(f_+, f_-)` of a word that must act hyperbolically.
fn hyperbolic_pair(rep: &Representation, w: &Word) -> Result<(CirclePoint, CirclePoint)> {
    match classify(&rep.evaluate_word(w)?, rep.tol())? {
        DynClass::Hyperbolic { attracting, repelling } => Ok((attracting, repelling)),
        _ => Err(Error::NotHyperbolic(w.to_string())),
    }
}

fn coincident(names: &[String], pts: &[CirclePoint]) -> Option<Error> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].distance(&pts[j]) <= ORDER_TOL {
                return Some(Error::CoincidentFixedPoints(names[i].clone(), names[j].clone()));
            }
        }
    }
    None
}

/// Whether `b_+` and `b_-` lie in different components of `S¹ ∖ Fix(ρ(a))`.
pub fn verify_separation(rep: &Representation, a: &Word, b: &Word) -> Result<bool> {
    let (ap, am) = hyperbolic_pair(rep, a)?;
    let (bp, bm) = hyperbolic_pair(rep, b)?;
    let names = [format!("{a}+"), format!("{a}-"), format!("{b}+"), format!("{b}-")];
    let pts = [ap.clone(), am.clone(), bp.clone(), bm.clone()];
    if let Some(e) = coincident(&names, &pts) {
        return Err(e);
    }
    let side = |p: &CirclePoint| am.in_ccw_order(p, &ap, ORDER_TOL);
    match (side(&bp), side(&bm)) {
        (Some(x), Some(y)) => Ok(x != y),
        _ => Err(Error::CoincidentFixedPoints(a.to_string(), b.to_string())),
    }
}

/// Checks the cyclic order `(a_-, b_-, a_+, c_-, b_+, c_+)` for 3-chains and
/// `(a_-, b_-, a_+, c_-, b_+, d_-, c_+, e_-, d_+, e_+)` for 5-chains, up to orientation.
pub fn verify_chain_order(rep: &Representation, chain: &DirectedChain) -> Result<bool> {
    let k = chain.len();
    let pattern: &[(usize, bool)] = match k {
        3 => &[(0, false), (1, false), (0, true), (2, false), (1, true), (2, true)],
        5 => &[
            (0, false),
            (1, false),
            (0, true),
            (2, false),
            (1, true),
            (3, false),
            (2, true),
            (4, false),
            (3, true),
            (4, true),
        ],
        _ => return Err(Error::PreconditionViolated(format!("chain order needs 3 or 5 curves, got {k}"))),
    };
    let pairs = chain
        .words()
        .iter()
        .map(|w| hyperbolic_pair(rep, w))
        .collect::<Result<Vec<_>>>()?;
    let mut names = Vec::new();
    let mut pts = Vec::new();
    for &(j, plus) in pattern {
        names.push(format!("γ{}{}", j + 1, if plus { '+' } else { '-' }));
        pts.push(if plus { pairs[j].0.clone() } else { pairs[j].1.clone() });
    }
    if let Some(e) = coincident(&names, &pts) {
        return Err(e);
    }
    realizes_cyclic_order(&pts, ORDER_TOL).ok_or_else(|| Error::Internal("coincidence after check".into()))
}
