//! Paths in representation space: bending, the Alexander trick, and invariant monitoring.

mod alexander;
mod bend;

pub use alexander::{alexander_trick, common_fixed_point};
pub use bend::{
    bend_nonseparating, bend_separating, declared_sign, handle_partner, separating_twist_consistency,
    twist_consistency, TwistCheck, COMMUTE_GRID, COMPARE_GRID,
};

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homeo::{classify, one_parameter_flow, Flow};
use crate::numeric::{fmt_sig12, Rational};
use crate::representation::{LiftChoice, Representation};
use crate::rotnum::{translation_number, RotBound, DEFAULT_MAX_ITER};
use crate::surface::{Generator, Word};

pub const DEFAULT_SAMPLES: usize = 33;

/// `n` uniform samples of `[0, 1]`, both ends included.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// The one-parameter group through `ρ(w)`.
pub fn curve_flow(rep: &Representation, w: &Word) -> Result<Flow> {
    one_parameter_flow(&rep.evaluate_word(w)?)
}

type SampleFn = dyn Fn(&Representation, f64) -> Result<Representation> + Send + Sync;

#[derive(Clone)]
pub enum PathKind {
    /// `ρ_t` conjugates `b_side` by `flow(scale · t)`.
    BendSeparating {
        curve: Word,
        b_side: Vec<Generator>,
        flow: Flow,
        scale: f64,
    },
    /// `ρ_t(partner) = flow(scale · t) ∘ ρ(partner)`.
    BendNonseparating {
        curve: Word,
        partner: Generator,
        flow: Flow,
        scale: f64,
        /// `i(curve, partner)` as found, either ±1.
        sign: i64,
    },
    AlexanderTrick { point: Rational },
    Constant,
    /// Any other family, e.g. a deliberately corrupted one in tests.
    Custom { label: String, at: Arc<SampleFn> },
}

impl fmt::Debug for PathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl PathKind {
    pub fn describe(&self) -> String {
        match self {
            PathKind::BendSeparating { curve, b_side, scale, .. } => {
                let side: Vec<String> = b_side.iter().map(|g| g.to_string()).collect();
                format!("bend_separating({curve}; B = {}; scale {scale})", side.join(" "))
            }
            PathKind::BendNonseparating {
                curve, partner, scale, ..
            } => format!("bend_nonseparating({curve}; partner {partner}; scale {scale})"),
            PathKind::AlexanderTrick { point } => format!("alexander_trick({point})"),
            PathKind::Constant => "constant".into(),
            PathKind::Custom { label, .. } => label.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DeformationPath {
    base: Representation,
    kind: PathKind,
    samples: Vec<f64>,
}

impl DeformationPath {
    pub fn new(base: Representation, kind: PathKind) -> Self {
        DeformationPath {
            base,
            kind,
            samples: uniform_grid(DEFAULT_SAMPLES),
        }
    }

    /// Bending along a separating curve with the flow through `ρ(curve)`, so that the
    /// endpoint is the twist of power `scale`.
    pub fn bend_separating(base: Representation, curve: Word, b_side: Vec<Generator>, scale: f64) -> Result<Self> {
        let flow = curve_flow(&base, &curve)?;
        Ok(Self::new(
            base,
            PathKind::BendSeparating {
                curve,
                b_side,
                flow,
                scale,
            },
        ))
    }

    pub fn bend_nonseparating(base: Representation, curve: Word, partner: Generator, scale: f64) -> Result<Self> {
        let sign = declared_sign(&curve, partner)?;
        let flow = curve_flow(&base, &curve)?;
        Ok(Self::new(
            base,
            PathKind::BendNonseparating {
                curve,
                partner,
                flow,
                scale,
                sign,
            },
        ))
    }

    pub fn alexander_trick(base: Representation) -> Result<Self> {
        let point = common_fixed_point(&base)?;
        Ok(Self::new(base, PathKind::AlexanderTrick { point }))
    }

    pub fn with_samples(mut self, samples: Vec<f64>) -> Self {
        self.samples = samples;
        self
    }

    pub fn base(&self) -> &Representation {
        &self.base
    }

    pub fn kind(&self) -> &PathKind {
        &self.kind
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// The representation at time `t`, built and verified on demand.
    pub fn at(&self, t: f64) -> Result<Representation> {
        let rep = &self.base;
        match &self.kind {
            PathKind::BendSeparating {
                curve,
                b_side,
                flow,
                scale,
            } => bend_separating(rep, curve, b_side, flow, scale * t),
            PathKind::BendNonseparating {
                curve,
                partner,
                flow,
                scale,
                ..
            } => bend_nonseparating(rep, curve, *partner, flow, scale * t),
            PathKind::AlexanderTrick { point } => alexander_trick(rep, point, t),
            PathKind::Constant => Ok(rep.clone()),
            PathKind::Custom { at, .. } => at(rep, t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRecord {
    pub word: Word,
    pub rot: RotBound,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRecord {
    pub t: f64,
    pub eu: i64,
    pub probes: Vec<ProbeRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathReport {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub declared_sign: Option<i64>,
    pub probes: Vec<Word>,
    pub records: Vec<SampleRecord>,
}

impl PathReport {
    /// `t, eu`, then `rot_lo, rot_hi, class` per probe; floats with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,eu");
        for w in &self.probes {
            out.push_str(&format!(",rot_lo[{w}],rot_hi[{w}],class[{w}]"));
        }
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!("{},{}", fmt_sig12(r.t), r.eu));
            for p in &r.probes {
                out.push_str(&format!(",{},{},{}", fmt_sig12(p.rot.lo), fmt_sig12(p.rot.hi), p.class));
            }
            out.push('\n');
        }
        out
    }
}

fn record(rep: &Representation, t: f64, probes: &[Word]) -> Result<SampleRecord> {
    let probes = probes
        .iter()
        .map(|w| {
            let lift = rep.evaluate_word_lift(w, &LiftChoice::new())?;
            let rot = translation_number(&lift, rep.tol(), DEFAULT_MAX_ITER)?;
            let class = classify(&rep.evaluate_word(w)?, rep.tol())?.tag().to_string();
            Ok(ProbeRecord {
                word: w.clone(),
                rot,
                class,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleRecord {
        t,
        eu: rep.euler_number()?,
        probes,
    })
}

/// Samples the path in parallel and records eu and the probe invariants; an Euler number
/// that changes between consecutive samples is reported as a discontinuity.
pub fn monitor_path(path: &DeformationPath, probes: &[Word], samples: &[f64]) -> Result<PathReport> {
    let records = samples
        .par_iter()
        .map(|&t| record(&path.at(t)?, t, probes))
        .collect::<Result<Vec<_>>>()?;
    for w in records.windows(2) {
        if w[0].eu != w[1].eu {
            return Err(Error::DiscontinuityDetected {
                t_before: w[0].t,
                t_after: w[1].t,
                before: w[0].eu,
                after: w[1].eu,
            });
        }
    }
    let declared_sign = match path.kind() {
        PathKind::BendNonseparating { sign, .. } => Some(*sign),
        _ => None,
    };
    Ok(PathReport {
        kind: path.kind().describe(),
        declared_sign,
        probes: probes.to_vec(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::{fuchsian_closed, verify_chain_order};
    use crate::surface::builtin_chain_genus2;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn probes() -> Vec<Word> {
        vec![w("a1"), w("b1"), w("A' a' A a")]
    }

    #[test]
    fn start_point_is_base() {
        let rep = fuchsian_closed(2).unwrap();
        let p = DeformationPath::bend_nonseparating(rep.clone(), w("a1"), Generator::B(1), 1.0).unwrap();
        assert_eq!(p.at(0.0).unwrap(), rep);
        let q = DeformationPath::bend_separating(rep.clone(), w("A' a' A a"), vec![Generator::A(2), Generator::B(2)], 1.0).unwrap();
        assert_eq!(q.at(0.0).unwrap(), rep);
    }

    #[test]
    fn constant_path_records_agree() {
        let rep = fuchsian_closed(2).unwrap();
        let p = DeformationPath::new(rep, PathKind::Constant).with_samples(uniform_grid(5));
        let r = monitor_path(&p, &probes(), p.samples()).unwrap();
        assert!(r.records.windows(2).all(|x| x[0].eu == x[1].eu && x[0].probes == x[1].probes));
    }

    #[test]
    fn separating_bend_keeps_euler_number() {
        let rep = fuchsian_closed(2).unwrap();
        let c = w("A' a' A a");
        let p = DeformationPath::bend_separating(rep, c.clone(), vec![Generator::A(2), Generator::B(2)], 1.0).unwrap();
        let r = monitor_path(&p, &probes(), &[0.0, 0.25, 0.5, 1.0]).unwrap();
        for s in &r.records {
            assert_eq!(s.eu, -2);
            assert_eq!(s.probes[2].rot.exact_integer(), Some(-1));
        }
        // the bending curve itself is untouched
        let base = p.base().evaluate_word(&c).unwrap();
        for t in uniform_grid(9) {
            let d = p.at(t).unwrap().evaluate_word(&c).unwrap().sup_distance(&base, COMPARE_GRID);
            assert!(d < 1e-9);
        }
    }

    #[test]
    fn nonseparating_bend_report() {
        let rep = fuchsian_closed(2).unwrap();
        let p = DeformationPath::bend_nonseparating(rep, w("a1"), Generator::B(1), -2.0).unwrap();
        let r = monitor_path(&p, &probes(), p.samples()).unwrap();
        assert_eq!(r.records.len(), DEFAULT_SAMPLES);
        assert!(r.records.iter().all(|s| s.eu == -2));
        assert!(r.declared_sign.unwrap().abs() == 1);
        let first = &r.records[0].probes[0];
        assert!(r.records.iter().all(|s| s.probes[0].rot == first.rot));
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), DEFAULT_SAMPLES + 1);
        assert!(csv.starts_with("t,eu,rot_lo[a1],rot_hi[a1],class[a1],"));
        assert!(csv.lines().nth(1).unwrap().starts_with("0,-2,"));
    }

    #[test]
    fn small_bends_keep_chain_order() {
        let rep = fuchsian_closed(2).unwrap();
        let chain = builtin_chain_genus2();
        let p = DeformationPath::bend_nonseparating(rep, w("b1'"), Generator::A(1), 1.0).unwrap();
        for k in 0..=10 {
            let t = k as f64 / 100.0;
            assert!(verify_chain_order(&p.at(t).unwrap(), &chain).unwrap(), "t = {t}");
        }
    }

    #[test]
    fn corrupted_sample_is_a_discontinuity() {
        let rep = fuchsian_closed(2).unwrap();
        let at = |base: &Representation, t: f64| {
            if (t - 0.5).abs() < 1e-12 {
                Representation::trivial(2)
            } else {
                Ok(base.clone())
            }
        };
        let p = DeformationPath::new(
            rep,
            PathKind::Custom {
                label: "corrupted".into(),
                at: Arc::new(at),
            },
        )
        .with_samples(uniform_grid(5));
        assert!(matches!(
            monitor_path(&p, &probes(), p.samples()),
            Err(Error::DiscontinuityDetected { before: -2, after: 0, .. })
        ));
    }

    #[test]
    fn alexander_path_is_constant_zero() {
        let rep = Representation::trivial(2).unwrap();
        let p = DeformationPath::alexander_trick(rep).unwrap().with_samples(uniform_grid(3));
        let r = monitor_path(&p, &[w("a1")], p.samples()).unwrap();
        assert!(r.records.iter().all(|s| s.eu == 0));
    }
}
