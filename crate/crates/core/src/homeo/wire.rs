//! JSON form of lifts: `{"kind": "rotation" | "pl" | "mobius" | "flow" | "composite", ...}`.

use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::flow::{FlowLift, PlFlow};
use super::lift::{canonicalize, CircleHomeo, LiftedMap};
use super::mobius::{Mat2, MobiusLift};
use super::pl::PlLift;
use crate::error::{Error, Result};
use crate::numeric::parse_rational;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Wire {
    Rotation {
        angle: String,
    },
    Pl {
        breakpoints: Vec<[String; 2]>,
    },
    Mobius {
        matrix: [[f64; 2]; 2],
        branch: i64,
    },
    Flow {
        generator: Vec<[String; 2]>,
        time: f64,
        #[serde(default)]
        shift: i64,
        #[serde(default)]
        reflected: bool,
    },
    Composite {
        factors: Vec<Wire>,
    },
}

fn pl_points(p: &PlLift) -> Vec<[String; 2]> {
    p.breakpoints().map(|(x, y)| [x.to_string(), y.to_string()]).collect()
}

fn parse_points(pts: &[[String; 2]]) -> Result<PlLift> {
    let pts = pts
        .iter()
        .map(|[x, y]| Ok((parse_rational(x)?, parse_rational(y)?)))
        .collect::<Result<Vec<_>>>()?;
    PlLift::new(pts)
}

impl From<&LiftedMap> for Wire {
    fn from(f: &LiftedMap) -> Self {
        match f {
            LiftedMap::Rotation(t) => Wire::Rotation { angle: t.to_string() },
            LiftedMap::Pl(p) => Wire::Pl {
                breakpoints: pl_points(p),
            },
            LiftedMap::Mobius(m) => {
                let a = m.matrix();
                Wire::Mobius {
                    matrix: [[a.a, a.b], [a.c, a.d]],
                    branch: m.branch(),
                }
            }
            LiftedMap::Flow(fl) => Wire::Flow {
                generator: pl_points(fl.flow().generator()),
                time: fl.time(),
                shift: fl.shift_amount(),
                reflected: fl.is_reflected(),
            },
            LiftedMap::Composite(fs) => Wire::Composite {
                factors: fs.iter().map(Wire::from).collect(),
            },
        }
    }
}

impl TryFrom<Wire> for LiftedMap {
    type Error = Error;
    fn try_from(w: Wire) -> Result<Self> {
        Ok(match w {
            Wire::Rotation { angle } => LiftedMap::Rotation(parse_rational(&angle)?),
            Wire::Pl { breakpoints } => LiftedMap::from_pl(parse_points(&breakpoints)?),
            Wire::Mobius { matrix, branch } => LiftedMap::Mobius(MobiusLift::new(
                Mat2::new(matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]),
                branch,
            )?),
            Wire::Flow {
                generator,
                time,
                shift,
                reflected,
            } => {
                let flow = Arc::new(PlFlow::new(parse_points(&generator)?)?);
                LiftedMap::Flow(FlowLift::from_parts(flow, time, shift, reflected))
            }
            Wire::Composite { factors } => {
                let fs = factors
                    .into_iter()
                    .map(LiftedMap::try_from)
                    .collect::<Result<Vec<_>>>()?;
                if fs.len() < 2 || fs.iter().any(|f| matches!(f, LiftedMap::Composite(_))) {
                    return Err(Error::InvalidMap("composite needs two or more non-composite factors".into()));
                }
                LiftedMap::Composite(fs)
            }
        })
    }
}

impl Serialize for LiftedMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LiftedMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        LiftedMap::try_from(w).map_err(serde::de::Error::custom)
    }
}

impl Serialize for CircleHomeo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.lift().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircleHomeo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(canonicalize(&LiftedMap::deserialize(d)?))
    }
}
