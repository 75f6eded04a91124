//! Circle homeomorphisms through their lifts to the line.

pub mod blowup;
pub mod classify;
pub mod conjugacy;
pub mod contraction;
pub mod flow;
pub mod lift;
pub mod mobius;
pub mod pl;
pub mod point;
mod wire;

pub use blowup::{denjoy_blowup, Blowup, SemiConjugacyMap};
pub use classify::{classify, classify_lift, DynClass, FixedPiece, Stability};
pub use conjugacy::{conjugating_family, ConjugatingFamily};
pub use contraction::{
    attracting_point_of_product, find_contraction_power, fixed_point_alternative, CircleArc, ContractionArcs,
    ContractionCertificate, Direction, FixedPointWitness,
};
pub use flow::{one_parameter_flow, Flow, FlowLift, PlFlow};
pub use lift::{canonicalize, check_lift, CircleHomeo, LiftedMap};
pub use mobius::{Mat2, MobiusLift};
pub use pl::{FixedComponent, PlLift};
pub use point::{realizes_cyclic_order, CirclePoint};
