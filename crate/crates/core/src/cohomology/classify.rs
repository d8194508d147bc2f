//! Shapes of disconnected `V_{D,m}` on blow-up fans.
//!
//! On the blow-up of P^n (n >= 3) a disconnected `V_{D,m}` is either the
//! pair `{e_i, u_i}` or a set of exceptional rays `u_i`. Anything else is
//! reported as [`Classification::Other`].

use serde_json::{json, Value};

use super::nerve::nerve_of_active;
use super::{active_set, ActiveSet};
use crate::divisor::ToricDivisor;
use crate::error::Result;
use crate::lattice_fan::{BlowupLayout, Character, Fan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    ConnectedOrEmpty,
    /// `V = {e_i, u_i}`.
    Pair(usize),
    /// `V` is a subset of `{u_0, ..., u_q}`; holds the point indices `i`.
    SubsetOfU(Vec<usize>),
    /// Active ray indices of an unexpected disconnected shape.
    Other(Vec<usize>),
}

impl Classification {
    pub fn is_other(&self) -> bool {
        matches!(self, Classification::Other(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Classification::ConnectedOrEmpty => json!({ "kind": "connected_or_empty" }),
            Classification::Pair(i) => json!({ "kind": "pair", "index": i }),
            Classification::SubsetOfU(v) => json!({ "kind": "subset_of_u", "indices": v }),
            Classification::Other(v) => json!({ "kind": "other", "rays": v }),
        }
    }
}

/// Matches a disconnected active pattern against the allowed shapes.
pub fn classify_pattern(
    layout: BlowupLayout,
    active: &[bool],
    disconnected: bool,
) -> Classification {
    if !disconnected {
        return Classification::ConnectedOrEmpty;
    }
    let rays: Vec<usize> = (0..active.len()).filter(|&r| active[r]).collect();
    if let [x, y] = rays[..] {
        for i in 0..layout.points {
            if x == layout.u(i) && y == layout.e(i) {
                return Classification::Pair(i);
            }
        }
    }
    if rays.iter().all(|&r| r < layout.points) {
        return Classification::SubsetOfU(rays);
    }
    Classification::Other(rays)
}

/// Classifies `V_{D,m}` on a fan produced by `make_blowup_fan`.
pub fn classify_disconnected(fan: &Fan, d: &ToricDivisor, m: &Character) -> Result<Classification> {
    let layout = BlowupLayout::detect(fan)?;
    let ActiveSet { active, .. } = active_set(fan, d, m)?;
    let nerve = nerve_of_active(fan, &active);
    Ok(classify_pattern(layout, &active, nerve.components() > 1))
}
