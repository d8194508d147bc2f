//! Sheaf cohomology of toric divisors through the sets `V_{D,m}`.

pub mod classify;
pub mod closed_form;
pub mod engine;
pub mod nerve;
pub mod sweep;

pub use classify::{classify_disconnected, classify_pattern, Classification};
pub use closed_form::{
    h1_closed_form_onept, multipoint_vanishing_predicate, onept_lambda, onept_vanishing_predicate,
    vanishing_predicate,
};
pub use engine::{
    search_box, total_cohomology, total_cohomology_with, CohomologyEngine, CohomologyOptions,
    CohomologyReport, Contribution, SearchBox, DEFAULT_CAP, DEFAULT_MARGIN,
};
pub use nerve::{
    nerve_of_active, pieces_intersect, reduced_ranks, NerveComplex, ReducedCohomology,
};
pub use sweep::{
    sweep_to_json, verdict_for, verify_params, verify_sweep, SweepGrid, SweepOptions, SweepSummary,
    VanishingVerdict,
};

use crate::divisor::ToricDivisor;
use crate::error::Result;
use crate::lattice_fan::{pair, Character, Fan};

/// Rays with `<m, u_rho> < -a_rho`, globally and per maximal cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSet {
    pub active: Vec<bool>,
    /// Active rays of each maximal cone, in cone order.
    pub per_cone: Vec<Vec<usize>>,
}

impl ActiveSet {
    pub fn rays(&self) -> Vec<usize> {
        (0..self.active.len()).filter(|&r| self.active[r]).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.active.iter().any(|&x| x)
    }
}

pub fn active_set(fan: &Fan, d: &ToricDivisor, m: &Character) -> Result<ActiveSet> {
    d.check_fan(fan)?;
    let active = fan
        .rays()
        .iter()
        .enumerate()
        .map(|(r, u)| Ok(pair(m, u)? < -d.coeff(r)))
        .collect::<Result<Vec<bool>>>()?;
    let per_cone = fan
        .max_cones()
        .iter()
        .map(|c| c.rays().iter().copied().filter(|&r| active[r]).collect())
        .collect();
    Ok(ActiveSet { active, per_cone })
}

/// The nerve of the cover of `V_{D,m}` by its convex pieces.
pub fn nerve(fan: &Fan, d: &ToricDivisor, m: &Character) -> Result<NerveComplex> {
    Ok(nerve_of_active(fan, &active_set(fan, d, m)?.active))
}
