//! Predicate-versus-enumeration sweeps over blow-up parameters.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::classify::classify_pattern;
use super::closed_form::vanishing_predicate;
use super::engine::{search_box, CohomologyEngine, DEFAULT_CAP, DEFAULT_MARGIN};
use crate::divisor::{params_divisor, BlowupParams};
use crate::error::{Error, Result};
use crate::json::ints_to_json;
use crate::lattice_fan::{make_blowup_fan, BlowupLayout, Character};

/// All `(a_0..a_q, b)` with every `a_i` in `a_range` and `b` in `b_range`
/// (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepGrid {
    pub n: usize,
    pub points: usize,
    pub a_range: (i64, i64),
    pub b_range: (i64, i64),
}

impl SweepGrid {
    /// Tuples in lexicographic order of `(a_0, ..., a_q, b)`.
    pub fn tuples(&self) -> Result<Vec<BlowupParams>> {
        BlowupLayout::new(self.n, self.points)?;
        let (alo, ahi) = self.a_range;
        let (blo, bhi) = self.b_range;
        if alo > ahi || blo > bhi {
            return Err(Error::InvalidParams("empty parameter range".into()));
        }
        let mut out = Vec::new();
        let mut a = vec![alo; self.points];
        loop {
            for b in blo..=bhi {
                out.push(BlowupParams::from_i64s(self.n, &a, b)?);
            }
            let mut k = self.points;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if a[k] < ahi {
                    a[k] += 1;
                    break;
                }
                a[k] = alo;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub margin: u32,
    pub cap: u64,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            margin: DEFAULT_MARGIN,
            cap: DEFAULT_CAP,
            jobs: 0,
        }
    }
}

/// A character and its active rays.
pub type ShapeExample = (Character, Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingVerdict {
    pub params: BlowupParams,
    pub predicate_says_vanishes: bool,
    /// `None` when the enumeration failed; see `error`.
    pub oracle_h1: Option<u64>,
    pub agree: bool,
    pub dims: Vec<u64>,
    /// Characters whose disconnected `V_{D,m}` has none of the expected shapes.
    pub unexpected_shapes: u64,
    /// First such character with its active rays.
    pub unexpected_shape_example: Option<ShapeExample>,
    pub error: Option<String>,
}

impl VanishingVerdict {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "params": self.params.to_json(),
            "predicate": self.predicate_says_vanishes,
            "h1": self.oracle_h1,
            "agree": self.agree,
            "dims": self.dims,
            "unexpected_shapes": self.unexpected_shapes,
        });
        if let Some((m, rays)) = &self.unexpected_shape_example {
            v["unexpected_shape_example"] = json!({ "m": ints_to_json(&m.0), "rays": rays });
        }
        if let Some(e) = &self.error {
            v["error"] = json!(e);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepSummary {
    pub total: usize,
    pub agree: usize,
    pub disagree: usize,
    pub errors: usize,
    pub unexpected_shapes: u64,
}

impl SweepSummary {
    pub fn of(verdicts: &[VanishingVerdict]) -> Self {
        let mut s = SweepSummary {
            total: verdicts.len(),
            ..Default::default()
        };
        for v in verdicts {
            if v.error.is_some() {
                s.errors += 1;
            } else if v.agree {
                s.agree += 1;
            } else {
                s.disagree += 1;
            }
            s.unexpected_shapes += v.unexpected_shapes;
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "total": self.total,
            "agree": self.agree,
            "disagree": self.disagree,
            "errors": self.errors,
            "unexpected_shapes": self.unexpected_shapes,
        })
    }
}

/// `{"verdicts": [...], "summary": {...}}`
pub fn sweep_to_json(verdicts: &[VanishingVerdict]) -> Value {
    json!({
        "verdicts": verdicts.iter().map(VanishingVerdict::to_json).collect::<Vec<_>>(),
        "summary": SweepSummary::of(verdicts).to_json(),
    })
}

/// Oracle `h^1`, full dims and the shapes of disconnected `V_{D,m}`.
pub fn verdict_for(
    engine: &CohomologyEngine,
    params: &BlowupParams,
    opts: SweepOptions,
) -> VanishingVerdict {
    let predicate = vanishing_predicate(&params.a, &params.b);
    let mut verdict = VanishingVerdict {
        params: params.clone(),
        predicate_says_vanishes: *predicate.as_ref().unwrap_or(&false),
        oracle_h1: None,
        agree: false,
        dims: Vec::new(),
        unexpected_shapes: 0,
        unexpected_shape_example: None,
        error: None,
    };
    let run = || -> Result<(Vec<u64>, u64, Option<ShapeExample>)> {
        predicate.clone()?;
        let fan = engine.fan();
        let layout = BlowupLayout::detect(fan)?;
        if layout != params.layout() {
            return Err(Error::InvalidParams(
                "params do not match the engine's fan".into(),
            ));
        }
        let d = params_divisor(layout, params);
        let bx = search_box(fan, &d, opts.margin)?;
        let n = fan.dim();
        let mut dims = vec![0u64; n + 1];
        let mut violations = 0u64;
        let mut example = None;
        engine.scan(&d, &bx, opts.cap, |seg| {
            let len = seg
                .len()
                .to_u64()
                .ok_or_else(|| Error::Invariant("segment length overflow".into()))?;
            for (i, slot) in dims.iter_mut().enumerate() {
                *slot += seg.info.reduced.sheaf_degree(i) * len;
            }
            if seg.info.reduced.sheaf_degree(1) > 0
                && classify_pattern(layout, seg.active, true).is_other()
            {
                violations += len;
                if example.is_none() {
                    let mut m = seg.prefix.to_vec();
                    m.push(seg.start.clone());
                    let rays = (0..seg.active.len()).filter(|&r| seg.active[r]).collect();
                    example = Some((Character(m), rays));
                }
            }
            Ok(())
        })?;
        Ok((dims, violations, example))
    };
    match run() {
        Ok((dims, violations, example)) => {
            let h1 = dims[1];
            verdict.oracle_h1 = Some(h1);
            verdict.agree = verdict.predicate_says_vanishes == (h1 == 0);
            verdict.dims = dims;
            verdict.unexpected_shapes = violations;
            verdict.unexpected_shape_example = example;
        }
        Err(e) => verdict.error = Some(e.to_string()),
    }
    verdict
}

/// Runs every tuple of the grid; per-tuple failures are recorded in the
/// verdict. The output follows [`SweepGrid::tuples`] order.
pub fn verify_sweep(grid: &SweepGrid, opts: SweepOptions) -> Result<Vec<VanishingVerdict>> {
    let tuples = grid.tuples()?;
    let engine = CohomologyEngine::new(make_blowup_fan(grid.n, grid.points)?);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        tuples
            .par_iter()
            .map(|p| verdict_for(&engine, p, opts))
            .collect()
    }))
}

/// Convenience for a single parameter tuple.
pub fn verify_params(params: &BlowupParams, opts: SweepOptions) -> Result<VanishingVerdict> {
    let engine = CohomologyEngine::new(make_blowup_fan(params.n, params.points)?);
    Ok(verdict_for(&engine, params, opts))
}
