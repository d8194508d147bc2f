//! Finite character search and total cohomology of a divisor.
//!
//! The graded piece of `H^i(O(D))` at `m` only depends on which rays are
//! active at `m` (`<m, u_rho> < -a_rho`). The engine caches reduced
//! cohomology per active-ray pattern and sweeps the search box line by
//! line: along the last coordinate each ray switches state at most once,
//! so every line splits into a few intervals of constant pattern.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::nerve::{nerve_of_active, reduced_ranks, ReducedCohomology};
use crate::divisor::{picard_normal_form, ToricDivisor};
use crate::error::{Error, Result};
use crate::json::{as_array, as_object, as_u64, as_usize, field, ints_from_json, ints_to_json};
use crate::lattice_fan::{Character, Fan};
use crate::linalg;

pub const DEFAULT_MARGIN: u32 = 1;
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Inclusive integer bounds per coordinate of M.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SearchBox {
    pub lo: Vec<BigInt>,
    pub hi: Vec<BigInt>,
}

impl SearchBox {
    /// Number of characters in the box.
    pub fn volume(&self) -> BigInt {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1u32).max(BigInt::zero()))
            .product()
    }

    pub fn contains(&self, m: &Character) -> bool {
        m.0.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| l <= x && x <= h)
    }

    pub fn to_json(&self) -> Value {
        json!({ "lo": ints_to_json(&self.lo), "hi": ints_to_json(&self.hi) })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v)?;
        Ok(SearchBox {
            lo: ints_from_json(field(obj, "lo")?)?,
            hi: ints_from_json(field(obj, "hi")?)?,
        })
    }
}

/// Box spanned by all vertices of the arrangement `<m, u_rho> = -a_rho`
/// (solutions for every invertible n-subset of rays), rounded outward and
/// widened by `margin`.
pub fn search_box(fan: &Fan, d: &ToricDivisor, margin: u32) -> Result<SearchBox> {
    d.check_fan(fan)?;
    let n = fan.dim();
    let mut lo: Option<Vec<BigRational>> = None;
    let mut hi: Option<Vec<BigRational>> = None;
    for subset in (0..fan.rays().len()).combinations(n) {
        let rows: Vec<Vec<BigInt>> = subset.iter().map(|&r| fan.ray(r).0.clone()).collect();
        let rhs: Vec<BigInt> = subset.iter().map(|&r| -d.coeff(r)).collect();
        let Some(v) = linalg::solve_square_rational(&rows, &rhs) else {
            continue;
        };
        match (&mut lo, &mut hi) {
            (Some(l), Some(h)) => {
                for k in 0..n {
                    if v[k] < l[k] {
                        l[k] = v[k].clone();
                    }
                    if v[k] > h[k] {
                        h[k] = v[k].clone();
                    }
                }
            }
            _ => {
                lo = Some(v.clone());
                hi = Some(v);
            }
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::RaysDoNotSpan);
    };
    let margin = BigInt::from(margin);
    Ok(SearchBox {
        lo: lo
            .iter()
            .map(|x| x.floor().to_integer() - &margin)
            .collect(),
        hi: hi.iter().map(|x| x.ceil().to_integer() + &margin).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomologyOptions {
    pub margin: u32,
    /// Largest search box (in characters) the engine will scan.
    pub cap: u64,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        CohomologyOptions {
            margin: DEFAULT_MARGIN,
            cap: DEFAULT_CAP,
        }
    }
}

/// Nonzero graded pieces at one character, keyed by sheaf degree `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contribution {
    pub m: Character,
    pub ranks: BTreeMap<usize, u64>,
}

/// Result of [`total_cohomology`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub fan: Fan,
    pub divisor: ToricDivisor,
    /// Base cone used for the normal-form echo.
    pub base_cone: usize,
    pub normal_form: ToricDivisor,
    pub search_box: SearchBox,
    /// `dims[i] = h^i`, for `i = 0..=n`.
    pub dims: Vec<u64>,
    pub contributions: Vec<Contribution>,
}

impl CohomologyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "divisor": {
                "fan": self.fan.to_json(),
                "coeffs": self.divisor.coeffs_json(),
                "normal_form": {
                    "base_cone": self.base_cone,
                    "coeffs": self.normal_form.coeffs_json(),
                },
            },
            "box": self.search_box.to_json(),
            "dims": self.dims,
            "contributions": self.contributions.iter().map(|c| json!({
                "m": ints_to_json(&c.m.0),
                "ranks": c.ranks.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Parses a report and checks its internal consistency.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v)?;
        let div = as_object(field(obj, "divisor")?)?;
        let fan = Fan::from_json(field(div, "fan")?)?;
        let k = fan.rays().len();
        let divisor = ToricDivisor::coeffs_from_json(k, field(div, "coeffs")?)?;
        let nf = as_object(field(div, "normal_form")?)?;
        let base_cone = as_usize(field(nf, "base_cone")?)?;
        let normal_form = ToricDivisor::coeffs_from_json(k, field(nf, "coeffs")?)?;
        let search_box = SearchBox::from_json(field(obj, "box")?)?;
        let dims = as_array(field(obj, "dims")?)?
            .iter()
            .map(as_u64)
            .collect::<Result<Vec<_>>>()?;
        let contributions = as_array(field(obj, "contributions")?)?
            .iter()
            .map(|c| {
                let c = as_object(c)?;
                let m = Character(ints_from_json(field(c, "m")?)?);
                let mut ranks = BTreeMap::new();
                for (deg, r) in as_object(field(c, "ranks")?)? {
                    let deg: usize = deg
                        .parse()
                        .map_err(|_| Error::Json(format!("bad degree {deg:?}")))?;
                    ranks.insert(deg, as_u64(r)?);
                }
                Ok(Contribution { m, ranks })
            })
            .collect::<Result<Vec<_>>>()?;
        let report = CohomologyReport {
            fan,
            divisor,
            base_cone,
            normal_form,
            search_box,
            dims,
            contributions,
        };
        report.validate()?;
        Ok(report)
    }

    /// Schema-level checks: shapes, degree range, and `dims[i]` equal to
    /// the sum of the per-character contributions.
    pub fn validate(&self) -> Result<()> {
        let n = self.fan.dim();
        let bad = |msg: String| Err(Error::Json(msg));
        if self.dims.len() != n + 1 {
            return bad(format!(
                "dims has length {}, expected {}",
                self.dims.len(),
                n + 1
            ));
        }
        if self.search_box.lo.len() != n || self.search_box.hi.len() != n {
            return bad("box has the wrong dimension".into());
        }
        let mut sums = vec![0u64; n + 1];
        for c in &self.contributions {
            if c.m.dim() != n || !self.search_box.contains(&c.m) {
                return bad(format!("contribution at {} lies outside the box", c.m));
            }
            for (&deg, &r) in &c.ranks {
                if deg > n || r == 0 {
                    return bad(format!("invalid rank entry {deg}:{r} at {}", c.m));
                }
                sums[deg] += r;
            }
        }
        if sums != self.dims {
            return bad(format!(
                "dims {:?} disagree with contributions {sums:?}",
                self.dims
            ));
        }
        if !crate::divisor::linearly_equivalent(&self.fan, &self.divisor, &self.normal_form)? {
            return bad("normal form is not equivalent to the divisor".into());
        }
        Ok(())
    }
}

/// Per-pattern data cached by the engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternInfo {
    pub reduced: ReducedCohomology,
}

/// A maximal run of characters `prefix × [start, end]` sharing one
/// active-ray pattern.
pub struct Segment<'s> {
    pub prefix: &'s [BigInt],
    pub start: &'s BigInt,
    pub end: &'s BigInt,
    pub active: &'s [bool],
    pub info: &'s PatternInfo,
}

impl Segment<'_> {
    pub fn len(&self) -> BigInt {
        self.end - self.start + 1u32
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }
}

/// Reusable cohomology evaluator for one fan.
///
/// Shareable between threads; the pattern cache is behind a lock.
pub struct CohomologyEngine {
    fan: Fan,
    cache: RwLock<HashMap<Vec<bool>, Arc<PatternInfo>>>,
}

impl CohomologyEngine {
    pub fn new(fan: Fan) -> Self {
        CohomologyEngine {
            fan,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Reduced cohomology of `V` for the given active-ray pattern.
    pub fn pattern(&self, active: &[bool]) -> Arc<PatternInfo> {
        if let Some(p) = self.cache.read().expect("cache lock").get(active) {
            return Arc::clone(p);
        }
        let info = Arc::new(PatternInfo {
            reduced: reduced_ranks(&nerve_of_active(&self.fan, active)),
        });
        self.cache
            .write()
            .expect("cache lock")
            .entry(active.to_vec())
            .or_insert(info)
            .clone()
    }

    pub fn cached_patterns(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    /// Visits the search box as segments of constant active pattern, in
    /// lexicographic character order.
    pub fn scan(
        &self,
        d: &ToricDivisor,
        bx: &SearchBox,
        cap: u64,
        mut visit: impl FnMut(&Segment<'_>) -> Result<()>,
    ) -> Result<()> {
        d.check_fan(&self.fan)?;
        let n = self.fan.dim();
        let volume = bx.volume();
        if volume > BigInt::from(cap) {
            return Err(Error::CapExceeded {
                size: volume.to_string(),
                cap,
            });
        }
        if volume.is_zero() {
            return Ok(());
        }
        let last = n - 1;
        let rays = self.fan.rays();
        let bounds: Vec<BigInt> = rays.iter().zip(d.coeffs()).map(|(_, a)| -a).collect();
        let (t_lo, t_hi) = (&bx.lo[last], &bx.hi[last]);

        let mut prefix: Vec<BigInt> = bx.lo[..last].to_vec();
        let mut active = vec![false; rays.len()];
        loop {
            // ray rho is active iff c * t < rhs, with c its last coordinate
            let mut rhs = Vec::with_capacity(rays.len());
            let mut cuts: Vec<BigInt> = Vec::new();
            for (u, bound) in rays.iter().zip(&bounds) {
                let partial: BigInt = prefix.iter().zip(&u.0).map(|(m, x)| m * x).sum();
                let r = bound - partial;
                let c = &u.0[last];
                if c.is_positive() {
                    // active for t <= floor((r - 1) / c)
                    cuts.push((&r - 1u32).div_floor(c) + 1u32);
                } else if c.is_negative() {
                    // active for t >= floor(r / c) + 1
                    cuts.push(r.div_floor(c) + 1u32);
                }
                rhs.push(r);
            }
            cuts.retain(|x| x > t_lo && x <= t_hi);
            cuts.sort();
            cuts.dedup();
            let mut starts = Vec::with_capacity(cuts.len() + 1);
            starts.push(t_lo.clone());
            starts.extend(cuts);
            for (i, start) in starts.iter().enumerate() {
                let end = match starts.get(i + 1) {
                    Some(next) => next - BigInt::one(),
                    None => t_hi.clone(),
                };
                for (k, u) in rays.iter().enumerate() {
                    active[k] = &u.0[last] * start < rhs[k];
                }
                let info = self.pattern(&active);
                visit(&Segment {
                    prefix: &prefix,
                    start,
                    end: &end,
                    active: &active,
                    info: &info,
                })?;
            }
            // odometer over the prefix coordinates
            let mut k = last;
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                if prefix[k] < bx.hi[k] {
                    prefix[k] += 1u32;
                    break;
                }
                prefix[k] = bx.lo[k].clone();
            }
        }
    }

    /// `h^0..h^n` without per-character detail.
    pub fn dims(&self, d: &ToricDivisor, opts: CohomologyOptions) -> Result<(SearchBox, Vec<u64>)> {
        let bx = search_box(&self.fan, d, opts.margin)?;
        let n = self.fan.dim();
        let mut dims = vec![0u64; n + 1];
        self.scan(d, &bx, opts.cap, |seg| {
            accumulate(&mut dims, seg, n)?;
            Ok(())
        })?;
        Ok((bx, dims))
    }

    pub fn report(&self, d: &ToricDivisor, opts: CohomologyOptions) -> Result<CohomologyReport> {
        let bx = search_box(&self.fan, d, opts.margin)?;
        let n = self.fan.dim();
        let mut dims = vec![0u64; n + 1];
        let mut contributions = Vec::new();
        self.scan(d, &bx, opts.cap, |seg| {
            let per_char = accumulate(&mut dims, seg, n)?;
            if per_char.is_empty() {
                return Ok(());
            }
            let mut t = seg.start.clone();
            while t <= *seg.end {
                let mut m = seg.prefix.to_vec();
                m.push(t.clone());
                contributions.push(Contribution {
                    m: Character(m),
                    ranks: per_char.clone(),
                });
                t += 1u32;
            }
            Ok(())
        })?;
        let base_cone = 0;
        Ok(CohomologyReport {
            normal_form: picard_normal_form(&self.fan, base_cone, d)?,
            fan: self.fan.clone(),
            divisor: d.clone(),
            base_cone,
            search_box: bx,
            dims,
            contributions,
        })
    }
}

/// Adds a segment's contribution to `dims` and returns the per-character
/// nonzero ranks keyed by sheaf degree.
fn accumulate(dims: &mut [u64], seg: &Segment<'_>, n: usize) -> Result<BTreeMap<usize, u64>> {
    let reduced = &seg.info.reduced;
    if let Some(top) = reduced.top_degree() {
        if top > n - 1 {
            return Err(Error::Invariant(format!(
                "reduced cohomology in degree {top} exceeds n - 1 = {}",
                n - 1
            )));
        }
    }
    let len = seg
        .len()
        .to_u64()
        .ok_or_else(|| Error::Invariant("segment length overflow".into()))?;
    let mut per_char = BTreeMap::new();
    for (i, slot) in dims.iter_mut().enumerate() {
        let r = reduced.sheaf_degree(i);
        if r != 0 {
            *slot += r * len;
            per_char.insert(i, r);
        }
    }
    Ok(per_char)
}

/// Total cohomology with default options.
pub fn total_cohomology(fan: &Fan, d: &ToricDivisor) -> Result<CohomologyReport> {
    total_cohomology_with(fan, d, CohomologyOptions::default())
}

pub fn total_cohomology_with(
    fan: &Fan,
    d: &ToricDivisor,
    opts: CohomologyOptions,
) -> Result<CohomologyReport> {
    CohomologyEngine::new(fan.clone()).report(d, opts)
}
