//! Lattice vectors, characters, smooth simplicial fans and the concrete
//! fans of projective space and its blow-ups at torus-fixed points.
//!
//! A [`Fan`] stores its ray generators and its maximal cones only; faces
//! are implicit subsets of a maximal cone's ray indices.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::json::{as_array, as_object, as_usize, field, int_from_json, ints_to_json};
use crate::linalg;

/// An element of the lattice N.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<BigInt>);

/// An element of the dual lattice M.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub Vec<BigInt>);

macro_rules! coord_vector {
    ($t:ident) => {
        impl $t {
            pub fn from_i64s(v: &[i64]) -> Self {
                $t(v.iter().map(|&x| BigInt::from(x)).collect())
            }

            pub fn zero(dim: usize) -> Self {
                $t(vec![BigInt::zero(); dim])
            }

            /// The `i`-th standard basis vector.
            pub fn unit(dim: usize, i: usize) -> Self {
                let mut v = Self::zero(dim);
                v.0[i] = BigInt::one();
                v
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[BigInt] {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn add(&self, other: &Self) -> Self {
                $t(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn neg(&self) -> Self {
                $t(self.0.iter().map(|a| -a).collect())
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "({})", self.0.iter().join(","))
            }
        }
    };
}

coord_vector!(LatticeVector);
coord_vector!(Character);

impl LatticeVector {
    /// gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides by the content, keeping the direction.
    pub fn primitive(&self) -> LatticeVector {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|v| v / &g).collect())
    }
}

/// The pairing `<m, u>` between M and N.
pub fn pair(m: &Character, u: &LatticeVector) -> Result<BigInt> {
    if m.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: u.dim(),
        });
    }
    Ok(m.0.iter().zip(&u.0).map(|(a, b)| a * b).sum())
}

/// A cone given by a sorted set of indices into the fan's ray table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(rays: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = rays.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Cone(v)
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_ray(&self, ray: usize) -> bool {
        self.0.binary_search(&ray).is_ok()
    }
}

/// A codimension-one intersection of two maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub left: usize,
    pub right: usize,
    pub shared_rays: Vec<usize>,
}

/// A simplicial fan described by its rays and maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Cone>,
    labels: BTreeMap<usize, String>,
}

impl Fan {
    /// Structural construction: coordinates have length `dim`, rays are
    /// nonzero and cone indices are in range. Geometric properties are left
    /// to [`validate_fan`].
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Cone>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFan("dimension must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.dim(),
                });
            }
            if r.is_zero() {
                return Err(Error::InvalidFan(format!("ray {i} is the zero vector")));
            }
        }
        for c in &max_cones {
            if c.is_empty() {
                return Err(Error::InvalidFan("empty maximal cone".into()));
            }
            if let Some(&bad) = c.rays().iter().find(|&&r| r >= rays.len()) {
                return Err(Error::InvalidFan(format!("ray index {bad} out of range")));
            }
        }
        Ok(Fan {
            dim,
            rays,
            max_cones,
            labels: BTreeMap::new(),
        })
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    /// Display name of a ray: its label if present, else `r<i>`.
    pub fn ray_name(&self, i: usize) -> String {
        self.labels
            .get(&i)
            .cloned()
            .unwrap_or_else(|| format!("r{i}"))
    }

    pub fn cone_index(&self, cone: &Cone) -> Option<usize> {
        self.max_cones.iter().position(|c| c == cone)
    }

    pub fn ray_index(&self, v: &LatticeVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// Rows are the generators of the cone, in index order.
    pub fn generator_matrix(&self, cone: &Cone) -> Vec<Vec<BigInt>> {
        cone.rays()
            .iter()
            .map(|&r| self.rays[r].0.clone())
            .collect()
    }

    /// Same dimension, rays and cones; labels are ignored.
    pub fn same_geometry(&self, other: &Fan) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones == other.max_cones
    }

    /// Whether `u` is a nonnegative rational combination of the cone's
    /// generators.
    pub fn cone_contains(&self, cone: &Cone, u: &LatticeVector) -> bool {
        cone_contains_vector(&self.generator_matrix(cone), u)
    }

    /// First maximal cone (in fan order) containing `u`.
    pub fn containing_cone(&self, u: &LatticeVector) -> Option<usize> {
        self.max_cones.iter().position(|c| self.cone_contains(c, u))
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("dim".into(), json!(self.dim));
        obj.insert(
            "rays".into(),
            Value::Array(self.rays.iter().map(|r| ints_to_json(&r.0)).collect()),
        );
        obj.insert(
            "max_cones".into(),
            Value::Array(self.max_cones.iter().map(|c| json!(c.rays())).collect()),
        );
        if !self.labels.is_empty() {
            let labels: Map<String, Value> = self
                .labels
                .iter()
                .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                .collect();
            obj.insert("labels".into(), Value::Object(labels));
        }
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Fan> {
        let obj = as_object(v)?;
        let dim = as_usize(field(obj, "dim")?)?;
        let rays = as_array(field(obj, "rays")?)?
            .iter()
            .map(|r| {
                as_array(r)?
                    .iter()
                    .map(int_from_json)
                    .collect::<Result<Vec<_>>>()
                    .map(LatticeVector)
            })
            .collect::<Result<Vec<_>>>()?;
        let cones = as_array(field(obj, "max_cones")?)?
            .iter()
            .map(|c| {
                as_array(c)?
                    .iter()
                    .map(as_usize)
                    .collect::<Result<Vec<_>>>()
                    .map(Cone::new)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut labels = BTreeMap::new();
        if let Some(l) = obj.get("labels") {
            for (k, v) in as_object(l)? {
                let idx: usize = k
                    .parse()
                    .map_err(|_| Error::Json(format!("bad label key {k:?}")))?;
                let name = v
                    .as_str()
                    .ok_or_else(|| Error::Json(format!("label {k} is not a string")))?;
                if idx >= rays.len() {
                    return Err(Error::Json(format!("label index {idx} out of range")));
                }
                labels.insert(idx, name.to_string());
            }
        }
        Ok(Fan::new(dim, rays, cones)?.with_labels(labels))
    }
}

/// Nonnegative-combination membership test for a cone with the given
/// generator rows.
pub(crate) fn cone_contains_vector(generators: &[Vec<BigInt>], u: &LatticeVector) -> bool {
    let n = u.dim();
    if generators.len() == n {
        if let Some(coeffs) = linalg::solve_square_rational(&transpose(generators), &u.0) {
            return coeffs.iter().all(|c| !c.is_negative());
        }
    }
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|k| {
            generators
                .iter()
                .map(|g| BigRational::from_integer(g[k].clone()))
                .collect()
        })
        .collect();
    let b: Vec<BigRational> =
        u.0.iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
    linalg::feasible_nonnegative(&a, &b)
}

fn transpose(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

fn require_dim(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::DimensionTooSmall(n))
    } else {
        Ok(())
    }
}

/// `e_0 = -(e_1 + ... + e_n)` followed by the standard basis.
fn projective_rays(n: usize) -> Vec<LatticeVector> {
    let mut rays = vec![LatticeVector(vec![BigInt::from(-1); n])];
    rays.extend((0..n).map(|i| LatticeVector::unit(n, i)));
    rays
}

/// The fan of P^n: rays `e_0..e_n`, maximal cones `sigma_i` spanned by all
/// `e_j` with `j != i`.
pub fn make_projective_fan(n: usize) -> Result<Fan> {
    require_dim(n)?;
    let cones = (0..=n)
        .map(|i| Cone::new((0..=n).filter(|&j| j != i)))
        .collect();
    let labels = (0..=n).map(|i| (i, format!("e{i}"))).collect();
    Ok(Fan::new(n, projective_rays(n), cones)?.with_labels(labels))
}

/// Star subdivision of `fan` along a smooth full-dimensional maximal cone.
///
/// The cone is removed and the cones through `u' = sum of its generators`
/// are appended, one for each dropped generator in index order. The new
/// ray is appended to the ray table unless an identical primitive ray is
/// already present.
pub fn star_subdivide(fan: &Fan, cone: &Cone) -> Result<Fan> {
    let idx = fan.cone_index(cone).ok_or_else(|| Error::NotMaximal {
        cone: cone.rays().to_vec(),
    })?;
    if cone.len() != fan.dim() {
        return Err(Error::NotSmooth {
            cone: cone.rays().to_vec(),
        });
    }
    if !linalg::determinant(&fan.generator_matrix(cone))
        .abs()
        .is_one()
    {
        return Err(Error::NotSmooth {
            cone: cone.rays().to_vec(),
        });
    }
    let sum = cone
        .rays()
        .iter()
        .fold(LatticeVector::zero(fan.dim()), |acc, &r| {
            acc.add(fan.ray(r))
        })
        .primitive();
    let mut rays = fan.rays.clone();
    let new_ray = match fan.ray_index(&sum) {
        Some(i) => i,
        None => {
            rays.push(sum);
            rays.len() - 1
        }
    };
    let mut cones: Vec<Cone> = fan
        .max_cones
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, c)| c.clone())
        .collect();
    for &dropped in cone.rays() {
        cones.push(Cone::new(
            cone.rays()
                .iter()
                .copied()
                .filter(|&r| r != dropped)
                .chain(std::iter::once(new_ray)),
        ));
    }
    Ok(Fan::new(fan.dim(), rays, cones)?.with_labels(fan.labels.clone()))
}

/// Index layout of a blow-up fan: rays are `u_0..u_q` then `e_0..e_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowupLayout {
    pub n: usize,
    pub points: usize,
}

impl BlowupLayout {
    pub fn new(n: usize, points: usize) -> Result<Self> {
        require_dim(n)?;
        if points == 0 || points > n + 1 {
            return Err(Error::InvalidParams(format!(
                "number of points must lie in 1..={} for n = {n}, got {points}",
                n + 1
            )));
        }
        Ok(BlowupLayout { n, points })
    }

    /// Recovers the layout of a fan built by [`make_blowup_fan`].
    pub fn detect(fan: &Fan) -> Result<Self> {
        let n = fan.dim();
        let points = fan.rays().len().saturating_sub(n + 1);
        let layout = BlowupLayout::new(n, points)
            .map_err(|_| Error::InvalidFan("not a blow-up fan of projective space".into()))?;
        if !make_blowup_fan(n, points)?.same_geometry(fan) {
            return Err(Error::InvalidFan(
                "not a blow-up fan of projective space".into(),
            ));
        }
        Ok(layout)
    }

    /// Index of the exceptional ray `u_i`.
    pub fn u(&self, i: usize) -> usize {
        debug_assert!(i < self.points);
        i
    }

    /// Index of `e_j`.
    pub fn e(&self, j: usize) -> usize {
        debug_assert!(j <= self.n);
        self.points + j
    }

    pub fn num_rays(&self) -> usize {
        self.points + self.n + 1
    }
}

/// The fan of P^n blown up at `points` torus-fixed points: successive star
/// subdivisions along `sigma_0, ..., sigma_q` with `q = points - 1`.
///
/// Rays are ordered `u_0..u_q, e_0..e_n` with `u_i = -e_i`. Maximal cones
/// are `tau_ij` (for `i <= q`, `j != i`, in lexicographic order) followed
/// by `sigma_{q+1}..sigma_n`.
pub fn make_blowup_fan(n: usize, points: usize) -> Result<Fan> {
    let layout = BlowupLayout::new(n, points)?;
    let e = projective_rays(n);
    let mut rays: Vec<LatticeVector> = (0..points).map(|i| e[i].neg()).collect();
    rays.extend(e);
    let mut cones = Vec::new();
    for i in 0..points {
        for j in (0..=n).filter(|&j| j != i) {
            cones
                .push(Cone::new(std::iter::once(layout.u(i)).chain(
                    (0..=n).filter(|&k| k != i && k != j).map(|k| layout.e(k)),
                )));
        }
    }
    for k in points..=n {
        cones.push(Cone::new((0..=n).filter(|&j| j != k).map(|j| layout.e(j))));
    }
    let labels = (0..points)
        .map(|i| (layout.u(i), format!("u{i}")))
        .chain((0..=n).map(|j| (layout.e(j), format!("e{j}"))))
        .collect();
    Ok(Fan::new(n, rays, cones)?.with_labels(labels))
}

/// All walls of a complete simplicial fan, in order of first appearance of
/// the shared facet (cone order, then dropped-ray order).
pub fn walls(fan: &Fan) -> Result<Vec<Wall>> {
    let n = fan.dim();
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut owners: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (ci, cone) in fan.max_cones().iter().enumerate() {
        if cone.len() != n {
            return Err(Error::InvalidFan(format!(
                "maximal cone {:?} has {} rays, expected {n}",
                cone.rays(),
                cone.len()
            )));
        }
        for drop in 0..n {
            let facet: Vec<usize> = cone
                .rays()
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != drop)
                .map(|(_, &r)| r)
                .collect();
            let entry = owners.entry(facet.clone()).or_default();
            if entry.is_empty() {
                order.push(facet);
            }
            entry.push(ci);
        }
    }
    order
        .into_iter()
        .map(|facet| {
            let cones = &owners[&facet];
            if cones.len() != 2 {
                return Err(Error::NotComplete {
                    facet,
                    count: cones.len(),
                });
            }
            Ok(Wall {
                left: cones[0],
                right: cones[1],
                shared_rays: facet,
            })
        })
        .collect()
}

/// Verdict of one validation check, with the first counterexample found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub ok: bool,
    pub counterexample: Option<String>,
}

impl Check {
    fn pass() -> Self {
        Check {
            ok: true,
            counterexample: None,
        }
    }

    fn fail(msg: String) -> Self {
        Check {
            ok: false,
            counterexample: Some(msg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanValidation {
    pub primitive: Check,
    pub distinct: Check,
    pub simplicial: Check,
    pub smooth: Check,
    /// Smoothness of each maximal cone, in fan order.
    pub cone_smooth: Vec<bool>,
    pub intersections: Check,
    pub complete: Check,
}

impl FanValidation {
    pub fn is_smooth_complete(&self) -> bool {
        self.primitive.ok
            && self.distinct.ok
            && self.simplicial.ok
            && self.smooth.ok
            && self.intersections.ok
            && self.complete.ok
    }

    pub fn to_json(&self) -> Value {
        fn check(c: &Check) -> Value {
            json!({ "ok": c.ok, "counterexample": c.counterexample })
        }
        json!({
            "primitive": check(&self.primitive),
            "distinct": check(&self.distinct),
            "simplicial": check(&self.simplicial),
            "smooth": check(&self.smooth),
            "cone_smooth": self.cone_smooth,
            "intersections": check(&self.intersections),
            "complete": check(&self.complete),
        })
    }
}

/// A cone is smooth when its generators extend to a lattice basis, i.e.
/// they are independent and the gcd of their maximal minors is one.
fn cone_is_smooth(gens: &[Vec<BigInt>], dim: usize) -> bool {
    let k = gens.len();
    if k > dim {
        return false;
    }
    let mut g = BigInt::zero();
    for cols in (0..dim).combinations(k) {
        let minor: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        g = g.gcd(&linalg::determinant(&minor));
        if g.is_one() {
            return true;
        }
    }
    false
}

/// Whether two simplicial cones meet exactly along the face spanned by
/// their common rays. A point of the intersection that uses a generator
/// outside the common face is searched for with an exact feasibility
/// problem.
fn meet_along_common_face(fan: &Fan, a: &Cone, b: &Cone) -> bool {
    let only_a: Vec<usize> = a
        .rays()
        .iter()
        .copied()
        .filter(|r| !b.contains_ray(*r))
        .collect();
    let only_b: Vec<usize> = b
        .rays()
        .iter()
        .copied()
        .filter(|r| !a.contains_ray(*r))
        .collect();
    if only_a.is_empty() || only_b.is_empty() {
        // one contains the other's rays; distinct maximal cones of a fan
        // cannot be nested
        return only_a.is_empty() && only_b.is_empty();
    }
    let n = fan.dim();
    let cols: Vec<(usize, bool)> = a
        .rays()
        .iter()
        .map(|&r| (r, true))
        .chain(b.rays().iter().map(|&r| (r, false)))
        .collect();
    let rat = |x: &BigInt| BigRational::from_integer(x.clone());
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|k| {
            cols.iter()
                .map(|&(r, from_a)| {
                    let v = rat(&fan.ray(r).0[k]);
                    if from_a {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    rows.push(
        cols.iter()
            .map(|&(r, from_a)| {
                let outside = if from_a {
                    !b.contains_ray(r)
                } else {
                    !a.contains_ray(r)
                };
                if outside {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect(),
    );
    let mut rhs = vec![BigRational::zero(); n];
    rhs.push(BigRational::one());
    !linalg::feasible_nonnegative(&rows, &rhs)
}

/// Checks primitivity, simpliciality, smoothness, the face-intersection
/// property and the completeness criterion (every facet shared by exactly
/// two maximal cones, connected wall graph).
pub fn validate_fan(fan: &Fan) -> FanValidation {
    let n = fan.dim();

    let primitive = match fan.rays().iter().position(|r| !r.is_primitive()) {
        Some(i) => Check::fail(format!(
            "ray {} = {} has content {}",
            fan.ray_name(i),
            fan.ray(i),
            fan.ray(i).content()
        )),
        None => Check::pass(),
    };

    let mut distinct = Check::pass();
    'outer: for i in 0..fan.rays().len() {
        for j in i + 1..fan.rays().len() {
            if fan.ray(i) == fan.ray(j) {
                distinct = Check::fail(format!("rays {i} and {j} coincide"));
                break 'outer;
            }
        }
    }

    let simplicial = match fan
        .max_cones()
        .iter()
        .find(|c| linalg::rank(fan.generator_matrix(c)) != c.len())
    {
        Some(c) => Check::fail(format!("cone {:?} has dependent generators", c.rays())),
        None => Check::pass(),
    };

    let cone_smooth: Vec<bool> = fan
        .max_cones()
        .iter()
        .map(|c| cone_is_smooth(&fan.generator_matrix(c), n))
        .collect();
    let smooth = match cone_smooth.iter().position(|s| !s) {
        Some(i) => Check::fail(format!(
            "cone {:?} is not smooth",
            fan.max_cones()[i].rays()
        )),
        None => Check::pass(),
    };

    let mut intersections = Check::pass();
    if simplicial.ok {
        'pairs: for i in 0..fan.max_cones().len() {
            for j in i + 1..fan.max_cones().len() {
                let (a, b) = (&fan.max_cones()[i], &fan.max_cones()[j]);
                if !meet_along_common_face(fan, a, b) {
                    intersections = Check::fail(format!(
                        "cones {:?} and {:?} do not meet along a common face",
                        a.rays(),
                        b.rays()
                    ));
                    break 'pairs;
                }
            }
        }
    } else {
        intersections = Check::fail("not checked: fan is not simplicial".into());
    }

    let complete = match walls(fan) {
        Err(Error::NotComplete { facet, count }) => Check::fail(format!(
            "facet {facet:?} is shared by {count} maximal cone(s)"
        )),
        Err(e) => Check::fail(e.to_string()),
        Ok(ws) => {
            let k = fan.max_cones().len();
            let mut adj = vec![Vec::new(); k];
            for w in &ws {
                adj[w.left].push(w.right);
                adj[w.right].push(w.left);
            }
            let mut seen = vec![false; k];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(c) = queue.pop_front() {
                for &d in &adj[c] {
                    if !seen[d] {
                        seen[d] = true;
                        queue.push_back(d);
                    }
                }
            }
            match seen.iter().position(|s| !s) {
                Some(c) => Check::fail(format!(
                    "wall graph is disconnected: cone {:?} unreachable",
                    fan.max_cones()[c].rays()
                )),
                None => Check::pass(),
            }
        }
    };

    FanValidation {
        primitive,
        distinct,
        simplicial,
        smooth,
        cone_smooth,
        intersections,
        complete,
    }
}

/// For each maximal cone of `fine`, the lowest-index maximal cone of
/// `coarse` containing it.
pub fn refinement_map(fine: &Fan, coarse: &Fan) -> Result<Vec<usize>> {
    if fine.dim() != coarse.dim() {
        return Err(Error::DimensionMismatch {
            expected: coarse.dim(),
            found: fine.dim(),
        });
    }
    fine.max_cones()
        .iter()
        .map(|fc| {
            coarse
                .max_cones()
                .iter()
                .position(|cc| {
                    let gens = coarse.generator_matrix(cc);
                    fc.rays()
                        .iter()
                        .all(|&r| cone_contains_vector(&gens, fine.ray(r)))
                })
                .ok_or_else(|| Error::NotRefinement {
                    cone: fc.rays().to_vec(),
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        let e0 = LatticeVector::from_i64s(&[-1, -1, -1]);
        assert_eq!(
            pair(&Character::from_i64s(&[1, 0, 0]), &e0).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(pair(&Character::zero(3), &e0).unwrap(), BigInt::zero());
        let u0 = LatticeVector::from_i64s(&[1, 1, 1]);
        assert_eq!(
            pair(&Character::from_i64s(&[-3, 1, 1]), &u0).unwrap(),
            BigInt::from(-1)
        );
        assert!(matches!(
            pair(&Character::zero(2), &u0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn projective_fan_shape() {
        let f3 = make_projective_fan(3).unwrap();
        assert_eq!((f3.rays().len(), f3.max_cones().len()), (4, 4));
        let f4 = make_projective_fan(4).unwrap();
        assert_eq!((f4.rays().len(), f4.max_cones().len()), (5, 5));
        let sigma0 = &f3.max_cones()[0];
        assert_eq!(sigma0.rays(), &[1, 2, 3]);
        assert!(linalg::determinant(&f3.generator_matrix(sigma0))
            .abs()
            .is_one());
        assert_eq!(make_projective_fan(2), Err(Error::DimensionTooSmall(2)));
    }

    #[test]
    fn star_subdivision_of_sigma0() {
        let p3 = make_projective_fan(3).unwrap();
        let sub = star_subdivide(&p3, &p3.max_cones()[0].clone()).unwrap();
        assert_eq!(sub.rays().len(), 5);
        assert_eq!(sub.ray(4), &LatticeVector::from_i64s(&[1, 1, 1]));
        let expected: Vec<Vec<usize>> = vec![
            vec![0, 2, 3],
            vec![0, 1, 3],
            vec![0, 1, 2],
            vec![2, 3, 4],
            vec![1, 3, 4],
            vec![1, 2, 4],
        ];
        let got: Vec<Vec<usize>> = sub.max_cones().iter().map(|c| c.rays().to_vec()).collect();
        assert_eq!(got, expected);
        // refinement: every new cone sits in a cone of P^3
        assert!(refinement_map(&sub, &p3).is_ok());
    }

    #[test]
    fn star_subdivision_twice() {
        let p3 = make_projective_fan(3).unwrap();
        let s1 = star_subdivide(&p3, &Cone::new([1, 2, 3])).unwrap();
        let s2 = star_subdivide(&s1, &Cone::new([0, 2, 3])).unwrap();
        assert_eq!(s2.rays().len(), 6);
        assert_eq!(s2.ray(4), &LatticeVector::from_i64s(&[1, 1, 1]));
        assert_eq!(s2.ray(5), &LatticeVector::from_i64s(&[-1, 0, 0]));
        assert_eq!(s2.max_cones().len(), 8);
        assert!(validate_fan(&s2).is_smooth_complete());
    }

    #[test]
    fn star_subdivide_rejects_bad_cones() {
        let p3 = make_projective_fan(3).unwrap();
        assert!(matches!(
            star_subdivide(&p3, &Cone::new([1, 2])),
            Err(Error::NotMaximal { .. })
        ));
        let fat = Fan::new(
            2,
            vec![
                LatticeVector::from_i64s(&[1, 0]),
                LatticeVector::from_i64s(&[1, 2]),
            ],
            vec![Cone::new([0, 1])],
        )
        .unwrap();
        assert!(matches!(
            star_subdivide(&fat, &Cone::new([0, 1])),
            Err(Error::NotSmooth { .. })
        ));
    }

    #[test]
    fn blowup_fan_counts() {
        for (points, rays, cones) in [(1, 5, 6), (2, 6, 8), (4, 8, 12)] {
            let f = make_blowup_fan(3, points).unwrap();
            assert_eq!(f.rays().len(), rays, "points={points}");
            assert_eq!(f.max_cones().len(), cones, "points={points}");
        }
        assert!(make_blowup_fan(3, 0).is_err());
        assert!(make_blowup_fan(3, 5).is_err());
        assert!(make_blowup_fan(2, 1).is_err());
    }

    #[test]
    fn blowup_fan_matches_successive_subdivisions() {
        // same cone set up to relabelling rays by their coordinates
        for n in 3..=4 {
            for points in 1..=n + 1 {
                let direct = make_blowup_fan(n, points).unwrap();
                let mut f = make_projective_fan(n).unwrap();
                for i in 0..points {
                    let sigma = Cone::new((0..=n).filter(|&j| j != i));
                    f = star_subdivide(&f, &sigma).unwrap();
                }
                let as_sets = |fan: &Fan| {
                    let mut v: Vec<Vec<LatticeVector>> = fan
                        .max_cones()
                        .iter()
                        .map(|c| {
                            let mut g: Vec<_> =
                                c.rays().iter().map(|&r| fan.ray(r).clone()).collect();
                            g.sort();
                            g
                        })
                        .collect();
                    v.sort();
                    v
                };
                assert_eq!(as_sets(&direct), as_sets(&f), "n={n} points={points}");
            }
        }
    }

    #[test]
    fn wall_counts() {
        assert_eq!(walls(&make_projective_fan(3).unwrap()).unwrap().len(), 6);
        assert_eq!(walls(&make_blowup_fan(3, 1).unwrap()).unwrap().len(), 9);
        let single = Fan::new(
            3,
            (0..3).map(|i| LatticeVector::unit(3, i)).collect(),
            vec![Cone::new([0, 1, 2])],
        )
        .unwrap();
        assert!(matches!(
            walls(&single),
            Err(Error::NotComplete { count: 1, .. })
        ));
    }

    #[test]
    fn validation_verdicts() {
        let v = validate_fan(&make_projective_fan(3).unwrap());
        assert!(v.smooth.ok && v.complete.ok && v.is_smooth_complete());
        let v = validate_fan(&make_blowup_fan(3, 2).unwrap());
        assert!(v.smooth.ok && v.complete.ok && v.intersections.ok);

        let bad = Fan::new(
            3,
            vec![
                LatticeVector::from_i64s(&[2, 0, 0]),
                LatticeVector::unit(3, 1),
                LatticeVector::unit(3, 2),
            ],
            vec![Cone::new([0, 1, 2])],
        )
        .unwrap();
        let v = validate_fan(&bad);
        assert!(!v.primitive.ok);
        assert!(v.primitive.counterexample.unwrap().contains("content 2"));
        assert!(!v.complete.ok);
    }

    #[test]
    fn overlapping_cones_are_detected() {
        // two 2d cones that overlap in their interiors
        let f = Fan::new(
            2,
            vec![
                LatticeVector::from_i64s(&[1, 0]),
                LatticeVector::from_i64s(&[0, 1]),
                LatticeVector::from_i64s(&[1, 1]),
                LatticeVector::from_i64s(&[-1, 2]),
            ],
            vec![Cone::new([0, 1]), Cone::new([2, 3])],
        )
        .unwrap();
        assert!(!validate_fan(&f).intersections.ok);
    }

    #[test]
    fn json_round_trip_preserves_order() {
        let f = make_blowup_fan(3, 2).unwrap();
        let back = Fan::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.ray_name(0), "u0");
    }
}
