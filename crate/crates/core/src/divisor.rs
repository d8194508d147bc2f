//! Torus-invariant divisors, their Cartier data, Picard normal forms and
//! pullbacks along fan refinements.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::json::{as_array, as_object, as_usize, field, int_from_json, int_to_json};
use crate::lattice_fan::{pair, refinement_map, BlowupLayout, Character, Fan};
use crate::linalg::{self, IntegerSolve};

/// `sum a_rho D_rho`, one coefficient per ray of the attached fan.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToricDivisor {
    coeffs: Vec<BigInt>,
}

impl ToricDivisor {
    pub fn zero(num_rays: usize) -> Self {
        ToricDivisor {
            coeffs: vec![BigInt::zero(); num_rays],
        }
    }

    pub fn new(coeffs: Vec<BigInt>) -> Self {
        ToricDivisor { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        ToricDivisor::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Sparse construction from `(ray, coefficient)` terms; repeated rays add up.
    pub fn from_terms<C: Into<BigInt> + Clone>(num_rays: usize, terms: &[(usize, C)]) -> Self {
        let mut d = ToricDivisor::zero(num_rays);
        for (r, c) in terms {
            d.coeffs[*r] += c.clone().into();
        }
        d
    }

    /// Single prime divisor `D_rho`.
    pub fn prime(num_rays: usize, ray: usize) -> Self {
        ToricDivisor::from_terms(num_rays, &[(ray, 1)])
    }

    pub fn coeff(&self, ray: usize) -> &BigInt {
        &self.coeffs[ray]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn num_rays(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        ToricDivisor::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        ToricDivisor::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        ToricDivisor::new(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        ToricDivisor::new(self.coeffs.iter().map(|a| a * k).collect())
    }

    pub fn check_fan(&self, fan: &Fan) -> Result<()> {
        if self.num_rays() != fan.rays().len() {
            return Err(Error::DimensionMismatch {
                expected: fan.rays().len(),
                found: self.num_rays(),
            });
        }
        Ok(())
    }

    /// Nonzero coefficients as a JSON object keyed by ray index.
    pub fn coeffs_json(&self) -> Value {
        let map: Map<String, Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i.to_string(), int_to_json(c)))
            .collect();
        Value::Object(map)
    }

    pub fn coeffs_from_json(num_rays: usize, v: &Value) -> Result<Self> {
        let mut d = ToricDivisor::zero(num_rays);
        for (k, c) in as_object(v)? {
            let idx: usize = k
                .parse()
                .map_err(|_| Error::Json(format!("bad ray index {k:?}")))?;
            if idx >= num_rays {
                return Err(Error::Json(format!("ray index {idx} out of range")));
            }
            d.coeffs[idx] = int_from_json(c)?;
        }
        Ok(d)
    }

    /// `{ "fan": <inline fan>, "coeffs": {ray_index: int} }`
    pub fn to_json(&self, fan: &Fan) -> Value {
        json!({ "fan": fan.to_json(), "coeffs": self.coeffs_json() })
    }

    /// Parses the inline-fan form of the divisor document.
    pub fn from_json(v: &Value) -> Result<(Fan, ToricDivisor)> {
        let obj = as_object(v)?;
        let fan = Fan::from_json(field(obj, "fan")?)?;
        let d = ToricDivisor::coeffs_from_json(fan.rays().len(), field(obj, "coeffs")?)?;
        Ok((fan, d))
    }

    /// Human-readable form using the fan's ray names, e.g. `2*D_u0 - D_e1`.
    pub fn display<'a>(&'a self, fan: &'a Fan) -> impl fmt::Display + 'a {
        DivisorDisplay { d: self, fan }
    }
}

struct DivisorDisplay<'a> {
    d: &'a ToricDivisor,
    fan: &'a Fan,
}

impl fmt::Display for DivisorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.d.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = self.fan.ray_name(i);
            let mag = if *c < BigInt::zero() { -c } else { c.clone() };
            let sign = if *c < BigInt::zero() { "-" } else { "+" };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag == BigInt::from(1) {
                write!(f, "D_{name}")?;
            } else {
                write!(f, "{mag}*D_{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `div(m) = sum <m, u_rho> D_rho`.
pub fn div_of_character(fan: &Fan, m: &Character) -> Result<ToricDivisor> {
    if m.dim() != fan.dim() {
        return Err(Error::DimensionMismatch {
            expected: fan.dim(),
            found: m.dim(),
        });
    }
    fan.rays()
        .iter()
        .map(|u| pair(m, u))
        .collect::<Result<Vec<_>>>()
        .map(ToricDivisor::new)
}

/// One character per maximal cone, in fan order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierData {
    chars: Vec<Character>,
}

impl CartierData {
    pub fn characters(&self) -> &[Character] {
        &self.chars
    }

    pub fn get(&self, cone: usize) -> &Character {
        &self.chars[cone]
    }
}

/// The character `m_sigma` with `<m_sigma, u_rho> = -a_rho` on the rays of
/// one full-dimensional maximal cone.
pub fn cone_character(fan: &Fan, cone: usize, d: &ToricDivisor) -> Result<Character> {
    d.check_fan(fan)?;
    let c = &fan.max_cones()[cone];
    if c.len() != fan.dim() {
        return Err(Error::SingularCone {
            cone: c.rays().to_vec(),
        });
    }
    let rhs: Vec<BigInt> = c.rays().iter().map(|&r| -d.coeff(r)).collect();
    match linalg::solve_integer(&fan.generator_matrix(c), &rhs) {
        IntegerSolve::Unique(m) => Ok(Character(m)),
        IntegerSolve::NonIntegral => Err(Error::NotCartier {
            cone: c.rays().to_vec(),
        }),
        IntegerSolve::Singular => Err(Error::SingularCone {
            cone: c.rays().to_vec(),
        }),
    }
}

/// Cartier data of `d` on a smooth complete fan.
pub fn cartier_data(fan: &Fan, d: &ToricDivisor) -> Result<CartierData> {
    (0..fan.max_cones().len())
        .map(|i| cone_character(fan, i, d))
        .collect::<Result<Vec<_>>>()
        .map(|chars| CartierData { chars })
}

/// `d + div(m_base)`: the unique representative of the class of `d` that
/// vanishes on the rays of the base cone.
pub fn picard_normal_form(fan: &Fan, base: usize, d: &ToricDivisor) -> Result<ToricDivisor> {
    if base >= fan.max_cones().len() {
        return Err(Error::InvalidParams(format!(
            "no maximal cone with index {base}"
        )));
    }
    let m = cone_character(fan, base, d)?;
    Ok(d.add(&div_of_character(fan, &m)?))
}

/// Linear equivalence, decided by comparing normal forms on cone 0.
pub fn linearly_equivalent(fan: &Fan, d1: &ToricDivisor, d2: &ToricDivisor) -> Result<bool> {
    Ok(picard_normal_form(fan, 0, d1)? == picard_normal_form(fan, 0, d2)?)
}

/// Pullback of a Cartier divisor along a refinement `fine -> coarse`.
///
/// Each fine maximal cone inherits the character of the lowest-index
/// coarse maximal cone containing it; the result is checked to be
/// consistent on every ray.
pub fn pullback_refinement(fine: &Fan, coarse: &Fan, d: &ToricDivisor) -> Result<ToricDivisor> {
    let data = cartier_data(coarse, d)?;
    let map = refinement_map(fine, coarse)?;
    let mut coeffs: Vec<Option<BigInt>> = vec![None; fine.rays().len()];
    for (fc, &cc) in fine.max_cones().iter().zip(&map) {
        let m = data.get(cc);
        for &r in fc.rays() {
            let a = -pair(m, fine.ray(r))?;
            match &coeffs[r] {
                Some(prev) if *prev != a => return Err(Error::InconsistentPullback { ray: r }),
                _ => coeffs[r] = Some(a),
            }
        }
    }
    coeffs
        .into_iter()
        .enumerate()
        .map(|(r, c)| c.ok_or(Error::InconsistentPullback { ray: r }))
        .collect::<Result<Vec<_>>>()
        .map(ToricDivisor::new)
}

/// Closed form of the pullback of `sum lambda_i D_i` from P^n to its
/// blow-up at `points` fixed points: the `e_j` keep `lambda_j`, and each
/// exceptional ray `u_i` gets `s - lambda_i` where `s = sum lambda_j`.
pub fn blowup_pullback(layout: BlowupLayout, lambda: &[BigInt]) -> Result<ToricDivisor> {
    if lambda.len() != layout.n + 1 {
        return Err(Error::DimensionMismatch {
            expected: layout.n + 1,
            found: lambda.len(),
        });
    }
    let s: BigInt = lambda.iter().sum();
    let mut d = ToricDivisor::zero(layout.num_rays());
    for (j, l) in lambda.iter().enumerate() {
        d.coeffs[layout.e(j)] = l.clone();
    }
    for i in 0..layout.points {
        d.coeffs[layout.u(i)] = &s - &lambda[i];
    }
    Ok(d)
}

/// Parameters of `O(-sum a_i E_i) (x) pi^* O(b)` on a blow-up of P^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlowupParams {
    pub n: usize,
    pub points: usize,
    pub a: Vec<BigInt>,
    pub b: BigInt,
}

impl BlowupParams {
    pub fn new(n: usize, a: Vec<BigInt>, b: BigInt) -> Result<Self> {
        let points = a.len();
        BlowupLayout::new(n, points)?;
        Ok(BlowupParams { n, points, a, b })
    }

    pub fn from_i64s(n: usize, a: &[i64], b: i64) -> Result<Self> {
        BlowupParams::new(
            n,
            a.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::from(b),
        )
    }

    pub fn layout(&self) -> BlowupLayout {
        BlowupLayout {
            n: self.n,
            points: self.points,
        }
    }

    /// `{ "n": int, "points": int, "a": [int, ...], "b": int }`
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "points": self.points,
            "a": Value::Array(self.a.iter().map(int_to_json).collect()),
            "b": int_to_json(&self.b),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v)?;
        let n = as_usize(field(obj, "n")?)?;
        let points = as_usize(field(obj, "points")?)?;
        let a = as_array(field(obj, "a")?)?
            .iter()
            .map(int_from_json)
            .collect::<Result<Vec<_>>>()?;
        let b = int_from_json(field(obj, "b")?)?;
        if a.len() != points {
            return Err(Error::InvalidParams(format!(
                "expected {points} values of a, found {}",
                a.len()
            )));
        }
        BlowupParams::new(n, a, b)
    }
}

/// The explicit divisor representing the params' sheaf.
///
/// One point: `(b - a_0) D_u0 + b D_e1`. Several points:
/// `b D_e0 - a_0 D_u0 + sum_{i>=1} (b - a_i) D_ui`.
pub fn divisor_from_params(fan: &Fan, p: &BlowupParams) -> Result<ToricDivisor> {
    let layout = p.layout();
    if !crate::lattice_fan::make_blowup_fan(p.n, p.points)?.same_geometry(fan) {
        return Err(Error::InvalidParams(format!(
            "fan is not the blow-up of P^{} at {} point(s)",
            p.n, p.points
        )));
    }
    Ok(params_divisor(layout, p))
}

pub(crate) fn params_divisor(layout: BlowupLayout, p: &BlowupParams) -> ToricDivisor {
    let mut d = ToricDivisor::zero(layout.num_rays());
    if layout.points == 1 {
        d.coeffs[layout.u(0)] = &p.b - &p.a[0];
        d.coeffs[layout.e(1)] = p.b.clone();
    } else {
        d.coeffs[layout.e(0)] = p.b.clone();
        d.coeffs[layout.u(0)] = -&p.a[0];
        for i in 1..layout.points {
            d.coeffs[layout.u(i)] = &p.b - &p.a[i];
        }
    }
    d
}
