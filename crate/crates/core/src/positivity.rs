//! Support functions, wall inequalities and nef/ample decisions.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::divisor::{cartier_data, CartierData, ToricDivisor};
use crate::error::{Error, Result};
use crate::json::{int_to_json, ints_to_json};
use crate::lattice_fan::{pair, walls, Fan, LatticeVector, Wall};

/// The piecewise-linear support function of a Cartier divisor.
#[derive(Debug, Clone)]
pub struct SupportFunctionView<'a> {
    pub fan: &'a Fan,
    pub cartier: CartierData,
}

impl<'a> SupportFunctionView<'a> {
    pub fn new(fan: &'a Fan, d: &ToricDivisor) -> Result<Self> {
        Ok(SupportFunctionView {
            fan,
            cartier: cartier_data(fan, d)?,
        })
    }

    /// `phi(u) = <m_sigma, u>` for the first maximal cone containing `u`.
    pub fn eval(&self, u: &LatticeVector) -> Result<BigRational> {
        let c = self
            .fan
            .containing_cone(u)
            .ok_or_else(|| Error::NotInSupport(u.0.iter().map(ToString::to_string).collect()))?;
        Ok(BigRational::from_integer(pair(self.cartier.get(c), u)?))
    }
}

pub fn support_eval(view: &SupportFunctionView<'_>, u: &LatticeVector) -> Result<BigRational> {
    view.eval(u)
}

/// A wall inequality `phi(u) <= <m_sigma, u>` evaluated at the generator
/// `u` of `sigma'` outside the wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallWitness {
    pub wall: Wall,
    /// Cone whose character bounds the support function.
    pub sigma: usize,
    /// Cone containing the check vector.
    pub sigma_prime: usize,
    pub ray: usize,
    pub u: LatticeVector,
    /// `phi(u) = -a_u`.
    pub phi: BigInt,
    /// `<m_sigma, u>`.
    pub bound: BigInt,
}

impl WallWitness {
    pub fn to_json(&self, fan: &Fan) -> Value {
        json!({
            "wall": {
                "left": self.wall.left,
                "right": self.wall.right,
                "shared_rays": self.wall.shared_rays,
            },
            "sigma": self.sigma,
            "sigma_prime": self.sigma_prime,
            "ray": self.ray,
            "ray_name": fan.ray_name(self.ray),
            "u": ints_to_json(&self.u.0),
            "phi": int_to_json(&self.phi),
            "bound": int_to_json(&self.bound),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityVerdict {
    pub nef: bool,
    pub ample: bool,
    /// First wall where `phi(u) > <m_sigma, u>`; present iff not nef.
    pub nef_witness: Option<WallWitness>,
    /// First wall where `phi(u) >= <m_sigma, u>`; present iff not ample.
    pub ample_witness: Option<WallWitness>,
}

impl PositivityVerdict {
    pub fn to_json(&self, fan: &Fan) -> Value {
        json!({
            "nef": self.nef,
            "ample": self.ample,
            "nef_witness": self.nef_witness.as_ref().map(|w| w.to_json(fan)),
            "ample_witness": self.ample_witness.as_ref().map(|w| w.to_json(fan)),
        })
    }
}

/// Checks every wall in both orientations. On a simplicial wall the
/// generator of `sigma'` outside the shared facet is the check vector.
pub fn positivity(fan: &Fan, d: &ToricDivisor) -> Result<PositivityVerdict> {
    let data = cartier_data(fan, d)?;
    let mut nef_witness = None;
    let mut ample_witness = None;
    for wall in walls(fan)? {
        for (sigma, sigma_prime) in [(wall.left, wall.right), (wall.right, wall.left)] {
            let ray = *fan.max_cones()[sigma_prime]
                .rays()
                .iter()
                .find(|r| !wall.shared_rays.contains(r))
                .ok_or_else(|| Error::Invariant("wall without a check vector".into()))?;
            let u = fan.ray(ray);
            let phi = -d.coeff(ray);
            let bound = pair(data.get(sigma), u)?;
            let witness = || WallWitness {
                wall: wall.clone(),
                sigma,
                sigma_prime,
                ray,
                u: u.clone(),
                phi: phi.clone(),
                bound: bound.clone(),
            };
            if nef_witness.is_none() && phi > bound {
                nef_witness = Some(witness());
            }
            if ample_witness.is_none() && phi >= bound {
                ample_witness = Some(witness());
            }
        }
    }
    Ok(PositivityVerdict {
        nef: nef_witness.is_none(),
        ample: ample_witness.is_none(),
        nef_witness,
        ample_witness,
    })
}

pub fn is_nef(fan: &Fan, d: &ToricDivisor) -> Result<bool> {
    positivity(fan, d).map(|v| v.nef)
}

pub fn is_ample(fan: &Fan, d: &ToricDivisor) -> Result<bool> {
    positivity(fan, d).map(|v| v.ample)
}

/// Nef and ample regions of `-aE + b H` on the one-point blow-up:
/// `(0 <= a <= b, 0 < a < b)`.
pub fn onept_positivity_closed_form(a: &BigInt, b: &BigInt) -> (bool, bool) {
    let zero = BigInt::from(0);
    (zero <= *a && a <= b, zero < *a && a < b)
}

/// `K = -sum D_rho`.
pub fn canonical_divisor(fan: &Fan) -> ToricDivisor {
    ToricDivisor::new(vec![BigInt::from(-1); fan.rays().len()])
}

/// Whether `d - K` is ample, the hypothesis of toric Kodaira vanishing
/// for `d`.
pub fn kodaira_precondition(fan: &Fan, d: &ToricDivisor) -> Result<bool> {
    is_ample(fan, &d.sub(&canonical_divisor(fan)))
}
