//! Constitutive models. Each comes as a pair of fundamental relations,
//! `u(s,v)` (energy representation) and `s(u,v)` (entropy representation).

use crate::error::{Error, Result};
use crate::field::{EvalError, Field};
use crate::real::Real;

use super::FundamentalRelation;

fn arity<T>(x: &[T], n: usize) -> core::result::Result<(), EvalError> {
    if x.len() == n {
        Ok(())
    } else {
        Err(EvalError::Arity { expected: n, got: x.len() })
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(alloc::format!("{name} must be positive and finite, got {v}")))
    }
}

/// `f(q) = ½ Σ (q^a)²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadratic {
    pub n: usize,
}

impl Field for Quadratic {
    fn eval<T: Real>(&self, x: &[T]) -> core::result::Result<T, EvalError> {
        arity(x, self.n)?;
        Ok(x.iter().fold(T::zero(), |acc, &q| acc + q * q).scale(0.5))
    }
}

impl FundamentalRelation for Quadratic {
    fn arity(&self) -> usize {
        self.n
    }

    fn in_domain(&self, q: &[f64]) -> bool {
        q.len() == self.n && q.iter().all(|v| v.is_finite())
    }
}

/// Ideal gas `s = s0 + c_v ln(u/u0) + R ln(v/v0)`, with `T = u/c_v` and
/// `p = RT/v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealGas {
    pub cv: f64,
    pub r: f64,
    pub s0: f64,
    pub u0: f64,
    pub v0: f64,
}

impl IdealGas {
    /// Reference state `s0 = 0, u0 = v0 = 1`.
    pub fn new(cv: f64, r: f64) -> Result<Self> {
        Self::with_reference(cv, r, 0.0, 1.0, 1.0)
    }

    pub fn with_reference(cv: f64, r: f64, s0: f64, u0: f64, v0: f64) -> Result<Self> {
        positive("c_v", cv)?;
        positive("R", r)?;
        positive("u0", u0)?;
        positive("v0", v0)?;
        if !s0.is_finite() {
            return Err(Error::InvalidInput(alloc::format!("s0 must be finite, got {s0}")));
        }
        Ok(IdealGas { cv, r, s0, u0, v0 })
    }

    pub fn temperature(&self, u: f64, _v: f64) -> f64 {
        u / self.cv
    }

    pub fn pressure(&self, u: f64, v: f64) -> f64 {
        self.r * self.temperature(u, v) / v
    }

    pub fn energy(&self) -> IdealGasEnergy {
        IdealGasEnergy(*self)
    }

    pub fn entropy(&self) -> IdealGasEntropy {
        IdealGasEntropy(*self)
    }
}

/// `u(s,v) = u0 exp[(s − s0 − R ln(v/v0))/c_v]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealGasEnergy(pub IdealGas);

/// `s(u,v) = s0 + c_v ln(u/u0) + R ln(v/v0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealGasEntropy(pub IdealGas);

impl Field for IdealGasEnergy {
    fn eval<T: Real>(&self, x: &[T]) -> core::result::Result<T, EvalError> {
        arity(x, 2)?;
        let m = &self.0;
        let (s, v) = (x[0], x[1]);
        let arg = (s - T::constant(m.s0) - (v.scale(1.0 / m.v0)).ln().scale(m.r)).scale(1.0 / m.cv);
        Ok(arg.exp().scale(m.u0))
    }
}

impl FundamentalRelation for IdealGasEnergy {
    fn arity(&self) -> usize {
        2
    }

    fn in_domain(&self, q: &[f64]) -> bool {
        q.len() == 2 && q[0].is_finite() && q[1].is_finite() && q[1] > 0.0
    }
}

impl Field for IdealGasEntropy {
    fn eval<T: Real>(&self, x: &[T]) -> core::result::Result<T, EvalError> {
        arity(x, 2)?;
        let m = &self.0;
        let (u, v) = (x[0], x[1]);
        Ok(T::constant(m.s0) + u.scale(1.0 / m.u0).ln().scale(m.cv) + v.scale(1.0 / m.v0).ln().scale(m.r))
    }
}

impl FundamentalRelation for IdealGasEntropy {
    fn arity(&self) -> usize {
        2
    }

    fn in_domain(&self, q: &[f64]) -> bool {
        q.len() == 2 && q[0] > 0.0 && q[1] > 0.0 && q[0].is_finite() && q[1].is_finite()
    }
}

/// Van der Waals fluid `s = c_v ln(u + a/v) + R ln(v − b)`, with
/// `T = (u + a/v)/c_v` and `p = RT/(v − b) − a/v²`. The entropy constant is
/// zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VanDerWaals {
    pub a: f64,
    pub b: f64,
    pub cv: f64,
    pub r: f64,
}

impl VanDerWaals {
    pub fn new(a: f64, b: f64, cv: f64, r: f64) -> Result<Self> {
        positive("a", a)?;
        positive("b", b)?;
        positive("c_v", cv)?;
        positive("R", r)?;
        Ok(VanDerWaals { a, b, cv, r })
    }

    pub fn temperature(&self, u: f64, v: f64) -> f64 {
        (u + self.a / v) / self.cv
    }

    pub fn pressure(&self, u: f64, v: f64) -> f64 {
        self.r * self.temperature(u, v) / (v - self.b) - self.a / (v * v)
    }

    /// Pressure as a function of `(T, v)`.
    pub fn pressure_tv(&self, t: f64, v: f64) -> f64 {
        self.r * t / (v - self.b) - self.a / (v * v)
    }

    /// Internal energy on the isotherm `T` at volume `v`.
    pub fn energy_at(&self, t: f64, v: f64) -> f64 {
        self.cv * t - self.a / v
    }

    /// `v_c = 3b`.
    pub fn critical_volume(&self) -> f64 {
        3.0 * self.b
    }

    /// `T_c = 8a/(27Rb)`.
    pub fn critical_temperature(&self) -> f64 {
        8.0 * self.a / (27.0 * self.r * self.b)
    }

    /// `p_c = a/(27b²)`.
    pub fn critical_pressure(&self) -> f64 {
        self.a / (27.0 * self.b * self.b)
    }

    pub fn energy(&self) -> VdwEnergy {
        VdwEnergy(*self)
    }

    pub fn entropy(&self) -> VdwEntropy {
        VdwEntropy(*self)
    }
}

/// `u(s,v) = exp[(s − R ln(v − b))/c_v] − a/v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VdwEnergy(pub VanDerWaals);

/// `s(u,v) = c_v ln(u + a/v) + R ln(v − b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VdwEntropy(pub VanDerWaals);

impl Field for VdwEnergy {
    fn eval<T: Real>(&self, x: &[T]) -> core::result::Result<T, EvalError> {
        arity(x, 2)?;
        let m = &self.0;
        let (s, v) = (x[0], x[1]);
        let arg = (s - (v - T::constant(m.b)).ln().scale(m.r)).scale(1.0 / m.cv);
        Ok(arg.exp() - T::constant(m.a) / v)
    }
}

impl FundamentalRelation for VdwEnergy {
    fn arity(&self) -> usize {
        2
    }

    fn in_domain(&self, q: &[f64]) -> bool {
        q.len() == 2 && q[0].is_finite() && q[1].is_finite() && q[1] > self.0.b
    }
}

impl Field for VdwEntropy {
    fn eval<T: Real>(&self, x: &[T]) -> core::result::Result<T, EvalError> {
        arity(x, 2)?;
        let m = &self.0;
        let (u, v) = (x[0], x[1]);
        Ok((u + T::constant(m.a) / v).ln().scale(m.cv) + (v - T::constant(m.b)).ln().scale(m.r))
    }
}

impl FundamentalRelation for VdwEntropy {
    fn arity(&self) -> usize {
        2
    }

    fn in_domain(&self, q: &[f64]) -> bool {
        q.len() == 2 && q[0].is_finite() && q[1].is_finite() && q[1] > self.0.b && q[0] + self.0.a / q[1] > 0.0
    }
}

/// Worst relative first-law residual of an entropy relation against the
/// model's own equations of state: `∂s/∂u − 1/T` and `∂s/∂v − p/T`.
pub fn first_law_residual<F: FundamentalRelation>(
    entropy: &F,
    temperature: impl Fn(f64, f64) -> f64,
    pressure: impl Fn(f64, f64) -> f64,
    u: f64,
    v: f64,
) -> Result<f64> {
    super::check_domain(entropy, &[u, v])?;
    let g = crate::field::gradient(entropy, &[u, v])?;
    let t = temperature(u, v);
    let p = pressure(u, v);
    let r1 = crate::field::relative_error(g[0], 1.0 / t);
    let r2 = crate::field::relative_error(g[1], p / t);
    Ok(r1.max(r2))
}
