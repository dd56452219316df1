//! Darboux coordinates `(w, p_1..p_n, q^1..q^n)` on the `(2n+1)`-dimensional
//! phase space, tangent and cotangent values, and the adapted frame
//! `(ξ, P^a, Q_a)`.
//!
//! Coordinate vectors are laid out as `[w, p_1, …, p_n, q^1, …, q^n]`. Slot
//! indices in this API are 0-based; textual names (`p1`, `q1`) are 1-based.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{check_dim, Error, Result};
use crate::field::{self, Field};
use crate::linalg::SquareMatrix;

/// Total dimension `2n+1` for `n` degrees of freedom.
pub const fn phase_dim(n: usize) -> usize {
    2 * n + 1
}

pub const W: usize = 0;

pub const fn p_slot(a: usize) -> usize {
    1 + a
}

pub const fn q_slot(n: usize, a: usize) -> usize {
    1 + n + a
}

/// Textual names of the Darboux slots in layout order.
pub fn coordinate_names(n: usize) -> Vec<String> {
    let mut names = vec![String::from("w")];
    names.extend((1..=n).map(|a| format!("p{a}")));
    names.extend((1..=n).map(|a| format!("q{a}")));
    names
}

#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxPoint {
    n: usize,
    coords: Vec<f64>,
}

impl DarbouxPoint {
    pub fn new(w: f64, p: &[f64], q: &[f64]) -> Result<Self> {
        check_dim(p.len(), q.len())?;
        let mut coords = Vec::with_capacity(phase_dim(p.len()));
        coords.push(w);
        coords.extend_from_slice(p);
        coords.extend_from_slice(q);
        Self::from_coords(p.len(), coords)
    }

    pub fn from_coords(n: usize, coords: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be ≥ 1".into()));
        }
        check_dim(phase_dim(n), coords.len())?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinate in {coords:?}")));
        }
        Ok(DarbouxPoint { n, coords })
    }

    pub fn origin(n: usize) -> Result<Self> {
        Self::from_coords(n, vec![0.0; phase_dim(n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        phase_dim(self.n)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn w(&self) -> f64 {
        self.coords[W]
    }

    pub fn p(&self) -> &[f64] {
        &self.coords[1..=self.n]
    }

    pub fn q(&self) -> &[f64] {
        &self.coords[1 + self.n..]
    }
}

/// Components on `(∂_w, ∂_{p_a}, ∂_{q^a})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    n: usize,
    coords: Vec<f64>,
}

impl TangentVector {
    pub fn new(n: usize, coords: Vec<f64>) -> Result<Self> {
        check_dim(phase_dim(n), coords.len())?;
        Ok(TangentVector { n, coords })
    }

    pub fn zero(n: usize) -> Self {
        TangentVector { n, coords: vec![0.0; phase_dim(n)] }
    }

    /// Unit vector along coordinate slot `k`.
    pub fn coordinate(n: usize, k: usize) -> Self {
        let mut v = Self::zero(n);
        v.coords[k] = 1.0;
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm_max(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn max_abs_diff(&self, other: &TangentVector) -> f64 {
        self.coords.iter().zip(&other.coords).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scaled(&self, k: f64) -> Self {
        TangentVector { n: self.n, coords: self.coords.iter().map(|c| c * k).collect() }
    }
}

impl Add for &TangentVector {
    type Output = TangentVector;
    fn add(self, rhs: &TangentVector) -> TangentVector {
        assert_eq!(self.n, rhs.n, "tangent vectors of different dimension");
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect();
        TangentVector { n: self.n, coords }
    }
}

impl Sub for &TangentVector {
    type Output = TangentVector;
    fn sub(self, rhs: &TangentVector) -> TangentVector {
        assert_eq!(self.n, rhs.n, "tangent vectors of different dimension");
        let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect();
        TangentVector { n: self.n, coords }
    }
}

impl Mul<&TangentVector> for f64 {
    type Output = TangentVector;
    fn mul(self, rhs: &TangentVector) -> TangentVector {
        rhs.scaled(self)
    }
}

impl Neg for &TangentVector {
    type Output = TangentVector;
    fn neg(self) -> TangentVector {
        self.scaled(-1.0)
    }
}

/// Components on `(dw, dp_a, dq^a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentVector {
    n: usize,
    coords: Vec<f64>,
}

impl CotangentVector {
    pub fn new(n: usize, coords: Vec<f64>) -> Result<Self> {
        check_dim(phase_dim(n), coords.len())?;
        Ok(CotangentVector { n, coords })
    }

    pub fn zero(n: usize) -> Self {
        CotangentVector { n, coords: vec![0.0; phase_dim(n)] }
    }

    pub fn coordinate(n: usize, k: usize) -> Self {
        let mut v = Self::zero(n);
        v.coords[k] = 1.0;
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn scaled(&self, k: f64) -> Self {
        CotangentVector { n: self.n, coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// `⟨α, X⟩`.
    pub fn pair(&self, x: &TangentVector) -> Result<f64> {
        check_dim(self.coords.len(), x.coords.len())?;
        Ok(self.coords.iter().zip(&x.coords).map(|(a, b)| a * b).sum())
    }

    pub fn max_abs_diff(&self, other: &CotangentVector) -> f64 {
        self.coords.iter().zip(&other.coords).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Components of a tangent vector in the adapted frame:
/// `X = X_ξ ξ + Σ (X^p_a P^a + X_q^a Q_a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedComponents {
    pub xi: f64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

pub fn to_adapted(x: &TangentVector, at: &DarbouxPoint) -> Result<AdaptedComponents> {
    check_dim(at.dim(), x.coords.len())?;
    let n = at.n;
    let c = &x.coords;
    let xq = c[1 + n..].to_vec();
    let xi = c[W] + at.p().iter().zip(&xq).map(|(p, v)| p * v).sum::<f64>();
    Ok(AdaptedComponents { xi, p: c[1..=n].to_vec(), q: xq })
}

pub fn from_adapted(adapted: &AdaptedComponents, at: &DarbouxPoint) -> Result<TangentVector> {
    let n = at.n;
    check_dim(n, adapted.p.len())?;
    check_dim(n, adapted.q.len())?;
    let mut coords = vec![0.0; at.dim()];
    coords[W] = adapted.xi - at.p().iter().zip(&adapted.q).map(|(p, v)| p * v).sum::<f64>();
    coords[1..=n].copy_from_slice(&adapted.p);
    coords[1 + n..].copy_from_slice(&adapted.q);
    Ok(TangentVector { n, coords })
}

/// Exact differential `df` at a point.
pub fn differentiate<F: Field>(f: &F, at: &DarbouxPoint) -> Result<CotangentVector> {
    let grad = field::gradient(f, at.coords())?;
    Ok(CotangentVector { n: at.n, coords: grad })
}

/// Second-derivative matrix of `f` in coordinate basis.
pub fn second_derivative<F: Field>(f: &F, at: &DarbouxPoint) -> Result<SquareMatrix> {
    let h = field::hessian(f, at.coords())?;
    Ok(SquareMatrix::from_row_major(at.dim(), h))
}

/// Central-difference estimate of `X(f)`, independent of the dual path.
pub fn directional_difference<F: Field>(f: &F, at: &DarbouxPoint, x: &TangentVector) -> Result<f64> {
    check_dim(at.dim(), x.coords.len())?;
    let scale = x.norm_max().max(1e-300);
    let base = at.coords().iter().fold(1.0f64, |m, c| m.max(c.abs()));
    let h = 1e-6 * base / scale;
    let shifted =
        |sign: f64| -> Vec<f64> { at.coords().iter().zip(&x.coords).map(|(c, v)| c + sign * h * v).collect() };
    let plus = field::value(f, &shifted(1.0))?;
    let minus = field::value(f, &shifted(-1.0))?;
    Ok((plus - minus) / (2.0 * h))
}
