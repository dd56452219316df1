//! Curves in the phase space and their length under `G` or a gauged `G′`.
//! The metric is indefinite, so the integrand is `√|G(γ̇,γ̇)|` and the sign
//! of `G(γ̇,γ̇)` is reported per step.

use alloc::vec::Vec;

use crate::chart::{DarbouxPoint, TangentVector};
use crate::error::{check_dim, Error, Result};
use crate::expr::{Expr, VarTable};
use crate::field;
use crate::gauge::{transform, GaugeFactor};
use crate::structure::{metric_apply, metric_g};

pub trait ProcessCurve {
    fn n(&self) -> usize;
    fn interval(&self) -> (f64, f64);
    fn position(&self, t: f64) -> Result<DarbouxPoint>;
    fn velocity(&self, t: f64) -> Result<TangentVector>;
}

/// Straight segment `start → end` over `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProcess {
    start: DarbouxPoint,
    end: DarbouxPoint,
}

impl LinearProcess {
    pub fn new(start: DarbouxPoint, end: DarbouxPoint) -> Result<Self> {
        check_dim(start.n(), end.n())?;
        Ok(LinearProcess { start, end })
    }
}

fn lerp(a: &DarbouxPoint, b: &DarbouxPoint, t: f64) -> Result<DarbouxPoint> {
    let c = a.coords().iter().zip(b.coords()).map(|(x, y)| x + t * (y - x)).collect();
    DarbouxPoint::from_coords(a.n(), c)
}

fn difference(a: &DarbouxPoint, b: &DarbouxPoint, scale: f64) -> Result<TangentVector> {
    let c = a.coords().iter().zip(b.coords()).map(|(x, y)| scale * (y - x)).collect();
    TangentVector::new(a.n(), c)
}

impl ProcessCurve for LinearProcess {
    fn n(&self) -> usize {
        self.start.n()
    }

    fn interval(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn position(&self, t: f64) -> Result<DarbouxPoint> {
        lerp(&self.start, &self.end, t)
    }

    fn velocity(&self, _t: f64) -> Result<TangentVector> {
        difference(&self.start, &self.end, 1.0)
    }
}

/// Piecewise-linear path through its vertices, parametrised over `[0, 1]`
/// with equal time per segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    vertices: Vec<DarbouxPoint>,
}

impl Polyline {
    pub fn new(vertices: Vec<DarbouxPoint>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput("a polyline needs at least two vertices".into()));
        }
        let n = vertices[0].n();
        for v in &vertices {
            check_dim(n, v.n())?;
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[DarbouxPoint] {
        &self.vertices
    }

    fn segment(&self, t: f64) -> (usize, f64) {
        let k = (self.vertices.len() - 1) as f64;
        let x = (t * k).clamp(0.0, k);
        let i = (libm::floor(x) as usize).min(self.vertices.len() - 2);
        (i, x - i as f64)
    }
}

impl ProcessCurve for Polyline {
    fn n(&self) -> usize {
        self.vertices[0].n()
    }

    fn interval(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn position(&self, t: f64) -> Result<DarbouxPoint> {
        let (i, local) = self.segment(t);
        lerp(&self.vertices[i], &self.vertices[i + 1], local)
    }

    fn velocity(&self, t: f64) -> Result<TangentVector> {
        let (i, _) = self.segment(t);
        let k = (self.vertices.len() - 1) as f64;
        difference(&self.vertices[i], &self.vertices[i + 1], k)
    }
}

/// Curve whose `2n+1` coordinates are expressions in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprCurve {
    n: usize,
    components: Vec<Expr>,
    t0: f64,
    t1: f64,
}

impl ExprCurve {
    /// The variable table every component must be parsed against.
    pub fn vars() -> VarTable {
        VarTable::new(["t"]).expect("valid name")
    }

    pub fn new(n: usize, components: Vec<Expr>, t0: f64, t1: f64) -> Result<Self> {
        check_dim(2 * n + 1, components.len())?;
        if components.iter().any(|c| c.vars().len() != 1) {
            return Err(Error::InvalidInput("curve components must depend on `t` only".into()));
        }
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(Error::InvalidInput("curve interval must satisfy t0 < t1".into()));
        }
        Ok(ExprCurve { n, components, t0, t1 })
    }
}

impl ProcessCurve for ExprCurve {
    fn n(&self) -> usize {
        self.n
    }

    fn interval(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    fn position(&self, t: f64) -> Result<DarbouxPoint> {
        let c = self.components.iter().map(|e| field::value(e, &[t])).collect::<core::result::Result<Vec<_>, _>>()?;
        DarbouxPoint::from_coords(self.n, c)
    }

    fn velocity(&self, t: f64) -> Result<TangentVector> {
        let c =
            self.components.iter().map(|e| field::partial(e, &[t], 0)).collect::<core::result::Result<Vec<_>, _>>()?;
        TangentVector::new(self.n, c)
    }
}

/// Which metric measures the curve.
#[derive(Clone, Debug)]
pub enum MetricSelector {
    Mrugala,
    /// `G′` after the gauge `Ω`.
    Gauged(GaugeFactor<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProcessLength {
    pub length: f64,
    /// Sign of `G(γ̇,γ̇)` at each midpoint: `1`, `-1`, or `0` when null to
    /// rounding.
    pub signs: Vec<i8>,
}

/// Composite-midpoint integral of `√|G(γ̇,γ̇)|` with `steps ≥ 2` panels.
pub fn process_length<C: ProcessCurve + ?Sized>(
    curve: &C,
    metric: &MetricSelector,
    steps: usize,
) -> Result<ProcessLength> {
    if steps < 2 {
        return Err(Error::InvalidInput(alloc::format!("steps must be at least 2, got {steps}")));
    }
    let (t0, t1) = curve.interval();
    let h = (t1 - t0) / steps as f64;
    let mut length = 0.0;
    let mut signs = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = t0 + (k as f64 + 0.5) * h;
        let at = curve.position(t)?;
        let v = curve.velocity(t)?;
        let g = match metric {
            MetricSelector::Mrugala => metric_apply(&metric_g(&at), &v, &v)?,
            MetricSelector::Gauged(omega) => transform(&at, omega)?.g_prime(&v, &v)?,
        };
        let scale = v.norm_max() * v.norm_max();
        let sign = if g.abs() <= 1e-14 * scale.max(1.0) {
            0
        } else if g > 0.0 {
            1
        } else {
            -1
        };
        signs.push(sign);
        length += libm::sqrt(g.abs()) * h;
    }
    Ok(ProcessLength { length, signs })
}
