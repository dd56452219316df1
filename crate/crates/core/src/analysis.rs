//! Levi-Civita geometry of metric fields: Christoffel symbols, scalar
//! curvature, the covariant derivative of the Reeb field, and curvature
//! scans toward the van der Waals critical point.
//!
//! Metric components are evaluated over nested dual numbers, so first and
//! second metric derivatives are exact. Curvature convention:
//! `R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}`,
//! `R_{σν} = R^ρ_{σρν}`, `R = g^{σν}R_{σν}`; the unit sphere has `R = 2`.

use alloc::vec;
use alloc::vec::Vec;

use crate::chart::{p_slot, phase_dim, q_slot, DarbouxPoint, W};
use crate::contact::adapted_frame;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::field::{self, EvalError, Field};
use crate::linalg::{invert_generic, SquareMatrix};
use crate::real::{Dual, Real};
use crate::structure::phi;
use crate::thermo::{FundamentalRelation, VanDerWaals};

/// A symmetric `m×m` metric whose components evaluate over any [`Real`].
pub trait MetricField {
    fn dim(&self) -> usize;
    /// Row-major components at `x`.
    fn components<T: Real>(&self, x: &[T]) -> core::result::Result<Vec<T>, EvalError>;
}

impl<M: MetricField + ?Sized> MetricField for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn components<T: Real>(&self, x: &[T]) -> core::result::Result<Vec<T>, EvalError> {
        (**self).components(x)
    }
}

/// `Hess f`, the pullback of `G` to the Legendre submanifold of `f`.
#[derive(Clone, Debug)]
pub struct HessianMetric<F>(pub F);

impl<F: FundamentalRelation> MetricField for HessianMetric<F> {
    fn dim(&self) -> usize {
        self.0.arity()
    }

    fn components<T: Real>(&self, x: &[T]) -> core::result::Result<Vec<T>, EvalError> {
        let primal: Vec<f64> = x.iter().map(|v| v.value()).collect();
        if !self.0.in_domain(&primal) {
            return Err(EvalError::Domain { expr: "fundamental relation".into(), reason: "outside domain" });
        }
        field::hessian(&self.0, x)
    }
}

/// The Mrugała metric `G` on the `(2n+1)`-dimensional phase space. Its
/// components are polynomials in `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MrugalaField {
    pub n: usize,
}

impl MetricField for MrugalaField {
    fn dim(&self) -> usize {
        phase_dim(self.n)
    }

    fn components<T: Real>(&self, x: &[T]) -> core::result::Result<Vec<T>, EvalError> {
        let d = self.dim();
        if x.len() != d {
            return Err(EvalError::Arity { expected: d, got: x.len() });
        }
        let mut eta = vec![T::zero(); d];
        eta[W] = T::one();
        for a in 0..self.n {
            eta[q_slot(self.n, a)] = x[p_slot(a)];
        }
        let mut g: Vec<T> = (0..d * d).map(|idx| eta[idx / d] * eta[idx % d]).collect();
        for a in 0..self.n {
            let (i, j) = (p_slot(a), q_slot(self.n, a));
            g[i * d + j] = g[i * d + j] - T::constant(0.5);
            g[j * d + i] = g[j * d + i] - T::constant(0.5);
        }
        Ok(g)
    }
}

/// Metric given by expressions for each component; the matrix is
/// symmetrised as `½(g + gᵀ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprMetric {
    m: usize,
    entries: Vec<Expr>,
}

impl ExprMetric {
    pub fn new(m: usize, entries: Vec<Expr>) -> Result<Self> {
        if entries.len() != m * m {
            return Err(Error::DimensionMismatch { expected: m * m, got: entries.len() });
        }
        if entries.iter().any(|e| e.vars().len() != m) {
            return Err(Error::InvalidInput(alloc::format!("components must depend on {m} variables")));
        }
        Ok(ExprMetric { m, entries })
    }
}

impl MetricField for ExprMetric {
    fn dim(&self) -> usize {
        self.m
    }

    fn components<T: Real>(&self, x: &[T]) -> core::result::Result<Vec<T>, EvalError> {
        let m = self.m;
        let raw = self.entries.iter().map(|e| e.eval(x)).collect::<core::result::Result<Vec<_>, _>>()?;
        Ok((0..m * m)
            .map(|idx| {
                let (i, j) = (idx / m, idx % m);
                (raw[i * m + j] + raw[j * m + i]).scale(0.5)
            })
            .collect())
    }
}

/// Metric components at a point as a matrix.
pub fn metric_matrix<M: MetricField>(g: &M, x: &[f64]) -> Result<SquareMatrix> {
    check_point(g, x)?;
    Ok(SquareMatrix::from_row_major(g.dim(), g.components(x)?))
}

/// `max|λ| / min|λ|` of the metric at `x`.
pub fn condition_number<M: MetricField>(g: &M, x: &[f64]) -> Result<f64> {
    let ev = metric_matrix(g, x)?.symmetric_eigenvalues();
    let max = ev.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let min = ev.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
    Ok(max / min)
}

fn check_point<M: MetricField>(g: &M, x: &[f64]) -> Result<()> {
    if x.len() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: x.len() });
    }
    Ok(())
}

fn seeded<T: Real>(x: &[T], l: usize) -> Vec<Dual<T>> {
    x.iter().enumerate().map(|(i, &v)| if i == l { Dual::variable(v) } else { Dual::lift(v) }).collect()
}

fn singular(x: &[f64]) -> Error {
    Error::SingularMetric { coords: x.to_vec() }
}

/// Metric values and `∂_l g_ij`, laid out `dg[(l*m + i)*m + j]`.
fn metric_and_derivatives<M: MetricField, T: Real>(
    g: &M,
    x: &[T],
) -> core::result::Result<(Vec<T>, Vec<T>), EvalError> {
    let m = g.dim();
    let mut values = Vec::new();
    let mut dg = vec![T::zero(); m * m * m];
    for l in 0..m {
        let comps = g.components(&seeded(x, l))?;
        if l == 0 {
            values = comps.iter().map(|c| c.re).collect();
        }
        for (idx, c) in comps.iter().enumerate() {
            dg[l * m * m + idx] = c.du;
        }
    }
    Ok((values, dg))
}

fn christoffel_generic<M: MetricField, T: Real>(g: &M, x: &[T]) -> Result<Vec<T>> {
    let m = g.dim();
    let primal: Vec<f64> = x.iter().map(|v| v.value()).collect();
    let (values, dg) = metric_and_derivatives(g, x)?;
    let inv = invert_generic(&values, m).ok_or_else(|| singular(&primal))?;
    let d = |l: usize, i: usize, j: usize| dg[(l * m + i) * m + j];
    let mut gamma = vec![T::zero(); m * m * m];
    for k in 0..m {
        for i in 0..m {
            for j in i..m {
                let mut acc = T::zero();
                for l in 0..m {
                    let term = d(i, l, j) + d(j, l, i) - d(l, i, j);
                    acc = acc + inv[k * m + l] * term;
                }
                let v = acc.scale(0.5);
                gamma[(k * m + i) * m + j] = v;
                gamma[(k * m + j) * m + i] = v;
            }
        }
    }
    Ok(gamma)
}

fn ensure_invertible<M: MetricField>(g: &M, x: &[f64]) -> Result<()> {
    let mat = metric_matrix(g, x)?;
    let scale = mat.max_abs().max(f64::MIN_POSITIVE);
    let det = mat.determinant();
    if !det.is_finite() || det.abs() <= 1e-13 * libm::pow(scale, g.dim() as f64) {
        return Err(singular(x));
    }
    Ok(())
}

/// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{lj} + ∂_j g_{li} − ∂_l g_{ij})`, laid out
/// `out[(k*m + i)*m + j]`.
pub fn christoffel<M: MetricField>(g: &M, x: &[f64]) -> Result<Vec<f64>> {
    ensure_invertible(g, x)?;
    christoffel_generic(g, x)
}

/// Riemann tensor `R^ρ_{σμν}` laid out `out[((ρ*m + σ)*m + μ)*m + ν]`.
pub fn riemann<M: MetricField>(g: &M, x: &[f64]) -> Result<Vec<f64>> {
    ensure_invertible(g, x)?;
    let m = g.dim();
    let gamma = christoffel_generic(g, x)?;
    // dgamma[(l*m^3) + (k*m + i)*m + j] = ∂_l Γ^k_{ij}
    let mut dgamma = vec![0.0; m * m * m * m];
    for l in 0..m {
        let g_l = christoffel_generic(g, &seeded(x, l))?;
        for (idx, v) in g_l.iter().enumerate() {
            dgamma[l * m * m * m + idx] = v.du;
        }
    }
    let gm = |k: usize, i: usize, j: usize| gamma[(k * m + i) * m + j];
    let dgm = |l: usize, k: usize, i: usize, j: usize| dgamma[l * m * m * m + (k * m + i) * m + j];
    let mut out = vec![0.0; m * m * m * m];
    for rho in 0..m {
        for sigma in 0..m {
            for mu in 0..m {
                for nu in 0..m {
                    let mut v = dgm(mu, rho, nu, sigma) - dgm(nu, rho, mu, sigma);
                    for lam in 0..m {
                        v += gm(rho, mu, lam) * gm(lam, nu, sigma) - gm(rho, nu, lam) * gm(lam, mu, sigma);
                    }
                    out[((rho * m + sigma) * m + mu) * m + nu] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Ricci scalar `R = g^{σν} R^ρ_{σρν}`.
pub fn scalar_curvature<M: MetricField>(g: &M, x: &[f64]) -> Result<f64> {
    let m = g.dim();
    let riem = riemann(g, x)?;
    let inv = metric_matrix(g, x)?.inverse().ok_or_else(|| singular(x))?;
    let mut r = 0.0;
    for sigma in 0..m {
        for nu in 0..m {
            let ricci: f64 = (0..m).map(|rho| riem[((rho * m + sigma) * m + rho) * m + nu]).sum();
            r += inv[(sigma, nu)] * ricci;
        }
    }
    if r.is_finite() {
        Ok(r)
    } else {
        Err(singular(x))
    }
}

/// Outcome of fitting `∇_X ξ = c ΦX` over the adapted frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReebDiagnostic {
    pub c: f64,
    /// `max |∇_X ξ − cΦX|` over the frame.
    pub residual: f64,
}

/// `∇_X ξ` under the Levi-Civita connection of `G`. With `ξ = ∂_w`
/// constant, `(∇_X ξ)^k = Γ^k_{iw} X^i`.
pub fn reeb_covariant_derivative(at: &DarbouxPoint, x: &[f64]) -> Result<Vec<f64>> {
    let g = MrugalaField { n: at.n() };
    let m = g.dim();
    if x.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x.len() });
    }
    let gamma = christoffel(&g, at.coords())?;
    Ok((0..m).map(|k| (0..m).map(|i| gamma[(k * m + i) * m + W] * x[i]).sum()).collect())
}

/// Least-squares `c` in `∇_X ξ = c ΦX` over `ξ, P^a, Q_a`, with the worst
/// residual.
pub fn reeb_covariant_diagnostic(at: &DarbouxPoint) -> Result<ReebDiagnostic> {
    let frame = adapted_frame(at);
    let mut pairs = Vec::with_capacity(frame.len());
    for x in &frame {
        let nabla = reeb_covariant_derivative(at, x.coords())?;
        let phix = phi(at, x)?;
        pairs.push((nabla, phix.coords().to_vec()));
    }
    let num: f64 = pairs.iter().map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()).sum();
    let den: f64 = pairs.iter().map(|(_, b)| b.iter().map(|y| y * y).sum::<f64>()).sum();
    let c = num / den;
    let residual =
        pairs.iter().flat_map(|(a, b)| a.iter().zip(b).map(move |(x, y)| (x - c * y).abs())).fold(0.0, f64::max);
    Ok(ReebDiagnostic { c, residual })
}

/// Scalar curvature at each point of a path.
pub fn curvature_along<M: MetricField>(g: &M, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    points.iter().map(|x| scalar_curvature(g, x)).collect()
}

/// Temperatures from `1.5 T_c` down to `(1+ε) T_c`, geometrically spaced
/// in `T − T_c` so the approach to the critical point is resolved.
pub fn scan_temperatures(tc: f64, epsilon: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(Error::InvalidInput(alloc::format!("samples must be at least 2, got {samples}")));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidInput(alloc::format!("epsilon must lie in (0, 0.5), got {epsilon}")));
    }
    let (a, b) = (libm::log(0.5), libm::log(epsilon));
    Ok((0..samples)
        .map(|k| {
            let f = k as f64 / (samples - 1) as f64;
            tc * (1.0 + libm::exp(a + f * (b - a)))
        })
        .collect())
}

/// `(T, R)` for the Ruppeiner metric `Hess s(u,v)` of a van der Waals
/// fluid along the critical isochore `v = v_c`.
pub fn curvature_scan(model: &VanDerWaals, epsilon: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
    let vc = model.critical_volume();
    let metric = HessianMetric(model.entropy());
    scan_temperatures(model.critical_temperature(), epsilon, samples)?
        .into_iter()
        .map(|t| {
            let x = [model.energy_at(t, vc), vc];
            if !model.entropy().in_domain(&x) {
                return Err(Error::Domain { reason: "scan leaves the model domain", coords: x.to_vec() });
            }
            Ok((t, scalar_curvature(&metric, &x)?))
        })
        .collect()
}
