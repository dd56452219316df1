//! Energy and entropy representations of a closed simple system as charts
//! on the five-dimensional phase space, written over the physical
//! variables `(u, s, v, T, p)`.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::chart::DarbouxPoint;
use crate::contact::{eta_form, horizontal_basis, reeb};
use crate::error::{Error, Result};
use crate::expr::{Expr, VarTable};
use crate::field;
use crate::gauge::{transform, GaugeFactor, GaugedStructure, SINGULARITY_THRESHOLD};
use crate::linalg::SquareMatrix;
use crate::structure::{metric_g, phi_endo, EndoAtPoint, MetricAtPoint};

use super::{check_domain, FundamentalRelation};

/// Physical coordinate names, in coordinate order.
pub const PHYSICAL_NAMES: [&str; 5] = ["u", "s", "v", "T", "p"];

const U: usize = 0;
const S: usize = 1;
const V: usize = 2;
const T: usize = 3;
const P: usize = 4;

/// A point of the phase space in physical variables. The five values are
/// independent: the point need not lie on any equation of state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalState {
    pub u: f64,
    pub s: f64,
    pub v: f64,
    pub t: f64,
    pub p: f64,
}

impl PhysicalState {
    pub fn new(u: f64, s: f64, v: f64, t: f64, p: f64) -> Self {
        PhysicalState { u, s, v, t, p }
    }

    pub fn coords(&self) -> [f64; 5] {
        [self.u, self.s, self.v, self.t, self.p]
    }

    fn require_temperature(&self) -> Result<()> {
        if self.t.is_finite() && self.t.abs() > SINGULARITY_THRESHOLD {
            Ok(())
        } else {
            Err(Error::ChartSingularity { reason: "T = 0", coords: self.coords().to_vec() })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepresentationKind {
    Energy,
    Entropy,
    Custom,
}

/// Darboux coordinates `(w, p1, p2, q1, q2)` as functions of the physical
/// variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    kind: RepresentationKind,
    map: Vec<Expr>,
}

fn physical_table() -> VarTable {
    VarTable::new(PHYSICAL_NAMES).expect("valid names")
}

fn parse_map(sources: [&str; 5]) -> core::result::Result<Vec<Expr>, Error> {
    let vars = physical_table();
    sources.iter().map(|src| Expr::parse(src, &vars).map_err(|e| Error::InvalidInput(e.to_string()))).collect()
}

impl Representation {
    /// `w = u`, `p = (−T, p)`, `q = (s, v)`.
    pub fn energy() -> Self {
        let map = parse_map(["u", "-T", "p", "s", "v"]).expect("fixed sources parse");
        Representation { kind: RepresentationKind::Energy, map }
    }

    /// `w = s`, `p = (−1/T, −p/T)`, `q = (u, v)`.
    pub fn entropy() -> Self {
        let map = parse_map(["s", "-1/T", "-p/T", "u", "v"]).expect("fixed sources parse");
        Representation { kind: RepresentationKind::Entropy, map }
    }

    /// A chart given as five expressions over `u, s, v, T, p`, in the order
    /// `w, p1, p2, q1, q2`.
    pub fn custom(sources: [&str; 5]) -> Result<Self> {
        Ok(Representation { kind: RepresentationKind::Custom, map: parse_map(sources)? })
    }

    pub fn kind(&self) -> RepresentationKind {
        self.kind
    }

    pub fn map(&self) -> &[Expr] {
        &self.map
    }

    fn singular(&self, state: &PhysicalState) -> Error {
        Error::ChartSingularity { reason: "chart map undefined", coords: state.coords().to_vec() }
    }

    fn check_state(&self, state: &PhysicalState) -> Result<()> {
        if self.kind == RepresentationKind::Entropy {
            state.require_temperature()?;
        }
        Ok(())
    }

    pub fn darboux_point(&self, state: &PhysicalState) -> Result<DarbouxPoint> {
        self.check_state(state)?;
        let x = state.coords();
        let c = self
            .map
            .iter()
            .map(|e| field::value(e, &x).map_err(|_| self.singular(state)))
            .collect::<Result<Vec<_>>>()?;
        DarbouxPoint::from_coords(2, c)
    }

    /// `∂(w,p,q)/∂(u,s,v,T,p)`.
    pub fn jacobian(&self, state: &PhysicalState) -> Result<SquareMatrix> {
        self.check_state(state)?;
        let x = state.coords();
        let mut data = Vec::with_capacity(25);
        for e in &self.map {
            data.extend(field::gradient(e, &x).map_err(|_| self.singular(state))?);
        }
        Ok(SquareMatrix::from_row_major(5, data))
    }

    fn inverse_jacobian(&self, state: &PhysicalState) -> Result<SquareMatrix> {
        let j = self.jacobian(state)?;
        match j.inverse() {
            Some(inv) if j.determinant().abs() > SINGULARITY_THRESHOLD => Ok(inv),
            _ => Err(Error::ChartSingularity { reason: "degenerate chart Jacobian", coords: state.coords().to_vec() }),
        }
    }

    /// `η` of this chart, pulled back to physical coordinates.
    pub fn eta_physical(&self, state: &PhysicalState) -> Result<Vec<f64>> {
        let at = self.darboux_point(state)?;
        let j = self.jacobian(state)?;
        Ok(j.transpose().mul_vec(eta_form(&at).coords()))
    }

    /// `Jᵀ G J`: the chart's Mrugała metric in physical coordinates.
    pub fn metric_pullback(&self, state: &PhysicalState) -> Result<MetricAtPoint> {
        let at = self.darboux_point(state)?;
        let j = self.jacobian(state)?;
        MetricAtPoint::new(2, j.transpose().mul(metric_g(&at).matrix()).mul(&j))
    }

    /// `J⁻¹ Φ J`.
    pub fn phi_physical(&self, state: &PhysicalState) -> Result<EndoAtPoint> {
        let at = self.darboux_point(state)?;
        let j = self.jacobian(state)?;
        EndoAtPoint::new(2, self.inverse_jacobian(state)?.mul(phi_endo(&at).matrix()).mul(&j))
    }

    /// Reeb field of the chart in physical components.
    pub fn reeb_physical(&self, state: &PhysicalState) -> Result<Vec<f64>> {
        let at = self.darboux_point(state)?;
        Ok(self.inverse_jacobian(state)?.mul_vec(reeb(&at).coords()))
    }

    /// Horizontal frame `P^1, P^2, Q_1, Q_2` of the chart in physical
    /// components.
    pub fn horizontal_basis_physical(&self, state: &PhysicalState) -> Result<Vec<Vec<f64>>> {
        let at = self.darboux_point(state)?;
        let inv = self.inverse_jacobian(state)?;
        Ok(horizontal_basis(&at).iter().map(|x| inv.mul_vec(x.coords())).collect())
    }

    /// Mrugała metric in physical coordinates:
    /// energy `η_u⊗η_u + ds⊗ˢdT − dv⊗ˢdp`, entropy
    /// `η_s⊗η_s + du⊗ˢd(1/T) + dv⊗ˢd(p/T)`. Custom charts use the pullback.
    pub fn mrugala_metric(&self, state: &PhysicalState) -> Result<MetricAtPoint> {
        let m = match self.kind {
            RepresentationKind::Energy => energy_metric(state),
            RepresentationKind::Entropy => {
                state.require_temperature()?;
                entropy_metric(state)
            }
            RepresentationKind::Custom => return self.metric_pullback(state),
        };
        MetricAtPoint::new(2, m)
    }
}

fn add_sym(m: &mut SquareMatrix, i: usize, j: usize, v: f64) {
    m[(i, j)] += 0.5 * v;
    m[(j, i)] += 0.5 * v;
}

fn energy_metric(x: &PhysicalState) -> SquareMatrix {
    let eta = [1.0, -x.t, x.p, 0.0, 0.0];
    let mut m = SquareMatrix::outer(&eta, &eta);
    add_sym(&mut m, S, T, 1.0);
    add_sym(&mut m, V, P, -1.0);
    m
}

fn entropy_metric(x: &PhysicalState) -> SquareMatrix {
    let t2 = x.t * x.t;
    let eta = [-1.0 / x.t, 1.0, -x.p / x.t, 0.0, 0.0];
    let mut m = SquareMatrix::outer(&eta, &eta);
    // d(1/T) = −dT/T², d(p/T) = dp/T − p dT/T²
    add_sym(&mut m, U, T, -1.0 / t2);
    add_sym(&mut m, V, P, 1.0 / x.t);
    add_sym(&mut m, V, T, -x.p / t2);
    m
}

/// Residuals of the energy-to-entropy representation change.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationChange {
    pub energy_point: DarbouxPoint,
    /// Gauged energy-chart structure, in energy Darboux coordinates.
    pub gauged: GaugedStructure,
    /// `max |G_u′ − G_s|` over physical components.
    pub metric: f64,
    /// `max |ξ_u′ − ∂_s|`.
    pub reeb: f64,
    /// `max |Φ_u′ − Φ_s|`.
    pub phi: f64,
    /// `max |η_u′ − η_s|`.
    pub eta: f64,
    /// `max |G_s(U,V) + (1/T) G_u(U,V)|` over horizontal frame pairs.
    pub metric_restriction: f64,
    /// `max |Φ_u U − Φ_s U|` over the horizontal frame.
    pub phi_restriction: f64,
}

impl RepresentationChange {
    pub fn entries(&self) -> [(&'static str, f64); 6] {
        [
            ("g_prime_equals_g_s", self.metric),
            ("xi_prime_equals_d_s", self.reeb),
            ("phi_prime_equals_phi_s", self.phi),
            ("eta_prime_equals_eta_s", self.eta),
            ("restriction_g", self.metric_restriction),
            ("restriction_phi", self.phi_restriction),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, (_, r)| m.max(*r))
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Applies `Ω = 1/p₁ = −1/T` in the energy chart and compares every primed
/// structure with the entropy chart, in physical coordinates.
pub fn representation_change(state: &PhysicalState) -> Result<RepresentationChange> {
    state.require_temperature()?;
    let energy = Representation::energy();
    let entropy = Representation::entropy();
    let at = energy.darboux_point(state)?;
    let omega = Expr::parse("1/p1", &VarTable::darboux(2)).expect("fixed source parses");
    let gauged = transform(&at, &GaugeFactor::new(omega))?;

    let j = energy.jacobian(state)?;
    let j_inv = energy.inverse_jacobian(state)?;

    let g_prime = j.transpose().mul(gauged.g_prime.matrix()).mul(&j);
    let g_s = entropy.mrugala_metric(state)?;
    let metric = g_prime.max_abs_diff(g_s.matrix());

    let xi_prime = j_inv.mul_vec(gauged.xi_prime.coords());
    let reeb = max_abs_diff(&xi_prime, &entropy.reeb_physical(state)?);

    let phi_prime = j_inv.mul(gauged.phi_prime.matrix()).mul(&j);
    let phi_s = entropy.phi_physical(state)?;
    let phi = phi_prime.max_abs_diff(phi_s.matrix());

    let eta_prime = j.transpose().mul_vec(gauged.eta_prime.coords());
    let eta = max_abs_diff(&eta_prime, &entropy.eta_physical(state)?);

    let g_u = energy.mrugala_metric(state)?;
    let phi_u = energy.phi_physical(state)?;
    let frame = energy.horizontal_basis_physical(state)?;
    let mut metric_restriction: f64 = 0.0;
    let mut phi_restriction: f64 = 0.0;
    for x in &frame {
        for y in &frame {
            let lhs = g_s.matrix().bilinear(x, y);
            let rhs = -g_u.matrix().bilinear(x, y) / state.t;
            metric_restriction = metric_restriction.max((lhs - rhs).abs());
        }
        let a = phi_u.matrix().mul_vec(x);
        let b = phi_s.matrix().mul_vec(x);
        phi_restriction = phi_restriction.max(max_abs_diff(&a, &b));
    }

    Ok(RepresentationChange { energy_point: at, gauged, metric, reeb, phi, eta, metric_restriction, phi_restriction })
}

/// Outcome of comparing Ruppeiner and Weinhold metrics at one state.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalCheck {
    pub u: f64,
    pub temperature: f64,
    /// `Kᵀ (Hess s) K` with `K = ∂(u,v)/∂(s,v)`.
    pub transported_ruppeiner: SquareMatrix,
    /// `−(1/T) Hess u`.
    pub scaled_weinhold: SquareMatrix,
    pub residual: f64,
}

/// Largest `|u(s(u,v), v) − u|` accepted for a pair of relations.
pub const INVERSE_TOLERANCE: f64 = 1e-9;

/// Checks `g^R = −(1/T) g^W` at the state `(s, v)` after transporting
/// `g^R` from `(u,v)` to `(s,v)` coordinates.
pub fn conformal_check<E, S>(energy: &E, entropy: &S, s: f64, v: f64) -> Result<ConformalCheck>
where
    E: FundamentalRelation,
    S: FundamentalRelation,
{
    check_domain(energy, &[s, v])?;
    let (u, du) = field::value_and_gradient(energy, &[s, v])?;
    let temperature = du[0];
    if !temperature.is_finite() || temperature.abs() <= SINGULARITY_THRESHOLD {
        return Err(Error::ChartSingularity { reason: "T = 0", coords: [s, v].to_vec() });
    }
    check_domain(entropy, &[u, v])?;
    let s_back = entropy.eval(&[u, v])?;
    let u_back = energy.eval(&[s_back, v])?;
    let gap = (u_back - u).abs();
    if gap.is_nan() || gap > INVERSE_TOLERANCE {
        return Err(Error::NotInverse { residual: gap });
    }

    let k = SquareMatrix::from_row_major(2, alloc::vec![du[0], du[1], 0.0, 1.0]);
    let ruppeiner = SquareMatrix::from_row_major(2, field::hessian(entropy, &[u, v])?);
    let weinhold = SquareMatrix::from_row_major(2, field::hessian(energy, &[s, v])?);
    let transported_ruppeiner = k.transpose().mul(&ruppeiner).mul(&k);
    let scaled_weinhold = weinhold.scaled(-1.0 / temperature);
    let residual = transported_ruppeiner.max_abs_diff(&scaled_weinhold);
    Ok(ConformalCheck { u, temperature, transported_ruppeiner, scaled_weinhold, residual })
}
