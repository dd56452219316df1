//! Thermodynamics on the phase space: fundamental relations and their
//! Legendre submanifolds, Hessian (Weinhold and Ruppeiner) metrics,
//! representations in physical variables, and process lengths.
//!
//! A fundamental relation `f(q)` embeds as `w = f(q)`, `p_a = −∂f/∂q^a`.
//! In the energy representation this gives `p = (−T, p_mech)`; in the
//! entropy representation `p = (−1/T, −p_mech/T)`.

mod models;
mod process;
mod representation;

pub use models::{
    first_law_residual, IdealGas, IdealGasEnergy, IdealGasEntropy, Quadratic, VanDerWaals, VdwEnergy, VdwEntropy,
};
pub use process::{process_length, ExprCurve, LinearProcess, MetricSelector, Polyline, ProcessCurve, ProcessLength};
pub use representation::{
    conformal_check, representation_change, ConformalCheck, PhysicalState, Representation, RepresentationChange,
    RepresentationKind, PHYSICAL_NAMES,
};

use alloc::vec::Vec;

use crate::chart::{p_slot, phase_dim, q_slot, DarbouxPoint, W};
use crate::error::{check_dim, Error, Result};
use crate::expr::Expr;
use crate::field::{self, Field};
use crate::linalg::SquareMatrix;
use crate::structure::metric_g;

/// A potential of `n` independent variables with an admissible domain.
/// Derivatives of every order come from [`Field`].
pub trait FundamentalRelation: Field {
    fn arity(&self) -> usize;
    fn in_domain(&self, q: &[f64]) -> bool;
}

impl<F: FundamentalRelation + ?Sized> FundamentalRelation for &F {
    fn arity(&self) -> usize {
        (**self).arity()
    }

    fn in_domain(&self, q: &[f64]) -> bool {
        (**self).in_domain(q)
    }
}

/// Relations written in the expression language. The domain is wherever
/// value and gradient evaluate to finite numbers.
impl FundamentalRelation for Expr {
    fn arity(&self) -> usize {
        self.vars().len()
    }

    fn in_domain(&self, q: &[f64]) -> bool {
        q.len() == self.arity() && field::value_and_gradient(self, q).is_ok()
    }
}

pub(crate) fn check_domain<F: FundamentalRelation + ?Sized>(f: &F, q: &[f64]) -> Result<()> {
    check_dim(f.arity(), q.len())?;
    if f.in_domain(q) {
        Ok(())
    } else {
        Err(Error::Domain { reason: "outside the relation's domain", coords: q.to_vec() })
    }
}

/// The point `(f(q), −∇f(q), q)` of the Legendre submanifold.
pub fn legendre_embed<F: FundamentalRelation>(f: &F, q: &[f64]) -> Result<DarbouxPoint> {
    check_domain(f, q)?;
    let (w, grad) = field::value_and_gradient(f, q)?;
    let p: Vec<f64> = grad.iter().map(|g| -g).collect();
    DarbouxPoint::new(w, &p, q)
}

/// Jacobian of the embedding, `(2n+1)×n` row-major: column `b` is the
/// pushforward of `∂_{q^b}`.
pub fn embedding_jacobian<F: FundamentalRelation>(f: &F, q: &[f64]) -> Result<Vec<f64>> {
    check_domain(f, q)?;
    let n = q.len();
    let grad = field::gradient(f, q)?;
    let hess = field::hessian(f, q)?;
    let mut j = alloc::vec![0.0; phase_dim(n) * n];
    for b in 0..n {
        j[W * n + b] = grad[b];
        for a in 0..n {
            j[p_slot(a) * n + b] = -hess[a * n + b];
        }
        j[q_slot(n, b) * n + b] = 1.0;
    }
    Ok(j)
}

/// `Hess f(q)`: Weinhold's metric for `u(s,v)`, Ruppeiner's for `s(u,v)`.
pub fn pullback_metric<F: FundamentalRelation>(f: &F, q: &[f64]) -> Result<SquareMatrix> {
    check_domain(f, q)?;
    Ok(SquareMatrix::from_row_major(q.len(), field::hessian(f, q)?))
}

/// `Jᵀ G J`: the Mrugała metric restricted to the Legendre submanifold.
pub fn pullback_of_g<F: FundamentalRelation>(f: &F, q: &[f64]) -> Result<SquareMatrix> {
    let at = legendre_embed(f, q)?;
    let j = embedding_jacobian(f, q)?;
    let g = metric_g(&at);
    let n = q.len();
    let d = phase_dim(n);
    Ok(SquareMatrix::from_fn(n, |a, b| {
        let mut acc = 0.0;
        for i in 0..d {
            for k in 0..d {
                acc += j[i * n + a] * g.matrix()[(i, k)] * j[k * n + b];
            }
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::TangentVector;
    use crate::contact::eta;
    use crate::expr::VarTable;

    #[test]
    fn quadratic_embedding() {
        let f = Quadratic { n: 2 };
        let at = legendre_embed(&f, &[1.0, 2.0]).unwrap();
        assert_eq!(at.w(), 2.5);
        assert_eq!(at.p(), &[-1.0, -2.0]);
        assert_eq!(pullback_metric(&f, &[1.0, 2.0]).unwrap(), SquareMatrix::identity(2));
    }

    #[test]
    fn toy_gas_embedding_and_hessians() {
        let gas = IdealGas::new(1.0, 1.0).unwrap();
        let at = legendre_embed(&gas.energy(), &[0.0, 1.0]).unwrap();
        assert!((at.w() - 1.0).abs() < 1e-15);
        assert!((at.p()[0] + 1.0).abs() < 1e-15);
        assert!((at.p()[1] - 1.0).abs() < 1e-15);

        let gw = pullback_metric(&gas.energy(), &[0.0, 1.0]).unwrap();
        let expected = SquareMatrix::from_row_major(2, alloc::vec![1.0, -1.0, -1.0, 2.0]);
        assert!(gw.max_abs_diff(&expected) < 1e-14);

        let (u, v) = (1.7, 0.4);
        let gr = pullback_metric(&gas.entropy(), &[u, v]).unwrap();
        let expected = SquareMatrix::from_row_major(2, alloc::vec![-1.0 / (u * u), 0.0, 0.0, -1.0 / (v * v)]);
        assert!(gr.max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn embedding_tangents_are_horizontal() {
        let m = VanDerWaals::new(1.0, 1.0, 1.5, 1.0).unwrap();
        let q = [0.8, 2.5];
        let at = legendre_embed(&m.entropy(), &q).unwrap();
        let j = embedding_jacobian(&m.entropy(), &q).unwrap();
        for b in 0..2 {
            let col: Vec<f64> = (0..5).map(|i| j[i * 2 + b]).collect();
            let x = TangentVector::new(2, col).unwrap();
            assert!(eta(&at, &x).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn pullback_of_g_is_hessian() {
        let m = VanDerWaals::new(1.0, 1.0, 1.5, 1.0).unwrap();
        for q in [[0.8, 2.5], [3.0, 4.0]] {
            let a = pullback_of_g(&m.entropy(), &q).unwrap();
            let b = pullback_metric(&m.entropy(), &q).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn expression_relations_and_domain_errors() {
        let vars = VarTable::new(["s", "v"]).unwrap();
        let f = Expr::parse("exp(s)/v", &vars).unwrap();
        let gas = IdealGas::new(1.0, 1.0).unwrap();
        let a = pullback_metric(&f, &[0.3, 1.4]).unwrap();
        let b = pullback_metric(&gas.energy(), &[0.3, 1.4]).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-13);
        assert!(matches!(legendre_embed(&f, &[0.3, 0.0]), Err(Error::Domain { .. })));
        assert!(matches!(legendre_embed(&gas.entropy(), &[-1.0, 1.0]), Err(Error::Domain { .. })));
        assert!(matches!(legendre_embed(&f, &[0.3]), Err(Error::DimensionMismatch { .. })));
    }
}
