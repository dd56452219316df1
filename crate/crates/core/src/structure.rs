//! The para-Sasakian data on the phase space: the Mrugała metric
//! `G = η⊗η − Σ dp_a ⊗ˢ dq^a`, its inverse, and the almost para-contact
//! map `Φ`.
//!
//! `⊗ˢ` carries a ½: `α ⊗ˢ β = ½(α⊗β + β⊗α)`. With that convention
//! `G(P^a, Q_b) = −½ δ^a_b` and `G⁻¹ = ξ⊗ξ − 4 Σ P^a ⊗ˢ Q_a`.

use crate::chart::{p_slot, q_slot, CotangentVector, DarbouxPoint, TangentVector, W};
use crate::contact::{d_eta, eta, eta_form, p_vector, q_vector, reeb};
use crate::error::{check_dim, Result};
use crate::linalg::SquareMatrix;

/// Symmetric bilinear form in coordinate basis `(dw, dp_a, dq^a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricAtPoint {
    n: usize,
    matrix: SquareMatrix,
}

impl MetricAtPoint {
    pub fn new(n: usize, matrix: SquareMatrix) -> Result<Self> {
        check_dim(2 * n + 1, matrix.dim())?;
        Ok(MetricAtPoint { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.matrix
    }

    /// `G(X,·)` as a covector.
    pub fn lower(&self, x: &TangentVector) -> Result<CotangentVector> {
        check_dim(self.matrix.dim(), x.coords().len())?;
        CotangentVector::new(self.n, self.matrix.transpose().mul_vec(x.coords()))
    }

    /// Counts of (positive, negative, zero) eigenvalues; `|λ| ≤ tol` counts
    /// as zero.
    pub fn signature(&self, tol: f64) -> (usize, usize, usize) {
        let ev = self.matrix.symmetric_eigenvalues();
        let pos = ev.iter().filter(|&&e| e > tol).count();
        let neg = ev.iter().filter(|&&e| e < -tol).count();
        (pos, neg, ev.len() - pos - neg)
    }
}

/// `Xᵀ M Y`.
pub fn metric_apply(m: &MetricAtPoint, x: &TangentVector, y: &TangentVector) -> Result<f64> {
    check_dim(m.matrix.dim(), x.coords().len())?;
    check_dim(m.matrix.dim(), y.coords().len())?;
    Ok(m.matrix.bilinear(x.coords(), y.coords()))
}

/// Linear map on the tangent space, acting on coordinate components.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoAtPoint {
    n: usize,
    matrix: SquareMatrix,
}

impl EndoAtPoint {
    pub fn new(n: usize, matrix: SquareMatrix) -> Result<Self> {
        check_dim(2 * n + 1, matrix.dim())?;
        Ok(EndoAtPoint { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &TangentVector) -> Result<TangentVector> {
        check_dim(self.matrix.dim(), x.coords().len())?;
        TangentVector::new(self.n, self.matrix.mul_vec(x.coords()))
    }

    pub fn compose(&self, rhs: &EndoAtPoint) -> EndoAtPoint {
        EndoAtPoint { n: self.n, matrix: self.matrix.mul(&rhs.matrix) }
    }
}

/// `G` at `at`. Rows and columns ordered `(w, p_1..p_n, q^1..q^n)`.
pub fn metric_g(at: &DarbouxPoint) -> MetricAtPoint {
    let n = at.n();
    let eta = eta_form(at);
    let mut m = SquareMatrix::outer(eta.coords(), eta.coords());
    for a in 0..n {
        m[(p_slot(a), q_slot(n, a))] -= 0.5;
        m[(q_slot(n, a), p_slot(a))] -= 0.5;
    }
    MetricAtPoint { n, matrix: m }
}

/// `Φ = dp_a ⊗ P^a − dq^a ⊗ Q_a` as a matrix: `Φξ = 0`, `ΦP^a = P^a`,
/// `ΦQ_a = −Q_a`.
pub fn phi_endo(at: &DarbouxPoint) -> EndoAtPoint {
    let n = at.n();
    let mut m = SquareMatrix::zeros(at.dim());
    for a in 0..n {
        m[(p_slot(a), p_slot(a))] = 1.0;
        m[(q_slot(n, a), q_slot(n, a))] = -1.0;
        m[(W, q_slot(n, a))] = at.p()[a];
    }
    EndoAtPoint { n, matrix: m }
}

pub fn phi(at: &DarbouxPoint, x: &TangentVector) -> Result<TangentVector> {
    phi_endo(at).apply(x)
}

/// `G⁻¹(α) = α(ξ) ξ − 2 Σ [α(Q_a) P^a + α(P^a) Q_a]`.
pub fn inverse_metric(at: &DarbouxPoint, alpha: &CotangentVector) -> Result<TangentVector> {
    check_dim(at.dim(), alpha.coords().len())?;
    let n = at.n();
    let mut out = reeb(at).scaled(alpha.pair(&reeb(at))?);
    for a in 0..n {
        let p = p_vector(at, a);
        let q = q_vector(at, a);
        let along_p = q.scaled(-2.0 * alpha.pair(&p)?);
        let along_q = p.scaled(-2.0 * alpha.pair(&q)?);
        out = &(&out + &along_p) + &along_q;
    }
    Ok(out)
}

/// Contravariant matrix of `G⁻¹`: column `j` is `G⁻¹(dx^j)`.
pub fn inverse_metric_matrix(at: &DarbouxPoint) -> SquareMatrix {
    let n = at.n();
    let d = at.dim();
    let mut m = SquareMatrix::zeros(d);
    for j in 0..d {
        let col = inverse_metric(at, &CotangentVector::coordinate(n, j)).expect("dimension");
        for i in 0..d {
            m[(i, j)] = col.coords()[i];
        }
    }
    m
}

/// `|G(X,Y) − η(X)η(Y) + dη(ΦX, Y)|`.
pub fn compatibility_check(at: &DarbouxPoint, x: &TangentVector, y: &TangentVector) -> Result<f64> {
    let g = metric_apply(&metric_g(at), x, y)?;
    let structural = eta(at, x)? * eta(at, y)? - d_eta(at, &phi(at, x)?, y)?;
    Ok((g - structural).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{from_adapted, AdaptedComponents};
    use crate::contact::horizontal_basis;
    use alloc::vec;

    fn pt1(p: f64) -> DarbouxPoint {
        DarbouxPoint::new(0.3, &[p], &[-1.1]).unwrap()
    }

    #[test]
    fn metric_matrix_for_one_degree_of_freedom() {
        let p = 1.7;
        let g = metric_g(&pt1(p));
        let expected = SquareMatrix::from_row_major(3, vec![1.0, 0.0, p, 0.0, 0.0, -0.5, p, -0.5, p * p]);
        assert_eq!(g.matrix(), &expected);
    }

    #[test]
    fn frame_inner_products() {
        let at = DarbouxPoint::new(0.1, &[1.2, -0.4], &[0.5, 2.0]).unwrap();
        let g = metric_g(&at);
        let xi = reeb(&at);
        assert_eq!(metric_apply(&g, &xi, &xi).unwrap(), 1.0);
        let (p1, q1) = (p_vector(&at, 0), q_vector(&at, 0));
        assert_eq!(metric_apply(&g, &p1, &p1).unwrap(), 0.0);
        assert_eq!(metric_apply(&g, &q1, &q1).unwrap(), 0.0);
        assert_eq!(metric_apply(&g, &p1, &q1).unwrap(), -0.5);
        assert_eq!(metric_apply(&g, &xi, &q1).unwrap(), 0.0);
    }

    #[test]
    fn adapted_norm_formula() {
        let at = pt1(-0.8);
        let x = from_adapted(&AdaptedComponents { xi: 2.0, p: vec![1.0], q: vec![3.0] }, &at).unwrap();
        let norm = metric_apply(&metric_g(&at), &x, &x).unwrap();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phi_on_frame() {
        let at = DarbouxPoint::new(0.1, &[1.2, -0.4], &[0.5, 2.0]).unwrap();
        assert_eq!(phi(&at, &reeb(&at)).unwrap().norm_max(), 0.0);
        let sum = &p_vector(&at, 0) + &q_vector(&at, 0);
        let diff = &p_vector(&at, 0) - &q_vector(&at, 0);
        assert_eq!(phi(&at, &sum).unwrap(), diff);
    }

    #[test]
    fn inverse_metric_examples() {
        let p = -1.3;
        let at = pt1(p);
        assert_eq!(inverse_metric(&at, &eta_form(&at)).unwrap(), reeb(&at));
        let dp = CotangentVector::coordinate(1, p_slot(0));
        assert_eq!(inverse_metric(&at, &dp).unwrap(), q_vector(&at, 0).scaled(-2.0));
        let dq = CotangentVector::coordinate(1, q_slot(1, 0));
        assert_eq!(inverse_metric(&at, &dq).unwrap(), p_vector(&at, 0).scaled(-2.0));

        let expected = SquareMatrix::from_row_major(3, vec![1.0, 2.0 * p, 0.0, 2.0 * p, 0.0, -2.0, 0.0, -2.0, 0.0]);
        assert!(inverse_metric_matrix(&at).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn compatibility_on_frame_pairs() {
        let at = DarbouxPoint::new(0.1, &[1.2, -0.4], &[0.5, 2.0]).unwrap();
        let mut frame = vec![reeb(&at)];
        frame.extend(horizontal_basis(&at));
        for x in &frame {
            for y in &frame {
                assert!(compatibility_check(&at, x, y).unwrap() < 1e-15);
            }
        }
    }

    #[test]
    fn signature_is_n_plus_one_n() {
        let at = DarbouxPoint::new(0.1, &[1.2, -0.4, 0.9], &[0.5, 2.0, -1.0]).unwrap();
        assert_eq!(metric_g(&at).signature(1e-12), (4, 3, 0));
    }
}
