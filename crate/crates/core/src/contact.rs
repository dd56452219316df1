//! The contact form `η = dw + Σ p_a dq^a`, its Reeb field, the horizontal
//! frame spanning `ker η`, and `dη`.
//!
//! Two-forms use the wedge convention with a ½ prefactor:
//! `(α∧β)(X,Y) = ½[α(X)β(Y) − α(Y)β(X)]`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::chart::{p_slot, phase_dim, q_slot, CotangentVector, DarbouxPoint, TangentVector, W};
use crate::error::{check_dim, Result};
use crate::expr::{Expr, Node, VarTable};
use crate::field::{self, Field};
use crate::linalg::SquareMatrix;

/// `η` as a covector at `at`.
pub fn eta_form(at: &DarbouxPoint) -> CotangentVector {
    let n = at.n();
    let mut c = alloc::vec![0.0; at.dim()];
    c[W] = 1.0;
    for a in 0..n {
        c[q_slot(n, a)] = at.p()[a];
    }
    CotangentVector::new(n, c).expect("layout matches dimension")
}

/// `η(X) = X_w + Σ p_a X_q^a`.
pub fn eta(at: &DarbouxPoint, x: &TangentVector) -> Result<f64> {
    eta_form(at).pair(x)
}

/// `ξ = ∂_w`.
pub fn reeb(at: &DarbouxPoint) -> TangentVector {
    TangentVector::coordinate(at.n(), W)
}

/// `P^a = ∂_{p_a}`.
pub fn p_vector(at: &DarbouxPoint, a: usize) -> TangentVector {
    TangentVector::coordinate(at.n(), p_slot(a))
}

/// `Q_a = ∂_{q^a} − p_a ∂_w`.
pub fn q_vector(at: &DarbouxPoint, a: usize) -> TangentVector {
    let n = at.n();
    let mut c = alloc::vec![0.0; at.dim()];
    c[q_slot(n, a)] = 1.0;
    c[W] = -at.p()[a];
    TangentVector::new(n, c).expect("layout matches dimension")
}

/// `P^1..P^n, Q_1..Q_n`.
pub fn horizontal_basis(at: &DarbouxPoint) -> Vec<TangentVector> {
    let n = at.n();
    (0..n).map(|a| p_vector(at, a)).chain((0..n).map(|a| q_vector(at, a))).collect()
}

/// `ξ, P^1..P^n, Q_1..Q_n`.
pub fn adapted_frame(at: &DarbouxPoint) -> Vec<TangentVector> {
    let mut frame = alloc::vec![reeb(at)];
    frame.extend(horizontal_basis(at));
    frame
}

/// Matrix `A` with `dη(X,Y) = Xᵀ A Y`. Point-independent in Darboux
/// coordinates.
pub fn d_eta_matrix(n: usize) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(phase_dim(n));
    for a in 0..n {
        m[(p_slot(a), q_slot(n, a))] = 0.5;
        m[(q_slot(n, a), p_slot(a))] = -0.5;
    }
    m
}

/// `dη(X,Y) = ½ Σ [dp_a(X) dq^a(Y) − dp_a(Y) dq^a(X)]`.
pub fn d_eta(at: &DarbouxPoint, x: &TangentVector, y: &TangentVector) -> Result<f64> {
    check_dim(at.dim(), x.coords().len())?;
    check_dim(at.dim(), y.coords().len())?;
    let n = at.n();
    let (xc, yc) = (x.coords(), y.coords());
    Ok(0.5 * (0..n).map(|a| xc[p_slot(a)] * yc[q_slot(n, a)] - yc[p_slot(a)] * xc[q_slot(n, a)]).sum::<f64>())
}

/// `(η(X) ξ, X − η(X) ξ)`.
pub fn split(at: &DarbouxPoint, x: &TangentVector) -> Result<(TangentVector, TangentVector)> {
    let vertical = reeb(at).scaled(eta(at, x)?);
    let horizontal = x - &vertical;
    Ok((vertical, horizontal))
}

/// A vector field given by one scalar field per coordinate component.
#[derive(Clone, Debug)]
pub struct VectorField<F> {
    components: Vec<F>,
}

impl<F: Field> VectorField<F> {
    pub fn new(components: Vec<F>) -> Self {
        VectorField { components }
    }

    pub fn components(&self) -> &[F] {
        &self.components
    }

    pub fn at(&self, at: &DarbouxPoint) -> Result<TangentVector> {
        check_dim(at.dim(), self.components.len())?;
        let c = self
            .components
            .iter()
            .map(|f| field::value(f, at.coords()))
            .collect::<core::result::Result<Vec<_>, _>>()?;
        TangentVector::new(at.n(), c)
    }
}

/// `[X,Y]^k = X^j ∂_j Y^k − Y^j ∂_j X^k`, with exact partials.
pub fn lie_bracket<F: Field, G: Field>(
    x: &VectorField<F>,
    y: &VectorField<G>,
    at: &DarbouxPoint,
) -> Result<TangentVector> {
    let xv = x.at(at)?;
    let yv = y.at(at)?;
    check_dim(at.dim(), y.components.len())?;
    let mut out = alloc::vec![0.0; at.dim()];
    for (k, slot) in out.iter_mut().enumerate() {
        let dy = field::gradient(&y.components[k], at.coords())?;
        let dx = field::gradient(&x.components[k], at.coords())?;
        *slot = xv.coords().iter().zip(&dy).map(|(a, b)| a * b).sum::<f64>()
            - yv.coords().iter().zip(&dx).map(|(a, b)| a * b).sum::<f64>();
    }
    TangentVector::new(at.n(), out)
}

fn constant_field(n: usize, vars: &VarTable, k: usize) -> Vec<Expr> {
    (0..phase_dim(n)).map(|i| Expr::constant(if i == k { 1.0 } else { 0.0 }, vars)).collect()
}

/// `ξ` as a vector field.
pub fn reeb_field(n: usize) -> VectorField<Expr> {
    VectorField::new(constant_field(n, &VarTable::darboux(n), W))
}

/// `P^a` as a vector field.
pub fn p_field(n: usize, a: usize) -> VectorField<Expr> {
    VectorField::new(constant_field(n, &VarTable::darboux(n), p_slot(a)))
}

/// `Q_a` as a vector field, with `w`-component `−p_a`.
pub fn q_field(n: usize, a: usize) -> VectorField<Expr> {
    let vars = VarTable::darboux(n);
    let mut comps = constant_field(n, &vars, q_slot(n, a));
    comps[W] = Expr::from_node(Node::Neg(Box::new(Node::Var(p_slot(a)))), &vars);
    VectorField::new(comps)
}

/// Determinant of `dη(B_i, B_j)` over the horizontal frame. Non-zero iff
/// `η ∧ (dη)^n ≠ 0`; equals `(¼)^n` in Darboux coordinates.
pub fn contact_nondegeneracy(at: &DarbouxPoint) -> f64 {
    let basis = horizontal_basis(at);
    let m = basis.len();
    let mut gram = SquareMatrix::zeros(m);
    for i in 0..m {
        for j in 0..m {
            gram[(i, j)] = d_eta(at, &basis[i], &basis[j]).expect("frame dimension");
        }
    }
    gram.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;

    fn pt(p: &[f64]) -> DarbouxPoint {
        let q: Vec<f64> = p.iter().map(|v| 0.3 * v + 1.0).collect();
        DarbouxPoint::new(-0.4, p, &q).unwrap()
    }

    #[test]
    fn eta_on_frame() {
        let at = pt(&[-2.0, 3.0]);
        assert_eq!(eta(&at, &reeb(&at)).unwrap(), 1.0);
        for b in horizontal_basis(&at) {
            assert_eq!(eta(&at, &b).unwrap(), 0.0);
        }
    }

    #[test]
    fn eta_coordinate_expansion() {
        let at = pt(&[-2.0]);
        let x = TangentVector::new(1, alloc::vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(eta(&at, &x).unwrap(), -1.0);
    }

    #[test]
    fn reeb_components_and_kernel_of_d_eta() {
        let at = pt(&[0.5]);
        assert_eq!(reeb(&at).coords(), &[1.0, 0.0, 0.0]);
        assert_eq!(d_eta(&at, &reeb(&at), &p_vector(&at, 0)).unwrap(), 0.0);
    }

    #[test]
    fn horizontal_basis_shapes_and_rank() {
        let at = pt(&[1.5, -0.7, 2.0]);
        let basis = horizontal_basis(&at);
        assert_eq!(basis[0].coords(), TangentVector::coordinate(3, p_slot(0)).coords());
        let q1 = &basis[3];
        assert_eq!(q1.coords()[W], -1.5);
        assert_eq!(q1.coords()[q_slot(3, 0)], 1.0);
        let flat: Vec<f64> = basis.iter().flat_map(|b| b.coords().to_vec()).collect();
        assert_eq!(rank(&flat, 6, 7, 1e-12), 6);
    }

    #[test]
    fn d_eta_half_convention_and_antisymmetry() {
        let at = pt(&[0.9, -1.2]);
        assert_eq!(d_eta(&at, &p_vector(&at, 0), &q_vector(&at, 0)).unwrap(), 0.5);
        assert_eq!(d_eta(&at, &p_vector(&at, 0), &q_vector(&at, 1)).unwrap(), 0.0);
        let x = TangentVector::new(2, alloc::vec![0.1, 0.2, -0.3, 0.4, 0.5]).unwrap();
        assert_eq!(d_eta(&at, &x, &x).unwrap(), 0.0);
        let m = d_eta_matrix(2);
        let y = TangentVector::new(2, alloc::vec![1.0, -2.0, 0.3, 0.0, 0.7]).unwrap();
        assert!((m.bilinear(x.coords(), y.coords()) - d_eta(&at, &x, &y).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn split_examples() {
        let at = pt(&[-2.0]);
        let (v, h) = split(&at, &reeb(&at)).unwrap();
        assert_eq!(v, reeb(&at));
        assert_eq!(h.norm_max(), 0.0);
        let (v, h) = split(&at, &q_vector(&at, 0)).unwrap();
        assert_eq!(v.norm_max(), 0.0);
        assert_eq!(h, q_vector(&at, 0));
        let (v, h) = split(&at, &TangentVector::coordinate(1, q_slot(1, 0))).unwrap();
        assert_eq!(v, reeb(&at).scaled(-2.0));
        assert_eq!(h, q_vector(&at, 0));
    }

    #[test]
    fn brackets_of_horizontal_frame() {
        let n = 2;
        let at = pt(&[0.8, -1.3]);
        for a in 0..n {
            for b in 0..n {
                let pq = lie_bracket(&p_field(n, a), &q_field(n, b), &at).unwrap();
                let expected = if a == b { reeb(&at).scaled(-1.0) } else { TangentVector::zero(n) };
                assert_eq!(pq, expected);
                let pp = lie_bracket(&p_field(n, a), &p_field(n, b), &at).unwrap();
                assert_eq!(pp.norm_max(), 0.0);
            }
        }
        let qq = lie_bracket(&q_field(n, 0), &q_field(n, 1), &at).unwrap();
        assert_eq!(qq.norm_max(), 0.0);
    }

    #[test]
    fn vector_fields_evaluate_to_frame() {
        let at = pt(&[0.8, -1.3]);
        assert_eq!(q_field(2, 1).at(&at).unwrap(), q_vector(&at, 1));
        assert_eq!(reeb_field(2).at(&at).unwrap(), reeb(&at));
    }

    #[test]
    fn nondegeneracy_values() {
        assert!((contact_nondegeneracy(&pt(&[3.0])) - 0.25).abs() < 1e-15);
        assert!((contact_nondegeneracy(&pt(&[3.0, -1.0])) - 1.0 / 16.0).abs() < 1e-15);
    }
}
