//! Differentiable scalar maps on `R^m` and the derivative machinery built on
//! nested dual numbers.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::real::{Dual, Real};

/// Failure while evaluating a field.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: &'static str },
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("non-finite result at {coords:?}")]
    NonFinite { coords: Vec<f64> },
}

/// A scalar map that can be evaluated over any [`Real`] scalar, which is
/// what makes exact differentiation through dual numbers possible.
pub trait Field {
    fn eval<T: Real>(&self, x: &[T]) -> Result<T, EvalError>;
}

impl<F: Field + ?Sized> Field for &F {
    fn eval<T: Real>(&self, x: &[T]) -> Result<T, EvalError> {
        (**self).eval(x)
    }
}

fn lift_seeded<T: Real>(x: &[T], seed: usize) -> Vec<Dual<T>> {
    x.iter().enumerate().map(|(i, &xi)| if i == seed { Dual::variable(xi) } else { Dual::lift(xi) }).collect()
}

fn ensure_finite<T: Real>(v: T, x: &[T]) -> Result<T, EvalError> {
    if v.all_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { coords: x.iter().map(|c| c.value()).collect() })
    }
}

pub fn value<F: Field, T: Real>(f: &F, x: &[T]) -> Result<T, EvalError> {
    ensure_finite(f.eval(x)?, x)
}

/// Partial derivative along coordinate `k`.
pub fn partial<F: Field, T: Real>(f: &F, x: &[T], k: usize) -> Result<T, EvalError> {
    let d = f.eval(&lift_seeded(x, k))?;
    ensure_finite(d.du, x)
}

/// Exact gradient, one dual pass per coordinate.
pub fn gradient<F: Field, T: Real>(f: &F, x: &[T]) -> Result<Vec<T>, EvalError> {
    (0..x.len()).map(|k| partial(f, x, k)).collect()
}

/// Value and gradient together.
pub fn value_and_gradient<F: Field, T: Real>(f: &F, x: &[T]) -> Result<(T, Vec<T>), EvalError> {
    let v = value(f, x)?;
    Ok((v, gradient(f, x)?))
}

/// Second-derivative matrix, row-major `m×m`.
pub fn hessian<F: Field, T: Real>(f: &F, x: &[T]) -> Result<Vec<T>, EvalError> {
    let m = x.len();
    let mut out = vec![T::zero(); m * m];
    for i in 0..m {
        let outer = lift_seeded(x, i);
        for j in i..m {
            let inner: Vec<Dual<Dual<T>>> = outer
                .iter()
                .enumerate()
                .map(|(k, &xk)| {
                    let du = if k == j { Dual::constant(1.0) } else { Dual::constant(0.0) };
                    Dual::new(xk, du)
                })
                .collect();
            let h = ensure_finite(f.eval(&inner)?.du.du, x)?;
            out[i * m + j] = h;
            out[j * m + i] = h;
        }
    }
    Ok(out)
}

/// Third-derivative tensor, `out[(i*m + j)*m + k] = ∂_i∂_j∂_k f`.
pub fn third_derivatives<F: Field>(f: &F, x: &[f64]) -> Result<Vec<f64>, EvalError> {
    let m = x.len();
    let mut out = vec![0.0; m * m * m];
    for k in 0..m {
        let seeded = lift_seeded(x, k);
        let h = hessian(f, &seeded)?;
        for (idx, hk) in h.iter().enumerate() {
            out[idx * m + k] = hk.du;
        }
    }
    Ok(out)
}

/// Central difference step used by every cross-check: `1e-6·max(1,|x|)`.
pub fn fd_step(x: f64) -> f64 {
    1e-6 * if x.abs() > 1.0 { x.abs() } else { 1.0 }
}

/// Central finite-difference gradient. Independent of the dual path.
pub fn central_difference_gradient<F: Field>(f: &F, x: &[f64]) -> Result<Vec<f64>, EvalError> {
    let mut probe = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let h = fd_step(x[k]);
        probe[k] = x[k] + h;
        let plus = value(f, &probe)?;
        probe[k] = x[k] - h;
        let minus = value(f, &probe)?;
        probe[k] = x[k];
        out.push((plus - minus) / (2.0 * h));
    }
    Ok(out)
}

/// Relative discrepancy `|a-b| / max(1, |a|, |b|)`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() / scale
}
