//! Identity suites evaluated at sampled points. Each returns named worst-case
//! residuals.

use rand::Rng;
use tps_core::chart::{from_adapted, to_adapted};
use tps_core::contact::{
    contact_nondegeneracy, d_eta, eta, horizontal_basis, lie_bracket, p_field, p_vector, q_field, q_vector, reeb,
    reeb_field,
};
use tps_core::gauge::{verify_gauge, GaugeFactor};
use tps_core::linalg::SquareMatrix;
use tps_core::structure::{compatibility_check, inverse_metric_matrix, metric_apply, metric_g, phi, phi_endo};
use tps_core::{DarbouxPoint, Expr, Result, TangentVector, VarTable};

use crate::sampling;

/// Worst residual per name, in first-seen order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tally {
    entries: Vec<(String, f64)>,
}

impl Tally {
    pub fn record(&mut self, name: &str, value: f64) {
        let value = if value.is_nan() { f64::INFINITY } else { value };
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some((_, v)) => *v = v.max(value),
            None => self.entries.push((name.to_string(), value)),
        }
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, (_, v)| m.max(*v))
    }
}

fn vec_diff(a: &TangentVector, b: &TangentVector) -> f64 {
    a.max_abs_diff(b)
}

/// Contact and para-contact identities: `η(ξ) = 1`, `η(P) = η(Q) = 0`,
/// `dη(ξ,·) = 0`, `[P^a,Q_b] = −δ ξ`, `Φ² = I − η⊗ξ`, `Φξ = 0`,
/// `G = η⊗η − dη(Φ·,·)`, `G G⁻¹ = I`, null frame vectors, adapted round
/// trip, and `det dη|Γ = 4^{−n}`. `pairs` random vector pairs are drawn per
/// point.
pub fn identity_suite<R: Rng>(points: &[DarbouxPoint], pairs: usize, rng: &mut R) -> Result<Tally> {
    let mut t = Tally::default();
    for at in points {
        let n = at.n();
        let d = at.dim();
        let xi = reeb(at);
        let frame = horizontal_basis(at);

        t.record("eta_reeb_max_residual", (eta(at, &xi)? - 1.0).abs());
        t.record("phi_reeb_max_residual", phi(at, &xi)?.norm_max());
        for b in &frame {
            t.record("eta_horizontal_max_residual", eta(at, b)?.abs());
            t.record("d_eta_reeb_max_residual", d_eta(at, &xi, b)?.abs());
        }
        let g = metric_g(at);
        for a in 0..n {
            t.record("null_directions_max_residual", metric_apply(&g, &p_vector(at, a), &p_vector(at, a))?.abs());
            t.record("null_directions_max_residual", metric_apply(&g, &q_vector(at, a), &q_vector(at, a))?.abs());
            for b in 0..n {
                let bracket = lie_bracket(&p_field(n, a), &q_field(n, b), at)?;
                let expected = if a == b { xi.scaled(-1.0) } else { TangentVector::zero(n) };
                t.record("lie_bracket_max_residual", vec_diff(&bracket, &expected));
            }
            let rq = lie_bracket(&reeb_field(n), &q_field(n, a), at)?;
            t.record("lie_bracket_max_residual", rq.norm_max());
        }

        let phi_m = phi_endo(at);
        let phi2 = phi_m.compose(&phi_m);
        let expected =
            SquareMatrix::identity(d).sub(&SquareMatrix::outer(xi.coords(), tps_core::contact::eta_form(at).coords()));
        t.record("phi_squared_max_residual", phi2.matrix().max_abs_diff(&expected));

        let product = g.matrix().mul(&inverse_metric_matrix(at));
        t.record("inverse_metric_max_residual", product.max_abs_diff(&SquareMatrix::identity(d)));

        t.record("contact_nondegeneracy_max_residual", (contact_nondegeneracy(at) - 0.25f64.powi(n as i32)).abs());

        for b1 in std::iter::once(&xi).chain(&frame) {
            for b2 in std::iter::once(&xi).chain(&frame) {
                t.record("metric_compatibility_max_residual", compatibility_check(at, b1, b2)?);
            }
        }
        for _ in 0..pairs {
            let x = sampling::vector(rng, n);
            let y = sampling::vector(rng, n);
            t.record("metric_compatibility_max_residual", compatibility_check(at, &x, &y)?);
            t.record("d_eta_reeb_max_residual", d_eta(at, &xi, &y)?.abs());
            let back = from_adapted(&to_adapted(&x, at)?, at)?;
            t.record("chart_round_trip_max_residual", vec_diff(&back, &x));
            let (vertical, horizontal) = tps_core::contact::split(at, &x)?;
            t.record("eta_horizontal_max_residual", eta(at, &horizontal)?.abs());
            t.record("chart_round_trip_max_residual", vec_diff(&(&vertical + &horizontal), &x));
        }
    }
    Ok(t)
}

/// Gauge factors exercised when none are given: `1`, `1/p1`, `exp(q1)`
/// and, for `n ≥ 2`, `exp(0.5*p1 + q2)`.
pub fn default_gauges(n: usize) -> Vec<String> {
    let mut v = vec!["1".to_string(), "1/p1".to_string(), "exp(q1)".to_string()];
    if n >= 2 {
        v.push("exp(0.5*p1 + q2)".to_string());
    }
    v
}

/// `verify_gauge` residuals for each factor, named
/// `gauge[<source>].<identity>_max_residual`.
pub fn gauge_suite(points: &[DarbouxPoint], gauges: &[(String, Expr)]) -> Result<Tally> {
    let mut t = Tally::default();
    for (src, omega) in gauges {
        let factor = GaugeFactor::new(omega.clone());
        for at in points {
            let report = verify_gauge(at, &factor)?;
            for (name, value) in report.entries() {
                t.record(&format!("gauge[{src}].{name}_max_residual"), value);
            }
        }
    }
    Ok(t)
}

/// Parses gauge factor sources against the Darboux chart of size `n`.
pub fn parse_gauges(n: usize, sources: &[String]) -> std::result::Result<Vec<(String, Expr)>, tps_core::ExprError> {
    let vars = VarTable::darboux(n);
    sources.iter().map(|s| Ok((s.clone(), Expr::parse(s, &vars)?))).collect()
}
