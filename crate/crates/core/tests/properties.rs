use proptest::prelude::*;
use tps_core::chart::{differentiate, directional_difference, from_adapted, to_adapted};
use tps_core::contact::{eta, eta_form, horizontal_basis, reeb};
use tps_core::field::{central_difference_gradient, gradient, relative_error};
use tps_core::gauge::{verify_gauge, GaugeFactor};
use tps_core::linalg::SquareMatrix;
use tps_core::structure::{metric_g, phi_endo};
use tps_core::{DarbouxPoint, Expr, TangentVector, VarTable};

const FIELDS: [&str; 6] = [
    "w*p1 + q1^2",
    "exp(0.3*q1)*p1 - w",
    "sqrt(1 + p1^2 + q1^2)",
    "ln(2 + q1^2)*w",
    "p1^3 - 2*p1*q1 + 1/(1 + w^2)",
    "exp(-(w - p1)^2)",
];

fn coordinate() -> impl Strategy<Value = f64> {
    prop_oneof![-2.0..-0.1f64, 0.1..2.0f64]
}

fn point() -> impl Strategy<Value = DarbouxPoint> {
    proptest::collection::vec(coordinate(), 3).prop_map(|c| DarbouxPoint::from_coords(1, c).unwrap())
}

fn vector() -> impl Strategy<Value = TangentVector> {
    proptest::collection::vec(-1.0..1.0f64, 3).prop_map(|c| TangentVector::new(1, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dual_gradient_matches_finite_differences(at in point(), k in 0..FIELDS.len()) {
        let f = Expr::parse(FIELDS[k], &VarTable::darboux(1)).unwrap();
        let exact = gradient(&f, at.coords()).unwrap();
        let approx = central_difference_gradient(&f, at.coords()).unwrap();
        for (a, b) in exact.iter().zip(&approx) {
            prop_assert!(relative_error(*a, *b) < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn pairing_matches_directional_difference(at in point(), x in vector(), k in 0..FIELDS.len()) {
        let f = Expr::parse(FIELDS[k], &VarTable::darboux(1)).unwrap();
        let exact = differentiate(&f, &at).unwrap().pair(&x).unwrap();
        let approx = directional_difference(&f, &at, &x).unwrap();
        prop_assert!(relative_error(exact, approx) < 1e-7, "{exact} vs {approx}");
    }

    #[test]
    fn adapted_round_trip(at in point(), x in vector()) {
        let back = from_adapted(&to_adapted(&x, &at).unwrap(), &at).unwrap();
        prop_assert!(back.max_abs_diff(&x) < 1e-14);
        // the ξ component is η(X)
        let a = to_adapted(&x, &at).unwrap();
        prop_assert!((a.xi - eta(&at, &x).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn phi_squared_and_metric_symmetry(at in point()) {
        let phi = phi_endo(&at);
        let lhs = phi.compose(&phi);
        let rhs = SquareMatrix::identity(3).sub(&SquareMatrix::outer(reeb(&at).coords(), eta_form(&at).coords()));
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-13);
        prop_assert!(metric_g(&at).matrix().symmetry_residual() == 0.0);
        for b in horizontal_basis(&at) {
            prop_assert!(eta(&at, &b).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn exponential_gauges_satisfy_identities(at in point(), a in -1.0..1.0f64, b in -1.0..1.0f64, c in -0.5..0.5f64) {
        let src = format!("exp({a}*p1 + {b}*q1 + {c}*w)");
        let omega = GaugeFactor::new(Expr::parse(&src, &VarTable::darboux(1)).unwrap());
        let report = verify_gauge(&at, &omega).unwrap();
        prop_assert!(report.max_residual() < 1e-9, "{src}: {report:?}");
    }
}
