//! Conformal gauge transformations `η ↦ η′ = Ωη` for a non-vanishing
//! scalar field `Ω`, and the induced primed structures
//!
//! ```text
//! ζ  = −(1/2Ω) Φ[G⁻¹(dΩ)]
//! ξ′ = (ξ + ζ)/Ω
//! Φ′ = Φ + (1/2Ω) η ⊗ [G⁻¹(dΩ) − ξ(Ω) ξ]
//! G′ = η′⊗η′ − dη′∘(Φ′⊗I),     dη′ = Ω dη + dΩ∧η
//! ```
//!
//! `G′` is built from its structural definition. [`closed_form_g_prime`]
//! gives the collected form `Ω[G − 2η⊗ˢz] + Ω[Ω − 1 + G(ζ,ζ)] η⊗η` with
//! `z = G(ζ,·)`; the two agree to rounding.

use alloc::vec::Vec;

use crate::chart::{CotangentVector, DarbouxPoint, TangentVector};
use crate::contact::{adapted_frame, d_eta, d_eta_matrix, eta, eta_form, horizontal_basis, reeb};
use crate::error::{Error, Result};
use crate::field::{self, Field};
use crate::linalg::SquareMatrix;
use crate::structure::{inverse_metric, metric_apply, metric_g, phi, phi_endo, EndoAtPoint, MetricAtPoint};

/// `|Ω|` at or below this is a gauge singularity.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// The conformal factor `Ω`.
#[derive(Clone, Debug)]
pub struct GaugeFactor<F> {
    omega: F,
}

impl<F: Field> GaugeFactor<F> {
    pub fn new(omega: F) -> Self {
        GaugeFactor { omega }
    }

    pub fn field(&self) -> &F {
        &self.omega
    }

    /// `(Ω, dΩ)` at a point, rejecting `|Ω| ≤ 1e-12`.
    pub fn evaluate(&self, at: &DarbouxPoint) -> Result<(f64, CotangentVector)> {
        let (value, grad) = field::value_and_gradient(&self.omega, at.coords())?;
        if value.abs() <= SINGULARITY_THRESHOLD {
            return Err(Error::GaugeSingularity { omega: value, coords: at.coords().to_vec() });
        }
        Ok((value, CotangentVector::new(at.n(), grad)?))
    }
}

fn zeta_from(at: &DarbouxPoint, omega: f64, d_omega: &CotangentVector) -> Result<TangentVector> {
    let raised = inverse_metric(at, d_omega)?;
    Ok(phi(at, &raised)?.scaled(-0.5 / omega))
}

/// The horizontal field `ζ` tilting the new Reeb field.
pub fn zeta<F: Field>(at: &DarbouxPoint, omega: &GaugeFactor<F>) -> Result<TangentVector> {
    let (value, d) = omega.evaluate(at)?;
    zeta_from(at, value, &d)
}

/// Primed structures at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugedStructure {
    pub omega: f64,
    pub d_omega: CotangentVector,
    pub zeta: TangentVector,
    pub eta_prime: CotangentVector,
    pub xi_prime: TangentVector,
    pub phi_prime: EndoAtPoint,
    pub g_prime: MetricAtPoint,
    /// Matrix of `dη′` in coordinate basis.
    pub d_eta_prime: SquareMatrix,
}

impl GaugedStructure {
    pub fn d_eta_prime(&self, x: &TangentVector, y: &TangentVector) -> f64 {
        self.d_eta_prime.bilinear(x.coords(), y.coords())
    }

    pub fn g_prime(&self, x: &TangentVector, y: &TangentVector) -> Result<f64> {
        metric_apply(&self.g_prime, x, y)
    }
}

/// `dη′ = Ω dη + dΩ∧η` with the ½ wedge convention.
fn d_eta_prime_matrix(at: &DarbouxPoint, omega: f64, d_omega: &CotangentVector) -> SquareMatrix {
    let eta = eta_form(at);
    let wedge = SquareMatrix::outer(d_omega.coords(), eta.coords())
        .sub(&SquareMatrix::outer(eta.coords(), d_omega.coords()))
        .scaled(0.5);
    d_eta_matrix(at.n()).scaled(omega).add(&wedge)
}

/// Applies the gauge `Ω` at a point.
pub fn transform<F: Field>(at: &DarbouxPoint, omega: &GaugeFactor<F>) -> Result<GaugedStructure> {
    let n = at.n();
    let (value, d_omega) = omega.evaluate(at)?;
    let eta = eta_form(at);
    let xi = reeb(at);
    let zeta = zeta_from(at, value, &d_omega)?;

    let eta_prime = eta.scaled(value);
    let xi_prime = (&xi + &zeta).scaled(1.0 / value);

    // v = G⁻¹(dΩ) − ξ(Ω) ξ ; Φ′ = Φ + (1/2Ω) v ηᵀ
    let xi_omega = d_omega.pair(&xi)?;
    let v = &inverse_metric(at, &d_omega)? - &xi.scaled(xi_omega);
    let phi_prime = phi_endo(at).matrix().add(&SquareMatrix::outer(v.coords(), eta.coords()).scaled(0.5 / value));
    let phi_prime = EndoAtPoint::new(n, phi_prime)?;

    let d_eta_prime = d_eta_prime_matrix(at, value, &d_omega);
    // G′_ij = η′_i η′_j − dη′(Φ′e_i, e_j)
    let g_prime = SquareMatrix::outer(eta_prime.coords(), eta_prime.coords())
        .sub(&phi_prime.matrix().transpose().mul(&d_eta_prime));
    let g_prime = MetricAtPoint::new(n, g_prime)?;

    Ok(GaugedStructure { omega: value, d_omega, zeta, eta_prime, xi_prime, phi_prime, g_prime, d_eta_prime })
}

/// `G′ = Ω[G − 2η⊗ˢz] + Ω[Ω − 1 + G(ζ,ζ)] η⊗η`, `z = G(ζ,·)`.
pub fn closed_form_g_prime<F: Field>(at: &DarbouxPoint, omega: &GaugeFactor<F>) -> Result<MetricAtPoint> {
    let (value, d_omega) = omega.evaluate(at)?;
    let zeta = zeta_from(at, value, &d_omega)?;
    let g = metric_g(at);
    let z = g.lower(&zeta)?;
    let zz = z.pair(&zeta)?;
    let eta = eta_form(at);
    let sym = SquareMatrix::outer(eta.coords(), z.coords()).add(&SquareMatrix::outer(z.coords(), eta.coords()));
    let m = g
        .matrix()
        .sub(&sym)
        .scaled(value)
        .add(&SquareMatrix::outer(eta.coords(), eta.coords()).scaled(value * (value - 1.0 + zz)));
    MetricAtPoint::new(at.n(), m)
}

/// `max_i |dη′(ξ, B_i)|` over the adapted frame. Vanishes for the
/// identity gauge; generically non-zero once `ξ(Ω) ≠ 0` or `dΩ` has
/// horizontal part.
pub fn reeb_curvature_defect<F: Field>(at: &DarbouxPoint, omega: &GaugeFactor<F>) -> Result<f64> {
    let (value, d_omega) = omega.evaluate(at)?;
    let m = d_eta_prime_matrix(at, value, &d_omega);
    let xi = reeb(at);
    Ok(adapted_frame(at).iter().map(|b| m.bilinear(xi.coords(), b.coords()).abs()).fold(0.0, f64::max))
}

/// Residuals of the defining identities of a gauged structure.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeReport {
    /// `|η′(ξ′) − 1|`
    pub eta_prime_xi_prime: f64,
    /// `max |dη′(ξ′, B)|`
    pub d_eta_prime_xi_prime: f64,
    /// `|dΩ(ζ)|`
    pub d_omega_zeta: f64,
    /// `max |dΩ(B) − 2Ω dη(ζ,B) − ξ(Ω)η(B)|`
    pub d_omega_identity: f64,
    /// `max |G′(U,V) − Ω G(U,V)|` on horizontal pairs
    pub horizontal_conformal: f64,
    /// `max |G′(B,B)|` over the null frame `P^a`, `Q_a`
    pub null_directions: f64,
    /// `max |Φ′U − ΦU|` on horizontal `U`
    pub phi_horizontal: f64,
    /// `|Φ′ξ′|`
    pub phi_prime_xi_prime: f64,
    /// `max |(Φ′)² − I + η′⊗ξ′|`
    pub phi_prime_squared: f64,
    /// `|G′(ξ′,ξ′) − 1|`
    pub g_prime_xi_prime_norm: f64,
    /// `max |G′(ξ′,U)|` on horizontal `U`
    pub g_prime_xi_prime_horizontal: f64,
    /// `max |G′ − G′ᵀ|`
    pub g_prime_symmetry: f64,
    /// `max |G′ − closed form|`
    pub closed_form: f64,
}

impl GaugeReport {
    pub fn entries(&self) -> [(&'static str, f64); 13] {
        [
            ("eta_prime_xi_prime", self.eta_prime_xi_prime),
            ("d_eta_prime_xi_prime", self.d_eta_prime_xi_prime),
            ("d_omega_zeta", self.d_omega_zeta),
            ("d_omega_identity", self.d_omega_identity),
            ("horizontal_conformal", self.horizontal_conformal),
            ("null_directions", self.null_directions),
            ("phi_horizontal", self.phi_horizontal),
            ("phi_prime_xi_prime", self.phi_prime_xi_prime),
            ("phi_prime_squared", self.phi_prime_squared),
            ("g_prime_xi_prime_norm", self.g_prime_xi_prime_norm),
            ("g_prime_xi_prime_horizontal", self.g_prime_xi_prime_horizontal),
            ("g_prime_symmetry", self.g_prime_symmetry),
            ("closed_form", self.closed_form),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.entries().iter().map(|e| e.1).fold(0.0, f64::max)
    }
}

fn max_over<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0f64, |m, r| Ok(m.max(r?.abs())))
}

pub fn verify_gauge<F: Field>(at: &DarbouxPoint, omega: &GaugeFactor<F>) -> Result<GaugeReport> {
    let gs = transform(at, omega)?;
    let g = metric_g(at);
    let frame = adapted_frame(at);
    let horizontal: Vec<TangentVector> = horizontal_basis(at);
    let xi = reeb(at);
    let xi_omega = gs.d_omega.pair(&xi)?;
    let om = gs.omega;

    let eta_prime_xi_prime = (gs.eta_prime.pair(&gs.xi_prime)? - 1.0).abs();
    let d_eta_prime_xi_prime = max_over(frame.iter().map(|b| Ok(gs.d_eta_prime(&gs.xi_prime, b))))?;
    let d_omega_zeta = gs.d_omega.pair(&gs.zeta)?.abs();
    let d_omega_identity = max_over(
        frame.iter().map(|b| Ok(gs.d_omega.pair(b)? - 2.0 * om * d_eta(at, &gs.zeta, b)? - xi_omega * eta(at, b)?)),
    )?;
    let horizontal_conformal = max_over(
        horizontal
            .iter()
            .flat_map(|u| horizontal.iter().map(move |v| (u, v)))
            .map(|(u, v)| Ok(gs.g_prime(u, v)? - om * metric_apply(&g, u, v)?)),
    )?;
    let null_directions = max_over(horizontal.iter().map(|b| gs.g_prime(b, b)))?;
    let phi_horizontal = max_over(horizontal.iter().map(|u| Ok(gs.phi_prime.apply(u)?.max_abs_diff(&phi(at, u)?))))?;
    let phi_prime_xi_prime = gs.phi_prime.apply(&gs.xi_prime)?.norm_max();
    let expected_sq =
        SquareMatrix::identity(at.dim()).sub(&SquareMatrix::outer(gs.xi_prime.coords(), gs.eta_prime.coords()));
    let phi_prime_squared = gs.phi_prime.compose(&gs.phi_prime).matrix().max_abs_diff(&expected_sq);
    let g_prime_xi_prime_norm = (gs.g_prime(&gs.xi_prime, &gs.xi_prime)? - 1.0).abs();
    let g_prime_xi_prime_horizontal = max_over(horizontal.iter().map(|u| gs.g_prime(&gs.xi_prime, u)))?;
    let g_prime_symmetry = gs.g_prime.matrix().symmetry_residual();
    let closed_form = closed_form_g_prime(at, omega)?.matrix().max_abs_diff(gs.g_prime.matrix());

    Ok(GaugeReport {
        eta_prime_xi_prime,
        d_eta_prime_xi_prime,
        d_omega_zeta,
        d_omega_identity,
        horizontal_conformal,
        null_directions,
        phi_horizontal,
        phi_prime_xi_prime,
        phi_prime_squared,
        g_prime_xi_prime_norm,
        g_prime_xi_prime_horizontal,
        g_prime_symmetry,
        closed_form,
    })
}
