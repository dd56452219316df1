//! End-to-end acceptance checks. Each criterion prints one `PASS`/`FAIL`
//! line; run with `--nocapture` to see them.

use std::panic;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use tps::sampling;
use tps::suites::{default_gauges, gauge_suite, identity_suite, parse_gauges};
use tps_core::analysis::{curvature_scan, reeb_covariant_diagnostic, scalar_curvature, HessianMetric};
use tps_core::contact::{eta_form, q_vector};
use tps_core::field::{central_difference_gradient, gradient, relative_error};
use tps_core::gauge::{closed_form_g_prime, transform};
use tps_core::linalg::SquareMatrix;
use tps_core::structure::phi_endo;
use tps_core::thermo::{
    conformal_check, pullback_metric, pullback_of_g, representation_change, FundamentalRelation, IdealGas,
    PhysicalState, Quadratic, Representation, VanDerWaals,
};
use tps_core::{Expr, ExprError, GaugeFactor, TangentVector, VarTable};

const SEED: u64 = 20_240_611;

const IDENTITY_TOL: f64 = 1e-12;
const IDENTITY_RUNTIME: Duration = Duration::from_secs(5);
const NONDEGENERACY_TOL: f64 = 1e-13;
const GAUGE_TOL: f64 = 1e-9;
const CLOSED_FORM_TOL: f64 = 1e-11;
const REPRESENTATION_TOL: f64 = 1e-9;
const RESTRICTION_TOL: f64 = 1e-10;
/// Covector components of `η_s` and `−η_u/T` may differ only by the
/// rounding of one division: a few ulps relative to the component.
const ETA_ULPS: f64 = 4.0;
const PULLBACK_TOL: f64 = 1e-10;
const CONFORMAL_TOL: f64 = 1e-10;
const IDEAL_CURVATURE_TOL: f64 = 1e-8;
const VDW_GROWTH: f64 = 1e3;
const VDW_EPSILON: f64 = 1e-3;
const REEB_SPREAD_TOL: f64 = 1e-9;
const REEB_EXPECTED: f64 = -1.0;
const FD_TOL: f64 = 1e-6;
const FUZZ_CASES: usize = 10_000;
const FUZZ_LEN: usize = 256;

struct Ledger {
    failures: Vec<String>,
}

impl Ledger {
    fn check(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} [{id:>2}] {name}: {detail}");
        if !pass {
            self.failures.push(format!("[{id}] {name}: {detail}"));
        }
    }
}

fn criterion_1_2(ledger: &mut Ledger) {
    let mut rng = sampling::rng(SEED);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_name = String::new();
    let mut nondegeneracy: f64 = 0.0;
    for n in 1..=3 {
        let points = sampling::points(&mut rng, n, 200);
        let tally = identity_suite(&points, 4, &mut rng).expect("identity suite");
        for (name, value) in tally.entries() {
            if name == "contact_nondegeneracy_max_residual" {
                nondegeneracy = nondegeneracy.max(*value);
            } else if *value > worst || worst_name.is_empty() {
                worst = worst.max(*value);
                worst_name = format!("{name} (n={n})");
            }
        }
    }
    let elapsed = start.elapsed();
    ledger.check(
        1,
        "para-Sasakian identities, n=1..3, 200 points",
        worst <= IDENTITY_TOL && elapsed < IDENTITY_RUNTIME,
        format!("max {worst:.3e} at {worst_name} (tol {IDENTITY_TOL:e}), {:.2} s", elapsed.as_secs_f64()),
    );
    ledger.check(
        2,
        "det(dη|Γ) = 4^-n",
        nondegeneracy <= NONDEGENERACY_TOL,
        format!("max {nondegeneracy:.3e} (tol {NONDEGENERACY_TOL:e})"),
    );
}

fn criterion_3(ledger: &mut Ledger) {
    let mut rng = sampling::rng(SEED + 3);
    let mut worst: f64 = 0.0;
    let mut worst_name = String::from("-");
    for n in 2..=3 {
        let points = sampling::points(&mut rng, n, 100);
        let gauges = parse_gauges(n, &default_gauges(n)).expect("gauges parse");
        assert_eq!(gauges.len(), 4);
        let tally = gauge_suite(&points, &gauges).expect("gauge suite");
        for (name, value) in tally.entries() {
            if *value > worst {
                worst = *value;
                worst_name = format!("{name} (n={n})");
            }
        }
    }
    ledger.check(
        3,
        "gauge identities for 4 factors, 100 points",
        worst <= GAUGE_TOL,
        format!("max {worst:.3e} at {worst_name} (tol {GAUGE_TOL:e})"),
    );
}

fn criterion_4(ledger: &mut Ledger) {
    let mut rng = sampling::rng(SEED + 4);
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        let omega = GaugeFactor::new(Expr::parse("1/p1", &VarTable::darboux(n)).unwrap());
        for at in sampling::points(&mut rng, n, 50) {
            let p1 = at.p()[0];
            let gs = transform(&at, &omega).expect("regular gauge");
            let q1 = q_vector(&at, 0);

            // ζ = Q₁/p₁, ξ′ = ∂/∂q¹
            let zeta = q1.scaled(1.0 / p1);
            let xi_prime = TangentVector::coordinate(n, 1 + n);
            // Φ′X = ΦX + (1/p₁) η(X) Q₁
            let phi_prime =
                phi_endo(&at).matrix().add(&SquareMatrix::outer(q1.coords(), eta_form(&at).coords()).scaled(1.0 / p1));
            let g_closed = closed_form_g_prime(&at, &omega).unwrap();

            worst = worst
                .max(gs.zeta.max_abs_diff(&zeta))
                .max(gs.xi_prime.max_abs_diff(&xi_prime))
                .max(gs.phi_prime.matrix().max_abs_diff(&phi_prime))
                .max(gs.g_prime.matrix().max_abs_diff(g_closed.matrix()));
        }
    }
    ledger.check(
        4,
        "closed forms for Ω = 1/p1",
        worst <= CLOSED_FORM_TOL,
        format!("max {worst:.3e} (tol {CLOSED_FORM_TOL:e})"),
    );
}

fn criterion_5(ledger: &mut Ledger) {
    let mut rng = sampling::rng(SEED + 5);
    let (mut metric, mut restriction, mut eta_ulps): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let state = PhysicalState::new(
            rng.gen_range(0.1..3.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.2..3.0),
            rng.gen_range(0.2..3.0),
            rng.gen_range(0.1..3.0),
        );
        let change = representation_change(&state).expect("regular state");
        metric = metric.max(change.metric).max(change.reeb).max(change.phi).max(change.eta);
        restriction = restriction.max(change.metric_restriction).max(change.phi_restriction);

        let eta_u = Representation::energy().eta_physical(&state).unwrap();
        let eta_s = Representation::entropy().eta_physical(&state).unwrap();
        for (s, u) in eta_s.iter().zip(&eta_u) {
            let expected = -u / state.t;
            let ulp = f64::EPSILON * expected.abs().max(f64::MIN_POSITIVE);
            eta_ulps = eta_ulps.max((s - expected).abs() / ulp);
        }
    }
    ledger.check(
        5,
        "energy chart gauged by 1/p1 equals entropy chart",
        metric <= REPRESENTATION_TOL && restriction <= RESTRICTION_TOL && eta_ulps <= ETA_ULPS,
        format!(
            "components {metric:.3e} (tol {REPRESENTATION_TOL:e}), restriction {restriction:.3e} \
             (tol {RESTRICTION_TOL:e}), η_s vs −η_u/T {eta_ulps} ulp (tol {ETA_ULPS})"
        ),
    );
}

fn grid(x: (f64, f64), y: (f64, f64)) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..5 {
            let a = x.0 + (x.1 - x.0) * i as f64 / 3.0;
            let b = y.0 + (y.1 - y.0) * j as f64 / 4.0;
            out.push([a, b]);
        }
    }
    out
}

fn pullback_gap<F: FundamentalRelation>(f: &F, points: &[[f64; 2]]) -> f64 {
    points.iter().fold(0.0, |m, q| {
        assert!(f.in_domain(q), "grid point {q:?} outside the domain");
        let hess = pullback_metric(f, q).unwrap();
        let jgj = pullback_of_g(f, q).unwrap();
        m.max(hess.max_abs_diff(&jgj))
    })
}

fn criterion_6(ledger: &mut Ledger) {
    let ideal = IdealGas::new(1.5, 1.0).unwrap();
    let vdw = VanDerWaals::new(1.0, 0.1, 1.5, 1.0).unwrap();
    let cases = [
        ("quadratic", pullback_gap(&Quadratic { n: 2 }, &grid((-1.0, 1.0), (-1.0, 1.0)))),
        ("ideal u(s,v)", pullback_gap(&ideal.energy(), &grid((-1.0, 1.0), (0.5, 2.0)))),
        ("ideal s(u,v)", pullback_gap(&ideal.entropy(), &grid((0.5, 2.0), (0.5, 2.0)))),
        ("vdw u(s,v)", pullback_gap(&vdw.energy(), &grid((-1.0, 1.0), (0.3, 2.0)))),
        ("vdw s(u,v)", pullback_gap(&vdw.entropy(), &grid((0.5, 2.0), (0.3, 2.0)))),
    ];
    let worst = cases.iter().fold(0.0f64, |m, c| m.max(c.1));
    let detail: Vec<String> = cases.iter().map(|(n, v)| format!("{n} {v:.2e}")).collect();
    ledger.check(
        6,
        "Hess f = JᵀGJ on 20-point grids",
        worst <= PULLBACK_TOL,
        format!("{} (tol {PULLBACK_TOL:e})", detail.join(", ")),
    );
}

fn criterion_7(ledger: &mut Ledger) {
    let mut rng = sampling::rng(SEED + 7);
    let ideal = IdealGas::new(1.5, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let s = rng.gen_range(-2.0..2.0);
        let v = rng.gen_range(0.3..3.0);
        let check = conformal_check(&ideal.energy(), &ideal.entropy(), s, v).expect("regular state");
        worst = worst.max(check.residual);
    }
    ledger.check(
        7,
        "transported g^R = −(1/T) g^W, 50 ideal-gas states",
        worst <= CONFORMAL_TOL,
        format!("max {worst:.3e} (tol {CONFORMAL_TOL:e})"),
    );
}

fn criterion_8(ledger: &mut Ledger) {
    let metric = HessianMetric(IdealGas::new(1.5, 1.0).unwrap().entropy());
    let mut flat: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let x = [0.2 + 0.3 * i as f64, 0.2 + 0.3 * j as f64];
            flat = flat.max(scalar_curvature(&metric, &x).unwrap().abs());
        }
    }

    let vdw = VanDerWaals::new(1.0, 0.1, 1.5, 1.0).unwrap();
    let scan = curvature_scan(&vdw, VDW_EPSILON, 40).unwrap();
    let r: Vec<f64> = scan.iter().map(|(_, r)| r.abs()).collect();
    let ratio = r[r.len() - 1] / r[0];
    let half = r.len() / 2;
    let monotone = r[half..].windows(2).all(|w| w[1] > w[0]);

    ledger.check(
        8,
        "ideal gas flat, vdW curvature diverges at T_c",
        flat <= IDEAL_CURVATURE_TOL && ratio > VDW_GROWTH && monotone,
        format!(
            "ideal max |R| {flat:.3e} (tol {IDEAL_CURVATURE_TOL:e}), vdW |R| ratio {ratio:.3e} \
             (> {VDW_GROWTH:e}), monotone final half {monotone}"
        ),
    );
}

fn criterion_9(ledger: &mut Ledger) {
    let mut rng = sampling::rng(SEED + 9);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut fit: f64 = 0.0;
    for n in 1..=3 {
        for at in sampling::points(&mut rng, n, 100) {
            let d = reeb_covariant_diagnostic(&at).unwrap();
            lo = lo.min(d.c);
            hi = hi.max(d.c);
            fit = fit.max(d.residual);
        }
    }
    let spread = hi - lo;
    let off = (lo - REEB_EXPECTED).abs().max((hi - REEB_EXPECTED).abs());
    ledger.check(
        9,
        "∇_X ξ = cΦX with one constant c",
        spread <= REEB_SPREAD_TOL && off <= REEB_SPREAD_TOL && fit <= REEB_SPREAD_TOL,
        format!("c in [{lo:.12}, {hi:.12}], spread {spread:.3e}, fit residual {fit:.3e}, expected {REEB_EXPECTED}"),
    );
}

const CORPUS: [&str; 50] = [
    "w",
    "p1",
    "q2",
    "1",
    "2.5e-1",
    "w + p1",
    "w - p1 - q1",
    "p1 * q1",
    "p1 / q1",
    "-p1",
    "-q1^2",
    "(-q1)^2",
    "p1^3",
    "p1^-2",
    "q1^0.5",
    "2^q1",
    "p1^q1",
    "2^3^2",
    "(2^3)^2",
    "exp(q1)",
    "ln(p1)",
    "sqrt(q2)",
    "exp(0.5*p1 + q2)",
    "1/p1",
    "w + p1*q1 + p2*q2",
    "exp(-(p1 + q2)) / (w * 2)",
    "ln(p1*q1 + 1)",
    "sqrt(p1^2 + q1^2)",
    "(w - 1)^2 + (p2 - 2)^2",
    "p1 - (q1 - w)",
    "(p1 - q1) - w",
    "1.5*ln(q1) + ln(q2)",
    "exp((w - ln(q2))/1.5)",
    "q1/(q2 - 0.1) - 1/q2",
    "1.5*ln(q1 + 1/q2) + ln(q2 - 0.1)",
    "p1*p2/(q1*q2)",
    "exp(w)*sqrt(p1)*ln(q1 + 2)",
    "-(-(-p1))",
    "w^2*p1 - q1^3*p2",
    "exp(ln(p1))",
    "sqrt(sqrt(q1))",
    "1/(1 + exp(-q1))",
    "(p1 + p2 + q1 + q2 + w)^2",
    "2*p1^-0.5",
    "ln(exp(q1) + exp(q2))",
    "q1 - p1^2/2 + w*q2^2",
    "3e2*p1 - 2E-1*q2",
    "(q1 + q2)/(p1 + p2)",
    "exp(-w^2)",
    "p2^(1/3)",
];

fn fuzz_case<R: Rng>(rng: &mut R, vars: &VarTable) -> Result<(), String> {
    const ALPHABET: &[char] = &[
        'w', 'p', 'q', '1', '2', '0', '.', 'e', 'E', '+', '-', '*', '/', '^', '(', ')', ' ', ',', 'x', 'l', 'n', 's',
        'r', 't', '_', '9', 'é', '∂', '\t',
    ];
    const WORDS: &[&str] = &["exp(", "ln(", "sqrt(", "p1", "q2", "w", "1e308", "1e-400", "((((", "))", "^-"];
    let len = rng.gen_range(0..=FUZZ_LEN);
    let mut src = String::new();
    while src.chars().count() < len {
        if rng.gen_bool(0.3) {
            src.push_str(WORDS[rng.gen_range(0..WORDS.len())]);
        } else {
            src.push(ALPHABET[rng.gen_range(0..ALPHABET.len())]);
        }
    }
    let src: String = src.chars().take(len).collect();
    let outcome = panic::catch_unwind(|| Expr::parse(&src, vars).map(|e| (e.to_string(), e)));
    match outcome {
        Err(_) => Err(format!("panic on {src:?}")),
        Ok(Ok((printed, e))) => match Expr::parse(&printed, vars) {
            Ok(again) if again == e => Ok(()),
            _ => Err(format!("{src:?} printed as {printed:?} does not reparse")),
        },
        Ok(Err(err)) => {
            let column: usize = ExprError::column(&err);
            if column <= src.chars().count() {
                Ok(())
            } else {
                Err(format!("{src:?}: column {column} out of range"))
            }
        }
    }
}

fn criterion_10(ledger: &mut Ledger) {
    let vars = VarTable::darboux(2);
    let mut rng = sampling::rng(SEED + 10);
    let mut problems = Vec::new();
    let mut fd: f64 = 0.0;
    for src in CORPUS {
        let e = match Expr::parse(src, &vars) {
            Ok(e) => e,
            Err(err) => {
                problems.push(format!("{src}: {err}"));
                continue;
            }
        };
        let printed = e.to_string();
        match Expr::parse(&printed, &vars) {
            Ok(again) if again == e && again.to_string() == printed => {}
            _ => problems.push(format!("{src}: print/parse not a fixed point ({printed})")),
        }
        for _ in 0..20 {
            let x: Vec<f64> = (0..5).map(|_| rng.gen_range(0.5..2.0)).collect();
            let exact = gradient(&e, &x).unwrap();
            let approx = central_difference_gradient(&e, &x).unwrap();
            for (a, b) in exact.iter().zip(&approx) {
                fd = fd.max(relative_error(*a, *b));
            }
        }
    }

    let default_hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut fuzz_failures = 0;
    for _ in 0..FUZZ_CASES {
        if let Err(msg) = fuzz_case(&mut rng, &vars) {
            if fuzz_failures < 3 {
                problems.push(msg);
            }
            fuzz_failures += 1;
        }
    }
    panic::set_hook(default_hook);

    ledger.check(
        10,
        "expression language corpus and fuzz",
        problems.is_empty() && fd <= FD_TOL,
        format!(
            "{} expressions, gradient vs FD {fd:.3e} (tol {FD_TOL:e}), {FUZZ_CASES} fuzz cases, \
             {fuzz_failures} fuzz failures{}",
            CORPUS.len(),
            if problems.is_empty() { String::new() } else { format!(", problems: {problems:?}") }
        ),
    );
}

fn run_binary(args: &[&str]) -> (Vec<u8>, Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_tps")).args(args).output().expect("binary runs");
    (out.stdout, out.stderr, out.status.code())
}

fn criterion_11(ledger: &mut Ledger) {
    let commands: [&[&str]; 4] = [
        &["verify", "--n", "2", "--points", "50", "--seed", "7"],
        &["verify", "--n", "3", "--points", "20", "--seed", "7", "--output", "csv"],
        &["gauge", "--n", "2", "--omega", "exp(0.5*p1 + q2)", "--at", "w=0.3,p1=-1.2,p2=0.8,q1=0.5,q2=-0.7"],
        &["curvature", "--model", r#"{"model":"vdw","a":1,"b":0.1,"cv":1.5}"#, "--scan", "--samples", "20"],
    ];
    let mut identical = true;
    let mut succeeded = true;
    for args in commands {
        let first = run_binary(args);
        let second = run_binary(args);
        identical &= first == second && !first.0.is_empty();
        succeeded &= first.2 == Some(0);
    }
    ledger.check(
        11,
        "CLI reports are byte-identical across runs",
        identical && succeeded,
        format!("{} commands run twice, identical {identical}, exit 0 {succeeded}", commands.len()),
    );
}

#[test]
fn acceptance() {
    let mut ledger = Ledger { failures: Vec::new() };
    criterion_1_2(&mut ledger);
    criterion_3(&mut ledger);
    criterion_4(&mut ledger);
    criterion_5(&mut ledger);
    criterion_6(&mut ledger);
    criterion_7(&mut ledger);
    criterion_8(&mut ledger);
    criterion_9(&mut ledger);
    criterion_10(&mut ledger);
    criterion_11(&mut ledger);
    assert!(ledger.failures.is_empty(), "failed criteria:\n{}", ledger.failures.join("\n"));
}
