//! Subcommand implementations. Each returns a [`Report`] and the CSV
//! rendering of the same data.

use serde_json::{json, Map, Value};
use tps_core::analysis::{curvature_scan, scalar_curvature, HessianMetric};
use tps_core::chart::{coordinate_names, to_adapted};
use tps_core::gauge::{transform, verify_gauge, GaugeFactor};
use tps_core::structure::{metric_g, phi_endo};
use tps_core::thermo::{process_length, pullback_metric, pullback_of_g, FundamentalRelation, MetricSelector, Polyline};
use tps_core::{DarbouxPoint, Expr, VarTable};

use crate::config::{json_argument, parse_point, Grid, Model, ModelConfig, Rep};
use crate::error::CliError;
use crate::report::{fmt, matrix, number, numbers, Report, Residual, Table};
use crate::{sampling, suites};

/// A finished command: the report and its CSV form.
#[derive(Clone, Debug)]
pub struct Output {
    pub report: Report,
    pub csv: String,
}

fn require_n(n: usize) -> Result<(), CliError> {
    if n == 0 {
        Err(CliError::Usage("n must be ≥ 1".into()))
    } else {
        Ok(())
    }
}

fn require_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("tol must be a positive number, got {tol}")))
    }
}

fn parse_omega(src: &str, n: usize) -> Result<Expr, CliError> {
    Expr::parse(src, &VarTable::darboux(n)).map_err(|e| CliError::Usage(format!("omega `{src}`: {e}")))
}

fn named(names: &[String], values: &[f64]) -> Value {
    let mut m = Map::new();
    for (k, v) in names.iter().zip(values) {
        m.insert(k.clone(), number(*v));
    }
    Value::Object(m)
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: usize,
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub omega: Vec<String>,
    pub pairs: usize,
}

/// Identity and gauge suites at `points` seeded-random points.
pub fn verify(cfg: &VerifyConfig) -> Result<Output, CliError> {
    require_n(cfg.n)?;
    require_tol(cfg.tol)?;
    if cfg.points == 0 {
        return Err(CliError::Usage("points must be ≥ 1".into()));
    }
    let sources = if cfg.omega.is_empty() { suites::default_gauges(cfg.n) } else { cfg.omega.clone() };
    let gauges =
        sources.iter().map(|s| Ok((s.clone(), parse_omega(s, cfg.n)?))).collect::<Result<Vec<_>, CliError>>()?;

    let mut rng = sampling::rng(cfg.seed);
    let points = sampling::points(&mut rng, cfg.n, cfg.points);
    let identities = suites::identity_suite(&points, cfg.pairs, &mut rng)?;
    let gauge = suites::gauge_suite(&points, &gauges)?;

    let mut report = Report::new("verify");
    report
        .config("n", cfg.n)
        .config("points", cfg.points)
        .config("seed", cfg.seed)
        .config("tol", cfg.tol)
        .config("pairs", cfg.pairs)
        .config("omega", sources.clone());
    for (name, value) in identities.entries().iter().chain(gauge.entries()) {
        report.residual(Residual::new(name.clone(), *value, cfg.tol));
    }
    let csv = report.residuals_csv();
    Ok(Output { report, csv })
}

#[derive(Clone, Debug)]
pub struct GaugeConfig {
    pub n: usize,
    pub omega: String,
    pub at: String,
    pub tol: f64,
}

/// Primed structures at one point, with the gauge residual block.
pub fn gauge(cfg: &GaugeConfig) -> Result<Output, CliError> {
    require_n(cfg.n)?;
    require_tol(cfg.tol)?;
    let omega = parse_omega(&cfg.omega, cfg.n)?;
    let at = parse_point(&cfg.at, cfg.n)?;
    let factor = GaugeFactor::new(omega);
    let gs = transform(&at, &factor)?;
    let checks = verify_gauge(&at, &factor)?;
    let d = at.dim();
    let names = coordinate_names(cfg.n);
    let zeta_adapted = to_adapted(&gs.zeta, &at)?;

    let mut report = Report::new("gauge");
    report.config("n", cfg.n).config("omega", cfg.omega.clone()).config("at", cfg.at.clone()).config("tol", cfg.tol);
    for (name, value) in checks.entries() {
        report.residual(Residual::new(name, value, cfg.tol));
    }
    report
        .data("coordinates", names.clone())
        .data("point", named(&names, at.coords()))
        .data("omega_value", number(gs.omega))
        .data("d_omega", numbers(gs.d_omega.coords()))
        .data("zeta", numbers(gs.zeta.coords()))
        .data(
            "zeta_adapted",
            json!({ "xi": number(zeta_adapted.xi), "p": numbers(&zeta_adapted.p), "q": numbers(&zeta_adapted.q) }),
        )
        .data("eta_prime", numbers(gs.eta_prime.coords()))
        .data("xi_prime", numbers(gs.xi_prime.coords()))
        .data("phi", matrix(phi_endo(&at).matrix().as_slice(), d))
        .data("phi_prime", matrix(gs.phi_prime.matrix().as_slice(), d))
        .data("g", matrix(metric_g(&at).matrix().as_slice(), d))
        .data("g_prime", matrix(gs.g_prime.matrix().as_slice(), d))
        .data("d_eta_prime", matrix(gs.d_eta_prime.as_slice(), d));

    let mut t = Table::new(&["quantity", "i", "j", "value"]);
    let mut vector = |name: &str, v: &[f64]| {
        for (i, x) in v.iter().enumerate() {
            t.row(vec![name.into(), (i + 1).to_string(), String::new(), fmt(*x)]);
        }
    };
    vector("zeta", gs.zeta.coords());
    vector("xi_prime", gs.xi_prime.coords());
    vector("eta_prime", gs.eta_prime.coords());
    for (name, m) in [("phi_prime", gs.phi_prime.matrix()), ("g_prime", gs.g_prime.matrix())] {
        for i in 0..d {
            for j in 0..d {
                t.row(vec![name.into(), (i + 1).to_string(), (j + 1).to_string(), fmt(m[(i, j)])]);
            }
        }
    }
    for r in report.residuals() {
        t.row(vec![format!("residual:{}", r.name), String::new(), String::new(), fmt(r.value)]);
    }
    Ok(Output { report, csv: t.render() })
}

fn load_model(arg: &str) -> Result<Model, CliError> {
    ModelConfig::parse(&json_argument(arg)?)
}

fn grid_for(model: &Model, rep: Rep, grid: Option<&str>) -> Result<Grid, CliError> {
    let g = match grid {
        Some(text) => Grid::parse(text)?,
        None => model.default_grid(rep),
    };
    let arity = model.variables(rep).len();
    if g.axes.len() != arity {
        return Err(CliError::Usage(format!(
            "grid has {} axes but the relation takes {arity} variables",
            g.axes.len()
        )));
    }
    Ok(g)
}

#[derive(Clone, Debug)]
pub struct PullbackConfig {
    pub model: String,
    pub rep: Rep,
    pub grid: Option<String>,
    pub tol: f64,
}

/// `Hess f` on a grid, each row checked against `Jᵀ G J`.
pub fn pullback(cfg: &PullbackConfig) -> Result<Output, CliError> {
    require_tol(cfg.tol)?;
    let model = load_model(&cfg.model)?;
    let grid = grid_for(&model, cfg.rep, cfg.grid.as_deref())?;
    let f = model.relation(cfg.rep);
    let vars = model.variables(cfg.rep);
    let m = vars.len();

    let mut report = Report::new("pullback");
    report.config("model", cfg.model.clone()).config("rep", rep_name(cfg.rep)).config("tol", cfg.tol);
    let mut header: Vec<String> = vars.clone();
    for i in 1..=m {
        for j in 1..=m {
            header.push(format!("g{i}{j}"));
        }
    }
    let mut t = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for q in grid.points() {
        let computed = pullback_metric(&f, &q).and_then(|h| Ok((pullback_of_g(&f, &q)?, h)));
        match computed {
            Ok((jgj, h)) => {
                let scale = h.max_abs().max(1.0);
                worst = worst.max(jgj.max_abs_diff(&h) / scale);
                rows.push(json!({ "q": named(&vars, &q), "metric": matrix(h.as_slice(), m) }));
                t.row(q.iter().chain(h.as_slice()).map(|v| fmt(*v)).collect());
            }
            Err(e) => {
                report.warn(format!("skipped {}: {e}", fmt_point(&vars, &q)));
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Failure("no grid point lies in the model domain".into()));
    }
    report.residual(Residual::new("hessian_vs_pullback_max_residual", worst, cfg.tol));
    let skipped = report.warnings().len();
    report.data("variables", vars).data("rows", rows).data("skipped", skipped);
    Ok(Output { report, csv: t.render() })
}

fn fmt_point(vars: &[String], q: &[f64]) -> String {
    vars.iter().zip(q).map(|(k, v)| format!("{k}={}", fmt(*v))).collect::<Vec<_>>().join(" ")
}

fn rep_name(rep: Rep) -> &'static str {
    match rep {
        Rep::Energy => "energy",
        Rep::Entropy => "entropy",
    }
}

#[derive(Clone, Debug)]
pub struct CurvatureConfig {
    pub model: String,
    pub rep: Rep,
    pub grid: Option<String>,
    pub scan: bool,
    pub epsilon: f64,
    pub samples: usize,
}

/// Scalar curvature of the Hessian metric on a grid, or along the
/// critical isochore of a van der Waals fluid.
pub fn curvature(cfg: &CurvatureConfig) -> Result<Output, CliError> {
    let model = load_model(&cfg.model)?;
    let mut report = Report::new("curvature");
    report.config("model", cfg.model.clone()).config("rep", rep_name(cfg.rep));

    if cfg.scan {
        let Model::Vdw(m) = model else {
            return Err(CliError::Usage("--scan needs a vdw model".into()));
        };
        report.config("scan", true).config("epsilon", cfg.epsilon).config("samples", cfg.samples);
        let scan = curvature_scan(&m, cfg.epsilon, cfg.samples)?;
        let mut t = Table::new(&["T", "R"]);
        for (temp, r) in &scan {
            t.row(vec![fmt(*temp), fmt(*r)]);
        }
        let first = scan[0].1.abs();
        let last = scan[scan.len() - 1].1.abs();
        let half = &scan[scan.len() / 2..];
        let monotone = half.windows(2).all(|w| w[1].1.abs() > w[0].1.abs());
        report
            .data("critical_temperature", number(m.critical_temperature()))
            .data("critical_volume", number(m.critical_volume()))
            .data(
                "rows",
                scan.iter().map(|(temp, r)| json!({ "T": number(*temp), "R": number(*r) })).collect::<Vec<_>>(),
            )
            .data("growth_ratio", number(last / first))
            .data("monotone_final_half", monotone);
        return Ok(Output { report, csv: t.render() });
    }

    let grid = grid_for(&model, cfg.rep, cfg.grid.as_deref())?;
    let vars = model.variables(cfg.rep);
    let metric = HessianMetric(model.relation(cfg.rep));
    let mut header: Vec<&str> = vars.iter().map(String::as_str).collect();
    header.push("R");
    let mut t = Table::new(&header);
    let mut rows = Vec::new();
    for q in grid.points() {
        let r = if metric.0.in_domain(&q) {
            scalar_curvature(&metric, &q)
        } else {
            Err(tps_core::Error::Domain { reason: "outside the relation's domain", coords: q.clone() })
        };
        match r {
            Ok(r) => {
                rows.push(json!({ "q": named(&vars, &q), "R": number(r) }));
                t.row(q.iter().chain(std::iter::once(&r)).map(|v| fmt(*v)).collect());
            }
            Err(e) => {
                report.warn(format!("skipped {}: {e}", fmt_point(&vars, &q)));
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Failure("no grid point lies in the model domain".into()));
    }
    let skipped = report.warnings().len();
    report.data("variables", vars).data("rows", rows).data("skipped", skipped);
    Ok(Output { report, csv: t.render() })
}

#[derive(Clone, Debug)]
pub struct LengthConfig {
    pub curve: String,
    pub steps: usize,
    pub omega: Option<String>,
}

/// Reads `{"points": [{"w": …, "p1": …, "q1": …}, …]}`; vertices may also
/// be plain arrays in `w, p1..pn, q1..qn` order when `"n"` is given.
pub fn parse_polyline(text: &str) -> Result<Polyline, CliError> {
    let bad = |why: String| CliError::Usage(format!("curve: {why}"));
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let points = doc.get("points").and_then(Value::as_array).ok_or_else(|| bad("missing `points` array".into()))?;
    let declared = match doc.get("n") {
        None => None,
        Some(v) => Some(v.as_u64().filter(|&n| n >= 1).ok_or_else(|| bad("n must be ≥ 1".into()))? as usize),
    };
    let mut vertices = Vec::with_capacity(points.len());
    for (k, p) in points.iter().enumerate() {
        let coords: Vec<f64> = match p {
            Value::Object(map) => {
                let n = declared.unwrap_or((map.len().max(1) - 1) / 2);
                if n == 0 || map.len() != 2 * n + 1 {
                    return Err(bad(format!("vertex {k} must name w, p1..pn, q1..qn")));
                }
                let names = coordinate_names(n);
                names
                    .iter()
                    .map(|name| {
                        map.get(name)
                            .and_then(Value::as_f64)
                            .ok_or_else(|| bad(format!("vertex {k} lacks numeric `{name}`")))
                    })
                    .collect::<Result<_, _>>()?
            }
            Value::Array(items) => items
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| bad(format!("vertex {k} has a non-numeric entry"))))
                .collect::<Result<_, _>>()?,
            _ => return Err(bad(format!("vertex {k} must be an object or array"))),
        };
        if coords.len().is_multiple_of(2) {
            return Err(bad(format!("vertex {k} has {} coordinates; expected 2n+1", coords.len())));
        }
        let n = declared.unwrap_or((coords.len() - 1) / 2);
        vertices.push(DarbouxPoint::from_coords(n, coords).map_err(|e| bad(format!("vertex {k}: {e}")))?);
    }
    Polyline::new(vertices).map_err(|e| bad(e.to_string()))
}

/// Length of a polyline under `G`, or `G′` when `omega` is given.
pub fn length(cfg: &LengthConfig) -> Result<Output, CliError> {
    if cfg.steps < 2 {
        return Err(CliError::Usage(format!("steps must be ≥ 2, got {}", cfg.steps)));
    }
    let curve = parse_polyline(&json_argument(&cfg.curve)?)?;
    let n = curve.vertices()[0].n();
    let selector = match &cfg.omega {
        Some(src) => MetricSelector::Gauged(GaugeFactor::new(parse_omega(src, n)?)),
        None => MetricSelector::Mrugala,
    };
    let result = process_length(&curve, &selector, cfg.steps)?;

    let mut report = Report::new("length");
    report
        .config("curve", cfg.curve.clone())
        .config("steps", cfg.steps)
        .config("omega", cfg.omega.clone().map_or(Value::Null, Value::from))
        .data("n", n)
        .data("length", number(result.length))
        .data("signs", result.signs.clone());
    let mut t = Table::new(&["step", "t_mid", "sign"]);
    let h = 1.0 / cfg.steps as f64;
    for (k, s) in result.signs.iter().enumerate() {
        t.row(vec![k.to_string(), fmt((k as f64 + 0.5) * h), s.to_string()]);
    }
    Ok(Output { report, csv: t.render() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_degrees_of_freedom_is_a_usage_error() {
        let cfg = VerifyConfig { n: 0, points: 1, seed: 0, tol: 1e-9, omega: vec![], pairs: 1 };
        match verify(&cfg) {
            Err(CliError::Usage(msg)) => assert_eq!(msg, "n must be ≥ 1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gauge_one_over_p1() {
        let cfg = GaugeConfig { n: 1, omega: "1/p1".into(), at: "w=0,p1=-2,q1=1".into(), tol: 1e-9 };
        let out = gauge(&cfg).unwrap();
        let v = out.report.to_value();
        assert_eq!(v["zeta_adapted"]["q"][0], -0.5);
        assert_eq!(v["zeta_adapted"]["xi"], 0.0);
        assert_eq!(v["xi_prime"], json!([0.0, 0.0, 1.0]));
        assert!(out.report.pass());
    }

    #[test]
    fn gauge_zero_is_a_failure() {
        let cfg = GaugeConfig { n: 1, omega: "0".into(), at: "w=0,p1=-2,q1=1".into(), tol: 1e-9 };
        assert!(matches!(gauge(&cfg), Err(CliError::Failure(_))));
    }

    #[test]
    fn pullback_toy_gas_row() {
        let cfg = PullbackConfig {
            model: r#"{"model":"ideal"}"#.into(),
            rep: Rep::Energy,
            grid: Some("0:0:1,1:1:1".into()),
            tol: 1e-10,
        };
        let out = pullback(&cfg).unwrap();
        assert_eq!(out.csv, "s,v,g11,g12,g21,g22\n0.0,1.0,1.0,-1.0,-1.0,2.0\n");
    }

    #[test]
    fn polyline_documents() {
        let c = parse_polyline(r#"{"points":[{"w":0,"p1":1,"q1":0},{"w":1,"p1":1,"q1":0}]}"#).unwrap();
        assert_eq!(c.vertices().len(), 2);
        let c = parse_polyline(r#"{"n":1,"points":[[0,1,0],[1,1,0]]}"#).unwrap();
        assert_eq!(c.vertices()[1].w(), 1.0);
        assert!(parse_polyline(r#"{"points":[{"w":0,"p1":1}]}"#).is_err());
        assert!(parse_polyline(r#"{"points":[[0,1,0,3],[1,1,0,2]]}"#).is_err());
    }
}
