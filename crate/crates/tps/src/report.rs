//! Versioned JSON reports and plain CSV tables.

use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "tps-report/1";

/// A named residual checked against its tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Residual {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Residual { name: name.into(), value, tolerance }
    }

    /// NaN never passes.
    pub fn pass(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// Report body. Keys keep insertion order.
#[derive(Clone, Debug)]
pub struct Report {
    command: &'static str,
    config: Map<String, Value>,
    residuals: Vec<Residual>,
    data: Map<String, Value>,
    warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, config: Map::new(), residuals: Vec::new(), data: Map::new(), warnings: Vec::new() }
    }

    pub fn config(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.config.insert(key.to_string(), value.into());
        self
    }

    pub fn residual(&mut self, r: Residual) -> &mut Self {
        self.residuals.push(r);
        self
    }

    pub fn data(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.data.insert(key.to_string(), value.into());
        self
    }

    pub fn warn(&mut self, message: impl Into<String>) -> &mut Self {
        self.warnings.push(message.into());
        self
    }

    pub fn residuals(&self) -> &[Residual] {
        &self.residuals
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn pass(&self) -> bool {
        self.residuals.iter().all(Residual::pass)
    }

    pub fn to_value(&self) -> Value {
        let mut residuals = Map::new();
        for r in &self.residuals {
            residuals.insert(
                r.name.clone(),
                json!({ "value": number(r.value), "tolerance": r.tolerance, "pass": r.pass() }),
            );
        }
        let mut out = Map::new();
        out.insert("schema".into(), SCHEMA.into());
        out.insert("command".into(), self.command.into());
        out.insert("config".into(), Value::Object(self.config.clone()));
        out.insert("pass".into(), self.pass().into());
        out.insert("residuals".into(), Value::Object(residuals));
        for (k, v) in &self.data {
            out.insert(k.clone(), v.clone());
        }
        out.insert("warnings".into(), self.warnings.clone().into());
        Value::Object(out)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serialisable");
        s.push('\n');
        s
    }

    /// `name,value,tolerance,pass` rows.
    pub fn residuals_csv(&self) -> String {
        let mut t = Table::new(&["name", "value", "tolerance", "pass"]);
        for r in &self.residuals {
            t.row(vec![r.name.clone(), fmt(r.value), fmt(r.tolerance), r.pass().to_string()]);
        }
        t.render()
    }
}

/// JSON has no NaN or infinity; those become `null`.
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn numbers(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| number(x)).collect())
}

/// Row-major `m×m` data as nested arrays.
pub fn matrix(data: &[f64], m: usize) -> Value {
    Value::Array(data.chunks(m).map(numbers).collect())
}

/// Shortest round-trip decimal form, independent of locale.
pub fn fmt(v: f64) -> String {
    format!("{v:?}")
}

/// Comma-separated table. Cells are written verbatim, so callers keep
/// them free of commas.
#[derive(Clone, Debug)]
pub struct Table {
    lines: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { lines: vec![header.join(",")] }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.lines.push(cells.join(","));
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_layout() {
        let mut r = Report::new("verify");
        r.config("n", 2).residual(Residual::new("a", 1e-16, 1e-9)).residual(Residual::new("b", f64::NAN, 1e-9));
        let v = r.to_value();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["schema", "command", "config", "pass", "residuals", "warnings"]);
        assert_eq!(v["schema"], "tps-report/1");
        assert_eq!(v["pass"], false);
        assert_eq!(v["residuals"]["a"]["pass"], true);
        assert_eq!(v["residuals"]["b"]["value"], Value::Null);
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new("verify");
        r.residual(Residual::new("a", 0.5, 1.0));
        assert_eq!(r.residuals_csv(), "name,value,tolerance,pass\na,0.5,1.0,true\n");
        assert_eq!(fmt(1e-12), "1e-12");
    }
}
