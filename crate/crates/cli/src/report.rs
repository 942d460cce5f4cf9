use std::fmt::Write as _;

use qvalues::{Matrix, NCValue, C64};
use serde_json::{json, Map, Value};

/// One named entry of a command's results.
#[derive(Debug, Clone)]
pub enum Item {
    Real(f64),
    Count(usize),
    Text(String),
    Complex(C64),
    Vector(Vec<C64>),
    Reals(Vec<f64>),
    Matrix(Matrix),
    Value(NCValue),
}

impl Item {
    fn to_json(&self) -> Value {
        match self {
            Item::Real(x) => json!(x),
            Item::Count(n) => json!(n),
            Item::Text(s) => json!(s),
            Item::Complex(z) => json!(z),
            Item::Vector(v) => json!(v),
            Item::Reals(v) => json!(v),
            Item::Matrix(m) => serde_json::to_value(m).expect("matrix serializes"),
            Item::Value(a) => serde_json::to_value(a).expect("value serializes"),
        }
    }

    fn render(&self, name: &str, out: &mut String) {
        match self {
            Item::Real(x) => writeln!(out, "{name:<28} {}", sig6(*x)),
            Item::Count(n) => writeln!(out, "{name:<28} {n}"),
            Item::Text(s) => writeln!(out, "{name:<28} {s}"),
            Item::Complex(z) => writeln!(out, "{name:<28} {}", complex(*z)),
            Item::Reals(v) => {
                let s: Vec<String> = v.iter().map(|x| sig6(*x)).collect();
                writeln!(out, "{name:<28} [{}]", s.join(", "))
            }
            Item::Vector(v) => {
                let s: Vec<String> = v.iter().map(|z| complex(*z)).collect();
                writeln!(out, "{name:<28} ({})", s.join(", "))
            }
            Item::Value(a) => {
                let s: Vec<String> = a.v.iter().map(|z| complex(*z)).collect();
                writeln!(out, "{name:<28} {{{}; {}}}", complex(a.f), s.join(", "))
            }
            Item::Matrix(m) => {
                let _ = writeln!(out, "{name}");
                let cells: Vec<Vec<String>> = m
                    .to_rows()
                    .iter()
                    .map(|r| r.iter().map(|z| complex(*z)).collect())
                    .collect();
                let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
                for row in cells {
                    let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                    let _ = writeln!(out, "  [ {} ]", padded.join("  "));
                }
                Ok(())
            }
        }
        .expect("writing to a String");
    }
}

/// A residual and the limit it must not exceed.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.value <= self.tol
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub params: Value,
    pub results: Vec<(String, Item)>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn new(command: &'static str, params: Value) -> Self {
        Self {
            command,
            params,
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn add(&mut self, name: impl Into<String>, item: Item) {
        self.results.push((name.into(), item));
    }

    pub fn check(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.checks.push(Check {
            name: name.into(),
            value,
            tol,
        });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok())
    }

    pub fn to_json(&self) -> String {
        let results: Map<String, Value> = self
            .results
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let residuals: Map<String, Value> = self
            .checks
            .iter()
            .map(|c| (c.name.clone(), json!(c.value)))
            .collect();
        let doc = json!({
            "command": self.command,
            "params": self.params,
            "results": results,
            "residuals": residuals,
            "pass": self.pass(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<28} {}", "command", self.command);
        if let Value::Object(map) = &self.params {
            for (k, v) in map {
                let _ = writeln!(out, "{:<28} {}", k, param(v));
            }
        }
        out.push('\n');
        for (name, item) in &self.results {
            item.render(name, &mut out);
        }
        if !self.checks.is_empty() {
            out.push('\n');
            let _ = writeln!(out, "{:<40} {:>12} {:>12}  status", "residual", "value", "limit");
            for c in &self.checks {
                let status = if c.ok() { "ok" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{:<40} {:>12} {:>12}  {status}",
                    c.name,
                    sig6(c.value),
                    sig6(c.tol)
                );
            }
        }
        let _ = writeln!(out, "\npass {}", self.pass());
        out
    }
}

fn param(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), sig6),
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// `x` with 6 significant digits, trailing zeros dropped.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..5).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mant, e) = s.split_once('e').expect("exponent form");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{e}")
    }
}

/// `a+bi` / `a-bi` with 6 significant digits per part.
pub fn complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{}{}{}i", sig6(z.re), sign, sig6(z.im.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.8), "0.8");
        assert_eq!(sig6(-0.8), "-0.8");
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(123456.7), "1.23457e5");
        assert_eq!(sig6(12345.67), "12345.7");
        assert_eq!(sig6(2.5e-17), "2.5e-17");
        assert_eq!(sig6(9.9999999), "10");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn complex_format() {
        assert_eq!(complex(C64::new(0.6, -0.8)), "0.6-0.8i");
        assert_eq!(complex(C64::new(-1.0, 0.0)), "-1+0i");
        assert_eq!(complex(C64::new(0.0, -0.0)), "0+0i");
    }

    #[test]
    fn json_schema_keys() {
        let mut o = Outcome::new("demo", json!({"r": 0.5}));
        o.add("x", Item::Real(1.0));
        o.check("ok", 1e-12, 1e-10);
        let v: Value = serde_json::from_str(&o.to_json()).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "params", "pass", "residuals", "results"]);
        assert_eq!(v["pass"], json!(true));
        o.check("bad", 1.0, 1e-10);
        assert!(!o.pass());
        assert_eq!(o.failures().count(), 1);
    }
}
