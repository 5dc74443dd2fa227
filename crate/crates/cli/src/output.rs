use clap::ValueEnum;
use serde_json::{json, Value};
use zetalaw::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// x rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e15) {
        format!("{:e}", round15(x))
    } else {
        format!("{}", round15(x))
    }
}

/// JSON number at 15 digits; non-finite values become null.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        json!(round15(x))
    } else {
        Value::Null
    }
}

pub fn report_json(r: &VerificationReport) -> Value {
    json!({
        "check_name": r.check_name,
        "field": r.field.map(|f| f.short_name()),
        "parameters": r.parameters.iter().map(|p| json!({"name": p.name, "value": jnum(p.value)})).collect::<Vec<_>>(),
        "residual": jnum(r.residual),
        "tolerance": jnum(r.tolerance),
        "passed": r.passed,
    })
}

pub const REPORT_CSV_HEADER: &str = "check_name,field,residual,tolerance,passed,parameters";

pub fn report_csv(r: &VerificationReport) -> String {
    let params: Vec<String> = r
        .parameters
        .iter()
        .map(|p| format!("{}={}", p.name, num(p.value)))
        .collect();
    format!(
        "{},{},{},{},{},\"{}\"",
        r.check_name,
        r.field.map(|f| f.short_name()).unwrap_or(""),
        num(r.residual),
        num(r.tolerance),
        r.passed,
        params.join(";")
    )
}

pub fn report_text(r: &VerificationReport) -> String {
    let field = r.field.map(|id| id.short_name()).unwrap_or("-");
    let mut line = format!(
        "[{}] {:<22} {:<3} residual={} tol={}",
        if r.passed { "PASS" } else { "FAIL" },
        r.check_name,
        field,
        num(r.residual),
        num(r.tolerance)
    );
    for p in &r.parameters {
        line.push_str(&format!(" {}={}", p.name, num(p.value)));
    }
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(num(-1.5e-20), "-1.5e-20");
        assert_eq!(jnum(f64::NAN), Value::Null);
    }
}
