use serde_json::{json, Map, Value};
use sobolev_qg::report::fmt_f64;
use sobolev_qg::{semigroup, verify, VERSION};

/// Result of one command, ready to be rendered.
pub struct Outcome {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Key facts echoed in the header (verdicts, limits).
    pub summary: Vec<(String, Value)>,
    pub result: Value,
    /// False when a battery recorded a violation or an unexpected verdict.
    pub ok: bool,
}

impl Outcome {
    pub fn new(columns: &[&str], result: Value) -> Self {
        Outcome {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            result,
            ok: true,
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.to_string(), value.into()));
    }
}

pub fn num(x: f64) -> String {
    fmt_f64(x)
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn thresholds() -> Value {
    json!({
        "scan_slope_min": semigroup::SLOPE_THRESHOLD,
        "scan_decade_ratio_max": semigroup::DECADE_RATIO,
        "trend_slope_max": verify::TREND_SLOPE_MAX,
        "sharpness_divergent_slope": verify::SHARPNESS_DIVERGENT_SLOPE,
        "sharpness_bounded_slope": verify::SHARPNESS_BOUNDED_SLOPE,
        "inequality_slack": verify::HY_SLACK,
        "exponent_tolerance": verify::EXPONENT_TOL,
    })
}

fn header(command: &str, seed: Option<u64>) -> Value {
    json!({
        "command": command,
        "seed": seed,
        "version": VERSION,
        "thresholds": thresholds(),
    })
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.as_f64().map(fmt_f64).unwrap_or_else(|| n.to_string()),
        other => other.to_string(),
    }
}

pub fn render_json(command: &str, seed: Option<u64>, out: &Outcome) -> String {
    let summary: Map<String, Value> = out.summary.iter().cloned().collect();
    let doc = json!({
        "header": header(command, seed),
        "summary": summary,
        "result": out.result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn render_csv(command: &str, seed: Option<u64>, out: &Outcome) -> String {
    let mut s = String::new();
    s.push_str(&format!("# command: {command}\n"));
    s.push_str(&format!("# seed: {}\n", seed.map_or("none".to_string(), |x| x.to_string())));
    s.push_str(&format!("# version: {VERSION}\n"));
    if let Value::Object(t) = thresholds() {
        let parts: Vec<String> = t.iter().map(|(k, v)| format!("{k}={}", scalar_text(v))).collect();
        s.push_str(&format!("# thresholds: {}\n", parts.join("; ")));
    }
    for (k, v) in &out.summary {
        s.push_str(&format!("# {k}: {}\n", scalar_text(v)));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&out.columns).expect("in-memory write");
    for r in &out.rows {
        w.write_record(r).expect("in-memory write");
    }
    s.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
    s
}

/// Shell-style echo of the invocation.
pub fn command_line(args: &[String]) -> String {
    args.iter()
        .map(|a| {
            if !a.is_empty() && a.chars().all(|c| c.is_ascii_alphanumeric() || "-_.:,/=+".contains(c)) {
                a.clone()
            } else {
                format!("'{}'", a.replace('\'', "'\\''"))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
