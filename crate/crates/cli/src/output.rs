//! CSV and JSON encodings of one result table.
//!
//! Both encodings carry the same metadata (as `# key: value` lines in CSV and
//! a top-level `meta` object in JSON) and the same row fields under the same
//! names.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub convention: &'static str,
    pub estimator: &'static str,
    pub seed: u64,
    pub n: u64,
    pub rng: &'static str,
    pub parameters: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct JsonDocument<'a, R> {
    meta: &'a Meta,
    rows: &'a [R],
}

pub fn render<R: Serialize>(meta: &Meta, rows: &[R], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => render_csv(meta, rows),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&JsonDocument { meta, rows })
                .map_err(|e| CliError::Serialize(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn render_csv<R: Serialize>(meta: &Meta, rows: &[R]) -> Result<String, CliError> {
    let mut out = String::new();
    let mut line = |k: &str, v: &str| {
        out.push_str("# ");
        out.push_str(k);
        out.push_str(": ");
        out.push_str(v);
        out.push('\n');
    };
    line("tool", meta.tool);
    line("version", meta.version);
    line("subcommand", meta.subcommand);
    line("convention", meta.convention);
    line("estimator", meta.estimator);
    line("seed", &meta.seed.to_string());
    line("n", &meta.n.to_string());
    line("rng", meta.rng);
    for (k, v) in &meta.parameters {
        line(&format!("parameters.{k}"), v);
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| CliError::Serialize(e.to_string()))?;
    }
    let body = w
        .into_inner()
        .map_err(|e| CliError::Serialize(e.to_string()))?;
    out.push_str(&String::from_utf8(body).map_err(|e| CliError::Serialize(e.to_string()))?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        theta_deg: f64,
        scalar: f64,
    }

    fn meta() -> Meta {
        Meta {
            tool: "epr-ga",
            version: "0.0.0",
            subcommand: "correlate",
            convention: "lambda",
            estimator: "exact",
            seed: 1,
            n: 2,
            rng: "test",
            parameters: BTreeMap::from([("a".to_string(), "1,0,0".to_string())]),
        }
    }

    #[test]
    fn csv_layout() {
        let rows = [Row {
            theta_deg: 60.0,
            scalar: -0.5,
        }];
        let s = render(&meta(), &rows, Format::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# tool: epr-ga");
        assert!(lines.contains(&"# parameters.a: 1,0,0"));
        assert_eq!(lines[lines.len() - 2], "theta_deg,scalar");
        assert_eq!(lines[lines.len() - 1], "60.0,-0.5");
    }

    #[test]
    fn json_layout() {
        let rows = [Row {
            theta_deg: 60.0,
            scalar: -0.5,
        }];
        let s = render(&meta(), &rows, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["meta"]["seed"], 1);
        assert_eq!(v["rows"][0]["scalar"], -0.5);
        assert_eq!(v["rows"][0]["theta_deg"], 60.0);
    }
}
