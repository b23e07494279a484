//! Re-emit report data as CSV for external plotting: one row per report,
//! with whichever size/order/sample column the report's params carry.

use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use detproc::identities::VerificationReport;

/// Params keys that serve as the x-axis of a convergence curve, in lookup
/// order.
const SCALE_KEYS: [&str; 6] = ["nsamples", "samples", "order", "nodes", "window", "t"];

fn scale_of(params: &serde_json::Value) -> Option<f64> {
    for key in SCALE_KEYS {
        match &params[key] {
            v if v.is_f64() || v.is_i64() || v.is_u64() => return v.as_f64(),
            // windows are recorded as {lo, hi} or [lo, hi]; use the half-width
            serde_json::Value::Object(m) => {
                if let (Some(lo), Some(hi)) = (m["lo"].as_f64(), m["hi"].as_f64()) {
                    return Some(0.5 * (hi - lo));
                }
            }
            serde_json::Value::Array(a) if a.len() == 2 => {
                if let (Some(lo), Some(hi)) = (a[0].as_f64(), a[1].as_f64()) {
                    return Some(0.5 * (hi - lo));
                }
            }
            _ => {}
        }
    }
    None
}

pub fn emit(report_files: &[std::path::PathBuf], kind: &str, out: Option<&Path>) -> Result<()> {
    if kind != "convergence" {
        bail!("unsupported plot kind `{kind}`; only `convergence` is available");
    }
    if report_files.is_empty() {
        bail!("no report files given");
    }
    let mut rows = Vec::new();
    for path in report_files {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let reports: Vec<VerificationReport> = serde_json::from_str(&text).map_err(|e| {
            anyhow!("{}: parse error at line {}, column {}: {e}", path.display(), e.line(), e.column())
        })?;
        for r in reports {
            rows.push((
                r.name.clone(),
                scale_of(&r.params),
                r.abs_err,
                r.rel_err,
                r.stderr,
                r.tol,
                r.pass,
            ));
        }
    }
    rows.sort_by(|a, b| {
        a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
    });

    let mut csv = String::from("name,scale,abs_err,rel_err,stderr,tol,pass\n");
    for (name, scale, abs_err, rel_err, stderr, tol, pass) in rows {
        let scale = scale.map(|s| s.to_string()).unwrap_or_default();
        let stderr = stderr.map(|s| format!("{s:e}")).unwrap_or_default();
        csv.push_str(&format!(
            "{name},{scale},{abs_err:e},{rel_err:e},{stderr},{tol:e},{pass}\n"
        ));
    }
    match out {
        Some(path) => std::fs::write(path, csv)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(())
}
