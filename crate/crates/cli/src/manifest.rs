//! Plain-text reproduction manifest: one entry per line as whitespace
//! separated `key=value` fields, `#` starts a comment line.
//!
//! ```text
//! label=example4/mse model=gauss-location bound=corollary1 loss=mse params=sigma:1 expected=0.3314 tol=1e-3
//! ```
//!
//! `params` is a comma list of `key:value`. `metric` selects what is compared
//! with `expected`: `value` (default), `argmax:<key>` or `prefactor`, the
//! latter being `value^(1/t) / t` for a power-`t` loss. `tol` is absolute, or
//! `<k>hw` for `k` binomial half-widths of a simulated entry.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use minimax_core::loss::LossSpec;
use minimax_core::models::Params;

use crate::compute::{compute, parse_loss, Outcome};
use crate::{CliError, CliResult};

pub const DEFAULT_MANIFEST: &str = include_str!("../manifest/default.manifest");

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Value,
    Arg(String),
    Prefactor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Absolute(f64),
    HalfWidths(f64),
}

#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub line: usize,
    pub label: String,
    pub model: String,
    pub bound: String,
    pub loss: LossSpec,
    pub params: Params,
    pub expected: f64,
    pub tol: Tolerance,
    pub metric: Metric,
}

impl ManifestEntry {
    /// First `/`-separated segment of the label.
    pub fn group(&self) -> &str {
        self.label.split('/').next().unwrap_or("")
    }
}

#[derive(Debug, Clone)]
pub struct ReproEntry {
    pub label: String,
    pub bound_id: String,
    pub model_id: String,
    pub loss: String,
    pub expected: f64,
    pub tolerance: f64,
    pub computed: f64,
    pub pass: bool,
    pub error: Option<String>,
}

fn number(line: usize, key: &str, v: &str) -> CliResult<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Manifest { line, msg: format!("`{key}` needs a finite number, got `{v}`") })
}

fn parse_params(line: usize, text: &str) -> CliResult<Params> {
    let mut params = Params::new();
    for item in text.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once(':')
            .ok_or_else(|| CliError::Manifest { line, msg: format!("parameter `{item}` is not key:value") })?;
        params.insert(k, number(line, k, v)?);
    }
    Ok(params)
}

fn parse_line(line: usize, text: &str) -> CliResult<ManifestEntry> {
    let bad = |msg: String| CliError::Manifest { line, msg };
    let (mut label, mut model, mut bound, mut expected, mut tol) = (None, None, None, None, None);
    let mut loss = LossSpec::mse();
    let mut params = Params::new();
    let mut metric = Metric::Value;
    for field in text.split_whitespace() {
        let (k, v) = field.split_once('=').ok_or_else(|| bad(format!("field `{field}` is not key=value")))?;
        match k {
            "label" => label = Some(v.to_string()),
            "model" => model = Some(v.to_string()),
            "bound" => bound = Some(v.to_string()),
            "loss" => loss = parse_loss(v, None).map_err(|e| bad(e.to_string()))?,
            "params" => params = parse_params(line, v)?,
            "expected" => expected = Some(number(line, k, v)?),
            "tol" => {
                let t = match v.strip_suffix("hw") {
                    Some(k) => Tolerance::HalfWidths(number(line, "tol", k)?),
                    None => Tolerance::Absolute(number(line, "tol", v)?),
                };
                let (Tolerance::HalfWidths(x) | Tolerance::Absolute(x)) = t;
                if x <= 0.0 {
                    return Err(bad("tolerance must be positive".into()));
                }
                tol = Some(t);
            }
            "metric" => {
                metric = match v {
                    "value" => Metric::Value,
                    "prefactor" => Metric::Prefactor,
                    _ => match v.strip_prefix("argmax:") {
                        Some(key) if !key.is_empty() => Metric::Arg(key.to_string()),
                        _ => return Err(bad(format!("unknown metric `{v}`"))),
                    },
                }
            }
            _ => return Err(bad(format!("unknown field `{k}`"))),
        }
    }
    let need = |v: Option<String>, k: &str| v.ok_or_else(|| bad(format!("missing `{k}`")));
    Ok(ManifestEntry {
        line,
        label: need(label, "label")?,
        model: need(model, "model")?,
        bound: need(bound, "bound")?,
        loss,
        params,
        expected: expected.ok_or_else(|| bad("missing `expected`".into()))?,
        tol: tol.ok_or_else(|| bad("missing `tol`".into()))?,
        metric,
    })
}

pub fn parse_manifest(text: &str) -> CliResult<Vec<ManifestEntry>> {
    let entries = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_line(i + 1, l))
        .collect::<CliResult<Vec<_>>>()?;
    if entries.is_empty() {
        return Err(CliError::EmptyManifest);
    }
    Ok(entries)
}

fn measure(entry: &ManifestEntry, out: &Outcome) -> CliResult<f64> {
    let report = &out.report;
    match &entry.metric {
        Metric::Value => Ok(report.value),
        Metric::Arg(key) => {
            report.arg(key).ok_or_else(|| CliError::Usage(format!("bound `{}` reports no argmax `{key}`", entry.bound)))
        }
        Metric::Prefactor => {
            let t =
                report.loss.power_exponent().ok_or_else(|| CliError::Usage("prefactor needs a power loss".into()))?;
            Ok(report.value.powf(1.0 / t) / t)
        }
    }
}

fn run_entry(entry: &ManifestEntry, seed: u64) -> ReproEntry {
    let mut row = ReproEntry {
        label: entry.label.clone(),
        bound_id: entry.bound.clone(),
        model_id: entry.model.clone(),
        loss: entry.loss.describe(),
        expected: entry.expected,
        tolerance: f64::NAN,
        computed: f64::NAN,
        pass: false,
        error: None,
    };
    let result = compute(&entry.model, &entry.bound, &entry.loss, &entry.params, seed)
        .and_then(|out| Ok((measure(entry, &out)?, out.half_width)));
    match result {
        Ok((computed, half_width)) => {
            row.computed = computed;
            row.tolerance = match (entry.tol, half_width) {
                (Tolerance::Absolute(t), _) => t,
                (Tolerance::HalfWidths(k), Some(hw)) => k * hw,
                (Tolerance::HalfWidths(_), None) => {
                    row.error = Some("half-width tolerance on a non-simulated entry".into());
                    return row;
                }
            };
            row.pass = (computed - entry.expected).abs() <= row.tolerance;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs the entries on up to `jobs` threads; the result keeps manifest order.
pub fn run_manifest(entries: &[ManifestEntry], jobs: usize, seed: u64) -> Vec<ReproEntry> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<ReproEntry>>> = entries.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, entries.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(entry) = entries.get(i) else { break };
                let row = run_entry(entry, seed);
                *slots[i].lock().expect("result slot poisoned") = Some(row);
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().expect("result slot poisoned").expect("every entry is visited")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_manifest_parses() {
        let entries = parse_manifest(DEFAULT_MANIFEST).unwrap();
        assert!(entries.len() >= 20);
        assert!(entries.iter().any(|e| e.group() == "example2"));
    }

    #[test]
    fn fields_and_defaults() {
        let e = parse_manifest("# c\n\nlabel=a/b model=uniform-scale bound=theorem3 loss=power:3 metric=prefactor expected=0.2785 tol=5e-4\n")
            .unwrap()
            .remove(0);
        assert_eq!(e.line, 3);
        assert_eq!(e.group(), "a");
        assert_eq!(e.metric, Metric::Prefactor);
        assert_eq!(e.loss.power_exponent(), Some(3.0));
        assert_eq!(e.tol, Tolerance::Absolute(5e-4));
        let e = parse_manifest("label=x model=m bound=b params=q:0.4,n:3 expected=1 tol=3hw metric=argmax:q")
            .unwrap()
            .remove(0);
        assert_eq!(e.tol, Tolerance::HalfWidths(3.0));
        assert_eq!(e.params.get("n"), Some(3.0));
        assert_eq!(e.metric, Metric::Arg("q".into()));
    }

    #[test]
    fn malformed_lines() {
        for text in [
            "label=x model=m bound=b expected=1",
            "label=x model=m bound=b expected=1 tol=0",
            "label=x model=m bound=b expected=one tol=1",
            "label=x model=m bound=b expected=1 tol=1 colour=red",
            "label=x model=m bound=b expected=1 tol=1 params=q0.4",
            "label=x model=m bound=b expected=1 tol=1 metric=argmax:",
            "just words",
        ] {
            assert!(matches!(parse_manifest(text), Err(CliError::Manifest { line: 1, .. })), "{text}");
        }
        assert!(matches!(parse_manifest("# only a comment\n"), Err(CliError::EmptyManifest)));
    }

    #[test]
    fn entries_keep_order_and_report_errors() {
        let text = "label=a model=uniform-scale bound=corollary1 expected=0.2414 tol=1e-3\n\
                    label=b model=nowhere bound=corollary1 expected=1 tol=1\n\
                    label=c model=uniform-scale bound=corollary1 params=q:0.5 expected=0.2414 tol=1e-3\n";
        let rows = run_manifest(&parse_manifest(text).unwrap(), 3, 1);
        let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["a", "b", "c"]);
        assert!(rows[0].pass);
        assert!(!rows[1].pass && rows[1].error.as_deref().unwrap().contains("nowhere"));
        assert!(!rows[2].pass && rows[2].error.is_none());
    }
}
