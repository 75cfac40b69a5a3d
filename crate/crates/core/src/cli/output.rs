use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::extension_lab::ExperimentReport;

/// Writes `bytes` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct ManifestEntry<'a> {
    experiment: &'a str,
    file: String,
    expectation_met: bool,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    expectation_met: bool,
    reports: Vec<ManifestEntry<'a>>,
}

fn expectation_met(r: &ExperimentReport) -> bool {
    r.verdicts
        .get("expectation_met")
        .and_then(Value::as_bool)
        .unwrap_or(true)
}

pub fn all_met(reports: &[ExperimentReport]) -> bool {
    reports.iter().all(expectation_met)
}

fn file_names(reports: &[ExperimentReport]) -> Vec<String> {
    reports
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let same = reports.iter().filter(|o| o.experiment == r.experiment).count();
            if same > 1 {
                format!("{}-{i}.json", r.experiment)
            } else {
                format!("{}.json", r.experiment)
            }
        })
        .collect()
}

/// One JSON file per report plus `manifest.json`.
pub fn write_reports(dir: &Path, command: &str, reports: &[ExperimentReport]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let names = file_names(reports);
    for (r, name) in reports.iter().zip(&names) {
        let mut text = r.to_json();
        text.push('\n');
        write_atomic(&dir.join(name), text.as_bytes())?;
    }
    let manifest = Manifest {
        command,
        expectation_met: all_met(reports),
        reports: reports
            .iter()
            .zip(names)
            .map(|(r, file)| ManifestEntry {
                experiment: &r.experiment,
                file,
                expectation_met: expectation_met(r),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("plain data");
    text.push('\n');
    write_atomic(&dir.join("manifest.json"), text.as_bytes())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Plain-text table rendered from the serialized reports.
pub fn render_table(reports: &[ExperimentReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let v = serde_json::to_value(r).expect("plain data");
        let _ = writeln!(out, "[{}]", scalar(&v["experiment"]));
        let mut rows: Vec<(String, String)> = Vec::new();
        for section in ["parameters", "verdicts", "residuals"] {
            if let Some(map) = v[section].as_object() {
                for (k, val) in map {
                    let shown = match val {
                        Value::Number(n) if section == "residuals" => {
                            format!("{:.6e}", n.as_f64().unwrap_or(f64::NAN))
                        }
                        other => scalar(other),
                    };
                    rows.push((format!("{section}.{k}"), shown));
                }
            }
        }
        if let Some(w) = v.get("witness") {
            rows.push(("witness".into(), scalar(w)));
        }
        if let Some(rank) = v.get("rank_profile") {
            rows.push(("rank_profile.rank".into(), scalar(&rank["rank"])));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, val) in rows {
            let _ = writeln!(out, "  {k:<width$}  {val}");
        }
    }
    out
}
