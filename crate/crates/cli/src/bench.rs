//! Benchmark harness: runs the pipeline over a manifest of function
//! files, verifies every circuit, and tabulates gate costs against
//! optional reference numbers.
//!
//! Manifest lines are `path[,reference_qc,source]`; `#` starts a comment.
//! Rows run in a parallel pool (capped by `PPRM_SYNTH_THREADS`) and are
//! reported sorted by name with a trailing average row. The CSV output
//! omits run times so repeated runs are byte-identical; the JSON report
//! carries them.

use crate::pipeline::{run_pipeline, CostModel, PipelineConfig, PipelineInput};
use rayon::prelude::*;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("manifest line {0}: {1}")]
    Manifest(usize, String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub reference_qc: Option<u64>,
    pub reference_source: Option<String>,
}

pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, BenchError> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let path = parts
            .next()
            .filter(|p| !p.is_empty())
            .ok_or_else(|| BenchError::Manifest(lineno + 1, "missing path".into()))?;
        let reference_qc = match parts.next() {
            Some("") | None => None,
            Some(v) => Some(v.parse().map_err(|_| {
                BenchError::Manifest(lineno + 1, format!("bad reference qc {v:?}"))
            })?),
        };
        let reference_source = parts.next().map(str::to_string);
        entries.push(ManifestEntry {
            path: base.join(path),
            reference_qc,
            reference_source,
        });
    }
    Ok(entries)
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub name: String,
    pub qc_ours: Option<u64>,
    pub reference_qc: Option<u64>,
    pub reference_source: Option<String>,
    pub verified: bool,
    pub error: Option<String>,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    /// Mean cost over rows that produced a circuit.
    pub average_qc: Option<f64>,
}

fn run_entry(entry: &ManifestEntry, config: &PipelineConfig) -> BenchRow {
    let name = entry
        .path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| entry.path.display().to_string());
    let started = Instant::now();
    let mut row = BenchRow {
        name,
        qc_ours: None,
        reference_qc: entry.reference_qc,
        reference_source: entry.reference_source.clone(),
        verified: false,
        error: None,
        runtime_ms: 0,
    };
    let text = match std::fs::read_to_string(&entry.path) {
        Ok(t) => t,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let input = if entry.path.extension().is_some_and(|e| e == "real") {
        PipelineInput::Real(text)
    } else {
        PipelineInput::Pprm(text)
    };
    match run_pipeline(&input, config) {
        Ok(outcome) => {
            row.qc_ours = outcome.qc(config.cost_model).map(|v| v as u64);
            row.verified = outcome
                .equivalence
                .as_ref()
                .is_some_and(|r| r.is_equivalent());
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row.runtime_ms = started.elapsed().as_millis();
    row
}

/// Runs every manifest entry (in parallel), sorted output by name.
pub fn run_bench(entries: &[ManifestEntry], config: &PipelineConfig) -> BenchTable {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(
            std::env::var("PPRM_SYNTH_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(0),
        )
        .build()
        .expect("thread pool");
    let mut rows: Vec<BenchRow> =
        pool.install(|| entries.par_iter().map(|e| run_entry(e, config)).collect());
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    let costs: Vec<u64> = rows.iter().filter_map(|r| r.qc_ours).collect();
    let average_qc = if costs.is_empty() {
        None
    } else {
        Some(costs.iter().sum::<u64>() as f64 / costs.len() as f64)
    };
    BenchTable { rows, average_qc }
}

pub fn to_csv(table: &BenchTable) -> String {
    let mut out = String::from("name,qc,reference_qc,reference_source,verified,error\n");
    let field = |s: &str| {
        if s.contains(',') || s.contains('"') {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            field(&r.name),
            r.qc_ours.map(|v| v.to_string()).unwrap_or_default(),
            r.reference_qc.map(|v| v.to_string()).unwrap_or_default(),
            field(r.reference_source.as_deref().unwrap_or("")),
            r.verified,
            field(r.error.as_deref().unwrap_or("")),
        ));
    }
    out.push_str(&format!(
        "Average,{},,,,\n",
        table
            .average_qc
            .map(|v| format!("{v:.2}"))
            .unwrap_or_default()
    ));
    out
}

pub fn to_json(table: &BenchTable) -> serde_json::Value {
    json!({
        "rows": table.rows.iter().map(|r| json!({
            "name": r.name,
            "qc": r.qc_ours,
            "reference_qc": r.reference_qc,
            "reference_source": r.reference_source,
            "verified": r.verified,
            "error": r.error,
            "runtime_ms": r.runtime_ms,
        })).collect::<Vec<_>>(),
        "average_qc": table.average_qc,
    })
}

/// Default cost model used by the shipped manifest comparisons.
pub fn default_config() -> PipelineConfig {
    PipelineConfig { cost_model: CostModel::Annotated, ..Default::default() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    fn tempdir() -> PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "pprm-bench-test-{}-{:?}",
            std::process::id(),
            std::thread::current().id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn empty_manifest_yields_header_only() {
        let table = run_bench(&[], &default_config());
        assert!(table.rows.is_empty());
        let csv = to_csv(&table);
        assert!(csv.starts_with("name,qc,"));
        assert!(csv.contains("Average"));
    }

    #[test]
    fn in_repo_manifest_rows_verify() {
        let dir = tempdir();
        write_file(&dir, "f1.pprm", "x1x2x3x4 + x1x3 + x1x5\n");
        write_file(&dir, "gt.pprm", "x1x2x4 + x2x3x4 + x2x3 + x2x4 + x1 + x1x2x3~x4\n");
        let manifest = parse_manifest("f1.pprm,42,figure\ngt.pprm\n", &dir).unwrap();
        let table = run_bench(&manifest, &default_config());
        assert_eq!(table.rows.len(), 2);
        assert!(table.rows.iter().all(|r| r.verified), "{:?}", table.rows);
        assert_eq!(table.rows[0].name, "f1");
        assert_eq!(table.rows[0].qc_ours, Some(30));
        assert_eq!(table.rows[0].reference_qc, Some(42));
    }

    #[test]
    fn corrupted_row_does_not_poison_table() {
        let dir = tempdir();
        write_file(&dir, "ok.pprm", "x1x2\n");
        write_file(&dir, "bad.pprm", "x1 ++ x2\n");
        let manifest = parse_manifest("ok.pprm\nbad.pprm\n", &dir).unwrap();
        let table = run_bench(&manifest, &default_config());
        let bad = table.rows.iter().find(|r| r.name == "bad").unwrap();
        assert!(bad.error.is_some());
        assert!(!bad.verified);
        let ok = table.rows.iter().find(|r| r.name == "ok").unwrap();
        assert!(ok.verified);
    }

    #[test]
    fn csv_is_stable_across_runs() {
        let dir = tempdir();
        write_file(&dir, "a.pprm", "x1x2 + x3\n");
        let manifest = parse_manifest("a.pprm,9,table\n", &dir).unwrap();
        let t1 = to_csv(&run_bench(&manifest, &default_config()));
        let t2 = to_csv(&run_bench(&manifest, &default_config()));
        assert_eq!(t1, t2);
    }
}
