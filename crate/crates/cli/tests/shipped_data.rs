//! The reference functions shipped under `testdata/` must all verify and
//! land on their recorded costs.

use pprm_synth_cli::bench::{parse_manifest, run_bench, to_csv};
use pprm_synth_cli::pipeline::PipelineConfig;
use std::path::Path;

#[test]
fn shipped_manifest_rows_verify() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("testdata");
    let text = std::fs::read_to_string(dir.join("manifest.txt")).unwrap();
    let entries = parse_manifest(&text, &dir).unwrap();
    let table = run_bench(&entries, &PipelineConfig::default());
    assert_eq!(table.rows.len(), 5);
    for row in &table.rows {
        assert!(row.verified, "{} failed: {:?}", row.name, row.error);
    }
    let qc = |name: &str| {
        table
            .rows
            .iter()
            .find(|r| r.name == name)
            .and_then(|r| r.qc_ours)
            .unwrap()
    };
    assert_eq!(qc("f1"), 30);
    assert_eq!(qc("f2"), 30);
    let g4 = qc("4gt4_20");
    assert!((45..=47).contains(&g4), "4gt4_20 qc {g4}");

    // table layout: sorted rows, trailing average
    let csv = to_csv(&table);
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines.last().unwrap().starts_with("Average,"));
    let names: Vec<&str> = lines[1..lines.len() - 1]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}
