//! Deterministic report writers: JSON (pretty, fixed field order) and a
//! CSV mirror of the same rows, plus a findings file for conjecture-grade
//! failures.

use crate::runner::RunConfig;
use eiskit::report::{CheckRow, Status};
use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    schema: u32,
    p: u64,
    n: u64,
    r: u32,
    m: u32,
    subcommand: &'a str,
    rows: &'a [CheckRow],
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Write report files and return a one-line summary.
pub fn write_reports(
    dir: &Path,
    name: &str,
    cfg: &RunConfig,
    rows: &[CheckRow],
    json: bool,
    csv: bool,
) -> std::io::Result<String> {
    std::fs::create_dir_all(dir)?;
    let stem = format!("{name}-p{}-N{}-r{}", cfg.p, cfg.n, cfg.r);
    let report = Report {
        tool: "eiskit",
        schema: 1,
        p: cfg.p,
        n: cfg.n,
        r: cfg.r,
        m: cfg.m,
        subcommand: name,
        rows,
    };
    if json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(dir.join(format!("{stem}.json")), text + "\n")?;
    }
    if csv {
        let mut out = String::from("check,grade,status,params,detail,iota_dependent\n");
        for row in rows {
            let grade = serde_json::to_value(row.grade).unwrap();
            let status = serde_json::to_value(row.status).unwrap();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.check,
                grade.as_str().unwrap(),
                status.as_str().unwrap(),
                csv_escape(&row.params),
                csv_escape(&row.detail),
                row.iota_dependent
            ));
        }
        std::fs::write(dir.join(format!("{stem}.csv")), out)?;
    }
    // findings file for conjecture-grade failures
    let findings: Vec<&CheckRow> =
        rows.iter().filter(|r| r.status == Status::Finding).collect();
    if !findings.is_empty() {
        let text = serde_json::to_string_pretty(&findings).expect("findings serialize");
        std::fs::write(dir.join(format!("{stem}-findings.json")), text + "\n")?;
    }
    let pass = rows.iter().filter(|r| r.status == Status::Pass).count();
    let fail = rows.iter().filter(|r| r.status == Status::Fail).count();
    let skip = rows.iter().filter(|r| r.status == Status::Skipped).count();
    Ok(format!(
        "{stem}: {pass} pass, {fail} fail, {} findings, {skip} skipped ({} rows)",
        findings.len(),
        rows.len()
    ))
}
