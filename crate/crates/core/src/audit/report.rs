//! Report serialization.

use std::fmt::Write;

use super::{reproduce_table1, AuditReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Machine,
    Human,
}

pub fn emit_report(report: &AuditReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Machine => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Human => render_human(report),
    }
}

/// Plain-text report: the affected genera in a 7-column grid, then one line
/// per finding.
pub fn render_human(report: &AuditReport) -> String {
    let mut s = String::new();
    let checks: Vec<&str> = report.checks.iter().map(|c| c.name()).collect();
    writeln!(s, "dataset  {}", report.fingerprint).unwrap();
    writeln!(s, "checks   {}", checks.join(",")).unwrap();
    writeln!(s, "genera   {}", report.genera).unwrap();
    let counts: Vec<String> = report.summary.iter().map(|(f, n)| format!("{f} {n}")).collect();
    writeln!(s, "findings {} ({})", report.findings.len(), counts.join(", ")).unwrap();

    let genera = reproduce_table1(report);
    writeln!(s, "\nGenera with incorrect density or splitting: {}", genera.len()).unwrap();
    let labels: Vec<String> = genera.iter().map(|(d, i)| format!("{d}#{i}")).collect();
    let width = labels.iter().map(String::len).max().unwrap_or(0);
    for row in labels.chunks(7) {
        let cells: Vec<String> = row.iter().map(|l| format!("{l:<width$}")).collect();
        writeln!(s, "{}", cells.join(" | ").trim_end()).unwrap();
    }

    writeln!(s, "\n{:<10} {:>5} {:<17} {:>4}  tabulated => recomputed", "genus", "p", "field", "form").unwrap();
    for f in &report.findings {
        let p = f.prime.map_or("-".to_string(), |p| p.to_string());
        let form = f.form.map_or("-".to_string(), |i| (i + 1).to_string());
        writeln!(
            s,
            "{:<10} {:>5} {:<17} {:>4}  {} => {}",
            f.label(),
            p,
            f.field.to_string(),
            form,
            f.tabulated,
            f.recomputed
        )
        .unwrap();
    }
    writeln!(s, "\ngates").unwrap();
    for (k, v) in &report.gates {
        writeln!(s, "  {k:<24} {v}").unwrap();
    }
    s
}
