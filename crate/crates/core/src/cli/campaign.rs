//! Batch runs: a JSON list of jobs, run in parallel, summarized in order.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::engine::{Tower, DEFAULT_GROUP_CAP};
use crate::stability::{
    borel_spectral_sequence, induction_report, main_theorem_report, verify_main_theorem, DEFAULT_BUDGET,
};

use super::{parse_family, run_check, CheckKind, CliError};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub jobs: Vec<CampaignJob>,
    /// Defaults for jobs that do not set their own.
    pub cap: Option<usize>,
    pub budget: Option<u128>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CampaignJob {
    /// `[W_n : W_sub]`, optionally compared with an expected index.
    Cosets { family: String, n: i64, sub: Option<i64>, expect: Option<usize>, cap: Option<usize> },
    Check { family: String, n: i64, check: String, cap: Option<usize> },
    StabilityTable { family: String, nmax: i64, maxdeg: Option<usize>, budget: Option<u128>, cap: Option<usize> },
    SpectralSequence { family: String, n: i64, maxdeg: usize, budget: Option<u128>, cap: Option<usize> },
}

impl CampaignJob {
    pub fn name(&self) -> String {
        match self {
            CampaignJob::Cosets { family, n, sub, .. } => {
                format!("cosets-{}-{n}-{}", slug(family), sub.unwrap_or(n - 1))
            }
            CampaignJob::Check { family, n, check, .. } => format!("check-{check}-{}-{n}", slug(family)),
            CampaignJob::StabilityTable { family, nmax, .. } => format!("table-{}-{nmax}", slug(family)),
            CampaignJob::SpectralSequence { family, n, maxdeg, .. } => {
                format!("ss-{}-{n}-{maxdeg}", slug(family))
            }
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CampaignJob::Cosets { .. } => "cosets",
            CampaignJob::Check { .. } => "check",
            CampaignJob::StabilityTable { .. } => "stability_table",
            CampaignJob::SpectralSequence { .. } => "spectral_sequence",
        }
    }
}

fn slug(family: &str) -> String {
    family.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    Fail,
    BudgetExceeded,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignRow {
    pub name: String,
    pub kind: String,
    pub status: RowStatus,
    pub detail: Value,
    /// CSV written next to the summary, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignSummary {
    pub schema: u32,
    pub rows: Vec<CampaignRow>,
    pub all_pass: bool,
}

impl CampaignSummary {
    pub fn exit_code(&self) -> i32 {
        let has = |s| self.rows.iter().any(|r| r.status == s);
        if has(RowStatus::Error) {
            super::EXIT_USAGE
        } else if has(RowStatus::Fail) {
            super::EXIT_CHECK_FAILED
        } else if has(RowStatus::BudgetExceeded) {
            super::EXIT_BUDGET
        } else {
            super::EXIT_OK
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,kind,status\n");
        for r in &self.rows {
            let status = serde_json::to_value(r.status).expect("status");
            out.push_str(&format!("{},{},{}\n", r.name, r.kind, status.as_str().unwrap_or("")));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = String::from("campaign\n");
        for r in &self.rows {
            let status = serde_json::to_value(r.status).expect("status");
            out.push_str(&format!("  {:width$}  {}\n", r.name, status.as_str().unwrap_or("")));
        }
        out
    }
}

struct JobOutput {
    status: RowStatus,
    detail: Value,
    csv: Option<String>,
}

fn from_error(e: CliError) -> JobOutput {
    let status = match e {
        CliError::Budget(_) => RowStatus::BudgetExceeded,
        CliError::Usage(_) => RowStatus::Error,
    };
    JobOutput { status, detail: json!(e.to_string()), csv: None }
}

fn verdict(ok: bool) -> RowStatus {
    if ok {
        RowStatus::Pass
    } else {
        RowStatus::Fail
    }
}

fn run_job(job: &CampaignJob, cfg: &CampaignConfig) -> Result<JobOutput, CliError> {
    let default_cap = cfg.cap.unwrap_or(DEFAULT_GROUP_CAP);
    let default_budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    match job {
        CampaignJob::Cosets { family, n, sub, expect, cap } => {
            let spec = parse_family(family)?;
            let tower = Tower::new(&spec, *n)?;
            let index = tower.cosets(sub.unwrap_or(n - 1), cap.unwrap_or(default_cap))?.len();
            let ok = expect.is_none_or(|e| e == index);
            Ok(JobOutput { status: verdict(ok), detail: json!({"index": index, "expect": expect}), csv: None })
        }
        CampaignJob::Check { family, n, check, cap } => {
            let spec = parse_family(family)?;
            let kind = <CheckKind as clap::ValueEnum>::from_str(check, true).map_err(CliError::Usage)?;
            let (report, _) = run_check(kind, &spec, *n, cap.unwrap_or(default_cap), false)?;
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| c.verdict == crate::report::Verdict::Fail)
                .map(|c| c.name.as_str())
                .collect();
            Ok(JobOutput {
                status: verdict(report.passed()),
                detail: json!({"checks": report.checks.len(), "failed": failed}),
                csv: None,
            })
        }
        CampaignJob::StabilityTable { family, nmax, maxdeg, budget, cap } => {
            let spec = parse_family(family)?;
            let cap = cap.unwrap_or(default_cap);
            let lmax = maxdeg.unwrap_or((nmax.max(&0) / 2) as usize);
            let table = verify_main_theorem(&spec, *nmax, lmax, 2, budget.unwrap_or(default_budget), cap)?;
            let mut report = main_theorem_report(&table);
            report.extend("induction.", induction_report(&spec, &table, cap)?);
            let untested = table.entries.iter().filter(|e| e.in_range && e.map_rank.is_none()).count();
            let status = if !report.passed() {
                RowStatus::Fail
            } else if untested > 0 {
                RowStatus::BudgetExceeded
            } else {
                RowStatus::Pass
            };
            Ok(JobOutput {
                status,
                detail: json!({"untested_in_range": untested, "notes": table.notes}),
                csv: Some(table.to_csv()),
            })
        }
        CampaignJob::SpectralSequence { family, n, maxdeg, budget, cap } => {
            let spec = parse_family(family)?;
            let (page, report) = borel_spectral_sequence(
                &spec,
                *n,
                *maxdeg,
                2,
                budget.unwrap_or(default_budget),
                cap.unwrap_or(default_cap),
            )?;
            Ok(JobOutput {
                status: verdict(report.passed()),
                detail: json!({"e1": page.e1.iter().map(|c| [c.k, c.l, c.dim]).collect::<Vec<_>>()}),
                csv: None,
            })
        }
    }
}

/// Runs every job; rows come back in config order. With `out_dir`, writes
/// `summary.json`, `summary.csv` and one CSV per stability table.
pub fn run_campaign(cfg: &CampaignConfig, out_dir: Option<&Path>) -> Result<CampaignSummary, CliError> {
    let outputs: Vec<JobOutput> =
        cfg.jobs.par_iter().map(|job| run_job(job, cfg).unwrap_or_else(from_error)).collect();
    let mut rows = Vec::new();
    for (job, out) in cfg.jobs.iter().zip(outputs) {
        let name = job.name();
        let csv_name = out.csv.as_ref().map(|_| format!("{name}.csv"));
        if let (Some(dir), Some(body), Some(file)) = (out_dir, &out.csv, &csv_name) {
            write(&dir.join(file), body)?;
        }
        rows.push(CampaignRow { name, kind: job.kind().into(), status: out.status, detail: out.detail, csv: csv_name });
    }
    let all_pass = rows.iter().all(|r| r.status == RowStatus::Pass);
    let summary = CampaignSummary { schema: 1, rows, all_pass };
    if let Some(dir) = out_dir {
        write(&dir.join("summary.json"), &serde_json::to_string_pretty(&summary).expect("serializable"))?;
        write(&dir.join("summary.csv"), &summary.to_csv())?;
    }
    Ok(summary)
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::Usage(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, body).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> CampaignConfig {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn empty_config() {
        let s = run_campaign(&config("{}"), None).unwrap();
        assert!(s.rows.is_empty());
        assert!(s.all_pass);
        assert_eq!(s.exit_code(), 0);
    }

    #[test]
    fn infinite_family_row_is_budget_exceeded() {
        let cfg = config(
            r#"{"jobs": [
                {"kind": "cosets", "family": "A", "n": 3, "expect": 4},
                {"kind": "cosets", "family": "I:7", "n": 2, "cap": 2000},
                {"kind": "check", "family": "B", "n": 1, "check": "links"}
            ]}"#,
        );
        let s = run_campaign(&cfg, None).unwrap();
        let status: Vec<RowStatus> = s.rows.iter().map(|r| r.status).collect();
        assert_eq!(status, vec![RowStatus::Pass, RowStatus::BudgetExceeded, RowStatus::Pass]);
        assert_eq!(s.exit_code(), 3);
    }

    #[test]
    fn writes_outputs_deterministically() {
        let cfg = config(r#"{"jobs": [{"kind": "stability_table", "family": "A", "nmax": 2}]}"#);
        let dir = tempfile::tempdir().unwrap();
        let first = run_campaign(&cfg, Some(dir.path())).unwrap();
        let a = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("table-A-2.csv")).unwrap();
        run_campaign(&cfg, Some(dir.path())).unwrap();
        assert_eq!(a, std::fs::read_to_string(dir.path().join("summary.json")).unwrap());
        assert!(first.all_pass);
        assert!(csv.starts_with("family,m,l,dim,map_rank,verdict"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<CampaignConfig>(r#"{"jobz": []}"#).is_err());
        let bad = config(r#"{"jobs": [{"kind": "check", "family": "Q", "n": 1, "check": "links"}]}"#);
        let s = run_campaign(&bad, None).unwrap();
        assert_eq!(s.rows[0].status, RowStatus::Error);
        assert_eq!(s.exit_code(), 2);
    }
}
