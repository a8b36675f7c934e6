use lawforge_core::{DomainConfig, LawReport, Status};
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unsupported: usize,
    pub total: usize,
}

impl Summary {
    pub fn of(reports: &[LawReport]) -> Summary {
        let mut s = Summary { total: reports.len(), ..Summary::default() };
        for r in reports {
            match r.status() {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Unsupported => s.unsupported += 1,
            }
        }
        s
    }
}

/// The JSON document written by `check --json`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportDocument {
    pub tool_version: &'static str,
    pub config_echo: DomainConfig,
    pub reports: Vec<LawReport>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(config: DomainConfig, reports: Vec<LawReport>) -> ReportDocument {
        let summary = Summary::of(&reports);
        ReportDocument { tool_version: env!("CARGO_PKG_VERSION"), config_echo: config, reports, summary }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report documents always serialize");
        s.push('\n');
        s
    }
}
