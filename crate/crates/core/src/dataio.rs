//! Table fixtures: CSV loading, claim checks over SNR/accuracy series, and
//! per-group summaries.
//!
//! Schema (header row required, column order free):
//! `table_id,window_size,digit,base_snr,overlap_pct,frame_size,snr_db,accuracy_pct`.
//! Optional fields are written as empty strings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

pub const COLUMNS: [&str; 8] = [
    "table_id",
    "window_size",
    "digit",
    "base_snr",
    "overlap_pct",
    "frame_size",
    "snr_db",
    "accuracy_pct",
];

/// The nine overlap settings every group is expected to cover.
pub const OVERLAPS: [u32; 9] = [20, 25, 30, 35, 40, 45, 50, 55, 60];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRecord {
    pub table_id: u8,
    pub window_size: u32,
    pub digit: Option<String>,
    pub base_snr: Option<f64>,
    pub overlap_pct: u32,
    /// As printed; `None` where the published cell is missing.
    pub frame_size: Option<f64>,
    pub snr_db: f64,
    pub accuracy_pct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroupBy {
    /// Digit when the record has one, window size otherwise.
    #[default]
    Auto,
    Window,
    Digit,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupLabel {
    Window(u32),
    /// Rank orders English digit names zero..nine before any other label.
    Digit(u8, String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupKey {
    pub table_id: u8,
    pub label: GroupLabel,
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            GroupLabel::Window(w) => write!(f, "table {} win={w}", self.table_id),
            GroupLabel::Digit(_, d) => write!(f, "table {} digit={d}", self.table_id),
        }
    }
}

fn digit_rank(name: &str) -> u8 {
    const NAMES: [&str; 10] = [
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    ];
    NAMES
        .iter()
        .position(|n| n.eq_ignore_ascii_case(name))
        .map_or(u8::MAX, |p| p as u8)
}

impl TableRecord {
    pub fn group_key(&self, by: GroupBy) -> GroupKey {
        let label = match (by, &self.digit) {
            (GroupBy::Window, _) | (GroupBy::Auto, None) => GroupLabel::Window(self.window_size),
            (_, Some(d)) => GroupLabel::Digit(digit_rank(d), d.clone()),
            (GroupBy::Digit, None) => GroupLabel::Digit(u8::MAX, String::new()),
        };
        GroupKey {
            table_id: self.table_id,
            label,
        }
    }
}

pub fn load_table_csv(path: impl AsRef<Path>) -> Result<Vec<TableRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_records(file).map_err(|e| match e {
        Error::Load { row, message, .. } => Error::Load {
            path: Some(path.to_path_buf()),
            row,
            message,
        },
        other => other,
    })
}

/// Parses records from any reader. Row numbers in errors are 1-based file
/// lines (the header is line 1).
pub fn read_records<R: Read>(reader: R) -> Result<Vec<TableRecord>> {
    let load_err = |row: usize, message: String| Error::Load {
        path: None,
        row,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().all(|h| h.trim().is_empty()) {
        return Err(load_err(1, "empty table: no header row".into()));
    }
    let mut index = BTreeMap::new();
    for col in COLUMNS {
        match headers.iter().position(|h| h.trim() == col) {
            Some(i) => {
                index.insert(col, i);
            }
            None => return Err(load_err(1, format!("missing column '{col}'"))),
        }
    }

    let mut records = Vec::new();
    let mut seen: BTreeMap<(GroupKey, u32), usize> = BTreeMap::new();
    for result in rdr.records() {
        let rec = result?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let cell = |col: &str| rec.get(index[col]).unwrap_or("").trim();
        let required = |col: &str| -> Result<f64> {
            let raw = cell(col);
            let v: f64 = raw
                .parse()
                .map_err(|_| load_err(row, format!("column '{col}': '{raw}' is not a number")))?;
            if !v.is_finite() {
                return Err(load_err(row, format!("column '{col}': value must be finite")));
            }
            Ok(v)
        };
        let optional = |col: &str| -> Result<Option<f64>> {
            if cell(col).is_empty() {
                Ok(None)
            } else {
                required(col).map(Some)
            }
        };
        let integer = |col: &str| -> Result<u32> {
            let raw = cell(col);
            raw.parse()
                .map_err(|_| load_err(row, format!("column '{col}': '{raw}' is not a non-negative integer")))
        };

        let table_id = integer("table_id")?;
        if !(1..=5).contains(&table_id) {
            return Err(load_err(row, format!("table_id {table_id} outside 1..=5")));
        }
        let overlap_pct = integer("overlap_pct")?;
        if !OVERLAPS.contains(&overlap_pct) {
            return Err(load_err(
                row,
                format!("overlap_pct {overlap_pct} is not one of {OVERLAPS:?}"),
            ));
        }
        let accuracy_pct = required("accuracy_pct")?;
        if !(0.0..=100.0).contains(&accuracy_pct) {
            return Err(load_err(row, format!("accuracy_pct {accuracy_pct} outside [0, 100]")));
        }
        let digit = Some(cell("digit")).filter(|d| !d.is_empty()).map(str::to_string);
        let record = TableRecord {
            table_id: table_id as u8,
            window_size: integer("window_size")?,
            digit,
            base_snr: optional("base_snr")?,
            overlap_pct,
            frame_size: optional("frame_size")?,
            snr_db: required("snr_db")?,
            accuracy_pct,
        };
        let key = (record.group_key(GroupBy::Auto), overlap_pct);
        if let Some(first) = seen.insert(key.clone(), row) {
            return Err(load_err(
                row,
                format!("duplicate cell {} overlap {}% (first on row {first})", key.0, key.1),
            ));
        }
        records.push(record);
    }
    if records.is_empty() {
        return Err(load_err(1, "empty table: no data rows".into()));
    }
    Ok(records)
}

/// Writes records in the fixture schema; reloading yields equal records.
pub fn write_table_csv<W: Write>(records: &[TableRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(COLUMNS)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        w.write_record([
            r.table_id.to_string(),
            r.window_size.to_string(),
            r.digit.clone().unwrap_or_default(),
            opt(r.base_snr),
            r.overlap_pct.to_string(),
            opt(r.frame_size),
            r.snr_db.to_string(),
            r.accuracy_pct.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Records bucketed by group, each bucket sorted by overlap.
pub fn group_records(records: &[TableRecord], by: GroupBy) -> BTreeMap<GroupKey, Vec<&TableRecord>> {
    let mut groups: BTreeMap<GroupKey, Vec<&TableRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.group_key(by)).or_default().push(r);
    }
    for rows in groups.values_mut() {
        rows.sort_by_key(|r| r.overlap_pct);
    }
    groups
}

// Exactly one row per expected overlap, in overlap order.
fn complete_series<'a>(rows: &[&'a TableRecord]) -> Option<Vec<&'a TableRecord>> {
    let overlaps: Vec<u32> = rows.iter().map(|r| r.overlap_pct).collect();
    (overlaps == OVERLAPS).then(|| rows.to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupVerdict {
    pub group: String,
    pub verdict: Verdict,
    pub witness_overlap: Option<u32>,
    pub witness_value: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub groups_checked: usize,
    pub groups_passing: usize,
    pub groups: Vec<GroupVerdict>,
}

impl ClaimReport {
    fn new(claim_id: &str, groups: Vec<GroupVerdict>) -> Self {
        let checked = groups.iter().filter(|g| g.verdict != Verdict::Unchecked).count();
        let passing = groups.iter().filter(|g| g.verdict == Verdict::Pass).count();
        Self {
            claim_id: claim_id.to_string(),
            groups_checked: checked,
            groups_passing: passing,
            groups,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.groups_checked == self.groups.len() && self.groups_passing == self.groups_checked
    }

    pub fn failures(&self) -> impl Iterator<Item = &GroupVerdict> {
        self.groups.iter().filter(|g| g.verdict == Verdict::Fail)
    }
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "claim {}: {}/{} groups pass",
            self.claim_id, self.groups_passing, self.groups_checked
        )?;
        for g in &self.groups {
            let tag = match g.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Unchecked => "SKIP",
            };
            writeln!(f, "  {tag}  {:<22} {}", g.group, g.detail)?;
        }
        Ok(())
    }
}

pub const SNR_PEAK: &str = "snr-peak";
pub const ACCURACY_ARGMAX: &str = "acc-argmax";

/// Per group: SNR strictly rises from 20 % to 50 % overlap and strictly
/// falls from 50 % to 60 %. Ties fail.
pub fn snr_peak_check(records: &[TableRecord], by: GroupBy) -> ClaimReport {
    let groups = group_records(records, by)
        .into_iter()
        .map(|(key, rows)| {
            let group = key.to_string();
            let Some(series) = complete_series(&rows) else {
                return unchecked(group, rows.len());
            };
            let peak = series.iter().position(|r| r.overlap_pct == 50).unwrap_or(0);
            let snr: Vec<f64> = series.iter().map(|r| r.snr_db).collect();
            let violation = (1..snr.len()).find(|&i| {
                if i <= peak {
                    snr[i] <= snr[i - 1]
                } else {
                    snr[i] >= snr[i - 1]
                }
            });
            let (verdict, detail) = match violation {
                None => (
                    Verdict::Pass,
                    format!(
                        "rises {:.4} -> {:.4} dB at 50%, falls to {:.4}",
                        snr[0],
                        snr[peak],
                        snr[snr.len() - 1]
                    ),
                ),
                Some(i) => {
                    let dir = if i <= peak { "rise" } else { "fall" };
                    (
                        Verdict::Fail,
                        format!(
                            "no strict {dir} from {}% ({:.4}) to {}% ({:.4})",
                            series[i - 1].overlap_pct,
                            snr[i - 1],
                            series[i].overlap_pct,
                            snr[i]
                        ),
                    )
                }
            };
            GroupVerdict {
                group,
                verdict,
                witness_overlap: Some(50),
                witness_value: Some(snr[peak]),
                detail,
            }
        })
        .collect();
    ClaimReport::new(SNR_PEAK, groups)
}

/// Per group: overlap with the highest accuracy (smallest overlap on ties);
/// passes when it lies within `[45, 55]`.
pub fn accuracy_argmax_report(records: &[TableRecord], by: GroupBy) -> ClaimReport {
    let groups = group_records(records, by)
        .into_iter()
        .map(|(key, rows)| {
            let group = key.to_string();
            let Some(series) = complete_series(&rows) else {
                return unchecked(group, rows.len());
            };
            let best = series
                .iter()
                .copied()
                .reduce(|b, r| if r.accuracy_pct > b.accuracy_pct { r } else { b })
                .expect("complete series is non-empty");
            let pass = (45..=55).contains(&best.overlap_pct);
            GroupVerdict {
                group,
                verdict: if pass { Verdict::Pass } else { Verdict::Fail },
                witness_overlap: Some(best.overlap_pct),
                witness_value: Some(best.accuracy_pct),
                detail: format!(
                    "max accuracy {:.4} at {}%{}",
                    best.accuracy_pct,
                    best.overlap_pct,
                    if pass { "" } else { " (outside 45-55%)" }
                ),
            }
        })
        .collect();
    ClaimReport::new(ACCURACY_ARGMAX, groups)
}

fn unchecked(group: String, rows: usize) -> GroupVerdict {
    GroupVerdict {
        group,
        verdict: Verdict::Unchecked,
        witness_overlap: None,
        witness_value: None,
        detail: format!("incomplete series ({rows} rows, need one per overlap 20..60 step 5)"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Stats {
    fn of(values: &[f64]) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Self { min, max, mean }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub group: String,
    pub count: usize,
    pub snr_db: Stats,
    pub accuracy_pct: Stats,
}

/// Min/max/mean of SNR and accuracy per auto group, in group order.
pub fn summarize(records: &[TableRecord]) -> Result<Vec<GroupSummary>> {
    if records.is_empty() {
        return Err(Error::Input("cannot summarize an empty table".into()));
    }
    Ok(group_records(records, GroupBy::Auto)
        .into_iter()
        .map(|(key, rows)| {
            let snr: Vec<f64> = rows.iter().map(|r| r.snr_db).collect();
            let acc: Vec<f64> = rows.iter().map(|r| r.accuracy_pct).collect();
            GroupSummary {
                group: key.to_string(),
                count: rows.len(),
                snr_db: Stats::of(&snr),
                accuracy_pct: Stats::of(&acc),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LintWarning {
    pub group: String,
    pub overlap_pct: Option<u32>,
    pub message: String,
}

impl fmt::Display for LintWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.overlap_pct {
            Some(o) => write!(f, "{} @ {o}%: {}", self.group, self.message),
            None => write!(f, "{}: {}", self.group, self.message),
        }
    }
}

/// Flags cells that look like transcription anomalies in the published
/// tables: missing frame sizes, frame sizes that shrink as overlap grows,
/// and groups without the full overlap series. Data is never altered.
pub fn lint_records(records: &[TableRecord]) -> Vec<LintWarning> {
    let mut out = Vec::new();
    for (key, rows) in group_records(records, GroupBy::Auto) {
        let group = key.to_string();
        let present: BTreeSet<u32> = rows.iter().map(|r| r.overlap_pct).collect();
        let missing: Vec<u32> = OVERLAPS.iter().copied().filter(|o| !present.contains(o)).collect();
        if !missing.is_empty() {
            out.push(LintWarning {
                group: group.clone(),
                overlap_pct: None,
                message: format!("missing overlaps {missing:?}"),
            });
        }
        let mut prev: Option<(u32, f64)> = None;
        for r in &rows {
            match r.frame_size {
                None => out.push(LintWarning {
                    group: group.clone(),
                    overlap_pct: Some(r.overlap_pct),
                    message: "frame size cell is empty".into(),
                }),
                Some(fs) => {
                    if let Some((po, pfs)) = prev {
                        if fs < pfs {
                            out.push(LintWarning {
                                group: group.clone(),
                                overlap_pct: Some(r.overlap_pct),
                                message: format!("frame size {fs} drops below {pfs} at {po}%"),
                            });
                        }
                    }
                    prev = Some((r.overlap_pct, fs));
                }
            }
        }
    }
    out
}

/// Bundled fixture paths, relative to this crate's `data/` directory.
pub fn fixture_path(table_id: u8) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(format!("table{table_id}.csv"))
}
