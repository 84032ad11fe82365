//! Reader and writer for the MATLAB-style `.fis` text format.
//!
//! The accepted subset covers Mamdani systems with `trimf`/`gaussmf`
//! membership functions and the fixed min/max/min/max/centroid operator set.
//! Parsing happens in two passes: the text is split into sections of
//! `key=value` and rule lines ([`FisDocument`]), then the sections are
//! interpreted and validated into a [`FisDefinition`]. Every error carries
//! the 1-based line it was found on.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::fuzzy::{Connective, FisDefinition, FuzzyRule, FuzzyVariable, MembershipFunction, NamedMembership};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A diagnostic. `line` is 1-based; 0 means the issue has no source line
/// (e.g. validating a definition that was built in code).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseIssue {
    pub severity: Severity,
    pub line: usize,
    pub message: String,
}

impl ParseIssue {
    pub fn error(line: usize, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            line,
            message: message.into(),
        }
    }

    pub fn warning(line: usize, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            line,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ParseIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        if self.line > 0 {
            write!(f, "{sev}: line {}: {}", self.line, self.message)
        } else {
            write!(f, "{sev}: {}", self.message)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SectionKind {
    System,
    Input(usize),
    Output(usize),
    Rules,
}

impl SectionKind {
    fn from_header(name: &str) -> Option<Self> {
        let index = |prefix: &str| -> Option<usize> {
            let digits = name.strip_prefix(prefix)?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            digits.parse().ok().filter(|&k| k >= 1)
        };
        match name {
            "System" => Some(Self::System),
            "Rules" => Some(Self::Rules),
            _ => index("Input")
                .map(Self::Input)
                .or_else(|| index("Output").map(Self::Output)),
        }
    }
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::System => f.write_str("[System]"),
            Self::Input(k) => write!(f, "[Input{k}]"),
            Self::Output(k) => write!(f, "[Output{k}]"),
            Self::Rules => f.write_str("[Rules]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EntryKind {
    KeyValue { key: String, value: String },
    Rule(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub kind: EntryKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub kind: SectionKind,
    pub line: usize,
    pub entries: Vec<Entry>,
}

/// Sectioned view of a `.fis` file, before interpretation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FisDocument {
    pub sections: Vec<Section>,
}

impl FisDocument {
    /// Splits `text` into sections. Blank lines are ignored and both LF and
    /// CRLF line endings are accepted.
    pub fn parse(text: &str) -> Result<Self, Vec<ParseIssue>> {
        let mut issues = Vec::new();
        let mut sections: Vec<Section> = Vec::new();

        for (idx, raw) in text.split('\n').enumerate() {
            let line_no = idx + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') && line.len() >= 2 {
                let name = line[1..line.len() - 1].trim();
                match SectionKind::from_header(name) {
                    Some(kind) => {
                        if let Some(prev) = sections.iter().find(|s| s.kind == kind) {
                            issues.push(ParseIssue::error(
                                line_no,
                                format!("duplicate section {kind} (first defined on line {})", prev.line),
                            ));
                        }
                        sections.push(Section {
                            kind,
                            line: line_no,
                            entries: Vec::new(),
                        });
                    }
                    None => issues.push(ParseIssue::error(line_no, format!("unknown section [{name}]"))),
                }
                continue;
            }
            let Some(section) = sections.last_mut() else {
                issues.push(ParseIssue::error(line_no, "content before the first section header"));
                continue;
            };
            let kind = if section.kind == SectionKind::Rules {
                EntryKind::Rule(line.to_string())
            } else if let Some((key, value)) = line.split_once('=') {
                EntryKind::KeyValue {
                    key: key.trim().to_string(),
                    value: value.trim().to_string(),
                }
            } else {
                issues.push(ParseIssue::error(
                    line_no,
                    format!("expected key=value, found '{line}'"),
                ));
                continue;
            };
            section.entries.push(Entry { line: line_no, kind });
        }

        if issues.is_empty() {
            Ok(Self { sections })
        } else {
            Err(issues)
        }
    }

    pub fn section(&self, kind: SectionKind) -> Option<&Section> {
        self.sections.iter().find(|s| s.kind == kind)
    }
}

/// Successful parse: the definition plus any warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedFis {
    pub fis: FisDefinition,
    pub warnings: Vec<ParseIssue>,
}

/// Parses and validates `.fis` text. On failure the returned list holds at
/// least one error; warnings found along the way are included.
pub fn parse_fis(text: &str) -> Result<ParsedFis, Vec<ParseIssue>> {
    let doc = FisDocument::parse(text)?;
    let mut ctx = Interpreter::default();
    let fis = ctx.interpret(&doc);
    if let Some(fis) = &fis {
        ctx.issues.extend(validate_with(fis, &ctx.lines));
    }
    let mut issues = ctx.issues;
    issues.sort_by_key(|i| (i.line, i.severity != Severity::Error));
    match fis {
        Some(fis) if !issues.iter().any(ParseIssue::is_error) => Ok(ParsedFis { fis, warnings: issues }),
        _ => {
            if !issues.iter().any(ParseIssue::is_error) {
                issues.push(ParseIssue::error(1, "no fuzzy system could be built"));
            }
            Err(issues)
        }
    }
}

/// Emits `fis` in `.fis` layout: System, Inputs ascending, Outputs
/// ascending, Rules. Numbers use the shortest representation that parses
/// back to the same `f64`.
pub fn serialize_fis(fis: &FisDefinition) -> String {
    let mut out = String::new();
    out.push_str("[System]\n");
    let _ = writeln!(out, "Name='{}'", fis.name);
    let _ = writeln!(out, "Type='{}'", FisDefinition::TYPE);
    if let Some(v) = &fis.version {
        let _ = writeln!(out, "Version={v}");
    }
    let _ = writeln!(out, "NumInputs={}", fis.inputs.len());
    let _ = writeln!(out, "NumOutputs={}", fis.outputs.len());
    let _ = writeln!(out, "NumRules={}", fis.rules.len());
    let _ = writeln!(out, "AndMethod='{}'", FisDefinition::AND_METHOD);
    let _ = writeln!(out, "OrMethod='{}'", FisDefinition::OR_METHOD);
    let _ = writeln!(out, "ImpMethod='{}'", FisDefinition::IMP_METHOD);
    let _ = writeln!(out, "AggMethod='{}'", FisDefinition::AGG_METHOD);
    let _ = writeln!(out, "DefuzzMethod='{}'", FisDefinition::DEFUZZ_METHOD);

    let vars = fis
        .inputs
        .iter()
        .enumerate()
        .map(|(i, v)| (SectionKind::Input(i + 1), v))
        .chain(
            fis.outputs
                .iter()
                .enumerate()
                .map(|(i, v)| (SectionKind::Output(i + 1), v)),
        );
    for (kind, var) in vars {
        let _ = writeln!(out, "\n{kind}");
        let _ = writeln!(out, "Name='{}'", var.name);
        let _ = writeln!(out, "Range=[{} {}]", var.range.0, var.range.1);
        let _ = writeln!(out, "NumMFs={}", var.mfs.len());
        for (k, mf) in var.mfs.iter().enumerate() {
            let _ = writeln!(out, "MF{}='{}':{}", k + 1, mf.name, mf.function);
        }
    }

    out.push_str("\n[Rules]\n");
    for rule in &fis.rules {
        let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(
            out,
            "{}, {} ({}) : {}",
            join(&rule.antecedent),
            join(&rule.consequent),
            rule.weight,
            rule.connective.code()
        );
    }
    out
}

/// Checks every structural invariant of `fis`. Errors make the system
/// unusable; warnings flag things that are legal but worth a look, such as
/// MF supports reaching past the variable range or output sets no rule
/// can produce.
pub fn validate(fis: &FisDefinition) -> Vec<ParseIssue> {
    validate_with(fis, &SourceLines::default())
}

#[derive(Debug, Default, Clone)]
struct VariableLines {
    header: usize,
    name: usize,
    range: usize,
    mfs: Vec<usize>,
}

#[derive(Debug, Default, Clone)]
struct SourceLines {
    system: usize,
    name: usize,
    inputs: Vec<VariableLines>,
    outputs: Vec<VariableLines>,
    rules: Vec<usize>,
}

fn at(v: &[usize], i: usize) -> usize {
    v.get(i).copied().unwrap_or(0)
}

fn var_lines(v: &[VariableLines], i: usize) -> VariableLines {
    v.get(i).cloned().unwrap_or_default()
}

fn check_label(issues: &mut Vec<ParseIssue>, line: usize, what: &str, name: &str) {
    if name.contains('\'') || name.contains('\n') || name.contains('\r') {
        issues.push(ParseIssue::error(
            line,
            format!("{what} name {name:?} may not contain apostrophes or line breaks"),
        ));
    }
}

fn validate_with(fis: &FisDefinition, lines: &SourceLines) -> Vec<ParseIssue> {
    let mut issues = Vec::new();
    check_label(&mut issues, lines.name, "system", &fis.name);
    if fis.inputs.is_empty() {
        issues.push(ParseIssue::error(lines.system, "system has no inputs"));
    }
    if fis.outputs.is_empty() {
        issues.push(ParseIssue::error(lines.system, "system has no outputs"));
    }

    let groups = [
        ("input", &fis.inputs, &lines.inputs),
        ("output", &fis.outputs, &lines.outputs),
    ];
    for (role, vars, var_src) in groups {
        for (i, var) in vars.iter().enumerate() {
            let src = var_lines(var_src, i);
            validate_variable(&mut issues, role, var, &src);
        }
    }

    if fis.rules.is_empty() {
        issues.push(ParseIssue::warning(lines.system, "system has no rules"));
    }
    for (r, rule) in fis.rules.iter().enumerate() {
        let line = at(&lines.rules, r);
        validate_rule(&mut issues, fis, r + 1, rule, line);
    }

    for (o, var) in fis.outputs.iter().enumerate() {
        let src = var_lines(&lines.outputs, o);
        for (k, mf) in var.mfs.iter().enumerate() {
            let used = fis.rules.iter().any(|rule| rule.consequent.get(o) == Some(&(k + 1)));
            if !used {
                issues.push(ParseIssue::warning(
                    at(&src.mfs, k),
                    format!("output MF '{}' of '{}' is not reachable by any rule", mf.name, var.name),
                ));
            }
        }
    }
    issues
}

fn validate_variable(issues: &mut Vec<ParseIssue>, role: &str, var: &FuzzyVariable, src: &VariableLines) {
    check_label(issues, src.name, role, &var.name);
    let (lo, hi) = var.range;
    let range_ok = lo.is_finite() && hi.is_finite() && lo < hi;
    if !range_ok {
        issues.push(ParseIssue::error(
            src.range.max(src.header),
            format!(
                "{role} '{}' has invalid range [{lo} {hi}]; need finite lo < hi",
                var.name
            ),
        ));
    }
    if var.mfs.is_empty() {
        issues.push(ParseIssue::error(
            src.header,
            format!("{role} '{}' has no membership functions", var.name),
        ));
    }
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (k, mf) in var.mfs.iter().enumerate() {
        let line = at(&src.mfs, k);
        check_label(issues, line, "MF", &mf.name);
        if let Some(first) = seen.insert(mf.name.as_str(), k + 1) {
            issues.push(ParseIssue::error(
                line,
                format!(
                    "duplicate MF name '{}' in '{}' (MF{} and MF{})",
                    mf.name,
                    var.name,
                    first,
                    k + 1
                ),
            ));
        }
        if let Err(e) = mf.function.check() {
            issues.push(ParseIssue::error(
                line,
                format!("MF '{}' of '{}': {e}", mf.name, var.name),
            ));
            continue;
        }
        if !range_ok {
            continue;
        }
        let beyond = match mf.function {
            MembershipFunction::Triangular { a, c, .. } => a < lo || c > hi,
            MembershipFunction::Gaussian { center, .. } => center < lo || center > hi,
        };
        if beyond {
            issues.push(ParseIssue::warning(
                line,
                format!(
                    "MF '{}' {} of '{}' extends beyond range [{lo} {hi}]",
                    mf.name, mf.function, var.name
                ),
            ));
        }
    }
}

fn validate_rule(issues: &mut Vec<ParseIssue>, fis: &FisDefinition, number: usize, rule: &FuzzyRule, line: usize) {
    let mut err = |msg: String| issues.push(ParseIssue::error(line, format!("rule {number}: {msg}")));
    if rule.antecedent.len() != fis.inputs.len() {
        err(format!(
            "antecedent has {} indices but the system has {} inputs",
            rule.antecedent.len(),
            fis.inputs.len()
        ));
    } else {
        if rule.antecedent.iter().all(|&i| i == 0) {
            err("needs at least one nonzero antecedent index".to_string());
        }
        for (var, &idx) in fis.inputs.iter().zip(&rule.antecedent) {
            if idx > var.mfs.len() {
                err(format!(
                    "antecedent index {idx} exceeds the {} MFs of input '{}'",
                    var.mfs.len(),
                    var.name
                ));
            }
        }
    }
    if rule.consequent.len() != fis.outputs.len() {
        err(format!(
            "consequent has {} indices but the system has {} outputs",
            rule.consequent.len(),
            fis.outputs.len()
        ));
    } else {
        for (var, &idx) in fis.outputs.iter().zip(&rule.consequent) {
            if idx == 0 || idx > var.mfs.len() {
                err(format!(
                    "consequent index {idx} must address one of the {} MFs of output '{}'",
                    var.mfs.len(),
                    var.name
                ));
            }
        }
    }
    if !(rule.weight > 0.0 && rule.weight <= 1.0) {
        err(format!("weight {} outside (0, 1]", rule.weight));
    }
}

#[derive(Default)]
struct Interpreter {
    issues: Vec<ParseIssue>,
    lines: SourceLines,
}

struct SystemBlock {
    name: Option<String>,
    version: Option<String>,
    num_inputs: Option<(usize, usize)>,
    num_outputs: Option<(usize, usize)>,
    num_rules: Option<(usize, usize)>,
}

impl Interpreter {
    fn error(&mut self, line: usize, msg: impl Into<String>) {
        self.issues.push(ParseIssue::error(line, msg));
    }

    fn warn(&mut self, line: usize, msg: impl Into<String>) {
        self.issues.push(ParseIssue::warning(line, msg));
    }

    fn interpret(&mut self, doc: &FisDocument) -> Option<FisDefinition> {
        let Some(system) = doc.section(SectionKind::System) else {
            self.error(1, "missing [System] section");
            return None;
        };
        self.lines.system = system.line;
        let sys = self.system(system);

        let inputs = self.variables(doc, input_index, "input", sys.num_inputs);
        let outputs = self.variables(doc, output_index, "output", sys.num_outputs);

        let mut rules = Vec::new();
        match doc.section(SectionKind::Rules) {
            Some(section) => {
                for entry in &section.entries {
                    if let EntryKind::Rule(text) = &entry.kind {
                        if let Some(rule) = self.rule(entry.line, text) {
                            rules.push(rule);
                            self.lines.rules.push(entry.line);
                        }
                    }
                }
                let parsed_all = rules.len() == section.entries.len();
                if let Some((declared, line)) = sys.num_rules {
                    if parsed_all && declared != rules.len() {
                        self.error(
                            line,
                            format!(
                                "rule count mismatch: NumRules={declared} but {} rule lines",
                                rules.len()
                            ),
                        );
                    }
                }
            }
            None => {
                if let Some((declared, line)) = sys.num_rules {
                    if declared > 0 {
                        self.error(line, format!("NumRules={declared} but there is no [Rules] section"));
                    }
                }
            }
        }

        Some(FisDefinition {
            name: sys.name?,
            version: sys.version,
            inputs: inputs?,
            outputs: outputs?,
            rules,
        })
    }

    fn system(&mut self, section: &Section) -> SystemBlock {
        let mut sys = SystemBlock {
            name: None,
            version: None,
            num_inputs: None,
            num_outputs: None,
            num_rules: None,
        };
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        let mut saw_type = false;
        for entry in &section.entries {
            let EntryKind::KeyValue { key, value } = &entry.kind else {
                continue;
            };
            let line = entry.line;
            if let Some(first) = seen.insert(key.as_str(), line) {
                self.error(line, format!("duplicate key '{key}' (first on line {first})"));
                continue;
            }
            match key.as_str() {
                "Name" => {
                    sys.name = self.quoted(line, key, value);
                    self.lines.name = line;
                }
                "Type" => {
                    saw_type = true;
                    if let Some(t) = self.quoted(line, key, value) {
                        if t != FisDefinition::TYPE {
                            self.error(line, format!("unsupported FIS type '{t}'; only 'mamdani' is supported"));
                        }
                    }
                }
                "Version" => sys.version = Some(value.clone()),
                "NumInputs" => sys.num_inputs = self.count(line, key, value).map(|n| (n, line)),
                "NumOutputs" => sys.num_outputs = self.count(line, key, value).map(|n| (n, line)),
                "NumRules" => sys.num_rules = self.count(line, key, value).map(|n| (n, line)),
                "AndMethod" => self.method(line, key, value, FisDefinition::AND_METHOD),
                "OrMethod" => self.method(line, key, value, FisDefinition::OR_METHOD),
                "ImpMethod" => self.method(line, key, value, FisDefinition::IMP_METHOD),
                "AggMethod" => self.method(line, key, value, FisDefinition::AGG_METHOD),
                "DefuzzMethod" => self.method(line, key, value, FisDefinition::DEFUZZ_METHOD),
                _ => self.warn(line, format!("unknown [System] key '{key}' ignored")),
            }
        }
        for (key, present) in [
            ("Name", seen.contains_key("Name")),
            ("Type", saw_type),
            ("NumInputs", seen.contains_key("NumInputs")),
            ("NumOutputs", seen.contains_key("NumOutputs")),
            ("NumRules", seen.contains_key("NumRules")),
        ] {
            if !present {
                self.error(section.line, format!("[System] is missing required key '{key}'"));
            }
        }
        sys
    }

    fn method(&mut self, line: usize, key: &str, value: &str, expected: &str) {
        if let Some(m) = self.quoted(line, key, value) {
            if m != expected {
                self.error(
                    line,
                    format!("unsupported feature: {key}='{m}' (only '{expected}' is implemented)"),
                );
            }
        }
    }

    fn variables(
        &mut self,
        doc: &FisDocument,
        select: fn(SectionKind) -> Option<usize>,
        role: &str,
        declared: Option<(usize, usize)>,
    ) -> Option<Vec<FuzzyVariable>> {
        let mut sections: Vec<(usize, &Section)> = doc
            .sections
            .iter()
            .filter_map(|s| select(s.kind).map(|k| (k, s)))
            .collect();
        sections.sort_by_key(|(k, _)| *k);

        let mut ok = true;
        for (pos, (k, section)) in sections.iter().enumerate() {
            if *k != pos + 1 {
                self.error(
                    section.line,
                    format!(
                        "{} out of sequence; {role} sections must be numbered 1, 2, ...",
                        section.kind
                    ),
                );
                ok = false;
                break;
            }
        }
        if let Some((n, line)) = declared {
            if n != sections.len() {
                self.error(
                    line,
                    format!(
                        "{role} count mismatch: declared {n} but found {} sections",
                        sections.len()
                    ),
                );
                ok = false;
            }
        }

        let mut vars = Vec::new();
        let mut src = Vec::new();
        for (_, section) in &sections {
            let (var, lines) = self.variable(section);
            src.push(lines);
            match var {
                Some(v) => vars.push(v),
                None => ok = false,
            }
        }
        if role == "input" {
            self.lines.inputs = src;
        } else {
            self.lines.outputs = src;
        }
        ok.then_some(vars)
    }

    fn variable(&mut self, section: &Section) -> (Option<FuzzyVariable>, VariableLines) {
        let mut lines = VariableLines {
            header: section.line,
            ..Default::default()
        };
        let mut name = None;
        let mut range = None;
        let mut num_mfs: Option<(usize, usize)> = None;
        let mut mfs: BTreeMap<usize, (usize, Option<NamedMembership>)> = BTreeMap::new();
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        let mut ok = true;

        for entry in &section.entries {
            let EntryKind::KeyValue { key, value } = &entry.kind else {
                continue;
            };
            let line = entry.line;
            if let Some(first) = seen.insert(key.as_str(), line) {
                self.error(line, format!("duplicate key '{key}' (first on line {first})"));
                ok = false;
                continue;
            }
            match key.as_str() {
                "Name" => {
                    name = self.quoted(line, key, value);
                    lines.name = line;
                }
                "Range" => {
                    lines.range = line;
                    range = match parse_bracketed(value).as_deref() {
                        Some(&[lo, hi]) => Some((lo, hi)),
                        _ => {
                            self.error(line, format!("Range must be '[lo hi]', found '{value}'"));
                            None
                        }
                    };
                }
                "NumMFs" => num_mfs = self.count(line, key, value).map(|n| (n, line)),
                _ => match mf_index(key) {
                    Some(k) => {
                        let mf = self.membership(line, value);
                        mfs.insert(k, (line, mf));
                    }
                    None => self.warn(line, format!("unknown {} key '{key}' ignored", section.kind)),
                },
            }
        }

        if name.is_none() {
            self.error(section.line, format!("{} is missing 'Name'", section.kind));
            ok = false;
        }
        if range.is_none() {
            if lines.range == 0 {
                self.error(section.line, format!("{} is missing 'Range'", section.kind));
            }
            ok = false;
        }
        match num_mfs {
            Some((n, line)) if n != mfs.len() => {
                self.error(
                    line,
                    format!(
                        "MF count mismatch: NumMFs={n} but {} MF lines in {}",
                        mfs.len(),
                        section.kind
                    ),
                );
                ok = false;
            }
            Some(_) => {}
            None => {
                self.error(section.line, format!("{} is missing 'NumMFs'", section.kind));
                ok = false;
            }
        }

        let mut list = Vec::new();
        for (pos, (k, (line, mf))) in mfs.into_iter().enumerate() {
            if k != pos + 1 {
                self.error(line, format!("MF{k} out of sequence; MFs must be numbered 1, 2, ..."));
                ok = false;
            }
            lines.mfs.push(line);
            match mf {
                Some(mf) => list.push(mf),
                None => ok = false,
            }
        }

        let var = match (ok, name, range) {
            (true, Some(name), Some(range)) => Some(FuzzyVariable::new(name, range, list)),
            _ => None,
        };
        (var, lines)
    }

    fn quoted(&mut self, line: usize, key: &str, value: &str) -> Option<String> {
        match unquote(value) {
            Some(s) => Some(s.to_string()),
            None => {
                self.error(
                    line,
                    format!("{key} must be a quoted string like '...', found '{value}'"),
                );
                None
            }
        }
    }

    fn count(&mut self, line: usize, key: &str, value: &str) -> Option<usize> {
        match value.parse::<usize>() {
            Ok(n) => Some(n),
            Err(_) => {
                self.error(line, format!("{key} must be a non-negative integer, found '{value}'"));
                None
            }
        }
    }

    // 'Name':'type',[p1 p2 ...] with arbitrary whitespace between tokens
    fn membership(&mut self, line: usize, value: &str) -> Option<NamedMembership> {
        let fail = |this: &mut Self, what: &str| {
            this.error(line, format!("malformed MF definition ({what}): '{value}'"));
            None
        };
        let mut cur = Cursor::new(value);
        let Some(name) = cur.quoted() else {
            return fail(self, "expected quoted name");
        };
        if !cur.eat(':') {
            return fail(self, "expected ':' after name");
        }
        let Some(kind) = cur.quoted() else {
            return fail(self, "expected quoted type");
        };
        if !cur.eat(',') {
            return fail(self, "expected ',' after type");
        }
        let Some(params) = parse_bracketed(cur.rest()) else {
            return fail(self, "expected numeric parameter list in brackets");
        };
        if kind != "trimf" && kind != "gaussmf" {
            self.error(line, format!("unknown MF type '{kind}' (supported: trimf, gaussmf)"));
            return None;
        }
        match MembershipFunction::from_params(kind, &params) {
            Ok(function) => Some(NamedMembership::new(name, function)),
            Err(e) => {
                self.error(line, format!("MF '{name}': {e}"));
                None
            }
        }
    }

    // "a1 a2 ..., c1 ... (w) : conn"
    fn rule(&mut self, line: usize, text: &str) -> Option<FuzzyRule> {
        let malformed = |this: &mut Self, why: &str| {
            this.error(
                line,
                format!("malformed rule ({why}): '{text}'; expected 'a1 a2 ..., c (w) : conn'"),
            );
            None
        };
        let Some((body, conn)) = text.rsplit_once(':') else {
            return malformed(self, "missing ': connective'");
        };
        let Some((ante, rest)) = body.split_once(',') else {
            return malformed(self, "missing ',' between antecedent and consequent");
        };
        let (cons, weight) = match rest.split_once('(') {
            Some((cons, w)) => {
                let Some((w, tail)) = w.split_once(')') else {
                    return malformed(self, "unclosed '('");
                };
                if !tail.trim().is_empty() {
                    return malformed(self, "unexpected text after weight");
                }
                match w.trim().parse::<f64>() {
                    Ok(w) => (cons, w),
                    Err(_) => return malformed(self, "weight is not a number"),
                }
            }
            None => {
                self.warn(line, "rule has no weight; defaulting to 1");
                (rest, 1.0)
            }
        };
        let connective = match conn.trim().parse::<u8>().ok().and_then(Connective::from_code) {
            Some(c) => c,
            None => return malformed(self, "connective must be 1 (AND) or 2 (OR)"),
        };
        let antecedent = self.indices(line, text, ante)?;
        let consequent = self.indices(line, text, cons)?;
        if antecedent.is_empty() || consequent.is_empty() {
            return malformed(self, "empty index list");
        }
        Some(FuzzyRule::new(antecedent, consequent, weight, connective))
    }

    fn indices(&mut self, line: usize, text: &str, list: &str) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        for tok in list.split_whitespace() {
            if let Ok(i) = tok.parse::<usize>() {
                out.push(i);
                continue;
            }
            let msg = match tok.parse::<f64>() {
                Ok(v) if v < 0.0 => format!("unsupported feature: negated index {tok} (NOT) in rule '{text}'"),
                Ok(_) => format!("unsupported feature: hedge index {tok} in rule '{text}'"),
                Err(_) => format!("malformed rule (bad index '{tok}'): '{text}'"),
            };
            self.error(line, msg);
            return None;
        }
        Some(out)
    }
}

fn input_index(kind: SectionKind) -> Option<usize> {
    match kind {
        SectionKind::Input(k) => Some(k),
        _ => None,
    }
}

fn output_index(kind: SectionKind) -> Option<usize> {
    match kind {
        SectionKind::Output(k) => Some(k),
        _ => None,
    }
}

fn unquote(value: &str) -> Option<&str> {
    let v = value.trim();
    let inner = v.strip_prefix('\'')?.strip_suffix('\'')?;
    (!inner.contains('\'')).then_some(inner)
}

fn mf_index(key: &str) -> Option<usize> {
    let digits = key.strip_prefix("MF")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn parse_bracketed(value: &str) -> Option<Vec<f64>> {
    let inner = value.trim().strip_prefix('[')?.strip_suffix(']')?;
    inner
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().ok())
        .collect()
}

struct Cursor<'a> {
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Self { rest: s }
    }

    fn eat(&mut self, c: char) -> bool {
        let trimmed = self.rest.trim_start();
        match trimmed.strip_prefix(c) {
            Some(r) => {
                self.rest = r;
                true
            }
            None => false,
        }
    }

    fn quoted(&mut self) -> Option<&'a str> {
        let trimmed = self.rest.trim_start().strip_prefix('\'')?;
        let end = trimmed.find('\'')?;
        self.rest = &trimmed[end + 1..];
        Some(&trimmed[..end])
    }

    fn rest(&self) -> &'a str {
        self.rest
    }
}
