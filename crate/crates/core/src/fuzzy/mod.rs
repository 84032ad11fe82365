//! Mamdani fuzzy inference: variables, weighted rules and the engine that
//! evaluates them.

mod inference;
mod membership;

pub use inference::{fuzzify, infer, rule_strength, Engine, InferenceTrace, OutputTrace, DEFAULT_RESOLUTION};
pub use membership::{eval_gaussmf, eval_trimf, MembershipFunction};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fis_config::{self, ParseIssue};

/// A membership function together with its linguistic label.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedMembership {
    pub name: String,
    pub function: MembershipFunction,
}

impl NamedMembership {
    pub fn new(name: impl Into<String>, function: MembershipFunction) -> Self {
        Self {
            name: name.into(),
            function,
        }
    }
}

/// An input or output variable with its universe of discourse.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyVariable {
    pub name: String,
    pub range: (f64, f64),
    pub mfs: Vec<NamedMembership>,
}

impl FuzzyVariable {
    pub fn new(name: impl Into<String>, range: (f64, f64), mfs: Vec<NamedMembership>) -> Self {
        Self {
            name: name.into(),
            range,
            mfs,
        }
    }

    /// Clamps `x` into the variable range; the flag is set when `x` moved.
    pub fn clamp(&self, x: f64) -> (f64, bool) {
        let (lo, hi) = self.range;
        let c = if x.is_nan() { lo } else { x.clamp(lo, hi) };
        (c, c != x)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.range.0 + self.range.1)
    }

    /// 1-based lookup, matching rule index conventions.
    pub fn mf(&self, index: usize) -> Option<&NamedMembership> {
        index.checked_sub(1).and_then(|i| self.mfs.get(i))
    }

    pub fn mf_index(&self, name: &str) -> Option<usize> {
        self.mfs.iter().position(|m| m.name == name).map(|i| i + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    And,
    Or,
}

impl Connective {
    /// Numeric code used in `.fis` rule lines.
    pub fn code(self) -> u8 {
        match self {
            Connective::And => 1,
            Connective::Or => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(Connective::And),
            2 => Some(Connective::Or),
            _ => None,
        }
    }
}

/// One weighted rule. Indices are 1-based; `0` in the antecedent means the
/// input does not participate.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRule {
    pub antecedent: Vec<usize>,
    pub consequent: Vec<usize>,
    pub weight: f64,
    pub connective: Connective,
}

impl FuzzyRule {
    pub fn new(antecedent: Vec<usize>, consequent: Vec<usize>, weight: f64, connective: Connective) -> Self {
        Self {
            antecedent,
            consequent,
            weight,
            connective,
        }
    }
}

/// A complete Mamdani system. The operator set is fixed: AND = min,
/// OR = max, implication = min, aggregation = max, centroid defuzzification.
///
/// Fields are public so definitions can be assembled by hand; call
/// [`FisDefinition::validated`] (or go through the parser) before inference.
#[derive(Debug, Clone, PartialEq)]
pub struct FisDefinition {
    pub name: String,
    /// Informational `Version` entry, kept verbatim for round-tripping.
    pub version: Option<String>,
    pub inputs: Vec<FuzzyVariable>,
    pub outputs: Vec<FuzzyVariable>,
    pub rules: Vec<FuzzyRule>,
}

impl FisDefinition {
    pub const TYPE: &'static str = "mamdani";
    pub const AND_METHOD: &'static str = "min";
    pub const OR_METHOD: &'static str = "max";
    pub const IMP_METHOD: &'static str = "min";
    pub const AGG_METHOD: &'static str = "max";
    pub const DEFUZZ_METHOD: &'static str = "centroid";

    /// Returns `self` if it has no error-level issues.
    pub fn validated(self) -> Result<Self> {
        let issues = fis_config::validate(&self);
        if issues.iter().any(ParseIssue::is_error) {
            Err(Error::InvalidFis(issues))
        } else {
            Ok(self)
        }
    }

    pub fn input(&self, name: &str) -> Option<&FuzzyVariable> {
        self.inputs.iter().find(|v| v.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&FuzzyVariable> {
        self.outputs.iter().find(|v| v.name == name)
    }
}
