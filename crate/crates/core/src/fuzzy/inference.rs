use serde::Serialize;

use super::{Connective, FisDefinition, FuzzyRule, FuzzyVariable};
use crate::error::{Error, Result};

/// Number of uniform samples (cell centres) over each output range used for
/// the centroid.
pub const DEFAULT_RESOLUTION: usize = 1001;

/// Full record of one inference pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InferenceTrace {
    pub inputs: Vec<f64>,
    pub clamped_inputs: Vec<f64>,
    /// Set for each input that fell outside its range and was clamped.
    pub clamped: Vec<bool>,
    /// `degrees[i][k]` is the membership of input `i` in its MF `k + 1`.
    pub degrees: Vec<Vec<f64>>,
    pub rule_strengths: Vec<f64>,
    pub outputs: Vec<OutputTrace>,
    pub fired: bool,
}

impl InferenceTrace {
    /// Crisp value of the first output.
    pub fn crisp(&self) -> f64 {
        self.outputs[0].crisp
    }
}

/// Aggregated membership curve and centroid of one output variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputTrace {
    pub xs: Vec<f64>,
    pub aggregate: Vec<f64>,
    pub crisp: f64,
}

/// Degree of `x` in every MF of `variable`, after clamping `x` to the range.
pub fn fuzzify(variable: &FuzzyVariable, x: f64) -> Vec<f64> {
    let (x, _) = variable.clamp(x);
    variable.mfs.iter().map(|m| m.function.degree(x)).collect()
}

/// Firing strength of `rule` given per-input degree vectors: min (AND) or
/// max (OR) over the participating antecedents, times the rule weight.
///
/// The rule must have been validated against the system the degrees came
/// from; out-of-range indices contribute a degree of zero.
pub fn rule_strength(rule: &FuzzyRule, degrees: &[Vec<f64>]) -> f64 {
    let mut terms = rule
        .antecedent
        .iter()
        .enumerate()
        .filter(|(_, &mf)| mf != 0)
        .map(|(input, &mf)| degrees.get(input).and_then(|d| d.get(mf - 1)).copied().unwrap_or(0.0));
    let Some(first) = terms.next() else {
        return 0.0;
    };
    let combined = match rule.connective {
        Connective::And => terms.fold(first, f64::min),
        Connective::Or => terms.fold(first, f64::max),
    };
    combined * rule.weight
}

/// Runs one inference at the default resolution.
pub fn infer(fis: &FisDefinition, inputs: &[f64]) -> Result<InferenceTrace> {
    Engine::new(fis, DEFAULT_RESOLUTION)?.infer(inputs)
}

struct SampledOutput {
    xs: Vec<f64>,
    // mf_samples[k][i] = degree of MF k+1 at xs[i]
    mf_samples: Vec<Vec<f64>>,
    midpoint: f64,
}

/// A validated system with its output MFs pre-sampled on the centroid grid.
///
/// Construction validates the definition once; [`Engine::infer`] is then a
/// pure function and the engine can be shared across threads.
pub struct Engine<'a> {
    fis: &'a FisDefinition,
    resolution: usize,
    outputs: Vec<SampledOutput>,
}

impl<'a> Engine<'a> {
    pub fn new(fis: &'a FisDefinition, resolution: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::Input(format!(
                "centroid resolution must be at least 1, got {resolution}"
            )));
        }
        let issues = crate::fis_config::validate(fis);
        if issues.iter().any(|i| i.is_error()) {
            return Err(Error::InvalidFis(issues));
        }
        let outputs = fis
            .outputs
            .iter()
            .map(|var| {
                let xs = sample_grid(var.range, resolution);
                let mf_samples = var
                    .mfs
                    .iter()
                    .map(|m| xs.iter().map(|&x| m.function.degree(x)).collect())
                    .collect();
                SampledOutput {
                    xs,
                    mf_samples,
                    midpoint: var.midpoint(),
                }
            })
            .collect();
        Ok(Self {
            fis,
            resolution,
            outputs,
        })
    }

    pub fn fis(&self) -> &FisDefinition {
        self.fis
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn infer(&self, inputs: &[f64]) -> Result<InferenceTrace> {
        let fis = self.fis;
        if inputs.len() != fis.inputs.len() {
            return Err(Error::Input(format!(
                "expected {} inputs, got {}",
                fis.inputs.len(),
                inputs.len()
            )));
        }

        let (clamped_inputs, clamped): (Vec<f64>, Vec<bool>) =
            fis.inputs.iter().zip(inputs).map(|(var, &x)| var.clamp(x)).unzip();
        let degrees: Vec<Vec<f64>> = fis
            .inputs
            .iter()
            .zip(&clamped_inputs)
            .map(|(var, &x)| fuzzify(var, x))
            .collect();
        let rule_strengths: Vec<f64> = fis.rules.iter().map(|r| rule_strength(r, &degrees)).collect();
        let fired = rule_strengths.iter().any(|&s| s > 0.0);

        let outputs = self
            .outputs
            .iter()
            .enumerate()
            .map(|(o, sampled)| self.defuzzify(o, sampled, &rule_strengths))
            .collect();

        Ok(InferenceTrace {
            inputs: inputs.to_vec(),
            clamped_inputs,
            clamped,
            degrees,
            rule_strengths,
            outputs,
            fired,
        })
    }

    // max over rules of min(strength, mf) equals, per consequent MF, the
    // curve clipped at the largest strength among rules pointing at it.
    fn defuzzify(&self, output: usize, sampled: &SampledOutput, strengths: &[f64]) -> OutputTrace {
        let mut levels = vec![0.0f64; sampled.mf_samples.len()];
        for (rule, &s) in self.fis.rules.iter().zip(strengths) {
            let k = rule.consequent[output] - 1;
            levels[k] = levels[k].max(s);
        }

        let mut aggregate = vec![0.0f64; sampled.xs.len()];
        for (level, curve) in levels.iter().zip(&sampled.mf_samples) {
            if *level <= 0.0 {
                continue;
            }
            for (acc, &mu) in aggregate.iter_mut().zip(curve) {
                *acc = acc.max(mu.min(*level));
            }
        }

        let (num, den) = sampled
            .xs
            .iter()
            .zip(&aggregate)
            .fold((0.0, 0.0), |(n, d), (&x, &y)| (n + x * y, d + y));
        let crisp = if den > 0.0 { num / den } else { sampled.midpoint };

        OutputTrace {
            xs: sampled.xs.clone(),
            aggregate,
            crisp,
        }
    }
}

// Cell centres of n equal slices of the range. Endpoint-inclusive grids put
// full weight on the boundary samples and bias the centroid by O(step).
fn sample_grid((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    let step = (hi - lo) / n as f64;
    (0..n).map(|i| lo + step * (i as f64 + 0.5)).collect()
}
