//! Membership function families used by the inference engine.
//!
//! Only the two shapes the `.fis` format subset supports are modelled:
//! triangular (`trimf`) and Gaussian (`gaussmf`). Both map any finite crisp
//! value to a degree in `[0, 1]`.

use std::fmt;

use crate::error::{Error, Result};

/// A validated membership curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    /// `trimf` with feet at `a`, `c` and apex at `b`.
    Triangular { a: f64, b: f64, c: f64 },
    /// `gaussmf`, parameterized `[sigma, center]` as in the `.fis` format.
    Gaussian { sigma: f64, center: f64 },
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self> {
        check_trimf(a, b, c)?;
        Ok(Self::Triangular { a, b, c })
    }

    pub fn gaussian(sigma: f64, center: f64) -> Result<Self> {
        check_gaussmf(sigma, center)?;
        Ok(Self::Gaussian { sigma, center })
    }

    /// Builds a curve from its `.fis` type tag and parameter list.
    pub fn from_params(kind: &str, params: &[f64]) -> Result<Self> {
        match (kind, params) {
            ("trimf", &[a, b, c]) => Self::triangular(a, b, c),
            ("gaussmf", &[sigma, center]) => Self::gaussian(sigma, center),
            ("trimf", _) | ("gaussmf", _) => Err(Error::InvalidMembership(format!(
                "{kind} expects {} parameters, got {}",
                if kind == "trimf" { 3 } else { 2 },
                params.len()
            ))),
            _ => Err(Error::InvalidMembership(format!(
                "unsupported membership function type '{kind}'"
            ))),
        }
    }

    /// Re-checks the parameter invariants. Useful for values built directly
    /// through the enum constructors.
    pub fn check(&self) -> Result<()> {
        match *self {
            Self::Triangular { a, b, c } => check_trimf(a, b, c),
            Self::Gaussian { sigma, center } => check_gaussmf(sigma, center),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Triangular { .. } => "trimf",
            Self::Gaussian { .. } => "gaussmf",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Self::Triangular { a, b, c } => vec![a, b, c],
            Self::Gaussian { sigma, center } => vec![sigma, center],
        }
    }

    pub fn degree(&self, x: f64) -> f64 {
        match *self {
            Self::Triangular { a, b, c } => trimf(x, a, b, c),
            Self::Gaussian { sigma, center } => gaussmf(x, sigma, center),
        }
    }

    /// Interval outside of which the degree is exactly zero, if bounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Triangular { a, c, .. } => Some((a, c)),
            Self::Gaussian { .. } => None,
        }
    }
}

impl fmt::Display for MembershipFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self
            .params()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        write!(f, "'{}',[{}]", self.kind(), params)
    }
}

/// Triangular membership degree. Fails when `a <= b <= c` does not hold.
pub fn eval_trimf(x: f64, a: f64, b: f64, c: f64) -> Result<f64> {
    check_trimf(a, b, c)?;
    Ok(trimf(x, a, b, c))
}

/// Gaussian membership degree. Fails when `sigma <= 0`.
pub fn eval_gaussmf(x: f64, sigma: f64, center: f64) -> Result<f64> {
    check_gaussmf(sigma, center)?;
    Ok(gaussmf(x, sigma, center))
}

fn check_trimf(a: f64, b: f64, c: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::InvalidMembership(format!(
            "trimf parameters must be finite, got [{a} {b} {c}]"
        )));
    }
    if !(a <= b && b <= c) {
        return Err(Error::InvalidMembership(format!(
            "trimf parameters must satisfy a <= b <= c, got [{a} {b} {c}]"
        )));
    }
    Ok(())
}

fn check_gaussmf(sigma: f64, center: f64) -> Result<()> {
    if !(sigma.is_finite() && center.is_finite()) {
        return Err(Error::InvalidMembership(format!(
            "gaussmf parameters must be finite, got [{sigma} {center}]"
        )));
    }
    if sigma <= 0.0 {
        return Err(Error::InvalidMembership(format!(
            "gaussmf sigma must be positive, got {sigma}"
        )));
    }
    Ok(())
}

// Degenerate sides (a == b or b == c) are vertical edges: degree 1 at x == b.
fn trimf(x: f64, a: f64, b: f64, c: f64) -> f64 {
    if x.is_nan() || x < a || x > c {
        0.0
    } else if x == b {
        1.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (c - x) / (c - b)
    }
}

fn gaussmf(x: f64, sigma: f64, center: f64) -> f64 {
    if x.is_nan() {
        return 0.0;
    }
    let d = x - center;
    (-(d * d) / (2.0 * sigma * sigma)).exp()
}
