//! Framing geometry and the scalar speech metrics: window sizing, Hamming
//! coefficients, hop/frame counts, SNR and word-recognition accuracy.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// A recorded signal's sampling rate and length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignalSpec {
    pub sampling_rate: u32,
    pub length: usize,
}

impl SignalSpec {
    pub fn new(sampling_rate: u32, length: usize) -> Result<Self> {
        if sampling_rate == 0 {
            return Err(Error::Input("sampling rate must be positive".into()));
        }
        Ok(Self { sampling_rate, length })
    }

    /// A clip of `seconds` at `sampling_rate`; 3 s at 8 kHz is 24,000 samples.
    pub fn from_duration(sampling_rate: u32, seconds: f64) -> Result<Self> {
        if !(seconds.is_finite() && seconds >= 0.0) {
            return Err(Error::Input(format!("duration must be finite and >= 0, got {seconds}")));
        }
        Self::new(sampling_rate, (seconds * f64::from(sampling_rate)).round() as usize)
    }

    pub fn duration_secs(&self) -> f64 {
        self.length as f64 / f64::from(self.sampling_rate)
    }
}

/// Frame layout of a signal for a given window and overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FramePlan {
    pub length: usize,
    pub window: usize,
    pub overlap_pct: f64,
    pub hop: usize,
    pub frame_count: usize,
}

impl FramePlan {
    pub fn frame_starts(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.frame_count).map(move |i| i * self.hop)
    }

    /// Samples consumed by all frames; the remainder past this is dropped.
    pub fn covered_len(&self) -> usize {
        match self.frame_count {
            0 => 0,
            n => (n - 1) * self.hop + self.window,
        }
    }
}

/// The frame-size quantity `(sample_length / window) * overlap%`, kept
/// separate from [`FramePlan`] because it is not a sample count.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct LiteralFrameSize(pub f64);

impl LiteralFrameSize {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Window length in samples: `round(ms / 1000 * fs)`.
pub fn window_size_samples(window_len_ms: f64, fs: u32) -> Result<usize> {
    if !(window_len_ms.is_finite() && window_len_ms > 0.0) {
        return Err(Error::Input(format!(
            "window length must be positive, got {window_len_ms} ms"
        )));
    }
    if fs == 0 {
        return Err(Error::Input("sampling rate must be positive".into()));
    }
    Ok((window_len_ms / 1000.0 * f64::from(fs)).round() as usize)
}

/// Symmetric Hamming window, `0.54 - 0.46 cos(2 pi k / (n - 1))`.
pub fn hamming(n: usize) -> Result<Vec<f64>> {
    match n {
        0 => Err(Error::Input("Hamming window length must be at least 1".into())),
        1 => Ok(vec![1.0]),
        _ => {
            let denom = (n - 1) as f64;
            Ok((0..n)
                .map(|k| 0.54 - 0.46 * (2.0 * PI * k as f64 / denom).cos())
                .collect())
        }
    }
}

/// Hop is `round(window * (1 - overlap/100))` rounded half up and at least
/// one sample; a trailing partial frame is dropped.
pub fn frame_plan(length: usize, window: usize, overlap_pct: f64) -> Result<FramePlan> {
    if window == 0 {
        return Err(Error::Input("window must be at least 1 sample".into()));
    }
    check_overlap(overlap_pct)?;
    let hop = ((window as f64 * (1.0 - overlap_pct / 100.0)) + 0.5).floor().max(1.0) as usize;
    let frame_count = if length >= window {
        (length - window) / hop + 1
    } else {
        0
    };
    Ok(FramePlan {
        length,
        window,
        overlap_pct,
        hop,
        frame_count,
    })
}

/// `(sample_length / window) * (overlap_pct / 100)`, evaluated literally.
pub fn frame_size_literal(sample_length: usize, window: usize, overlap_pct: f64) -> Result<LiteralFrameSize> {
    if window == 0 {
        return Err(Error::Input("window must be at least 1 sample".into()));
    }
    check_overlap(overlap_pct)?;
    Ok(LiteralFrameSize(
        sample_length as f64 / window as f64 * (overlap_pct / 100.0),
    ))
}

fn check_overlap(overlap_pct: f64) -> Result<()> {
    if !(overlap_pct.is_finite() && (0.0..100.0).contains(&overlap_pct)) {
        return Err(Error::Input(format!("overlap must be in [0, 100), got {overlap_pct}")));
    }
    Ok(())
}

/// Cuts `signal` into `plan.frame_count` frames, each multiplied by
/// `window_fn`.
pub fn segment(signal: &[f64], plan: &FramePlan, window_fn: &[f64]) -> Result<Vec<Vec<f64>>> {
    if window_fn.len() != plan.window {
        return Err(Error::Input(format!(
            "window function has {} coefficients but the plan window is {}",
            window_fn.len(),
            plan.window
        )));
    }
    if signal.len() < plan.covered_len() {
        return Err(Error::Input(format!(
            "signal has {} samples but the plan needs {}",
            signal.len(),
            plan.covered_len()
        )));
    }
    Ok(plan
        .frame_starts()
        .map(|start| {
            signal[start..start + plan.window]
                .iter()
                .zip(window_fn)
                .map(|(s, w)| s * w)
                .collect()
        })
        .collect())
}

/// What [`snr_db_with`] does when the signal has zero power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroSignal {
    #[default]
    NegativeInfinity,
    Reject,
}

/// `10 log10(sum signal^2 / sum noise^2)`; a silent signal gives `-inf`.
pub fn snr_db(signal: &[f64], noise: &[f64]) -> Result<f64> {
    snr_db_with(signal, noise, ZeroSignal::default())
}

pub fn snr_db_with(signal: &[f64], noise: &[f64], zero_signal: ZeroSignal) -> Result<f64> {
    if signal.len() != noise.len() {
        return Err(Error::Input(format!(
            "signal and noise lengths differ ({} vs {})",
            signal.len(),
            noise.len()
        )));
    }
    let power = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    let (ps, pn) = (power(signal), power(noise));
    if pn == 0.0 {
        return Err(Error::UndefinedSnr("noise has zero power".into()));
    }
    if ps == 0.0 {
        return match zero_signal {
            ZeroSignal::NegativeInfinity => Ok(f64::NEG_INFINITY),
            ZeroSignal::Reject => Err(Error::UndefinedSnr("signal has zero power".into())),
        };
    }
    Ok(10.0 * (ps / pn).log10())
}

/// Percentage of tested words that were recognised.
pub fn word_accuracy(recognized: u32, tested: u32) -> Result<f64> {
    if tested == 0 {
        return Err(Error::Input("at least one word must be tested".into()));
    }
    if recognized > tested {
        return Err(Error::Input(format!(
            "recognised count {recognized} exceeds tested count {tested}"
        )));
    }
    Ok(100.0 * f64::from(recognized) / f64::from(tested))
}
