//! Brute-force reference for the SpeechAccuracy system, written from the
//! published parameters without touching the library's engine or parser.

#![allow(dead_code)]

use std::sync::OnceLock;

pub const ORACLE_POINTS: usize = 100_000;
const SIGMA: f64 = 0.8493;

// the published triangles are all non-degenerate
fn tri(x: f64, a: f64, b: f64, c: f64) -> f64 {
    if x < a || x > c {
        0.0
    } else if x <= b {
        (x - a) / (b - a)
    } else {
        (c - x) / (c - b)
    }
}

fn gauss(x: f64, center: f64) -> f64 {
    let z = (x - center) / SIGMA;
    (-0.5 * z * z).exp()
}

/// Per-rule firing strengths for (environment, window, overlap).
pub fn strengths(env: f64, win: f64, overlap: f64) -> [f64; 5] {
    let env = env.clamp(10.0, 50.0);
    let win = win.clamp(240.0, 270.0);
    let overlap = overlap.clamp(20.0, 60.0);
    let clean = tri(env, 35.0, 50.0, 66.0);
    let win_medium = tri(win, 250.0, 255.0, 260.0);
    let over_medium = tri(overlap, 40.0, 50.0, 55.0);
    [
        0.5 * clean,
        0.75 * clean.min(over_medium),
        clean.min(win_medium).min(over_medium),
        0.5 * over_medium,
        0.5 * win_medium,
    ]
}

/// Centroid of max(Better clipped at `better`, Best clipped at `best`)
/// over an endpoint-inclusive grid on [95, 100].
pub fn clipped_centroid(better: f64, best: f64, n: usize) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    if n == ORACLE_POINTS {
        for &(x, g_better, g_best) in oracle_samples() {
            let y = g_better.min(better).max(g_best.min(best));
            num += x * y;
            den += y;
        }
    } else {
        for i in 0..n {
            let x = 95.0 + 5.0 * i as f64 / (n - 1) as f64;
            let y = gauss(x, 97.5).min(better).max(gauss(x, 100.0).min(best));
            num += x * y;
            den += y;
        }
    }
    (den > 0.0).then(|| num / den)
}

fn oracle_samples() -> &'static [(f64, f64, f64)] {
    static SAMPLES: OnceLock<Vec<(f64, f64, f64)>> = OnceLock::new();
    SAMPLES.get_or_init(|| {
        (0..ORACLE_POINTS)
            .map(|i| {
                let x = 95.0 + 5.0 * i as f64 / (ORACLE_POINTS - 1) as f64;
                (x, gauss(x, 97.5), gauss(x, 100.0))
            })
            .collect()
    })
}

/// Crisp accuracy by brute force; 97.5 when nothing fires.
pub fn crisp(env: f64, win: f64, overlap: f64, n: usize) -> f64 {
    let s = strengths(env, win, overlap);
    // consequents: rules 1, 4, 5 -> Better; rules 2, 3 -> Best
    let better = s[0].max(s[3]).max(s[4]);
    let best = s[1].max(s[2]);
    clipped_centroid(better, best, n).unwrap_or(97.5)
}

/// Small deterministic generator so tests do not depend on RNG crate
/// stream stability.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
