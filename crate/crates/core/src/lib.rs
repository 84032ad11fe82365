//! Fuzzy-inference toolkit for choosing speech-recognition front-end
//! parameters (environment SNR, Hamming window size, frame overlap).
//!
//! - [`fuzzy`]: Mamdani engine with weighted rules and centroid defuzzification.
//! - [`fis_config`]: `.fis` text format reader, writer and validator.
//! - [`framing`]: window/hop geometry, Hamming coefficients, SNR and accuracy.
//! - [`sweep`]: response-surface grid search, argmax and feasible regions.
//! - [`dataio`]: published result tables as CSV fixtures plus claim checks.

pub mod dataio;
pub mod error;
pub mod fis_config;
pub mod framing;
pub mod fuzzy;
pub mod sweep;

pub use error::{Error, Result};
pub use fis_config::{parse_fis, serialize_fis, validate, ParseIssue, ParsedFis, Severity};
pub use fuzzy::{infer, Engine, FisDefinition, InferenceTrace, DEFAULT_RESOLUTION};

/// The three-input `SpeechAccuracy` system in `.fis` form.
pub const SPEECH_ACCURACY_FIS: &str = include_str!("../data/speech_accuracy.fis");

const TABLES: [&str; 5] = [
    include_str!("../data/table1.csv"),
    include_str!("../data/table2.csv"),
    include_str!("../data/table3.csv"),
    include_str!("../data/table4.csv"),
    include_str!("../data/table5.csv"),
];

/// Parsed [`SPEECH_ACCURACY_FIS`].
pub fn speech_accuracy_fis() -> FisDefinition {
    parse_fis(SPEECH_ACCURACY_FIS)
        .expect("bundled SpeechAccuracy listing is valid")
        .fis
}

/// CSV text of bundled result table `table_id` (1..=5).
///
/// # Panics
/// If `table_id` is outside 1..=5.
pub fn table_fixture(table_id: u8) -> &'static str {
    assert!((1..=5).contains(&table_id), "no bundled table {table_id}");
    TABLES[usize::from(table_id) - 1]
}
