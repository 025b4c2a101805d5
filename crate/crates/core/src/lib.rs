//! Acoustic analysis of cattle vocalizations.
//!
//! The crate covers the full offline pipeline:
//!
//! - [`audio_io`]: WAV decoding/encoding, peak normalization, framing, and
//!   the corpus manifest format.
//! - [`dsp_core`]: deterministic numeric primitives (DFT magnitude spectra,
//!   autocorrelation, linear prediction, mel filterbank, DCT-II).
//! - [`segmentation`]: energy-based call detection and temporal statistics.
//! - [`features`]: the per-call acoustic parameter vector (F0 contour and
//!   statistics, spectral quartiles, amplitude modulation, formants, MFCCs,
//!   harmonics-to-noise ratio).
//! - [`ontology`]: the rule-based high-frequency / low-frequency call
//!   classifier and its sentiment polarity mapping.
//! - [`synth`]: a source-filter synthetic-call generator used as ground
//!   truth for verifying the extractors and classifiers.
//! - [`classifiers`]: from-scratch random forest, linear SVM, and minimal
//!   recurrent network, plus standardization and stratified splitting.
//! - [`eval`]: confusion matrices, precision/recall/F1, ROC curves and AUC.
//! - [`textstats`]: character n-gram frequency tables for call transcripts.
//!
//! All randomized operations take explicit seeds and are bit-reproducible.

pub mod audio_io;
pub mod classifiers;
pub mod dsp_core;
pub mod eval;
pub mod features;
pub mod ontology;
pub mod segmentation;
pub mod synth;
pub mod textstats;

use serde::{Deserialize, Serialize};

/// The two call classes: high-frequency (distress/arousal) and
/// low-frequency (contentment/calm).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CallLabel {
    /// High-frequency call, "Distress/Arousal".
    Hfc,
    /// Low-frequency call, "Contentment/Calm".
    Lfc,
}

impl CallLabel {
    /// Short code used in manifests and feature CSVs.
    pub fn code(self) -> &'static str {
        match self {
            CallLabel::Hfc => "HFC",
            CallLabel::Lfc => "LFC",
        }
    }

    /// Human-readable emotional-state name.
    pub fn state_name(self) -> &'static str {
        match self {
            CallLabel::Hfc => "Distress/Arousal",
            CallLabel::Lfc => "Contentment/Calm",
        }
    }

    /// Parse a label code; accepts `HFC`/`LFC` case-insensitively.
    pub fn parse(text: &str) -> Option<CallLabel> {
        match text.trim().to_ascii_uppercase().as_str() {
            "HFC" => Some(CallLabel::Hfc),
            "LFC" => Some(CallLabel::Lfc),
            _ => None,
        }
    }
}

impl std::fmt::Display for CallLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Format a float with six significant digits, the precision used by every
/// CSV surface in this crate. Plain notation inside a sane exponent range,
/// scientific outside it.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..10).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        format!("{:.5e}", x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_codes_round_trip() {
        for label in [CallLabel::Hfc, CallLabel::Lfc] {
            assert_eq!(CallLabel::parse(label.code()), Some(label));
        }
        assert_eq!(CallLabel::parse("hfc"), Some(CallLabel::Hfc));
        assert_eq!(CallLabel::parse(""), None);
        assert_eq!(CallLabel::parse("mid"), None);
    }

    #[test]
    fn state_names() {
        assert_eq!(CallLabel::Hfc.state_name(), "Distress/Arousal");
        assert_eq!(CallLabel::Lfc.state_name(), "Contentment/Calm");
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(123.456), "123.456");
        assert_eq!(fmt_sig6(1.0), "1.00000");
        assert_eq!(fmt_sig6(-0.00123456), "-0.00123456");
        assert_eq!(fmt_sig6(1234567890.0), "1234567890");
        assert_eq!(fmt_sig6(1.23e12), "1.23000e12");
    }
}
