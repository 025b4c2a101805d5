//! Source-filter synthetic-call generator.
//!
//! Produces labeled HFC/LFC calls with known ground-truth parameters: a
//! sawtooth source glides and vibrates around a target F0, passes through
//! four cascaded two-pole resonators, gets an amplitude-modulation envelope
//! with raised-cosine edges, and is mixed with white noise at a chosen SNR.
//! Every draw flows from an explicit seed, so corpora are bit-reproducible.

use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::audio_io::{peak_normalize, write_wav_pcm16, AudioClip, CorpusManifest, ManifestEntry};
use crate::CallLabel;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("sample rate {actual} Hz below the {required} Hz the formant stack needs")]
    NyquistViolation { required: u32, actual: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("corpus write failed: {0}")]
    CorpusWrite(#[from] crate::audio_io::AudioIoError),
}

/// Class frequency/loudness/duration bounds used for drawing call
/// parameters. HFC and LFC frequency ranges overlap in 110.59-183.27 Hz.
pub mod class_ranges {
    pub const HFC_F0: (f64, f64) = (110.59, 494.16);
    pub const HFC_LOUDNESS_DB: (f64, f64) = (-39.71, -2.45);
    pub const HFC_DURATION_S: (f64, f64) = (0.638, 9.581);
    pub const LFC_F0: (f64, f64) = (72.61, 183.27);
    pub const LFC_LOUDNESS_DB: (f64, f64) = (-53.88, -8.16);
    pub const LFC_DURATION_S: (f64, f64) = (0.650, 2.921);
}

/// Formant presets (center Hz): F1/F2/F3 follow the reported per-class
/// measurements; F4 is a plausible filler above F3.
const HFC_FORMANTS_HZ: [f64; 4] = [609.56, 1704.81, 2779.11, 3800.0];
const LFC_FORMANTS_HZ: [f64; 4] = [617.35, 1542.96, 2844.92, 3750.0];
const FORMANT_BANDWIDTHS_HZ: [f64; 4] = [90.0, 110.0, 170.0, 250.0];

/// Complete recipe for one synthetic call.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SynthSpec {
    pub label: CallLabel,
    pub duration_s: f64,
    /// Linear F0 glide endpoints.
    pub f0_start_hz: f64,
    pub f0_end_hz: f64,
    /// Sinusoidal F0 modulation.
    pub fm_depth_hz: f64,
    pub fm_rate_hz: f64,
    /// Amplitude modulation depth in [0, 1] and rate in Hz.
    pub am_depth: f64,
    pub am_rate_hz: f64,
    /// Four (center_hz, bandwidth_hz) resonators.
    pub formants: [(f64, f64); 4],
    pub noise_snr_db: f64,
    /// Peak sample magnitude of the rendered clip.
    pub peak: f64,
    /// Seed for the additive noise stream.
    pub noise_seed: u64,
}

impl SynthSpec {
    /// Instantaneous F0 at time `t` (glide plus FM term).
    pub fn f0_at(&self, t: f64) -> f64 {
        let glide = self.f0_start_hz + (self.f0_end_hz - self.f0_start_hz) * t / self.duration_s;
        glide + self.fm_depth_hz * (2.0 * PI * self.fm_rate_hz * t).sin()
    }

    /// Time-average of the instantaneous F0 over the call, evaluated on the
    /// sample grid. This is the ground truth that `f0_mean` extraction is
    /// checked against.
    pub fn true_f0_mean(&self, sample_rate: u32) -> f64 {
        let n = (self.duration_s * sample_rate as f64).round() as usize;
        let dt = 1.0 / sample_rate as f64;
        (0..n).map(|i| self.f0_at(i as f64 * dt)).sum::<f64>() / n as f64
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Deterministic per-call seed derivation for corpus generation.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream.wrapping_mul(0x0100_0000_01B3) ^ index))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    rng.gen_range(lo..hi)
}

/// Draw a call recipe for a class.
///
/// Duration, mean F0, and peak level come from the class's published
/// ranges; with `exclude_overlap` the F0 draw avoids the 110.59-183.27 Hz
/// band shared by the two classes, so corpora are separable by
/// construction. Formant centers get +-10% jitter around the class preset.
/// Deterministic for a fixed seed.
pub fn sample_spec(label: CallLabel, seed: u64, exclude_overlap: bool) -> SynthSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (f0_lo, f0_hi) = match (label, exclude_overlap) {
        (CallLabel::Hfc, true) => (class_ranges::LFC_F0.1, class_ranges::HFC_F0.1),
        (CallLabel::Hfc, false) => class_ranges::HFC_F0,
        (CallLabel::Lfc, true) => (class_ranges::LFC_F0.0, class_ranges::HFC_F0.0),
        (CallLabel::Lfc, false) => class_ranges::LFC_F0,
    };
    let f0_mean = uniform(&mut rng, f0_lo, f0_hi);

    // Durations are drawn from the class range intersected with
    // [1.2, 3.5] s so modulation rates stay identifiable on every call.
    let (dur_lo, dur_hi) = match label {
        CallLabel::Hfc => class_ranges::HFC_DURATION_S,
        CallLabel::Lfc => class_ranges::LFC_DURATION_S,
    };
    let duration_s = uniform(&mut rng, dur_lo.max(1.2), dur_hi.min(3.5));

    // Peak levels are drawn from a class sub-band (inside the published
    // loudness range) that keeps HFCs audibly louder than LFCs and the
    // extracted mean frame level inside the class range.
    let peak_db = match label {
        CallLabel::Hfc => uniform(&mut rng, -18.0, -3.0),
        CallLabel::Lfc => uniform(&mut rng, -34.0, -20.0),
    };

    // F0 movement: HFCs glide and vibrate widely, LFCs stay nearly flat.
    // The glide keeps both endpoints inside the class F0 band.
    let (glide_cap, fm_depth_range, fm_rate_range): (f64, (f64, f64), (f64, f64)) = match label {
        CallLabel::Hfc => (15.0, (12.0, 40.0), (2.0, 5.0)),
        CallLabel::Lfc => (5.0, (1.0, 6.0), (1.5, 4.0)),
    };
    let glide_half = uniform(
        &mut rng,
        0.0,
        glide_cap.min(f0_hi - f0_mean).min(f0_mean - f0_lo).max(0.0),
    );
    let rising = rng.gen_bool(0.5);
    let (f0_start_hz, f0_end_hz) = if rising {
        (f0_mean - glide_half, f0_mean + glide_half)
    } else {
        (f0_mean + glide_half, f0_mean - glide_half)
    };
    let fm_depth_hz = uniform(&mut rng, fm_depth_range.0, fm_depth_range.1);
    let fm_rate_hz = uniform(&mut rng, fm_rate_range.0, fm_rate_range.1);

    let (am_depth_range, am_rate_range) = match label {
        CallLabel::Hfc => ((0.45, 0.85), (5.0, 9.0)),
        CallLabel::Lfc => ((0.20, 0.45), (2.0, 4.5)),
    };
    let am_depth = uniform(&mut rng, am_depth_range.0, am_depth_range.1);
    let am_rate_hz = uniform(&mut rng, am_rate_range.0, am_rate_range.1);

    let presets = match label {
        CallLabel::Hfc => HFC_FORMANTS_HZ,
        CallLabel::Lfc => LFC_FORMANTS_HZ,
    };
    let mut formants = [(0.0, 0.0); 4];
    for (i, slot) in formants.iter_mut().enumerate() {
        let center = presets[i] * uniform(&mut rng, 0.9, 1.1);
        let bw = FORMANT_BANDWIDTHS_HZ[i] * uniform(&mut rng, 0.9, 1.1);
        *slot = (center, bw);
    }

    let noise_snr_db = uniform(&mut rng, 22.0, 38.0);
    let noise_seed = rng.gen::<u64>();

    SynthSpec {
        label,
        duration_s,
        f0_start_hz,
        f0_end_hz,
        fm_depth_hz,
        fm_rate_hz,
        am_depth,
        am_rate_hz,
        formants,
        noise_snr_db,
        peak: 10f64.powf(peak_db / 20.0),
        noise_seed,
    }
}

/// Render a spec to audio.
///
/// Sawtooth source at the instantaneous F0 plus white aspiration noise at
/// the spec SNR, four cascaded two-pole resonators, AM envelope, 20 ms
/// raised-cosine edges, peak-normalized to the spec amplitude. The noise
/// enters at the source so it shares the vocal-tract shaping; a post-filter
/// white floor would leave the band above the formants noise-only and make
/// LPC pole bandwidths unusable at any realistic SNR.
pub fn render(spec: &SynthSpec, sample_rate: u32) -> Result<AudioClip, SynthError> {
    let highest = spec
        .formants
        .iter()
        .map(|(f, bw)| f + bw)
        .fold(0.0f64, f64::max);
    let required = (2.0 * highest).ceil() as u32;
    if sample_rate < required {
        return Err(SynthError::NyquistViolation {
            required,
            actual: sample_rate,
        });
    }
    let sr = sample_rate as f64;
    let n = (spec.duration_s * sr).round() as usize;

    // Sawtooth source following the instantaneous F0.
    let mut phase = 0.0f64;
    let mut signal: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / sr;
            phase += spec.f0_at(t) / sr;
            phase -= phase.floor();
            2.0 * phase - 1.0
        })
        .collect();

    // White Gaussian aspiration noise at the requested SNR.
    let src_power = signal.iter().map(|s| s * s).sum::<f64>() / n as f64;
    let sigma = (src_power / 10f64.powf(spec.noise_snr_db / 10.0)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.noise_seed);
    for s in &mut signal {
        // Box-Muller
        let u1: f64 = rng.gen_range(1e-12..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        let z = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
        *s += sigma * z;
    }

    // Cascade of two-pole resonators.
    for &(center, bw) in &spec.formants {
        let r = (-PI * bw / sr).exp();
        let b = 2.0 * r * (2.0 * PI * center / sr).cos();
        let c = -r * r;
        let a = 1.0 - b - c;
        let (mut y1, mut y2) = (0.0f64, 0.0f64);
        for s in &mut signal {
            let y = a * *s + b * y1 + c * y2;
            y2 = y1;
            y1 = y;
            *s = y;
        }
    }

    // AM envelope (trough-first, so the peak count over the call is
    // round(rate * duration)) and raised-cosine edges.
    let edge = (0.020 * sr).round() as usize;
    for (i, s) in signal.iter_mut().enumerate() {
        let t = i as f64 / sr;
        let am = 1.0 - spec.am_depth * (0.5 + 0.5 * (2.0 * PI * spec.am_rate_hz * t).cos());
        let ramp_in = if i < edge {
            0.5 - 0.5 * (PI * i as f64 / edge as f64).cos()
        } else {
            1.0
        };
        let ramp_out = if i + edge >= n {
            0.5 - 0.5 * (PI * (n - 1 - i) as f64 / edge as f64).cos()
        } else {
            1.0
        };
        *s *= am * ramp_in * ramp_out;
    }

    let clip = AudioClip::new(signal, sample_rate, "synth").expect("rendered signal is valid");
    Ok(peak_normalize(&clip, spec.peak))
}

/// Generate a labeled corpus: `2 * n_per_class` WAV files plus a manifest
/// CSV with true labels. Cow ids cycle round-robin over a herd of 20.
pub fn make_corpus(
    n_per_class: usize,
    seed: u64,
    out_dir: impl AsRef<Path>,
    sample_rate: u32,
    exclude_overlap: bool,
) -> Result<CorpusManifest, SynthError> {
    assert!(n_per_class >= 1);
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir)?;
    let mut entries = Vec::with_capacity(2 * n_per_class);
    let mut global_idx = 0usize;
    for (stream, label) in [(1u64, CallLabel::Hfc), (2u64, CallLabel::Lfc)] {
        for i in 0..n_per_class {
            let call_seed = derive_seed(seed, stream, i as u64);
            let spec = sample_spec(label, call_seed, exclude_overlap);
            let clip = render(&spec, sample_rate)?;
            let name = format!("{}_{:04}.wav", label.code().to_ascii_lowercase(), i);
            write_wav_pcm16(out_dir.join(&name), &clip)?;
            entries.push(ManifestEntry {
                wav_path: name,
                label: Some(label),
                cow_id: format!("cow_{:02}", global_idx % 20 + 1),
            });
            global_idx += 1;
        }
    }
    let manifest = CorpusManifest { entries };
    manifest.write_csv(out_dir.join("manifest.csv"))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SR: u32 = 16000;

    #[test]
    fn same_seed_same_spec() {
        let a = sample_spec(CallLabel::Hfc, 1, true);
        let b = sample_spec(CallLabel::Hfc, 1, true);
        assert_eq!(a, b);
    }

    #[test]
    fn exclude_overlap_separates_classes() {
        for seed in 0..50 {
            let hfc = sample_spec(CallLabel::Hfc, seed, true);
            let lfc = sample_spec(CallLabel::Lfc, seed, true);
            let hfc_mean = (hfc.f0_start_hz + hfc.f0_end_hz) / 2.0;
            let lfc_mean = (lfc.f0_start_hz + lfc.f0_end_hz) / 2.0;
            assert!(
                hfc_mean > class_ranges::LFC_F0.1 && hfc_mean <= class_ranges::HFC_F0.1,
                "seed {seed}: HFC mean {hfc_mean}"
            );
            assert!(
                lfc_mean >= class_ranges::LFC_F0.0 && lfc_mean < class_ranges::HFC_F0.0,
                "seed {seed}: LFC mean {lfc_mean}"
            );
        }
    }

    #[test]
    fn drawn_values_respect_class_ranges() {
        for seed in 0..50 {
            for (label, f0, dur) in [
                (
                    CallLabel::Hfc,
                    class_ranges::HFC_F0,
                    class_ranges::HFC_DURATION_S,
                ),
                (
                    CallLabel::Lfc,
                    class_ranges::LFC_F0,
                    class_ranges::LFC_DURATION_S,
                ),
            ] {
                for exclude in [false, true] {
                    let spec = sample_spec(label, seed, exclude);
                    assert!(spec.duration_s >= dur.0 && spec.duration_s <= dur.1);
                    for f in [spec.f0_start_hz, spec.f0_end_hz] {
                        assert!(
                            f >= f0.0 - 1e-9 && f <= f0.1 + 1e-9,
                            "seed {seed} {label}: F0 endpoint {f} outside {f0:?}"
                        );
                    }
                    assert!(spec.peak > 0.0 && spec.peak <= 1.0);
                    assert!(spec.am_depth >= 0.0 && spec.am_depth <= 1.0);
                }
            }
        }
    }

    #[test]
    fn render_length_is_rounded_duration() {
        let mut spec = sample_spec(CallLabel::Lfc, 3, true);
        spec.duration_s = 1.5;
        let clip = render(&spec, SR).unwrap();
        assert_eq!(clip.samples().len(), (1.5 * SR as f64).round() as usize);
    }

    #[test]
    fn render_never_clips_and_hits_peak() {
        for seed in 0..10 {
            let spec = sample_spec(CallLabel::Hfc, seed, true);
            let clip = render(&spec, SR).unwrap();
            let peak = clip.peak();
            assert!(peak <= spec.peak + 1e-9);
            assert!((peak - spec.peak).abs() < 1e-6);
        }
    }

    #[test]
    fn render_is_deterministic() {
        let spec = sample_spec(CallLabel::Lfc, 9, true);
        let a = render(&spec, SR).unwrap();
        let b = render(&spec, SR).unwrap();
        assert_eq!(a.samples(), b.samples());
    }

    #[test]
    fn nyquist_violation_detected() {
        let mut spec = sample_spec(CallLabel::Hfc, 1, true);
        spec.formants[3] = (4200.0, 300.0);
        assert!(matches!(
            render(&spec, 8000),
            Err(SynthError::NyquistViolation { .. })
        ));
    }

    #[test]
    fn corpus_minimal() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = make_corpus(1, 11, dir.path(), SR, true).unwrap();
        assert_eq!(manifest.entries.len(), 2);
        for e in &manifest.entries {
            assert!(dir.path().join(&e.wav_path).exists());
        }
    }

    #[test]
    fn corpus_shape_and_reproducibility() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let m1 = make_corpus(10, 7, dir_a.path(), SR, true).unwrap();
        let m2 = make_corpus(10, 7, dir_b.path(), SR, true).unwrap();
        assert_eq!(m1.entries.len(), 20);
        let hfc = m1
            .entries
            .iter()
            .filter(|e| e.label == Some(CallLabel::Hfc))
            .count();
        assert_eq!(hfc, 10);
        // byte-identical WAV set across reruns
        for (a, b) in m1.entries.iter().zip(&m2.entries) {
            assert_eq!(a.wav_path, b.wav_path);
            let bytes_a = std::fs::read(dir_a.path().join(&a.wav_path)).unwrap();
            let bytes_b = std::fs::read(dir_b.path().join(&b.wav_path)).unwrap();
            assert_eq!(bytes_a, bytes_b, "wav {} differs across reruns", a.wav_path);
        }
        let man_a = std::fs::read(dir_a.path().join("manifest.csv")).unwrap();
        let man_b = std::fs::read(dir_b.path().join("manifest.csv")).unwrap();
        assert_eq!(man_a, man_b);
    }

    #[test]
    fn corpus_herd_size() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = make_corpus(100, 7, dir.path(), SR, true).unwrap();
        let cows: std::collections::HashSet<_> =
            manifest.entries.iter().map(|e| e.cow_id.clone()).collect();
        assert_eq!(cows.len(), 20);
        assert_eq!(manifest.entries.len(), 200);
    }

    #[test]
    fn true_f0_mean_matches_flat_spec() {
        let mut spec = sample_spec(CallLabel::Lfc, 2, true);
        spec.f0_start_hz = 120.0;
        spec.f0_end_hz = 120.0;
        spec.fm_depth_hz = 0.0;
        assert!((spec.true_f0_mean(SR) - 120.0).abs() < 1e-9);
    }
}
