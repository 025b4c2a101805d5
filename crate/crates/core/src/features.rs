//! Per-event acoustic parameters: F0 contour and statistics, spectral
//! shape, amplitude modulation, formants, MFCC summaries, and the
//! harmonics-to-noise ratio, plus the feature CSV surface.
//!
//! F0 and HNR work on the autocorrelation normalized by the analysis
//! window's own autocorrelation, so a clean periodic signal scores ~1 at
//! its period regardless of lag.

use thiserror::Error;

use crate::audio_io::FrameConfig;
use crate::dsp_core::{self, fft_size_for};
use crate::segmentation::{frame_level_db, VocalEvent};
use crate::CallLabel;

/// F0 search band, Hz. Covers both call classes with margin.
pub const F0_MIN_HZ: f64 = 50.0;
pub const F0_MAX_HZ: f64 = 600.0;
/// A frame is voiced iff its normalized autocorrelation peak reaches this.
pub const VOICING_THRESHOLD: f64 = 0.45;
/// Pre-emphasis factor for formant analysis.
const PRE_EMPHASIS: f64 = 0.97;

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("no voiced frames in event")]
    NoVoicedFrames,
    #[error("event has zero energy")]
    ZeroEnergyFrame,
    #[error("fewer than two stable formants resolved")]
    FormantsUnresolved,
    #[error("event spans {have} frames, need at least {need}")]
    TooFewFrames { have: usize, need: usize },
}

/// Voiced-frame pitch track. Times are relative to the event start and
/// strictly increasing; unvoiced frames are simply absent.
#[derive(Debug, Clone)]
pub struct F0Contour {
    pub times_s: Vec<f64>,
    pub f0_hz: Vec<f64>,
    /// Voiced frames / total frames.
    pub voicing_fraction: f64,
}

/// Summary statistics of an F0 track.
#[derive(Debug, Clone, Copy)]
pub struct F0Stats {
    pub f0_min: f64,
    pub f0_mean: f64,
    pub f0_max: f64,
    pub f0_range: f64,
    /// Mean |peak - trough| over consecutive extremum pairs of the track.
    pub fm_extent_hz: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SpectralFeatures {
    pub spectral_centroid_hz: f64,
    /// Width of the central-99%-power band.
    pub bandwidth_hz: f64,
    pub q25_hz: f64,
    pub q50_hz: f64,
    pub q75_hz: f64,
    pub fpeak_hz: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct AmplitudeFeatures {
    /// Mean frame level, dBFS.
    pub amplitude_db: f64,
    pub rms_mean: f64,
    pub zcr_mean: f64,
    pub am_extent_db: f64,
    pub am_rate_hz: f64,
    pub am_var_db_per_s: f64,
}

/// Per-slot formant estimates; unresolved slots are `None`.
#[derive(Debug, Clone, Copy)]
pub struct FormantEstimates {
    pub mean_hz: [Option<f64>; 4],
    pub range_hz: [Option<f64>; 4],
}

#[derive(Debug, Clone, Copy)]
pub struct MfccFeatures {
    pub mean: [f64; 13],
    /// Mean absolute first difference per coefficient; the "abrupt change"
    /// statistic.
    pub delta_mean: [f64; 13],
}

/// The full per-event parameter vector. Voicing-dependent fields degrade
/// to `None` instead of being silently zeroed.
#[derive(Debug, Clone)]
pub struct AcousticFeatures {
    pub source_id: String,
    pub start_s: f64,
    pub end_s: f64,
    pub duration_s: f64,
    pub f0_min: Option<f64>,
    pub f0_mean: Option<f64>,
    pub f0_max: Option<f64>,
    pub f0_range: Option<f64>,
    pub fm_extent_hz: Option<f64>,
    pub bandwidth_hz: f64,
    pub amplitude_db: f64,
    pub am_extent_db: f64,
    pub am_rate_hz: f64,
    pub am_var_db_per_s: f64,
    pub q25_hz: f64,
    pub q50_hz: f64,
    pub q75_hz: f64,
    pub formant_mean_hz: [Option<f64>; 4],
    pub formant_range_hz: [Option<f64>; 4],
    pub fpeak_hz: f64,
    pub spectral_centroid_hz: f64,
    pub rms_mean: f64,
    pub zcr_mean: f64,
    pub hnr_db: Option<f64>,
    pub mfcc_mean: [f64; 13],
    pub mfcc_delta_mean: [f64; 13],
    pub label: Option<CallLabel>,
}

// ---------------------------------------------------------------------------
// frame helpers
// ---------------------------------------------------------------------------

fn frame_geometry(event: &VocalEvent, cfg: &FrameConfig) -> (usize, usize, usize) {
    let l = cfg.frame_len(event.sample_rate);
    let h = cfg.hop_len(event.sample_rate);
    let n = event.samples.len();
    let count = if n >= l { (n - l) / h + 1 } else { 0 };
    (l, h, count)
}

fn raw_frame<'a>(event: &'a VocalEvent, l: usize, h: usize, i: usize) -> &'a [f64] {
    &event.samples[i * h..i * h + l]
}

/// Pitch analysis windows are at least 60 ms (three periods of the 50 Hz
/// band floor) so the autocorrelation stays clean at long lags; the hop
/// grid is unchanged.
fn pitch_window_len(event: &VocalEvent, cfg: &FrameConfig) -> usize {
    let wanted = (0.060 * event.sample_rate as f64).round() as usize;
    cfg.frame_len(event.sample_rate)
        .max(wanted)
        .min(event.samples.len())
}

/// Autocorrelation of a mean-subtracted frame, normalized by the frame's
/// zero-lag power and by the rectangular window autocorrelation `1 - tau/L`.
/// `None` when the frame has (numerically) no energy.
fn corrected_autocorr(frame: &[f64], max_lag: usize) -> Option<Vec<f64>> {
    let l = frame.len();
    let mean = frame.iter().sum::<f64>() / l as f64;
    let centered: Vec<f64> = frame.iter().map(|s| s - mean).collect();
    let raw = dsp_core::autocorr_raw(&centered, max_lag.min(l - 1));
    let r0 = raw[0];
    if r0 <= 1e-16 {
        return None;
    }
    Some(
        raw.iter()
            .enumerate()
            .map(|(tau, v)| (v / r0) / (1.0 - tau as f64 / l as f64))
            .collect(),
    )
}

/// Parabolic refinement around an integer peak: returns (offset, height).
fn parabolic(y1: f64, y2: f64, y3: f64) -> (f64, f64) {
    let denom = y1 - 2.0 * y2 + y3;
    if denom.abs() < 1e-12 {
        return (0.0, y2);
    }
    let delta = (0.5 * (y1 - y3) / denom).clamp(-1.0, 1.0);
    (delta, y2 - 0.25 * (y1 - y3) * delta)
}

struct PitchCandidate {
    lag: f64,
    height: f64,
}

/// Best pitch candidate in the search band, skipping an excluded lag
/// region if given. Longer lags carry a small octave penalty so the true
/// period beats its subharmonics on near-ties.
fn best_candidate(
    r: &[f64],
    tau_min: usize,
    tau_max: usize,
    exclude: Option<(f64, f64)>,
) -> Option<PitchCandidate> {
    let mut best: Option<(f64, PitchCandidate)> = None;
    let hi = tau_max.min(r.len().saturating_sub(2));
    for tau in tau_min.max(1)..=hi {
        if r[tau] > r[tau - 1] && r[tau] >= r[tau + 1] {
            if let Some((lo, hi_ex)) = exclude {
                if (tau as f64) >= lo && (tau as f64) <= hi_ex {
                    continue;
                }
            }
            let (delta, height) = parabolic(r[tau - 1], r[tau], r[tau + 1]);
            // Every multiple of the true period is also a correlation peak;
            // the per-octave cost prefers the shortest near-tied lag.
            let strength = height - 0.05 * (tau as f64 / tau_min as f64).log2();
            if best.as_ref().map_or(true, |(s, _)| strength > *s) {
                best = Some((
                    strength,
                    PitchCandidate {
                        lag: tau as f64 + delta,
                        height,
                    },
                ));
            }
        }
    }
    best.map(|(_, c)| c)
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

/// Extract the F0 contour of an event by per-frame autocorrelation peak
/// search over the 50-600 Hz band, with parabolic lag refinement and
/// octave-jump suppression against the running median.
pub fn extract_f0(event: &VocalEvent, cfg: &FrameConfig) -> Result<F0Contour, FeatureError> {
    let (_, h, cfg_count) = frame_geometry(event, cfg);
    if cfg_count < 3 {
        return Err(FeatureError::TooFewFrames {
            have: cfg_count,
            need: 3,
        });
    }
    let l = pitch_window_len(event, cfg);
    let n = event.samples.len();
    let count = (n - l) / h + 1;
    let sr = event.sample_rate as f64;
    let tau_min = ((sr / F0_MAX_HZ).floor() as usize).max(2);
    let tau_max = ((sr / F0_MIN_HZ).floor() as usize).min(l - 2);

    let mut times = Vec::new();
    let mut track = Vec::new();
    for i in 0..count {
        let frame = raw_frame(event, l, h, i);
        let Some(r) = corrected_autocorr(frame, tau_max + 1) else {
            continue;
        };
        let Some(cand) = best_candidate(&r, tau_min, tau_max, None) else {
            continue;
        };
        if cand.height < VOICING_THRESHOLD {
            continue;
        }
        let mut f0 = sr / cand.lag;
        if !(F0_MIN_HZ..=F0_MAX_HZ).contains(&f0) {
            continue;
        }
        // Octave-jump suppression: frames far off the running median get a
        // second search with the offending lag region excluded.
        if track.len() >= 2 {
            let mut sofar = track.clone();
            let med = median(&mut sofar);
            if (f0 - med).abs() > 0.6 * med {
                let exclude = (cand.lag * 0.8, cand.lag * 1.25);
                match best_candidate(&r, tau_min, tau_max, Some(exclude)) {
                    Some(second) if second.height >= VOICING_THRESHOLD => {
                        let f2 = sr / second.lag;
                        if !(F0_MIN_HZ..=F0_MAX_HZ).contains(&f2) {
                            continue;
                        }
                        f0 = f2;
                    }
                    _ => continue,
                }
            }
        }
        times.push(i as f64 * h as f64 / sr);
        track.push(f0);
    }
    if track.is_empty() {
        return Err(FeatureError::NoVoicedFrames);
    }
    Ok(F0Contour {
        voicing_fraction: track.len() as f64 / count as f64,
        times_s: times,
        f0_hz: track,
    })
}

/// Interior local extrema of a track as (index, value, is_max).
fn local_extrema(track: &[f64]) -> Vec<(usize, f64, bool)> {
    let mut out = Vec::new();
    for i in 1..track.len().saturating_sub(1) {
        if track[i] > track[i - 1] && track[i] >= track[i + 1] {
            out.push((i, track[i], true));
        } else if track[i] < track[i - 1] && track[i] <= track[i + 1] {
            out.push((i, track[i], false));
        }
    }
    out
}

/// Min/mean/max/range of the contour plus the FM extent: the mean
/// |peak - trough| over consecutive (local max, local min) pairs. Tracks
/// with no interior extrema have extent 0.
pub fn f0_statistics(contour: &F0Contour) -> F0Stats {
    assert!(!contour.f0_hz.is_empty(), "contour must be non-empty");
    let track = &contour.f0_hz;
    let min = track.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = track.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = track.iter().sum::<f64>() / track.len() as f64;
    let extrema = local_extrema(track);
    let pairs: Vec<f64> = extrema
        .windows(2)
        .filter(|w| w[0].2 && !w[1].2)
        .map(|w| (w[0].1 - w[1].1).abs())
        .collect();
    let fm_extent_hz = if pairs.is_empty() {
        0.0
    } else {
        pairs.iter().sum::<f64>() / pairs.len() as f64
    };
    F0Stats {
        f0_min: min,
        f0_mean: mean,
        f0_max: max,
        f0_range: max - min,
        fm_extent_hz,
    }
}

/// Mean power spectrum of an event's windowed frames.
fn mean_power_spectrum(
    event: &VocalEvent,
    cfg: &FrameConfig,
) -> Result<(Vec<f64>, f64), FeatureError> {
    let (l, h, count) = frame_geometry(event, cfg);
    if count < 1 {
        return Err(FeatureError::TooFewFrames { have: 0, need: 1 });
    }
    let fft_size = fft_size_for(l);
    let window = cfg.window.weights(l);
    let mut acc = vec![0.0f64; fft_size / 2 + 1];
    for i in 0..count {
        let frame: Vec<f64> = raw_frame(event, l, h, i)
            .iter()
            .zip(&window)
            .map(|(s, w)| s * w)
            .collect();
        let spec = dsp_core::spectrum_of(&frame, fft_size, event.sample_rate)
            .expect("fft size is a power of two");
        for (a, m) in acc.iter_mut().zip(&spec.magnitudes) {
            *a += m * m;
        }
    }
    for a in &mut acc {
        *a /= count as f64;
    }
    let bin_hz = event.sample_rate as f64 / fft_size as f64;
    Ok((acc, bin_hz))
}

/// Centroid, energy quartiles, peak frequency, and the central-99%-power
/// bandwidth, all on the mean power spectrum across frames.
pub fn spectral_features(
    event: &VocalEvent,
    cfg: &FrameConfig,
) -> Result<SpectralFeatures, FeatureError> {
    let (power, bin_hz) = mean_power_spectrum(event, cfg)?;
    let total: f64 = power.iter().sum();
    if total <= 0.0 {
        return Err(FeatureError::ZeroEnergyFrame);
    }
    let centroid = power
        .iter()
        .enumerate()
        .map(|(k, p)| k as f64 * bin_hz * p)
        .sum::<f64>()
        / total;

    let quantile = |frac: f64| -> f64 {
        let target = frac * total;
        let mut cum = 0.0;
        for (k, p) in power.iter().enumerate() {
            cum += p;
            if cum >= target {
                return k as f64 * bin_hz;
            }
        }
        (power.len() - 1) as f64 * bin_hz
    };
    let (q25, q50, q75) = (quantile(0.25), quantile(0.50), quantile(0.75));
    let bandwidth = quantile(0.995) - quantile(0.005);

    let peak_bin = power
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(k, _)| k)
        .unwrap();
    let fpeak = if peak_bin == 0 || peak_bin + 1 == power.len() {
        peak_bin as f64 * bin_hz
    } else {
        let mag = |k: usize| power[k].sqrt();
        let (delta, _) = parabolic(mag(peak_bin - 1), mag(peak_bin), mag(peak_bin + 1));
        (peak_bin as f64 + delta) * bin_hz
    };

    Ok(SpectralFeatures {
        spectral_centroid_hz: centroid,
        bandwidth_hz: bandwidth,
        q25_hz: q25,
        q50_hz: q50,
        q75_hz: q75,
        fpeak_hz: fpeak,
    })
}

/// Local maxima of `env` with at least `min_prominence` of prominence.
fn find_peaks(env: &[f64], min_prominence: f64) -> Vec<usize> {
    let n = env.len();
    let mut peaks = Vec::new();
    for i in 1..n.saturating_sub(1) {
        if !(env[i] > env[i - 1] && env[i] >= env[i + 1]) {
            continue;
        }
        let h = env[i];
        let mut left_min = h;
        let mut j = i;
        while j > 0 {
            j -= 1;
            if env[j] > h {
                break;
            }
            left_min = left_min.min(env[j]);
        }
        let mut right_min = h;
        let mut j = i;
        while j + 1 < n {
            j += 1;
            if env[j] > h {
                break;
            }
            right_min = right_min.min(env[j]);
        }
        if h - left_min.max(right_min) >= min_prominence {
            peaks.push(i);
        }
    }
    peaks
}

/// Level, RMS, zero-crossing rate, and amplitude-modulation statistics on
/// the per-frame dB envelope. AM peaks need at least 1.5 dB of prominence.
pub fn amplitude_features(
    event: &VocalEvent,
    cfg: &FrameConfig,
) -> Result<AmplitudeFeatures, FeatureError> {
    let (l, h, count) = frame_geometry(event, cfg);
    if count < 2 {
        return Err(FeatureError::TooFewFrames {
            have: count,
            need: 2,
        });
    }
    let mut env_db = Vec::with_capacity(count);
    let mut rms_sum = 0.0;
    let mut zcr_sum = 0.0;
    for i in 0..count {
        let frame = raw_frame(event, l, h, i);
        env_db.push(frame_level_db(frame));
        rms_sum += (frame.iter().map(|s| s * s).sum::<f64>() / l as f64).sqrt();
        let crossings = frame
            .windows(2)
            .filter(|w| (w[0] > 0.0) != (w[1] > 0.0))
            .count();
        zcr_sum += crossings as f64 / l as f64;
    }
    let duration = event.duration_s();
    let peaks = find_peaks(&env_db, 1.5);
    let mut extents = Vec::new();
    for (pi, &p) in peaks.iter().enumerate() {
        let left_bound = if pi == 0 { 0 } else { peaks[pi - 1] };
        let right_bound = if pi + 1 < peaks.len() {
            peaks[pi + 1]
        } else {
            env_db.len() - 1
        };
        if p > left_bound {
            let trough = env_db[left_bound..p]
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            extents.push(env_db[p] - trough);
        }
        if right_bound > p {
            let trough = env_db[p + 1..=right_bound]
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            extents.push(env_db[p] - trough);
        }
    }
    let am_extent = if extents.is_empty() {
        0.0
    } else {
        extents.iter().sum::<f64>() / extents.len() as f64
    };
    let am_var = env_db.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>() / duration;

    Ok(AmplitudeFeatures {
        amplitude_db: env_db.iter().sum::<f64>() / count as f64,
        rms_mean: rms_sum / count as f64,
        zcr_mean: zcr_sum / count as f64,
        am_extent_db: am_extent,
        am_rate_hz: peaks.len() as f64 / duration,
        am_var_db_per_s: am_var,
    })
}

/// Formant means and ranges from LPC pole angles over the voiced frames.
pub fn formant_features(
    event: &VocalEvent,
    cfg: &FrameConfig,
) -> Result<FormantEstimates, FeatureError> {
    let contour = extract_f0(event, cfg).map_err(|_| FeatureError::FormantsUnresolved)?;
    formant_features_with_contour(event, cfg, &contour)
}

/// [`formant_features`] with a precomputed contour, so pipelines track
/// pitch only once.
pub fn formant_features_with_contour(
    event: &VocalEvent,
    cfg: &FrameConfig,
    contour: &F0Contour,
) -> Result<FormantEstimates, FeatureError> {
    let (l, h, _) = frame_geometry(event, cfg);
    let sr = event.sample_rate as f64;
    if contour.f0_hz.is_empty() {
        return Err(FeatureError::FormantsUnresolved);
    }

    // Pre-emphasize once over the whole event.
    let mut emphasized = Vec::with_capacity(event.samples.len());
    let mut prev = 0.0;
    for &s in &event.samples {
        emphasized.push(s - PRE_EMPHASIS * prev);
        prev = s;
    }

    let order = (2 + (sr / 2000.0).round() as usize).min(24);
    let window = cfg.window.weights(l);
    let mut slots: [Vec<f64>; 4] = Default::default();
    let mut voiced_frames = 0usize;
    for &t in &contour.times_s {
        let i = (t * sr / h as f64).round() as usize;
        let start = i * h;
        if start + l > emphasized.len() {
            continue;
        }
        voiced_frames += 1;
        let frame: Vec<f64> = emphasized[start..start + l]
            .iter()
            .zip(&window)
            .map(|(s, w)| s * w)
            .collect();
        let model = dsp_core::lpc(&frame, order);
        let mut freqs: Vec<f64> = model
            .poles()
            .iter()
            .filter(|z| z.im > 0.0)
            .filter_map(|z| {
                let bw = -(sr / std::f64::consts::PI) * z.norm().ln();
                let freq = z.im.atan2(z.re) * sr / (2.0 * std::f64::consts::PI);
                (bw < 400.0 && freq >= 90.0 && freq <= sr / 2.0 - 50.0).then_some(freq)
            })
            .collect();
        freqs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (slot, &f) in slots.iter_mut().zip(freqs.iter().take(4)) {
            slot.push(f);
        }
    }

    let need = (voiced_frames / 2).max(2);
    let mut mean_hz = [None; 4];
    let mut range_hz = [None; 4];
    let mut resolved = 0;
    for (i, slot) in slots.iter().enumerate() {
        if slot.len() >= need {
            let mean = slot.iter().sum::<f64>() / slot.len() as f64;
            let min = slot.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = slot.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            mean_hz[i] = Some(mean);
            range_hz[i] = Some(max - min);
            resolved += 1;
        }
    }
    if resolved < 2 {
        return Err(FeatureError::FormantsUnresolved);
    }
    Ok(FormantEstimates { mean_hz, range_hz })
}

/// 13 MFCCs per frame (26 mel filters over the full band, log energies,
/// DCT-II) summarized as per-coefficient means and mean absolute deltas.
pub fn mfcc_features(event: &VocalEvent, cfg: &FrameConfig) -> Result<MfccFeatures, FeatureError> {
    let seq = mfcc_sequence(event, cfg)?;
    Ok(summarize_mfcc(&seq))
}

/// Per-frame MFCC vectors for sequence models.
pub fn mfcc_sequence(event: &VocalEvent, cfg: &FrameConfig) -> Result<Vec<[f64; 13]>, FeatureError> {
    let (l, h, count) = frame_geometry(event, cfg);
    if count < 3 {
        return Err(FeatureError::TooFewFrames {
            have: count,
            need: 3,
        });
    }
    let fft_size = fft_size_for(l);
    let bank = dsp_core::mel_filterbank(26, fft_size, event.sample_rate, 0.0, {
        event.sample_rate as f64 / 2.0
    })
    .expect("mel bank parameters are valid");
    let window = cfg.window.weights(l);
    let mut total_energy = 0.0;
    let mut seq = Vec::with_capacity(count);
    for i in 0..count {
        let frame: Vec<f64> = raw_frame(event, l, h, i)
            .iter()
            .zip(&window)
            .map(|(s, w)| s * w)
            .collect();
        let spec = dsp_core::spectrum_of(&frame, fft_size, event.sample_rate)
            .expect("fft size is a power of two");
        let power: Vec<f64> = spec.magnitudes.iter().map(|m| m * m).collect();
        total_energy += power.iter().sum::<f64>();
        let log_energies: Vec<f64> = bank
            .iter()
            .map(|row| {
                let e: f64 = row.iter().zip(&power).map(|(w, p)| w * p).sum();
                (e + 1e-10).ln()
            })
            .collect();
        let coeffs = dsp_core::dct_ii(&log_energies, 13);
        let mut arr = [0.0; 13];
        arr.copy_from_slice(&coeffs);
        seq.push(arr);
    }
    if total_energy <= 0.0 {
        return Err(FeatureError::ZeroEnergyFrame);
    }
    Ok(seq)
}

fn summarize_mfcc(seq: &[[f64; 13]]) -> MfccFeatures {
    let n = seq.len() as f64;
    let mut mean = [0.0; 13];
    for frame in seq {
        for (m, c) in mean.iter_mut().zip(frame) {
            *m += c / n;
        }
    }
    let mut delta_mean = [0.0; 13];
    if seq.len() > 1 {
        let d = (seq.len() - 1) as f64;
        for w in seq.windows(2) {
            for (dm, (next, cur)) in delta_mean.iter_mut().zip(w[1].iter().zip(&w[0])) {
                *dm += (next - cur).abs() / d;
            }
        }
    }
    MfccFeatures { mean, delta_mean }
}

/// Harmonics-to-noise ratio: per voiced frame the normalized
/// autocorrelation `r` at the F0 lag gives `10 log10(r / (1 - r))`, with
/// `r` clamped to [1e-6, 1 - 1e-6]; the event HNR is the mean over frames.
pub fn hnr(event: &VocalEvent, cfg: &FrameConfig, contour: &F0Contour) -> Result<f64, FeatureError> {
    if contour.f0_hz.is_empty() {
        return Err(FeatureError::NoVoicedFrames);
    }
    let h = cfg.hop_len(event.sample_rate);
    let l = pitch_window_len(event, cfg);
    let sr = event.sample_rate as f64;
    let mut acc = 0.0;
    let mut n = 0usize;
    for (&t, &f0) in contour.times_s.iter().zip(&contour.f0_hz) {
        let i = (t * sr / h as f64).round() as usize;
        if i * h + l > event.samples.len() {
            continue;
        }
        let frame = raw_frame(event, l, h, i);
        let lag = sr / f0;
        let lag_floor = lag.floor() as usize;
        if lag_floor + 1 > l - 1 {
            continue;
        }
        let Some(r) = corrected_autocorr(frame, lag_floor + 1) else {
            continue;
        };
        // linear interpolation of r at the exact (fractional) F0 lag
        let frac = lag - lag_floor as f64;
        let r_at_lag = r[lag_floor] * (1.0 - frac) + r[lag_floor + 1] * frac;
        let r_clamped = r_at_lag.clamp(1e-6, 1.0 - 1e-6);
        acc += 10.0 * (r_clamped / (1.0 - r_clamped)).log10();
        n += 1;
    }
    if n == 0 {
        return Err(FeatureError::NoVoicedFrames);
    }
    Ok(acc / n as f64)
}

/// Run every extractor and assemble the full vector. Voicing and formant
/// failures degrade to missing fields; zero-energy or too-short events are
/// errors.
pub fn extract_all(event: &VocalEvent, cfg: &FrameConfig) -> Result<AcousticFeatures, FeatureError> {
    let spectral = spectral_features(event, cfg)?;
    let amplitude = amplitude_features(event, cfg)?;
    let mfcc = mfcc_features(event, cfg)?;

    let contour = extract_f0(event, cfg);
    let (f0_stats, hnr_db, formants) = match &contour {
        Ok(c) => {
            let stats = f0_statistics(c);
            let hnr_db = hnr(event, cfg, c).ok();
            let formants = formant_features_with_contour(event, cfg, c).ok();
            (Some(stats), hnr_db, formants)
        }
        Err(FeatureError::ZeroEnergyFrame) => return Err(FeatureError::ZeroEnergyFrame),
        Err(_) => (None, None, None),
    };

    Ok(AcousticFeatures {
        source_id: event.source_id.clone(),
        start_s: event.start_s,
        end_s: event.end_s,
        duration_s: event.duration_s(),
        f0_min: f0_stats.map(|s| s.f0_min),
        f0_mean: f0_stats.map(|s| s.f0_mean),
        f0_max: f0_stats.map(|s| s.f0_max),
        f0_range: f0_stats.map(|s| s.f0_range),
        fm_extent_hz: f0_stats.map(|s| s.fm_extent_hz),
        bandwidth_hz: spectral.bandwidth_hz,
        amplitude_db: amplitude.amplitude_db,
        am_extent_db: amplitude.am_extent_db,
        am_rate_hz: amplitude.am_rate_hz,
        am_var_db_per_s: amplitude.am_var_db_per_s,
        q25_hz: spectral.q25_hz,
        q50_hz: spectral.q50_hz,
        q75_hz: spectral.q75_hz,
        formant_mean_hz: formants.map(|f| f.mean_hz).unwrap_or([None; 4]),
        formant_range_hz: formants.map(|f| f.range_hz).unwrap_or([None; 4]),
        fpeak_hz: spectral.fpeak_hz,
        spectral_centroid_hz: spectral.spectral_centroid_hz,
        rms_mean: amplitude.rms_mean,
        zcr_mean: amplitude.zcr_mean,
        hnr_db,
        mfcc_mean: mfcc.mean,
        mfcc_delta_mean: mfcc.delta_mean,
        label: None,
    })
}

// ---------------------------------------------------------------------------
// feature CSV
// ---------------------------------------------------------------------------

const BASE_COLUMNS: [&str; 30] = [
    "source_id",
    "start_s",
    "end_s",
    "duration_s",
    "f0_min",
    "f0_mean",
    "f0_max",
    "f0_range",
    "fm_extent_hz",
    "bandwidth_hz",
    "amplitude_db",
    "am_extent_db",
    "am_rate_hz",
    "am_var_db_per_s",
    "q25_hz",
    "q50_hz",
    "q75_hz",
    "f1_mean",
    "f2_mean",
    "f3_mean",
    "f4_mean",
    "f1_range",
    "f2_range",
    "f3_range",
    "f4_range",
    "fpeak_hz",
    "spectral_centroid_hz",
    "rms_mean",
    "zcr_mean",
    "hnr_db",
];

/// All column names of the feature CSV, in order.
pub fn feature_csv_columns() -> Vec<String> {
    let mut cols: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    cols.extend((0..13).map(|i| format!("mfcc_{i}")));
    cols.extend((0..13).map(|i| format!("dmfcc_{i}")));
    cols.push("label".into());
    cols
}

/// The fixed feature CSV header line.
pub fn feature_csv_header() -> String {
    feature_csv_columns().join(",")
}

/// Names of the numeric columns (everything between the id fields and the
/// label), the model-facing schema.
pub fn numeric_feature_columns() -> Vec<String> {
    let cols = feature_csv_columns();
    cols[3..cols.len() - 1].to_vec()
}

fn opt(v: Option<f64>) -> String {
    v.map(crate::fmt_sig6).unwrap_or_default()
}

/// One CSV row for a feature vector; missing fields become empty cells and
/// floats carry six significant digits.
pub fn feature_csv_row(f: &AcousticFeatures) -> String {
    let mut cells: Vec<String> = vec![
        f.source_id.clone(),
        crate::fmt_sig6(f.start_s),
        crate::fmt_sig6(f.end_s),
        crate::fmt_sig6(f.duration_s),
        opt(f.f0_min),
        opt(f.f0_mean),
        opt(f.f0_max),
        opt(f.f0_range),
        opt(f.fm_extent_hz),
        crate::fmt_sig6(f.bandwidth_hz),
        crate::fmt_sig6(f.amplitude_db),
        crate::fmt_sig6(f.am_extent_db),
        crate::fmt_sig6(f.am_rate_hz),
        crate::fmt_sig6(f.am_var_db_per_s),
        crate::fmt_sig6(f.q25_hz),
        crate::fmt_sig6(f.q50_hz),
        crate::fmt_sig6(f.q75_hz),
    ];
    for i in 0..4 {
        cells.push(opt(f.formant_mean_hz[i]));
    }
    for i in 0..4 {
        cells.push(opt(f.formant_range_hz[i]));
    }
    cells.push(crate::fmt_sig6(f.fpeak_hz));
    cells.push(crate::fmt_sig6(f.spectral_centroid_hz));
    cells.push(crate::fmt_sig6(f.rms_mean));
    cells.push(crate::fmt_sig6(f.zcr_mean));
    cells.push(opt(f.hnr_db));
    for c in f.mfcc_mean {
        cells.push(crate::fmt_sig6(c));
    }
    for c in f.mfcc_delta_mean {
        cells.push(crate::fmt_sig6(c));
    }
    cells.push(f.label.map(|l| l.code().to_string()).unwrap_or_default());
    cells.join(",")
}

/// Parsed feature CSV: identifier columns, the numeric block (missing
/// cells as NaN), and labels.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    pub source_ids: Vec<String>,
    pub start_s: Vec<f64>,
    /// Names of the numeric columns, in file order.
    pub columns: Vec<String>,
    /// One row per event; NaN marks a missing cell.
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<Option<CallLabel>>,
}

#[derive(Debug, Error)]
pub enum FeatureCsvError {
    #[error("feature CSV header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },
    #[error("row {row}: {message}")]
    BadRow { row: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Read a feature CSV, enforcing the schema by name and order.
pub fn read_feature_csv(path: impl AsRef<std::path::Path>) -> Result<FeatureTable, FeatureCsvError> {
    let text = std::fs::read_to_string(path)?;
    parse_feature_csv(&text)
}

pub fn parse_feature_csv(text: &str) -> Result<FeatureTable, FeatureCsvError> {
    let expected = feature_csv_header();
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| FeatureCsvError::HeaderMismatch {
        expected: expected.clone(),
        found: String::new(),
    })?;
    if header.trim_end() != expected {
        return Err(FeatureCsvError::HeaderMismatch {
            expected,
            found: header.to_string(),
        });
    }
    let columns = numeric_feature_columns();
    let n_cols = feature_csv_columns().len();
    let mut table = FeatureTable {
        source_ids: Vec::new(),
        start_s: Vec::new(),
        columns,
        rows: Vec::new(),
        labels: Vec::new(),
    };
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != n_cols {
            return Err(FeatureCsvError::BadRow {
                row: idx + 1,
                message: format!("{} cells, expected {}", cells.len(), n_cols),
            });
        }
        let parse = |cell: &str, row: usize| -> Result<f64, FeatureCsvError> {
            if cell.is_empty() {
                return Ok(f64::NAN);
            }
            cell.parse::<f64>().map_err(|e| FeatureCsvError::BadRow {
                row,
                message: format!("bad number `{cell}`: {e}"),
            })
        };
        table.source_ids.push(cells[0].to_string());
        table.start_s.push(parse(cells[1], idx + 1)?);
        let numeric: Result<Vec<f64>, _> = cells[3..n_cols - 1]
            .iter()
            .map(|c| parse(c, idx + 1))
            .collect();
        table.rows.push(numeric?);
        let label_cell = cells[n_cols - 1];
        let label = if label_cell.is_empty() {
            None
        } else {
            Some(
                CallLabel::parse(label_cell).ok_or_else(|| FeatureCsvError::BadRow {
                    row: idx + 1,
                    message: format!("unknown label `{label_cell}`"),
                })?,
            )
        };
        table.labels.push(label);
    }
    Ok(table)
}
