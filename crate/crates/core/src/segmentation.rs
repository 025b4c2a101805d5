//! Energy-based call detection and the temporal statistics of a recording.
//!
//! Detection runs on per-frame RMS levels in dBFS with hysteresis: a hang
//! time keeps an event open across brief dips and a merge gap joins events
//! separated by less than a configurable silence.

use thiserror::Error;

use crate::audio_io::{AudioClip, FrameConfig};

#[derive(Debug, Error)]
pub enum SegmentationError {
    #[error("span must be positive, got {0}")]
    NonPositiveSpan(f64),
}

/// A segmented call: time bounds, the sample slice, and its peak frame level.
#[derive(Debug, Clone)]
pub struct VocalEvent {
    pub start_s: f64,
    pub end_s: f64,
    pub samples: Vec<f64>,
    /// Max frame level in dBFS.
    pub peak_db: f64,
    pub sample_rate: u32,
    pub source_id: String,
}

impl VocalEvent {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

/// Energy VAD parameters.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct VadConfig {
    /// Activation level relative to full scale, dBFS (negative).
    pub threshold_db: f64,
    /// Release hold: an event stays open this long below threshold.
    pub hang_ms: f64,
    /// Events shorter than this are dropped.
    pub min_event_ms: f64,
    /// Events separated by less than this are merged.
    pub merge_gap_ms: f64,
}

impl Default for VadConfig {
    fn default() -> Self {
        VadConfig {
            threshold_db: -35.0,
            hang_ms: 120.0,
            min_event_ms: 100.0,
            merge_gap_ms: 50.0,
        }
    }
}

/// Per-frame level in dBFS with a 1e-10 floor inside the log so silence
/// stays finite.
pub fn frame_level_db(frame: &[f64]) -> f64 {
    let rms = (frame.iter().map(|s| s * s).sum::<f64>() / frame.len().max(1) as f64).sqrt();
    20.0 * (rms + 1e-10).log10()
}

/// Detect vocal events in a clip.
///
/// Levels are computed on unwindowed frames. Frames at or above the
/// threshold open an event; the event closes once the signal has stayed
/// below threshold for `hang_ms`. Events shorter than `min_event_ms` are
/// dropped, then events separated by less than `merge_gap_ms` are merged.
/// The result is sorted by start time and non-overlapping; an empty list is
/// a valid outcome.
pub fn detect_events(clip: &AudioClip, frame_cfg: &FrameConfig, vad: &VadConfig) -> Vec<VocalEvent> {
    let sr = clip.sample_rate();
    let l = frame_cfg.frame_len(sr);
    let h = frame_cfg.hop_len(sr);
    let n = clip.samples().len();
    if n < l {
        return Vec::new();
    }
    let count = (n - l) / h + 1;
    let levels: Vec<f64> = (0..count)
        .map(|i| frame_level_db(&clip.samples()[i * h..i * h + l]))
        .collect();

    let hang_frames = (vad.hang_ms / 1000.0 * sr as f64 / h as f64).ceil() as usize;

    // (first_hot, last_hot) frame index spans
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut open: Option<(usize, usize)> = None;
    for (i, &level) in levels.iter().enumerate() {
        if level >= vad.threshold_db {
            open = match open {
                Some((first, _)) => Some((first, i)),
                None => Some((i, i)),
            };
        } else if let Some((first, last)) = open {
            if i - last > hang_frames {
                spans.push((first, last));
                open = None;
            }
        }
    }
    if let Some(span) = open {
        spans.push(span);
    }

    // sample-domain bounds
    let mut bounds: Vec<(usize, usize)> = spans
        .iter()
        .map(|&(first, last)| (first * h, (last * h + l).min(n)))
        .collect();

    let min_samples = (vad.min_event_ms / 1000.0 * sr as f64).round() as usize;
    bounds.retain(|&(s, e)| e - s >= min_samples);

    let gap_samples = (vad.merge_gap_ms / 1000.0 * sr as f64).round() as usize;
    let mut merged: Vec<(usize, usize)> = Vec::new();
    for (s, e) in bounds {
        match merged.last_mut() {
            Some((_, prev_end)) if s.saturating_sub(*prev_end) < gap_samples => {
                *prev_end = e.max(*prev_end);
            }
            _ => merged.push((s, e)),
        }
    }

    merged
        .into_iter()
        .map(|(s, e)| {
            let peak_db = (s / h..)
                .take_while(|i| i * h + l <= e && *i < count)
                .map(|i| levels[i])
                .fold(f64::NEG_INFINITY, f64::max);
            let peak_db = if peak_db.is_finite() {
                peak_db
            } else {
                frame_level_db(&clip.samples()[s..e])
            };
            VocalEvent {
                start_s: s as f64 / sr as f64,
                end_s: e as f64 / sr as f64,
                samples: clip.samples()[s..e].to_vec(),
                peak_db,
                sample_rate: sr,
                source_id: clip.source_id.clone(),
            }
        })
        .collect()
}

/// Treat an entire clip as one event; used for corpora where each file
/// holds exactly one call.
pub fn whole_clip_event(clip: &AudioClip, frame_cfg: &FrameConfig) -> VocalEvent {
    let sr = clip.sample_rate();
    let l = frame_cfg.frame_len(sr);
    let h = frame_cfg.hop_len(sr);
    let n = clip.samples().len();
    let peak_db = if n >= l {
        (0..(n - l) / h + 1)
            .map(|i| frame_level_db(&clip.samples()[i * h..i * h + l]))
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        frame_level_db(clip.samples())
    };
    VocalEvent {
        start_s: 0.0,
        end_s: clip.duration_s(),
        samples: clip.samples().to_vec(),
        peak_db,
        sample_rate: sr,
        source_id: clip.source_id.clone(),
    }
}

/// Temporal statistics over the events of one recording span.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalStats {
    pub event_count: usize,
    pub total_span_s: f64,
    /// Events per minute over the span.
    pub vocalization_rate: f64,
    /// Onset-to-onset interval stats; absent when fewer than two events.
    pub mean_interval_s: Option<f64>,
    pub min_interval_s: Option<f64>,
    pub max_interval_s: Option<f64>,
}

/// Rate and onset-to-onset interval statistics. Intervals are defined only
/// when at least two events exist.
pub fn temporal_stats(
    events: &[VocalEvent],
    span_s: f64,
) -> Result<TemporalStats, SegmentationError> {
    if !(span_s > 0.0) {
        return Err(SegmentationError::NonPositiveSpan(span_s));
    }
    let mut onsets: Vec<f64> = events.iter().map(|e| e.start_s).collect();
    onsets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let intervals: Vec<f64> = onsets.windows(2).map(|w| w[1] - w[0]).collect();
    let (mean, min, max) = if intervals.is_empty() {
        (None, None, None)
    } else {
        (
            Some(intervals.iter().sum::<f64>() / intervals.len() as f64),
            Some(intervals.iter().cloned().fold(f64::INFINITY, f64::min)),
            Some(intervals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
        )
    };
    Ok(TemporalStats {
        event_count: events.len(),
        total_span_s: span_s,
        vocalization_rate: events.len() as f64 / span_s * 60.0,
        mean_interval_s: mean,
        min_interval_s: min,
        max_interval_s: max,
    })
}

/// Render events as CSV: `source_id,start_s,end_s,peak_db`.
pub fn events_csv(events: &[VocalEvent]) -> String {
    let mut out = String::from("source_id,start_s,end_s,peak_db\n");
    for e in events {
        out.push_str(&format!(
            "{},{},{},{}\n",
            e.source_id,
            crate::fmt_sig6(e.start_s),
            crate::fmt_sig6(e.end_s),
            crate::fmt_sig6(e.peak_db)
        ));
    }
    out
}
