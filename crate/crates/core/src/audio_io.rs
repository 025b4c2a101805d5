//! WAV decoding and encoding, peak normalization, analysis framing, an
//! optional spectral noise gate, and the corpus manifest format.

use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::CallLabel;

#[derive(Debug, Error)]
pub enum AudioIoError {
    #[error("malformed WAV container: {0}")]
    MalformedContainer(String),
    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),
    #[error("audio stream holds no samples")]
    EmptyAudio,
    #[error("clip too short: {samples} samples, need at least {needed}")]
    ClipTooShort { samples: usize, needed: usize },
    #[error("sample rate {0} Hz below the 8000 Hz minimum")]
    InvalidSampleRate(u32),
    #[error("non-finite sample value in audio stream")]
    NonFiniteSample,
    #[error("manifest: {0}")]
    Manifest(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Decoded mono audio. Samples are finite and within `[-1, 1]`; the sample
/// rate is at least 8 kHz so cow F0 and formants up to ~4 kHz stay
/// representable.
#[derive(Debug, Clone)]
pub struct AudioClip {
    samples: Vec<f64>,
    sample_rate: u32,
    pub source_id: String,
}

impl AudioClip {
    pub fn new(
        samples: Vec<f64>,
        sample_rate: u32,
        source_id: impl Into<String>,
    ) -> Result<Self, AudioIoError> {
        if sample_rate < 8000 {
            return Err(AudioIoError::InvalidSampleRate(sample_rate));
        }
        if samples.is_empty() {
            return Err(AudioIoError::EmptyAudio);
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(AudioIoError::NonFiniteSample);
        }
        Ok(AudioClip {
            samples,
            sample_rate,
            source_id: source_id.into(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Largest absolute sample value.
    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |acc, s| acc.max(s.abs()))
    }
}

/// Analysis window shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Rectangular,
    #[default]
    Hann,
    Hamming,
}

impl WindowKind {
    /// Window weights of length `len` (periodic form).
    pub fn weights(self, len: usize) -> Vec<f64> {
        let l = len as f64;
        (0..len)
            .map(|n| {
                let phase = 2.0 * std::f64::consts::PI * n as f64 / l;
                match self {
                    WindowKind::Rectangular => 1.0,
                    WindowKind::Hann => 0.5 - 0.5 * phase.cos(),
                    WindowKind::Hamming => 0.54 - 0.46 * phase.cos(),
                }
            })
            .collect()
    }
}

/// Frame/hop geometry plus window shape for all short-time analyses.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct FrameConfig {
    pub frame_ms: f64,
    pub hop_ms: f64,
    pub window: WindowKind,
}

impl Default for FrameConfig {
    fn default() -> Self {
        FrameConfig {
            frame_ms: 25.0,
            hop_ms: 10.0,
            window: WindowKind::Hann,
        }
    }
}

impl FrameConfig {
    pub fn frame_len(&self, sample_rate: u32) -> usize {
        ((self.frame_ms / 1000.0 * sample_rate as f64).round() as usize).max(2)
    }

    pub fn hop_len(&self, sample_rate: u32) -> usize {
        ((self.hop_ms / 1000.0 * sample_rate as f64).round() as usize).max(1)
    }

    pub fn validate(&self) -> Result<(), AudioIoError> {
        if !(self.hop_ms > 0.0 && self.hop_ms <= self.frame_ms) {
            return Err(AudioIoError::Manifest(format!(
                "frame config requires 0 < hop ({}) <= frame ({})",
                self.hop_ms, self.frame_ms
            )));
        }
        Ok(())
    }
}

/// One windowed analysis frame and where it starts in the clip.
#[derive(Debug, Clone)]
pub struct Frame {
    pub start_s: f64,
    pub samples: Vec<f64>,
}

/// Split a clip into windowed frames.
///
/// Frame count is `floor((N - L) / H) + 1`; start times sit on the hop grid.
pub fn frames(clip: &AudioClip, cfg: &FrameConfig) -> Result<Vec<Frame>, AudioIoError> {
    let l = cfg.frame_len(clip.sample_rate);
    let h = cfg.hop_len(clip.sample_rate);
    let n = clip.samples.len();
    if n < l {
        return Err(AudioIoError::ClipTooShort {
            samples: n,
            needed: l,
        });
    }
    let w = cfg.window.weights(l);
    let count = (n - l) / h + 1;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let start = i * h;
        let samples = clip.samples[start..start + l]
            .iter()
            .zip(&w)
            .map(|(s, w)| s * w)
            .collect();
        out.push(Frame {
            start_s: start as f64 / clip.sample_rate as f64,
            samples,
        });
    }
    Ok(out)
}

/// Scale a clip so its peak magnitude equals `target_peak`. All-zero input
/// passes through unchanged; the operation is idempotent at a fixed target.
pub fn peak_normalize(clip: &AudioClip, target_peak: f64) -> AudioClip {
    assert!(
        target_peak > 0.0 && target_peak <= 1.0,
        "target peak {target_peak} outside (0, 1]"
    );
    let peak = clip.peak();
    if peak == 0.0 {
        return clip.clone();
    }
    let g = target_peak / peak;
    AudioClip {
        samples: clip.samples.iter().map(|s| s * g).collect(),
        sample_rate: clip.sample_rate,
        source_id: clip.source_id.clone(),
    }
}

// ---------------------------------------------------------------------------
// WAV container
// ---------------------------------------------------------------------------

fn read_u32(bytes: &[u8], at: usize) -> Option<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
}

fn read_u16(bytes: &[u8], at: usize) -> Option<u16> {
    bytes.get(at..at + 2).map(|b| u16::from_le_bytes([b[0], b[1]]))
}

struct FmtChunk {
    format_tag: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

/// Decode a RIFF/WAVE file: PCM 16-bit or IEEE float 32-bit, 1 or 2
/// channels. Stereo is downmixed by channel mean; integer samples are
/// scaled by 1/32768; `source_id` is the file stem.
pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioClip, AudioIoError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    let source_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed".to_string());
    decode_wav(&bytes, source_id)
}

fn decode_wav(bytes: &[u8], source_id: String) -> Result<AudioClip, AudioIoError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(AudioIoError::MalformedContainer(
            "missing RIFF/WAVE magic".into(),
        ));
    }
    let mut fmt: Option<FmtChunk> = None;
    let mut data: Option<&[u8]> = None;
    let mut at = 12usize;
    while at + 8 <= bytes.len() {
        let id = &bytes[at..at + 4];
        let size = read_u32(bytes, at + 4)
            .ok_or_else(|| AudioIoError::MalformedContainer("chunk header truncated".into()))?
            as usize;
        let body_at = at + 8;
        if body_at + size > bytes.len() {
            return Err(AudioIoError::MalformedContainer(format!(
                "chunk '{}' claims {} bytes but only {} remain",
                String::from_utf8_lossy(id),
                size,
                bytes.len() - body_at
            )));
        }
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(AudioIoError::MalformedContainer("fmt chunk too small".into()));
                }
                fmt = Some(FmtChunk {
                    format_tag: read_u16(bytes, body_at).unwrap(),
                    channels: read_u16(bytes, body_at + 2).unwrap(),
                    sample_rate: read_u32(bytes, body_at + 4).unwrap(),
                    bits_per_sample: read_u16(bytes, body_at + 14).unwrap(),
                });
            }
            b"data" => data = Some(&bytes[body_at..body_at + size]),
            _ => {}
        }
        at = body_at + size + (size & 1); // chunks are word-aligned
    }
    let fmt = fmt.ok_or_else(|| AudioIoError::MalformedContainer("no fmt chunk".into()))?;
    let data = data.ok_or_else(|| AudioIoError::MalformedContainer("no data chunk".into()))?;
    if fmt.channels == 0 || fmt.channels > 2 {
        return Err(AudioIoError::UnsupportedEncoding(format!(
            "{} channels (only mono or stereo)",
            fmt.channels
        )));
    }
    let ch = fmt.channels as usize;
    let interleaved: Vec<f64> = match (fmt.format_tag, fmt.bits_per_sample) {
        (1, 16) => data
            .chunks_exact(2)
            .map(|b| i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0)
            .collect(),
        (3, 32) => data
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64)
            .collect(),
        (tag, bits) => {
            return Err(AudioIoError::UnsupportedEncoding(format!(
                "format tag {tag} at {bits} bits (PCM16 or float32 only)"
            )))
        }
    };
    if interleaved.is_empty() {
        return Err(AudioIoError::EmptyAudio);
    }
    let mut samples: Vec<f64> = interleaved
        .chunks(ch)
        .map(|frame| frame.iter().sum::<f64>() / frame.len() as f64)
        .collect();
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(AudioIoError::NonFiniteSample);
    }
    // Float files may exceed full scale; fold them back in.
    let peak = samples.iter().fold(0.0f64, |a, s| a.max(s.abs()));
    if peak > 1.0 {
        for s in &mut samples {
            *s /= peak;
        }
    }
    AudioClip::new(samples, fmt.sample_rate, source_id)
}

/// Write a clip as canonical 16-bit PCM WAV. Round-trips through
/// [`load_wav`] within one LSB.
pub fn write_wav_pcm16(path: impl AsRef<Path>, clip: &AudioClip) -> Result<(), AudioIoError> {
    let data_len = clip.samples.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&clip.sample_rate.to_le_bytes());
    out.extend_from_slice(&(clip.sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for s in &clip.samples {
        let v = (s.clamp(-1.0, 1.0) * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        out.extend_from_slice(&v.to_le_bytes());
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(&out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Spectral noise gate
// ---------------------------------------------------------------------------

/// Spectral-gating noise reduction, off by default in the pipeline.
///
/// The noise magnitude profile is the per-bin mean over the quietest 10% of
/// frames; each frame's magnitude is reduced by the profile with a floor at
/// 0.1x the profile, then the signal is rebuilt by overlap-add.
pub fn spectral_gate(clip: &AudioClip) -> AudioClip {
    let l = ((0.025 * clip.sample_rate as f64).round() as usize).next_power_of_two();
    let h = l / 2;
    let n = clip.samples.len();
    if n < l {
        return clip.clone();
    }
    let window = WindowKind::Hann.weights(l);
    let count = (n - l) / h + 1;

    let mut spectra: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(count);
    let mut energies: Vec<(usize, f64)> = Vec::with_capacity(count);
    for i in 0..count {
        let start = i * h;
        let mut re: Vec<f64> = clip.samples[start..start + l]
            .iter()
            .zip(&window)
            .map(|(s, w)| s * w)
            .collect();
        let mut im = vec![0.0; l];
        crate::dsp_core::fft_forward(&mut re, &mut im);
        let e: f64 = re.iter().zip(&im).map(|(a, b)| a * a + b * b).sum();
        energies.push((i, e));
        spectra.push((re, im));
    }
    energies.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    let n_quiet = (count as f64 * 0.1).ceil() as usize;
    let mut profile = vec![0.0f64; l];
    for &(idx, _) in energies.iter().take(n_quiet) {
        let (re, im) = &spectra[idx];
        for k in 0..l {
            profile[k] += (re[k] * re[k] + im[k] * im[k]).sqrt();
        }
    }
    for p in &mut profile {
        *p /= n_quiet as f64;
    }

    let mut acc = vec![0.0f64; n];
    let mut norm = vec![0.0f64; n];
    for (i, (mut re, mut im)) in spectra.into_iter().enumerate() {
        for k in 0..l {
            let mag = (re[k] * re[k] + im[k] * im[k]).sqrt();
            if mag > 0.0 {
                let gated = (mag - profile[k]).max(0.1 * profile[k]);
                let g = gated / mag;
                re[k] *= g;
                im[k] *= g;
            }
        }
        crate::dsp_core::fft_inverse(&mut re, &mut im);
        let start = i * h;
        for (j, w) in window.iter().enumerate() {
            acc[start + j] += re[j];
            norm[start + j] += w;
        }
    }
    let samples: Vec<f64> = acc
        .iter()
        .zip(&norm)
        .zip(clip.samples.iter())
        .map(|((a, w), orig)| {
            if *w > 1e-8 {
                (a / w).clamp(-1.0, 1.0)
            } else {
                *orig
            }
        })
        .collect();
    AudioClip {
        samples,
        sample_rate: clip.sample_rate,
        source_id: clip.source_id.clone(),
    }
}

// ---------------------------------------------------------------------------
// Corpus manifest
// ---------------------------------------------------------------------------

/// One corpus recording: a WAV path, an optional class label, and the
/// animal identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub wav_path: String,
    pub label: Option<CallLabel>,
    pub cow_id: String,
}

/// Labeled corpus index, stored as CSV with header `path,label,cow_id`.
#[derive(Debug, Clone, Default)]
pub struct CorpusManifest {
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self, AudioIoError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(path.as_ref())
            .map_err(|e| AudioIoError::Manifest(e.to_string()))?;
        let headers = reader
            .headers()
            .map_err(|e| AudioIoError::Manifest(e.to_string()))?;
        if headers.iter().collect::<Vec<_>>() != ["path", "label", "cow_id"] {
            return Err(AudioIoError::Manifest(format!(
                "expected header path,label,cow_id, found {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut entries = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for record in reader.records() {
            let record = record.map_err(|e| AudioIoError::Manifest(e.to_string()))?;
            let path = record.get(0).unwrap_or("").to_string();
            let label_text = record.get(1).unwrap_or("");
            let cow_id = record.get(2).unwrap_or("").to_string();
            if path.is_empty() {
                return Err(AudioIoError::Manifest("empty path field".into()));
            }
            if !seen.insert(path.clone()) {
                return Err(AudioIoError::Manifest(format!("duplicate path {path}")));
            }
            let label = if label_text.is_empty() {
                None
            } else {
                Some(CallLabel::parse(label_text).ok_or_else(|| {
                    AudioIoError::Manifest(format!("unknown label '{label_text}' for {path}"))
                })?)
            };
            entries.push(ManifestEntry {
                wav_path: path,
                label,
                cow_id,
            });
        }
        Ok(CorpusManifest { entries })
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<(), AudioIoError> {
        let mut out = String::from("path,label,cow_id\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{}\n",
                e.wav_path,
                e.label.map(|l| l.code()).unwrap_or(""),
                e.cow_id
            ));
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}
