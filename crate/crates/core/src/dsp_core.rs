//! Deterministic numeric primitives shared by every feature extractor:
//! DFT magnitude spectra, autocorrelation, linear-prediction coefficients,
//! mel filterbank, and the DCT-II.
//!
//! Everything here is a pure function: identical inputs give bit-identical
//! outputs, and nothing touches global state.

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DspError {
    #[error("fft size {0} is not a power of two")]
    NonPowerOfTwoSize(usize),
    #[error("fft size {fft_size} is shorter than the frame ({frame_len} samples)")]
    FftShorterThanFrame { fft_size: usize, frame_len: usize },
    #[error("frame has zero energy")]
    ZeroEnergyFrame,
    #[error("{n_filters} filters collide at fft size {fft_size} (bin width {bin_hz} Hz)")]
    TooManyFilters {
        n_filters: usize,
        fft_size: usize,
        bin_hz: f64,
    },
}

/// One-sided magnitude spectrum of a real frame.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// `fft_size / 2 + 1` non-negative magnitudes (bins 0..=Nyquist).
    pub magnitudes: Vec<f64>,
    /// Frequency resolution: `sample_rate / fft_size`.
    pub bin_hz: f64,
}

impl Spectrum {
    /// Center frequency of bin `k`.
    pub fn freq_of_bin(&self, k: usize) -> f64 {
        k as f64 * self.bin_hz
    }

    /// One-sided power per bin with the symmetry weight folded in, so that
    /// `power.sum() / fft_size == sum(x^2)` (Parseval over the padded frame).
    pub fn folded_power(&self) -> Vec<f64> {
        let n = self.magnitudes.len();
        self.magnitudes
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let w = if k == 0 || k == n - 1 { 1.0 } else { 2.0 };
                w * m * m
            })
            .collect()
    }
}

/// Linear-prediction model from the Yule-Walker equations.
///
/// Coefficients follow the predictor convention `x[n] ~ sum_k a_k x[n-k]`,
/// so an AR(2) process `x[n] = 1.3 x[n-1] - 0.6 x[n-2] + e[n]` is recovered
/// as `coefficients = [1.3, -0.6]`.
#[derive(Debug, Clone)]
pub struct LpcModel {
    pub coefficients: Vec<f64>,
    /// Square root of the final prediction-error power.
    pub gain: f64,
    pub order: usize,
    /// True when a reflection coefficient reached magnitude 1 and the
    /// recursion stopped early; the model is the best lower-order fit.
    pub truncated: bool,
}

impl LpcModel {
    /// Roots of the prediction polynomial `z^p - a_1 z^(p-1) - ... - a_p`,
    /// found as eigenvalues of its companion matrix. For valid
    /// autocorrelation input these lie strictly inside the unit circle.
    pub fn poles(&self) -> Vec<Complex<f64>> {
        let p = self.coefficients.len();
        if p == 0 {
            return Vec::new();
        }
        let mut m = DMatrix::<f64>::zeros(p, p);
        for (j, &a) in self.coefficients.iter().enumerate() {
            m[(0, j)] = a;
        }
        for i in 1..p {
            m[(i, i - 1)] = 1.0;
        }
        m.complex_eigenvalues().iter().copied().collect()
    }
}

fn fft_in_place(re: &mut [f64], im: &mut [f64]) {
    let n = re.len();
    debug_assert!(n.is_power_of_two());
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * std::f64::consts::PI / len as f64;
        let (w_re, w_im) = (ang.cos(), ang.sin());
        let mut i = 0;
        while i < n {
            let (mut cur_re, mut cur_im) = (1.0f64, 0.0f64);
            for k in 0..len / 2 {
                let (ur, ui) = (re[i + k], im[i + k]);
                let (vr, vi) = (
                    re[i + k + len / 2] * cur_re - im[i + k + len / 2] * cur_im,
                    re[i + k + len / 2] * cur_im + im[i + k + len / 2] * cur_re,
                );
                re[i + k] = ur + vr;
                im[i + k] = ui + vi;
                re[i + k + len / 2] = ur - vr;
                im[i + k + len / 2] = ui - vi;
                let next_re = cur_re * w_re - cur_im * w_im;
                cur_im = cur_re * w_im + cur_im * w_re;
                cur_re = next_re;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// In-place complex FFT; length must be a power of two.
pub(crate) fn fft_forward(re: &mut [f64], im: &mut [f64]) {
    fft_in_place(re, im);
}

/// In-place inverse complex FFT (conjugate trick, scaled by 1/N).
pub(crate) fn fft_inverse(re: &mut [f64], im: &mut [f64]) {
    for v in im.iter_mut() {
        *v = -*v;
    }
    fft_in_place(re, im);
    let n = re.len() as f64;
    for v in re.iter_mut() {
        *v /= n;
    }
    for v in im.iter_mut() {
        *v = -*v / n;
    }
}

/// Magnitude spectrum of a real frame zero-padded to `fft_size`.
///
/// Returns bins `0..=fft_size/2`. Parseval holds against the padded frame:
/// the folded one-sided power divided by `fft_size` equals the frame energy.
pub fn fft_magnitude(frame: &[f64], fft_size: usize) -> Result<Spectrum, DspError> {
    if !fft_size.is_power_of_two() || fft_size == 0 {
        return Err(DspError::NonPowerOfTwoSize(fft_size));
    }
    if fft_size < frame.len() {
        return Err(DspError::FftShorterThanFrame {
            fft_size,
            frame_len: frame.len(),
        });
    }
    let mut re = vec![0.0; fft_size];
    let mut im = vec![0.0; fft_size];
    re[..frame.len()].copy_from_slice(frame);
    fft_in_place(&mut re, &mut im);
    let magnitudes = (0..=fft_size / 2)
        .map(|k| (re[k] * re[k] + im[k] * im[k]).sqrt())
        .collect();
    Ok(Spectrum {
        magnitudes,
        // Normalized bin width (cycles/sample); spectrum_of resolves to Hz.
        bin_hz: 1.0 / fft_size as f64,
    })
}

/// [`fft_magnitude`] with the bin width resolved against a sample rate.
pub fn spectrum_of(frame: &[f64], fft_size: usize, sample_rate: u32) -> Result<Spectrum, DspError> {
    let mut s = fft_magnitude(frame, fft_size)?;
    s.bin_hz = sample_rate as f64 / fft_size as f64;
    Ok(s)
}

/// Smallest power of two at least `2 * frame_len`; zero-padding halves the
/// bin width, which sharpens peak and centroid estimates cheaply.
pub fn fft_size_for(frame_len: usize) -> usize {
    (2 * frame_len.max(1)).next_power_of_two()
}

/// Biased raw autocorrelation `r[tau] = (1/L) * sum_n x[n] x[n+tau]` for
/// `tau = 0..=max_lag`. Biased division by `L` keeps the sequence positive
/// semi-definite, which Levinson-Durbin requires.
pub fn autocorr_raw(frame: &[f64], max_lag: usize) -> Vec<f64> {
    let l = frame.len();
    let max_lag = max_lag.min(l.saturating_sub(1));
    let mut r = Vec::with_capacity(max_lag + 1);
    for tau in 0..=max_lag {
        let mut acc = 0.0;
        for n in 0..l - tau {
            acc += frame[n] * frame[n + tau];
        }
        r.push(acc / l as f64);
    }
    r
}

/// Normalized biased autocorrelation over all lags `0..L-1`:
/// `r[0] = 1` and `|r[tau]| <= 1`.
pub fn autocorrelate(frame: &[f64]) -> Result<Vec<f64>, DspError> {
    if frame.is_empty() {
        return Err(DspError::ZeroEnergyFrame);
    }
    let raw = autocorr_raw(frame, frame.len() - 1);
    let r0 = raw[0];
    if !(r0 > 0.0) {
        return Err(DspError::ZeroEnergyFrame);
    }
    Ok(raw.into_iter().map(|v| v / r0).collect())
}

/// Linear prediction by Levinson-Durbin on the biased autocorrelation.
///
/// `gain^2` is the final prediction-error power; with `order = 0` that is
/// the mean signal power. If a reflection coefficient reaches magnitude 1
/// the recursion stops and the best lower-order model is returned with
/// `truncated = true`.
pub fn lpc(frame: &[f64], order: usize) -> LpcModel {
    assert!(
        order < frame.len(),
        "lpc order {} must be below frame length {}",
        order,
        frame.len()
    );
    let r = autocorr_raw(frame, order);
    levinson_durbin(&r, order)
}

/// Levinson-Durbin recursion on autocorrelation values `r[0..=order]`.
pub fn levinson_durbin(r: &[f64], order: usize) -> LpcModel {
    assert!(r.len() > order);
    let mut a = vec![0.0f64; order];
    let mut err = r[0];
    if err <= 0.0 {
        return LpcModel {
            coefficients: Vec::new(),
            gain: 0.0,
            order: 0,
            truncated: order > 0,
        };
    }
    for i in 1..=order {
        let mut acc = r[i];
        for j in 1..i {
            acc -= a[j - 1] * r[i - j];
        }
        let k = acc / err;
        if k.abs() >= 1.0 {
            a.truncate(i - 1);
            return LpcModel {
                coefficients: a,
                gain: err.max(0.0).sqrt(),
                order: i - 1,
                truncated: true,
            };
        }
        a[i - 1] = k;
        let prev = a[..i - 1].to_vec();
        for j in 1..i {
            a[j - 1] = prev[j - 1] - k * prev[i - j - 1];
        }
        err *= 1.0 - k * k;
    }
    a.truncate(order);
    LpcModel {
        coefficients: a,
        gain: err.max(0.0).sqrt(),
        order,
        truncated: false,
    }
}

/// Mel scale: `mel(f) = 2595 log10(1 + f / 700)`.
pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

/// Inverse of [`hz_to_mel`].
pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular mel filterbank over FFT bins `0..=fft_size/2`.
///
/// Filters are equally spaced on the mel scale between `f_lo` and `f_hi`,
/// peak at 1 at their center, and overlap their neighbours by 50%.
pub fn mel_filterbank(
    n_filters: usize,
    fft_size: usize,
    sample_rate: u32,
    f_lo: f64,
    f_hi: f64,
) -> Result<Vec<Vec<f64>>, DspError> {
    assert!(n_filters > 0);
    assert!(
        0.0 <= f_lo && f_lo < f_hi && f_hi <= sample_rate as f64 / 2.0,
        "band [{f_lo}, {f_hi}] outside [0, Nyquist]"
    );
    if !fft_size.is_power_of_two() {
        return Err(DspError::NonPowerOfTwoSize(fft_size));
    }
    let bin_hz = sample_rate as f64 / fft_size as f64;
    let n_bins = fft_size / 2 + 1;
    let mel_lo = hz_to_mel(f_lo);
    let mel_hi = hz_to_mel(f_hi);
    let edges: Vec<f64> = (0..n_filters + 2)
        .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (n_filters + 1) as f64))
        .collect();
    // Collapsed centers mean some filter would cover no bin.
    for w in edges.windows(2) {
        if (w[1] / bin_hz).floor() <= (w[0] / bin_hz).floor() && w[1] < f_hi {
            return Err(DspError::TooManyFilters {
                n_filters,
                fft_size,
                bin_hz,
            });
        }
    }
    let mut bank = Vec::with_capacity(n_filters);
    for m in 1..=n_filters {
        let (left, center, right) = (edges[m - 1], edges[m], edges[m + 1]);
        let mut row = vec![0.0; n_bins];
        for (k, slot) in row.iter_mut().enumerate() {
            let f = k as f64 * bin_hz;
            if f > left && f < right {
                *slot = if f <= center {
                    (f - left) / (center - left)
                } else {
                    (right - f) / (right - center)
                };
            }
        }
        bank.push(row);
    }
    Ok(bank)
}

/// First `n_out` coefficients of the orthonormal DCT-II.
///
/// A constant vector `c` of length `M` maps to `c * sqrt(M)` at index 0 and
/// zeros elsewhere; the full transform conserves energy.
pub fn dct_ii(input: &[f64], n_out: usize) -> Vec<f64> {
    let m = input.len();
    assert!(n_out <= m, "requested {n_out} coefficients from {m} inputs");
    let norm0 = (1.0 / m as f64).sqrt();
    let norm = (2.0 / m as f64).sqrt();
    (0..n_out)
        .map(|k| {
            let scale = if k == 0 { norm0 } else { norm };
            let acc: f64 = input
                .iter()
                .enumerate()
                .map(|(n, &x)| {
                    x * (std::f64::consts::PI * (2.0 * n as f64 + 1.0) * k as f64
                        / (2.0 * m as f64))
                        .cos()
                })
                .sum();
            scale * acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Naive O(N^2) DFT magnitude, the independent oracle for the FFT path.
    fn naive_dft_magnitude(frame: &[f64], n: usize) -> Vec<f64> {
        (0..=n / 2)
            .map(|k| {
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for (i, &x) in frame.iter().enumerate() {
                    let ang = -2.0 * std::f64::consts::PI * k as f64 * i as f64 / n as f64;
                    re += x * ang.cos();
                    im += x * ang.sin();
                }
                (re * re + im * im).sqrt()
            })
            .collect()
    }

    #[test]
    fn fft_unit_impulse_is_flat() {
        let mut frame = vec![0.0; 64];
        frame[0] = 1.0;
        let s = fft_magnitude(&frame, 64).unwrap();
        assert_eq!(s.magnitudes.len(), 33);
        for m in &s.magnitudes {
            assert!((m - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fft_cosine_at_bin_k() {
        let n = 256;
        let k = 17;
        let frame: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * k as f64 * i as f64 / n as f64).cos())
            .collect();
        let s = fft_magnitude(&frame, n).unwrap();
        assert!((s.magnitudes[k] - n as f64 / 2.0).abs() < 1e-9);
        for (j, m) in s.magnitudes.iter().enumerate() {
            if j != k {
                assert!(*m < 1e-9, "leakage at bin {j}: {m}");
            }
        }
    }

    #[test]
    fn fft_matches_naive_dft_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let frame: Vec<f64> = (0..300).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = fft_size_for(frame.len());
            let s = fft_magnitude(&frame, n).unwrap();
            let oracle = naive_dft_magnitude(&frame, n);
            for (a, b) in s.magnitudes.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "fft {a} vs naive {b}");
            }
            // Parseval: folded one-sided power / N equals frame energy.
            let spectral: f64 = s.folded_power().iter().sum::<f64>() / n as f64;
            let temporal: f64 = frame.iter().map(|x| x * x).sum();
            assert!((spectral - temporal).abs() / temporal < 1e-9);
        }
    }

    #[test]
    fn fft_rejects_non_power_of_two() {
        assert_eq!(
            fft_magnitude(&[1.0; 10], 100).unwrap_err(),
            DspError::NonPowerOfTwoSize(100)
        );
        assert!(matches!(
            fft_magnitude(&[1.0; 100], 64).unwrap_err(),
            DspError::FftShorterThanFrame { .. }
        ));
    }

    #[test]
    fn fft_is_pure() {
        let frame: Vec<f64> = (0..128).map(|i| (i as f64 * 0.37).sin()).collect();
        let a = fft_magnitude(&frame, 256).unwrap();
        let b = fft_magnitude(&frame, 256).unwrap();
        assert_eq!(a.magnitudes, b.magnitudes);
    }

    #[test]
    fn autocorr_constant_frame_closed_form() {
        let l = 64;
        let frame = vec![0.7; l];
        let r = autocorrelate(&frame).unwrap();
        for (tau, v) in r.iter().enumerate() {
            let expected = 1.0 - tau as f64 / l as f64;
            assert!((v - expected).abs() < 1e-12, "lag {tau}: {v} vs {expected}");
        }
    }

    #[test]
    fn autocorr_sine_peak_at_period() {
        let sr = 16000.0;
        let period = 100usize; // 160 Hz
        let frame: Vec<f64> = (0..800)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 / period as f64).sin())
            .collect();
        let r = autocorrelate(&frame).unwrap();
        // Exhaustive scan over lags >= period/2.
        let argmax = (period / 2..r.len())
            .max_by(|&a, &b| r[a].partial_cmp(&r[b]).unwrap())
            .unwrap();
        assert!(
            (argmax as i64 - period as i64).abs() <= 1,
            "peak at {argmax} not at {period} (sr {sr})"
        );
    }

    #[test]
    fn autocorr_white_noise_decorrelates() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let frame: Vec<f64> = (0..4096).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
            let r = autocorrelate(&frame).unwrap();
            for (tau, v) in r.iter().enumerate().skip(1) {
                assert!(v.abs() < 0.1, "seed {seed} lag {tau}: {v}");
            }
        }
    }

    #[test]
    fn autocorr_zero_energy_is_error() {
        assert_eq!(
            autocorrelate(&vec![0.0; 32]).unwrap_err(),
            DspError::ZeroEnergyFrame
        );
        assert_eq!(autocorrelate(&[]).unwrap_err(), DspError::ZeroEnergyFrame);
    }

    #[test]
    fn lpc_recovers_ar2_process() {
        // x[n] = 1.3 x[n-1] - 0.6 x[n-2] + e[n]
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut x = vec![0.0f64; 8192];
        for n in 2..x.len() {
            let e: f64 = rng.gen_range(-1.0..1.0);
            x[n] = 1.3 * x[n - 1] - 0.6 * x[n - 2] + e;
        }
        let model = lpc(&x[1000..], 2);
        assert!(!model.truncated);
        assert!(
            (model.coefficients[0] - 1.3).abs() < 0.065,
            "a1 = {}",
            model.coefficients[0]
        );
        assert!(
            (model.coefficients[1] + 0.6).abs() < 0.03,
            "a2 = {}",
            model.coefficients[1]
        );
    }

    #[test]
    fn lpc_order_zero_gain_is_mean_power() {
        let frame: Vec<f64> = (0..512).map(|i| (i as f64 * 0.21).sin()).collect();
        let model = lpc(&frame, 0);
        assert!(model.coefficients.is_empty());
        let mean_power = frame.iter().map(|x| x * x).sum::<f64>() / frame.len() as f64;
        assert!((model.gain * model.gain - mean_power).abs() < 1e-12);
    }

    #[test]
    fn lpc_impulse_frame_poles_inside_unit_circle() {
        let mut frame = vec![0.0; 64];
        frame[0] = 1.0;
        let model = lpc(&frame, 2);
        for p in model.poles() {
            assert!(p.norm() < 1.0 + 1e-9, "pole {p} outside unit circle");
        }
    }

    #[test]
    fn lpc_random_frames_are_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let frame: Vec<f64> = (0..400).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
            let model = lpc(&frame, 12);
            for p in model.poles() {
                assert!(p.norm() < 1.0 + 1e-9, "pole {p} outside unit circle");
            }
        }
    }

    #[test]
    fn lpc_error_non_increasing_in_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let frame: Vec<f64> = (0..1024)
            .map(|i| (i as f64 * 0.05).sin() + 0.3 * rng.gen_range(-1.0f64..1.0))
            .collect();
        let mut prev = f64::INFINITY;
        for order in 0..16 {
            let g = lpc(&frame, order).gain;
            assert!(g <= prev + 1e-12, "gain rose at order {order}");
            prev = g;
        }
    }

    #[test]
    fn mel_formula_spot_value() {
        // 2595 * log10(2)
        assert!((hz_to_mel(700.0) - 781.17).abs() < 0.01);
        assert!((mel_to_hz(hz_to_mel(1234.5)) - 1234.5).abs() < 1e-9);
    }

    #[test]
    fn mel_filters_peak_once_and_cover_band() {
        let bank = mel_filterbank(26, 1024, 16000, 0.0, 8000.0).unwrap();
        assert_eq!(bank.len(), 26);
        let mut prev_peak_bin = 0usize;
        for (m, row) in bank.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            assert!(sum > 0.0, "filter {m} is empty");
            assert!(row.iter().all(|&w| w >= 0.0));
            let peak = row
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap();
            let n_at_peak = row.iter().filter(|&&w| w == *peak.1).count();
            assert_eq!(n_at_peak, 1, "filter {m} peaks at {n_at_peak} bins");
            assert!(peak.0 > prev_peak_bin, "centers not increasing at {m}");
            prev_peak_bin = peak.0;
        }
        // Column sums <= 2 and no all-zero interior bin inside the band.
        let n_bins = bank[0].len();
        let first_center = bank[0]
            .iter()
            .position(|&w| w == 1.0 || w > 0.999)
            .unwrap_or(1);
        let last_center = prev_peak_bin;
        for k in 0..n_bins {
            let col: f64 = bank.iter().map(|row| row[k]).sum();
            assert!(col <= 2.0 + 1e-12);
            if k > first_center && k < last_center {
                assert!(col > 0.0, "uncovered interior bin {k}");
            }
        }
    }

    #[test]
    fn mel_too_many_filters_detected() {
        let err = mel_filterbank(200, 256, 16000, 0.0, 8000.0).unwrap_err();
        assert!(matches!(err, DspError::TooManyFilters { .. }));
    }

    #[test]
    fn dct_constant_vector() {
        let m = 26;
        let c = 0.8;
        let out = dct_ii(&vec![c; m], m);
        assert!((out[0] - c * (m as f64).sqrt()).abs() < 1e-12);
        for v in &out[1..] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn dct_of_basis_vector_is_unit() {
        let m = 16;
        let k = 5;
        // Basis vector k of the orthonormal DCT-II.
        let basis: Vec<f64> = (0..m)
            .map(|n| {
                (2.0 / m as f64).sqrt()
                    * (std::f64::consts::PI * (2.0 * n as f64 + 1.0) * k as f64 / (2.0 * m as f64))
                        .cos()
            })
            .collect();
        let out = dct_ii(&basis, m);
        for (i, v) in out.iter().enumerate() {
            let expected = if i == k { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-9, "index {i}: {v}");
        }
    }

    #[test]
    fn dct_conserves_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let x: Vec<f64> = (0..26).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let y = dct_ii(&x, x.len());
            let ex: f64 = x.iter().map(|v| v * v).sum();
            let ey: f64 = y.iter().map(|v| v * v).sum();
            assert!((ex - ey).abs() / ex < 1e-9);
        }
    }

    #[test]
    fn dct_truncation_matches_prefix() {
        let x: Vec<f64> = (0..20).map(|i| (i as f64).cos()).collect();
        let full = dct_ii(&x, 20);
        let short = dct_ii(&x, 13);
        assert_eq!(&full[..13], &short[..]);
    }
}
