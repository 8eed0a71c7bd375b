use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numerics::ComplexSample;
use crate::SPEED_OF_LIGHT;

/// Default peak threshold relative to the global maximum.
pub const DEFAULT_THRESHOLD: f64 = 0.3;
/// Default minimum spacing between reported peaks, in samples.
pub const DEFAULT_MIN_SEPARATION: usize = 16;

/// `|sum_k captured[n+k] * conj(reference[k])|` for every lag `n` of
/// `captured`; samples past the end count as zero.
pub fn matched_filter(captured: &[Complex64], reference: &[Complex64]) -> Vec<f64> {
    (0..captured.len())
        .into_par_iter()
        .map(|n| {
            let tail = &captured[n..];
            tail.iter().zip(reference).fold(Complex64::new(0.0, 0.0), |acc, (x, r)| acc + x * r.conj()).norm()
        })
        .collect()
}

/// A local maximum of a correlation series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub lag: usize,
    /// Lag refined by a parabola through the peak and its neighbours.
    pub position: f64,
    /// Parabola vertex value.
    pub amplitude: f64,
    /// `amplitude` over the series' global maximum.
    pub relative: f64,
}

fn refine(corr: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= corr.len() {
        return (i as f64, corr[i]);
    }
    let (a, b, c) = (corr[i - 1], corr[i], corr[i + 1]);
    let den = a - 2.0 * b + c;
    if den >= 0.0 {
        return (i as f64, b);
    }
    let p = 0.5 * (a - c) / den;
    (i as f64 + p, b - 0.25 * (a - c) * p)
}

/// Local maxima at or above `threshold_frac` of the global maximum, kept
/// greedily by descending value with at least `min_separation` samples
/// between them, returned in lag order. On a plateau the leftmost sample
/// is the peak; equal values are preferred at smaller lags.
pub fn detect_peaks(corr: &[f64], threshold_frac: f64, min_separation: usize) -> Vec<Peak> {
    let max = corr.iter().copied().fold(0.0, f64::max);
    if corr.is_empty() || max <= 0.0 {
        return Vec::new();
    }
    let floor = threshold_frac * max;
    let mut candidates: Vec<usize> = (0..corr.len())
        .filter(|&i| {
            let v = corr[i];
            v >= floor && (i == 0 || corr[i - 1] < v) && (i + 1 == corr.len() || corr[i + 1] <= v)
        })
        .collect();
    candidates.sort_by(|&a, &b| corr[b].total_cmp(&corr[a]).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for i in candidates {
        if kept.iter().all(|&k| k.abs_diff(i) >= min_separation) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter()
        .map(|lag| {
            let (position, amplitude) = refine(corr, lag);
            Peak { lag, position, amplitude, relative: amplitude / max }
        })
        .collect()
}

/// Width of the main lobe around `lag` where the series stays above
/// `1/sqrt(2)` of its value at `lag`, with linear interpolation of the
/// crossings.
pub fn mainlobe_width(corr: &[f64], lag: usize) -> f64 {
    let level = corr[lag] / std::f64::consts::SQRT_2;
    let mut right = (corr.len() - 1) as f64;
    for i in lag..corr.len() - 1 {
        if corr[i + 1] < level {
            right = i as f64 + (corr[i] - level) / (corr[i] - corr[i + 1]);
            break;
        }
    }
    let mut left = 0.0;
    for i in (1..=lag).rev() {
        if corr[i - 1] < level {
            left = i as f64 - (corr[i] - level) / (corr[i] - corr[i - 1]);
            break;
        }
    }
    right - left
}

/// Whether a delay spans the path once or there and back.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RangeMode {
    OneWay,
    RoundTrip,
}

impl RangeMode {
    pub fn delay_to_range(self, delay_samples: f64, sample_rate: f64) -> f64 {
        let d = delay_samples * SPEED_OF_LIGHT / sample_rate;
        match self {
            RangeMode::OneWay => d,
            RangeMode::RoundTrip => d / 2.0,
        }
    }

    pub fn range_to_delay(self, range_m: f64, sample_rate: f64) -> f64 {
        let d = range_m * sample_rate / SPEED_OF_LIGHT;
        match self {
            RangeMode::OneWay => d,
            RangeMode::RoundTrip => 2.0 * d,
        }
    }
}

/// How matched-filter lags map to ranges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeOptions {
    pub sample_rate: f64,
    pub mode: RangeMode,
    /// Pulse repetition interval; pulses start at multiples of it.
    pub pri: u64,
    /// Optional range window `[min, max)` in meters. With it, a lag is
    /// unwrapped to the unique delay inside the window (which must be
    /// shorter than one PRI); without it, the delay is the lag modulo the
    /// PRI.
    pub gate: Option<(f64, f64)>,
}

/// A detected echo expressed as a range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangePeak {
    pub lag: usize,
    pub sample_delay: f64,
    pub amplitude: f64,
    pub relative: f64,
    pub est_range_m: f64,
}

/// Converts peaks to ranges; peaks outside the gate are dropped.
pub fn peak_ranges(peaks: &[Peak], opts: &RangeOptions) -> Vec<RangePeak> {
    let pri = opts.pri as f64;
    peaks
        .iter()
        .filter_map(|p| {
            let delay = match opts.gate {
                Some((lo, hi)) => {
                    let lo_d = opts.mode.range_to_delay(lo, opts.sample_rate);
                    let hi_d = opts.mode.range_to_delay(hi, opts.sample_rate);
                    let d = lo_d + (p.position - lo_d).rem_euclid(pri);
                    (d < hi_d).then_some(d)?
                }
                None => p.position.rem_euclid(pri),
            };
            Some(RangePeak {
                lag: p.lag,
                sample_delay: delay,
                amplitude: p.amplitude,
                relative: p.relative,
                est_range_m: opts.mode.delay_to_range(delay, opts.sample_rate),
            })
        })
        .collect()
}

/// Range accuracy of a set of peaks against expected ranges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeReport {
    pub peaks: Vec<RangePeak>,
    pub expected: Vec<f64>,
    /// Index into `peaks` matched to each expectation (`None` = miss).
    pub matched: Vec<Option<usize>>,
    /// Percent error of each expectation's peak (`None` = miss).
    pub per_peak_error_pct: Vec<Option<f64>>,
    /// Mean squared range error over matched expectations, in m^2.
    pub mse: f64,
    pub misses: usize,
}

/// Matches peaks to expectations (closest pairs first, each peak used at
/// most once) and scores them.
pub fn range_metrics(peaks: &[RangePeak], expected: &[f64]) -> RangeReport {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (e, &want) in expected.iter().enumerate() {
        for (p, peak) in peaks.iter().enumerate() {
            pairs.push(((peak.est_range_m - want).abs(), e, p));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut matched = vec![None; expected.len()];
    let mut used = vec![false; peaks.len()];
    for (_, e, p) in pairs {
        if matched[e].is_none() && !used[p] {
            matched[e] = Some(p);
            used[p] = true;
        }
    }
    let mut sq = 0.0;
    let mut n = 0usize;
    let per_peak_error_pct = matched
        .iter()
        .zip(expected)
        .map(|(m, &want)| {
            m.map(|p| {
                let err = peaks[p].est_range_m - want;
                sq += err * err;
                n += 1;
                100.0 * err.abs() / want
            })
        })
        .collect();
    RangeReport {
        peaks: peaks.to_vec(),
        expected: expected.to_vec(),
        matched,
        per_peak_error_pct,
        mse: if n == 0 { 0.0 } else { sq / n as f64 },
        misses: expected.len() - n,
    }
}

/// Agreement between a DUT stream and the reference model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenComparison {
    /// `||dut - golden|| / ||golden||` over the compared samples.
    pub rms_rel_error: f64,
    pub max_abs_error: f64,
    pub samples: usize,
}

/// Compares the streams after discarding `warmup` leading samples; the
/// longer stream is truncated to the shorter.
pub fn compare_to_golden(dut: &[ComplexSample], golden: &[Complex64], warmup: usize) -> GoldenComparison {
    let n = dut.len().min(golden.len());
    let (mut err, mut norm, mut max) = (0.0, 0.0, 0.0f64);
    for t in warmup.min(n)..n {
        let e = (dut[t].to_c64() - golden[t]).norm();
        err += e * e;
        norm += golden[t].norm_sqr();
        max = max.max(e);
    }
    let rms_rel_error = if norm > 0.0 { (err / norm).sqrt() } else if err > 0.0 { f64::INFINITY } else { 0.0 };
    GoldenComparison { rms_rel_error, max_abs_error: max, samples: n.saturating_sub(warmup) }
}
