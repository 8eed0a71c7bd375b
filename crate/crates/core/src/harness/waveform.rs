use num_complex::Complex64;
use std::f64::consts::PI;

use crate::datapath::{DrfgConfig, SignalSource};
use crate::numerics::ComplexSample;
use crate::scenario::Waveform;
use super::HarnessError;

/// Default reference chirp length.
pub const CHIRP_LEN: usize = 512;

/// Unit-amplitude linear chirp sweeping `-fs/8 .. +fs/8` over `len`
/// samples, quantized to binary16.
pub fn reference_chirp(len: usize) -> Vec<ComplexSample> {
    let (f0, f1) = (-0.125, 0.125);
    let rate = (f1 - f0) / len as f64;
    (0..len)
        .map(|n| {
            let n = n as f64;
            let cycles = f0 * n + 0.5 * rate * n * n;
            ComplexSample::from_c64(Complex64::from_polar(1.0, 2.0 * PI * cycles.rem_euclid(1.0)))
        })
        .collect()
}

pub fn widen(samples: &[ComplexSample]) -> Vec<Complex64> {
    samples.iter().map(|s| s.to_c64()).collect()
}

/// Chirp length carried by a waveform (the DRFG carries one per period).
pub fn pulse_len(waveform: &Waveform) -> usize {
    match waveform {
        Waveform::PulseTrain { chirp_len, .. } => *chirp_len,
        Waveform::Drfg { period, duty_cycle } => (duty_cycle * *period as f64).round() as usize,
    }
}

/// Pulse repetition interval in samples.
pub fn pulse_interval(waveform: &Waveform) -> u64 {
    match waveform {
        Waveform::PulseTrain { pri, .. } => *pri,
        Waveform::Drfg { period, .. } => *period as u64,
    }
}

/// Transmit source programmed for `waveform`.
pub fn signal_source(waveform: &Waveform) -> Result<SignalSource, HarnessError> {
    let chirp = reference_chirp(pulse_len(waveform));
    match waveform {
        Waveform::PulseTrain { pri, .. } => Ok(SignalSource::PulseTrain { pattern: chirp, pri: *pri }),
        Waveform::Drfg { period, duty_cycle } => DrfgConfig::new(*period, *duty_cycle, chirp)
            .map(SignalSource::Drfg)
            .map_err(|source| HarnessError::NodeSetup { node: u32::MAX, source }),
    }
}

/// First `len` samples of a source, widened for the reference model.
pub fn source_stream(source: &SignalSource, len: usize) -> Vec<Complex64> {
    (0..len as u64).map(|c| source.sample(c).to_c64()).collect()
}
