use serde::{Deserialize, Serialize};

use super::analysis::{mainlobe_width, matched_filter};
use super::waveform::{reference_chirp, widen, CHIRP_LEN};
use crate::datapath::{fdc_apply, fdc_apply_f16, lagrange4, FdcTaps, FdcWindow};
use crate::numerics::{quantize_f16, ComplexSample, F16};

/// Effect of storing the FDC taps as MiniF10 instead of binary16.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionReport {
    pub mu: f64,
    /// `||y10 - y16|| / ||y16||` over the filtered fixture.
    pub sample_degradation: f64,
    /// -3 dB matched-filter main-lobe widths.
    pub width_f16: f64,
    pub width_f10: f64,
    /// `|width_f10 - width_f16| / width_f16`.
    pub resolution_degradation: f64,
}

fn filter(x: &[ComplexSample], f: impl Fn(&[ComplexSample; 4]) -> ComplexSample) -> Vec<ComplexSample> {
    let mut w = FdcWindow::default();
    x.iter()
        .map(|&s| {
            w.push(s);
            f(w.window())
        })
        .collect()
}

/// Fixture: the reference chirp with zero padding on both sides.
pub fn precision_fixture() -> Vec<ComplexSample> {
    let mut x = vec![ComplexSample::ZERO; 64];
    x.extend(reference_chirp(CHIRP_LEN));
    x.extend(vec![ComplexSample::ZERO; 64]);
    x
}

/// Filters `signal` with the fractional delay `mu` using MiniF10 taps and
/// binary16 taps, and compares the outputs and their matched-filter main
/// lobes against the reference chirp.
pub fn precision_study(signal: &[ComplexSample], mu: f64) -> PrecisionReport {
    let taps10 = FdcTaps::from_mu(mu);
    let taps16: [F16; 4] = lagrange4(mu).map(|h| quantize_f16(h + 0.0));
    let y10 = filter(signal, |w| fdc_apply(w, &taps10));
    let y16 = filter(signal, |w| fdc_apply_f16(w, &taps16));
    let (mut diff, mut norm) = (0.0, 0.0);
    for (a, b) in y10.iter().zip(&y16) {
        diff += (a.to_c64() - b.to_c64()).norm_sqr();
        norm += b.to_c64().norm_sqr();
    }
    let reference = widen(&reference_chirp(CHIRP_LEN));
    let width = |y: &[ComplexSample]| {
        let mf = matched_filter(&widen(y), &reference);
        let best = (0..mf.len()).max_by(|&a, &b| mf[a].total_cmp(&mf[b]).then(b.cmp(&a))).unwrap();
        mainlobe_width(&mf, best)
    };
    let (width_f16, width_f10) = (width(&y16), width(&y10));
    PrecisionReport {
        mu,
        sample_degradation: (diff / norm).sqrt(),
        width_f16,
        width_f10,
        resolution_degradation: (width_f10 - width_f16).abs() / width_f16,
    }
}
