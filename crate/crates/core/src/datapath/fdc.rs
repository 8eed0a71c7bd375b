use serde::{Deserialize, Serialize};

use crate::numerics::{quantize_f10, ComplexSample, MiniF10, F16};

/// Sample offsets covered by the four taps, relative to the nominal sample:
/// one lead and two lags.
pub const FDC_LAGS: [i32; 4] = [1, 0, -1, -2];

/// 4-point Lagrange fractional-delay coefficients for a delay of `mu`
/// samples, ordered like [`FDC_LAGS`].
pub fn lagrange4(mu: f64) -> [f64; 4] {
    let x = -mu;
    let mut h = [1.0; 4];
    for k in 0..4 {
        for j in 0..4 {
            if j != k {
                let (ok, oj) = (FDC_LAGS[k] as f64, FDC_LAGS[j] as f64);
                h[k] *= (x - oj) / (ok - oj);
            }
        }
    }
    h
}

/// The four MiniF10 coefficients of a fractional-delay correction filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FdcTaps {
    pub taps: [MiniF10; 4],
}

impl FdcTaps {
    pub const PASSTHROUGH: FdcTaps = FdcTaps { taps: [MiniF10::ZERO, MiniF10::ONE, MiniF10::ZERO, MiniF10::ZERO] };

    pub fn from_mu(mu: f64) -> Self {
        // `+ 0.0` folds negative zeros into the canonical zero pattern.
        Self { taps: lagrange4(mu).map(|h| quantize_f10(h + 0.0)) }
    }

    pub fn widened(&self) -> [F16; 4] {
        self.taps.map(MiniF10::widen)
    }
}

impl Default for FdcTaps {
    fn default() -> Self {
        Self::PASSTHROUGH
    }
}

/// Dot product of the window `[x[n+1], x[n], x[n-1], x[n-2]]` with
/// binary16 taps, quantized once.
pub fn fdc_apply_f16(window: &[ComplexSample; 4], taps: &[F16; 4]) -> ComplexSample {
    let mut re = 0.0;
    let mut im = 0.0;
    for (x, h) in window.iter().zip(taps) {
        let h = h.to_f64();
        re += x.re.to_f64() * h;
        im += x.im.to_f64() * h;
    }
    ComplexSample::new(crate::quantize_f16(re), crate::quantize_f16(im))
}

/// FDC output for a window `[x[n+1], x[n], x[n-1], x[n-2]]`.
pub fn fdc_apply(window: &[ComplexSample; 4], taps: &FdcTaps) -> ComplexSample {
    fdc_apply_f16(window, &taps.widened())
}

/// Four-sample shift register feeding the filter.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FdcWindow {
    buf: [ComplexSample; 4],
}

impl FdcWindow {
    /// Shifts in the newest sample; it becomes the lead `x[n+1]`.
    pub fn push(&mut self, x: ComplexSample) {
        self.buf = [x, self.buf[0], self.buf[1], self.buf[2]];
    }

    pub fn window(&self) -> &[ComplexSample; 4] {
        &self.buf
    }
}
