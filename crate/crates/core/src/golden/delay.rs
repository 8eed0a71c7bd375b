//! Band-limited fractional delay for the reference model.

use num_complex::Complex64;

/// Number of taps of the reference interpolator.
pub const SINC_TAPS: usize = 64;
/// Kaiser window shape parameter.
pub const KAISER_BETA: f64 = 8.0;

const HALF: i64 = (SINC_TAPS / 2) as i64;

/// Modified Bessel function of the first kind, order zero.
pub(crate) fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > sum * 1e-17 {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Kaiser-windowed sinc kernel realizing a sub-sample delay `mu` in [0, 1).
///
/// `y[n] = sum_m x[n - m] * taps[m + 31]` for `m` in `-31..=32`, so the
/// kernel reaches 31 samples ahead of the integer delay.
#[derive(Clone, Debug)]
pub struct FractionalDelayKernel {
    mu: f64,
    taps: [f64; SINC_TAPS],
}

impl FractionalDelayKernel {
    pub fn new(mu: f64) -> Self {
        assert!((0.0..1.0).contains(&mu), "fractional delay {mu} outside [0, 1)");
        let norm = bessel_i0(KAISER_BETA);
        let mut taps = [0.0; SINC_TAPS];
        for (i, tap) in taps.iter_mut().enumerate() {
            let m = i as i64 - (HALF - 1);
            let x = m as f64 - mu;
            let r = x / HALF as f64;
            let window = if r.abs() <= 1.0 { bessel_i0(KAISER_BETA * (1.0 - r * r).sqrt()) / norm } else { 0.0 };
            *tap = sinc(x) * window;
        }
        if mu == 0.0 {
            // Exact integer shift; removes the window's residue at zero.
            taps = [0.0; SINC_TAPS];
            taps[(HALF - 1) as usize] = 1.0;
        }
        Self { mu, taps }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn taps(&self) -> &[f64; SINC_TAPS] {
        &self.taps
    }

    /// Lowest offset `m` the kernel touches (reads `x[n - m]`).
    pub const MIN_OFFSET: i64 = -(HALF - 1);

    /// Value of `x` at time `center - mu`, treating samples outside
    /// `0..available` as zero.
    pub fn interpolate(&self, x: &[Complex64], center: i64, available: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &h) in self.taps.iter().enumerate() {
            let idx = center - (i as i64 + Self::MIN_OFFSET);
            if idx >= 0 && (idx as usize) < available {
                acc += x[idx as usize] * h;
            }
        }
        acc
    }
}

/// Delays `x` by `delay` samples (`delay >= 0`), zero before the start.
pub fn delay_stream(x: &[Complex64], delay: f64) -> Vec<Complex64> {
    assert!(delay >= 0.0);
    let whole = delay.floor();
    let kernel = FractionalDelayKernel::new(delay - whole);
    let whole = whole as i64;
    (0..x.len() as i64).map(|n| kernel.interpolate(x, n - whole, x.len())).collect()
}
