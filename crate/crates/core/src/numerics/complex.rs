use super::{quantize_f16, F16};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Quantized I/Q sample: binary16 in-phase and quadrature components.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ComplexSample {
    pub re: F16,
    pub im: F16,
}

impl ComplexSample {
    pub const ZERO: ComplexSample = ComplexSample { re: F16::ZERO, im: F16::ZERO };
    pub const ONE: ComplexSample = ComplexSample { re: F16::ONE, im: F16::ZERO };
    pub const J: ComplexSample = ComplexSample { re: F16::ZERO, im: F16::ONE };

    pub fn new(re: F16, im: F16) -> Self {
        Self { re, im }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self { re: quantize_f16(z.re), im: quantize_f16(z.im) }
    }

    pub fn from_real(x: f64) -> Self {
        Self { re: quantize_f16(x), im: F16::ZERO }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(self) -> bool {
        self.re.to_f64() == 0.0 && self.im.to_f64() == 0.0
    }

    /// Packed 32-bit word, I in the high half.
    pub fn to_word(self) -> u32 {
        (self.re.to_bits() as u32) << 16 | self.im.to_bits() as u32
    }

    pub fn from_word(word: u32) -> Self {
        Self { re: F16::from_bits((word >> 16) as u16), im: F16::from_bits(word as u16) }
    }
}

impl From<Complex64> for ComplexSample {
    fn from(z: Complex64) -> Self {
        Self::from_c64(z)
    }
}

impl fmt::Debug for ComplexSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}j)", self.re, self.im.to_f64())
    }
}

/// `acc + a*b` with one rounding per component at the output.
///
/// Products of binary16 values are exact in `f64`, so the only rounding is
/// the final quantization.
pub fn cmac(acc: ComplexSample, a: ComplexSample, b: ComplexSample) -> ComplexSample {
    ComplexSample::from_c64(acc.to_c64() + a.to_c64() * b.to_c64())
}
