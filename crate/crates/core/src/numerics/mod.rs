//! Reduced-precision arithmetic of the accelerator datapath.
//!
//! Samples and most coefficients are IEEE binary16 ([`F16`]); the fractional
//! delay filter taps use a 10-bit minifloat ([`MiniF10`], 1 sign / 5 exponent
//! / 4 mantissa bits). All rounding is round-to-nearest-even and finite
//! overflow saturates to the largest finite magnitude.
//!
//! Arithmetic is carried out in `f64` and quantized once at the output of
//! each multiply-accumulate, so every operation here is a pure function of
//! bit patterns and reproducible on any platform.

mod complex;
mod minifloat;

pub use complex::{cmac, ComplexSample};

use minifloat::{BINARY16, MINI10};
use serde::{Deserialize, Serialize};
use std::fmt;

/// IEEE-754 binary16 value held as its bit pattern.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct F16(u16);

impl F16 {
    pub const ZERO: F16 = F16(0x0000);
    pub const ONE: F16 = F16(0x3c00);
    pub const NEG_ONE: F16 = F16(0xbc00);
    pub const MAX: F16 = F16(0x7bff);
    pub const INFINITY: F16 = F16(0x7c00);
    pub const NAN: F16 = F16(0x7e00);

    pub const fn from_bits(bits: u16) -> Self {
        F16(bits)
    }

    pub const fn to_bits(self) -> u16 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        BINARY16.decode(self.0)
    }

    pub fn is_nan(self) -> bool {
        BINARY16.is_nan(self.0)
    }

    pub fn is_infinite(self) -> bool {
        BINARY16.is_infinite(self.0)
    }

    pub fn is_finite(self) -> bool {
        BINARY16.exponent_field(self.0) != 0x1f
    }

    /// Distance in representable steps between two finite values.
    pub fn ulps_between(self, other: F16) -> u32 {
        BINARY16.ordinal(self.0).abs_diff(BINARY16.ordinal(other.0))
    }

    /// Size of one unit in the last place at this value's magnitude.
    pub fn ulp(self) -> f64 {
        let exp = BINARY16.exponent_field(self.0).max(1) as i32;
        2f64.powi(exp - 15 - 10)
    }
}

/// Nearest-even binary16 for `x`, saturating finite overflow.
pub fn quantize_f16(x: f64) -> F16 {
    F16(BINARY16.encode(x))
}

impl From<F16> for f64 {
    fn from(v: F16) -> f64 {
        v.to_f64()
    }
}

impl fmt::Debug for F16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F16({:#06x} = {})", self.0, self.to_f64())
    }
}

impl fmt::Display for F16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Ten-bit minifloat used for fractional-delay filter taps. The pattern
/// lives in the low ten bits of the `u16`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MiniF10(u16);

impl MiniF10 {
    pub const BITS: u32 = 10;
    pub const ZERO: MiniF10 = MiniF10(0);
    pub const ONE: MiniF10 = MiniF10(0x0f0);

    /// Returns `None` when any of the upper six bits are set.
    pub const fn from_bits(bits: u16) -> Option<Self> {
        if bits >> Self::BITS == 0 {
            Some(MiniF10(bits))
        } else {
            None
        }
    }

    pub const fn to_bits(self) -> u16 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        MINI10.decode(self.0)
    }

    pub fn is_nan(self) -> bool {
        MINI10.is_nan(self.0)
    }

    /// Exact conversion: exponent is shared, mantissa is zero-extended.
    pub fn widen(self) -> F16 {
        let sign = (self.0 & MINI10.sign_bit()) << 6;
        F16(sign | ((self.0 & 0x1ff) << 6))
    }

    /// Narrow an F16 with round-to-nearest-even.
    pub fn from_f16(v: F16) -> Self {
        quantize_f10(v.to_f64())
    }

    /// Every one of the 1024 patterns, in bit order.
    pub fn all() -> impl Iterator<Item = MiniF10> {
        (0..1u16 << Self::BITS).map(MiniF10)
    }
}

/// Nearest-even MiniF10 for `x`, saturating finite overflow.
pub fn quantize_f10(x: f64) -> MiniF10 {
    debug_assert_eq!(MINI10.width(), MiniF10::BITS);
    MiniF10(MINI10.encode(x))
}

impl fmt::Debug for MiniF10 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MiniF10({:#05x} = {})", self.0, self.to_f64())
    }
}

/// CSV dump of every MiniF10 pattern: `bits,value`.
pub fn minif10_table_csv() -> String {
    let mut out = String::from("bits,value\n");
    for v in MiniF10::all() {
        out.push_str(&format!("{:#05x},{}\n", v.to_bits(), v.to_f64()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Nearest value by exhaustive scan; ties go to the even pattern.
    fn nearest_by_scan(x: f64, patterns: impl Iterator<Item = (u16, f64)>) -> u16 {
        let mut best: Option<(u16, f64)> = None;
        for (bits, v) in patterns {
            if !v.is_finite() || (v == 0.0 && bits != 0) {
                continue;
            }
            let err = (v - x).abs();
            best = match best {
                None => Some((bits, err)),
                Some((b, e)) if err < e || (err == e && bits & 1 == 0 && b & 1 == 1) => {
                    Some((bits, err))
                }
                keep => keep,
            };
        }
        best.unwrap().0
    }

    fn all_f16() -> impl Iterator<Item = (u16, f64)> {
        (0..=u16::MAX).map(|b| (b, F16::from_bits(b).to_f64()))
    }

    #[test]
    fn zero_and_one_are_exact() {
        assert_eq!(quantize_f16(0.0).to_bits(), 0);
        assert_eq!(quantize_f16(-0.0).to_bits(), 0x8000);
        assert_eq!(quantize_f16(1.0), F16::ONE);
        assert_eq!(quantize_f16(1.0).to_bits() >> 10, 15);
        assert_eq!(quantize_f10(0.0), MiniF10::ZERO);
        assert_eq!(quantize_f10(1.0), MiniF10::ONE);
        assert_eq!(MiniF10::ONE.to_f64(), 1.0);
    }

    #[test]
    fn table_ii_sample_matches_exhaustive_scan() {
        let expected = nearest_by_scan(0.2075, all_f16());
        assert_eq!(quantize_f16(0.2075).to_bits(), expected);
        // Frozen from the scan: 0x32a4 = 0.20751953125.
        assert_eq!(expected, 0x32a4);
    }

    #[test]
    fn f16_matches_scan_on_random_reals() {
        let table: Vec<(u16, f64)> = all_f16().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let x: f64 = rng.gen_range(-70000.0..70000.0) * 10f64.powi(rng.gen_range(-9..0));
            let got = quantize_f16(x);
            if x.abs() > 65504.0 {
                assert_eq!(got.to_f64().abs(), 65504.0);
                continue;
            }
            let want = nearest_by_scan(x, table.iter().copied());
            assert_eq!(got.to_f64(), F16::from_bits(want).to_f64(), "x = {x}");
        }
    }

    #[test]
    fn f10_in_unit_octave_hits_one_of_sixteen_steps() {
        let table: Vec<(u16, f64)> = MiniF10::all().map(|v| (v.to_bits(), v.to_f64())).collect();
        let steps: Vec<f64> = (0..16).map(|k| 1.0 + k as f64 / 16.0).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let x: f64 = rng.gen_range(1.0..2.0);
            let got = quantize_f10(x);
            let want = nearest_by_scan(x, table.iter().copied());
            assert_eq!(got.to_bits(), want, "x = {x}");
            let v = got.to_f64();
            assert!(steps.contains(&v) || v == 2.0, "x = {x} -> {v}");
        }
    }

    #[test]
    fn f16_decode_encode_is_identity_on_finite_patterns() {
        for bits in 0..=u16::MAX {
            let v = F16::from_bits(bits);
            if v.is_nan() {
                assert!(quantize_f16(v.to_f64()).is_nan());
                continue;
            }
            assert_eq!(quantize_f16(v.to_f64()).to_bits(), bits);
        }
    }

    #[test]
    fn minif10_widen_then_quantize_is_identity() {
        for v in MiniF10::all() {
            let back = quantize_f10(v.widen().to_f64());
            if v.is_nan() {
                assert!(back.is_nan());
            } else {
                assert_eq!(back, v);
                assert_eq!(v.widen().to_f64(), v.to_f64());
            }
        }
    }

    #[test]
    fn narrowing_moves_at_most_one_f10_ulp() {
        for bits in 0..=u16::MAX {
            let v = F16::from_bits(bits);
            if !v.is_finite() || v.to_f64().abs() > 63488.0 {
                continue;
            }
            let narrowed = MiniF10::from_f16(v).widen().to_f64();
            let x = v.to_f64();
            let exp = BINARY16.exponent_field(bits).max(1) as i32;
            let f10_ulp = 2f64.powi(exp - 15 - 4);
            assert!((narrowed - x).abs() <= f10_ulp, "{v:?} -> {narrowed}");
        }
    }

    #[test]
    fn infinities_and_nan_are_representable() {
        assert!(F16::INFINITY.is_infinite());
        assert_eq!(quantize_f16(f64::INFINITY), F16::INFINITY);
        assert_eq!(quantize_f16(f64::NEG_INFINITY).to_bits(), 0xfc00);
        assert!(quantize_f16(f64::NAN).is_nan());
        assert!(quantize_f10(f64::NAN).is_nan());
        assert_eq!(quantize_f16(1e30), F16::MAX);
    }

    #[test]
    fn f10_relative_error_against_f16_is_small_on_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut total = 0.0;
        for _ in 0..n {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let h = quantize_f16(x).to_f64();
            if h == 0.0 {
                continue;
            }
            total += ((quantize_f10(x).to_f64() - h) / h).abs();
        }
        assert!(total / n as f64 <= 2f64.powi(-4));
    }

    #[test]
    fn csv_dump_lists_all_patterns() {
        let csv = minif10_table_csv();
        assert_eq!(csv.lines().count(), 1025);
        assert!(csv.contains("0x0f0,1\n"));
    }

    #[test]
    fn from_bits_rejects_wide_patterns() {
        assert!(MiniF10::from_bits(0x3ff).is_some());
        assert!(MiniF10::from_bits(0x400).is_none());
    }
}
