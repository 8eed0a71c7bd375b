//! Bit-level codec shared by the two reduced-precision formats.
//!
//! Both formats use a sign bit, a 5-bit exponent with bias 15 and an
//! IEEE-style reserved all-ones exponent for infinity/NaN. They differ only
//! in mantissa width (10 bits for F16, 4 bits for MiniF10).

const EXP_ALL_ONES: u16 = 0x1f;
const BIAS: i32 = 15;
const MIN_NORMAL_EXP: i32 = 1 - BIAS;
const MAX_NORMAL_EXP: i32 = 30 - BIAS;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Layout {
    mant_bits: u32,
}

pub(crate) const BINARY16: Layout = Layout { mant_bits: 10 };
pub(crate) const MINI10: Layout = Layout { mant_bits: 4 };

/// Exact power of two as an f64, for exponents well inside the normal range.
fn pow2(exp: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&exp));
    f64::from_bits(((exp + 1023) as u64) << 52)
}

impl Layout {
    #[inline]
    pub(crate) fn width(self) -> u32 {
        self.mant_bits + 6
    }

    #[inline]
    pub(crate) fn sign_bit(self) -> u16 {
        1 << (self.mant_bits + 5)
    }

    #[inline]
    fn mant_mask(self) -> u16 {
        (1 << self.mant_bits) - 1
    }

    #[inline]
    pub(crate) fn infinity(self) -> u16 {
        EXP_ALL_ONES << self.mant_bits
    }

    #[inline]
    pub(crate) fn nan(self) -> u16 {
        self.infinity() | (1 << (self.mant_bits - 1))
    }

    #[inline]
    pub(crate) fn max_finite(self) -> u16 {
        ((EXP_ALL_ONES - 1) << self.mant_bits) | self.mant_mask()
    }

    #[inline]
    pub(crate) fn exponent_field(self, bits: u16) -> u16 {
        (bits >> self.mant_bits) & EXP_ALL_ONES
    }

    #[inline]
    pub(crate) fn mantissa_field(self, bits: u16) -> u16 {
        bits & self.mant_mask()
    }

    pub(crate) fn is_nan(self, bits: u16) -> bool {
        self.exponent_field(bits) == EXP_ALL_ONES && self.mantissa_field(bits) != 0
    }

    pub(crate) fn is_infinite(self, bits: u16) -> bool {
        self.exponent_field(bits) == EXP_ALL_ONES && self.mantissa_field(bits) == 0
    }

    pub(crate) fn decode(self, bits: u16) -> f64 {
        let negative = bits & self.sign_bit() != 0;
        let exp = self.exponent_field(bits);
        let mant = self.mantissa_field(bits) as f64;
        let m = self.mant_bits as i32;
        let magnitude = match exp {
            0 => mant * pow2(MIN_NORMAL_EXP - m),
            EXP_ALL_ONES if mant == 0.0 => f64::INFINITY,
            EXP_ALL_ONES => return f64::NAN,
            e => (mant + pow2(m)) * pow2(e as i32 - BIAS - m),
        };
        if negative {
            -magnitude
        } else {
            magnitude
        }
    }

    /// Round-to-nearest-even encode. Finite values past the largest finite
    /// magnitude saturate; signed infinities and NaN keep their class.
    pub(crate) fn encode(self, x: f64) -> u16 {
        if x.is_nan() {
            return self.nan();
        }
        let sign = if x.is_sign_negative() { self.sign_bit() } else { 0 };
        let a = x.abs();
        if a.is_infinite() {
            return sign | self.infinity();
        }
        // Far below half the smallest subnormal; also keeps pow2 in range.
        if a < pow2(-64) {
            return sign;
        }
        let exp = ((a.to_bits() >> 52) & 0x7ff) as i32 - 1023;
        if exp > MAX_NORMAL_EXP {
            return sign | self.max_finite();
        }
        let m = self.mant_bits as i32;
        let scale_exp = exp.max(MIN_NORMAL_EXP);
        // Dividing by a power of two is exact here.
        let steps = (a / pow2(scale_exp - m)).round_ties_even() as u32;
        let hidden = 1u32 << m;
        if exp < MIN_NORMAL_EXP {
            // Subnormal; a carry into `hidden` lands on the smallest normal.
            return sign | steps as u16;
        }
        let (biased, steps) = if steps == hidden << 1 {
            (scale_exp + BIAS + 1, hidden)
        } else {
            (scale_exp + BIAS, steps)
        };
        if biased >= EXP_ALL_ONES as i32 {
            return sign | self.max_finite();
        }
        sign | ((biased as u16) << self.mant_bits) | (steps - hidden) as u16
    }

    /// Monotone integer key: adjacent finite values differ by one.
    pub(crate) fn ordinal(self, bits: u16) -> i32 {
        let magnitude = (bits & !self.sign_bit()) as i32;
        if bits & self.sign_bit() != 0 {
            -magnitude
        } else {
            magnitude
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_patterns() {
        assert_eq!(BINARY16.infinity(), 0x7c00);
        assert_eq!(BINARY16.nan(), 0x7e00);
        assert_eq!(BINARY16.max_finite(), 0x7bff);
        assert_eq!(BINARY16.decode(0x7bff), 65504.0);
        assert_eq!(MINI10.max_finite(), 0x1ef);
        assert_eq!(MINI10.decode(0x1ef), 63488.0);
        assert_eq!(BINARY16.decode(0x0001), 2f64.powi(-24));
        assert_eq!(MINI10.decode(0x001), 2f64.powi(-18));
    }

    #[test]
    fn halfway_cases_round_to_even() {
        // 1 + 2^-11 sits exactly between 1.0 and the next F16.
        assert_eq!(BINARY16.encode(1.0 + 2f64.powi(-11)), 0x3c00);
        // 1 + 3*2^-11 sits between odd and even mantissas; even wins.
        assert_eq!(BINARY16.encode(1.0 + 3.0 * 2f64.powi(-11)), 0x3c02);
        // Half the smallest subnormal rounds to zero (even).
        assert_eq!(BINARY16.encode(2f64.powi(-25)), 0);
        assert_eq!(BINARY16.encode(1.5 * 2f64.powi(-24)), 2);
    }

    #[test]
    fn overflow_saturates() {
        assert_eq!(BINARY16.encode(65519.0), 0x7bff);
        assert_eq!(BINARY16.encode(65520.0), 0x7bff);
        assert_eq!(BINARY16.encode(-1e9), 0xfbff);
        assert_eq!(MINI10.encode(1e6), 0x1ef);
    }
}
