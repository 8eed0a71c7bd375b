use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{ComplexSample, F16};

/// Per-output gain registers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputGains {
    /// Transmit gain times path loss, applied to the local source.
    pub g_t: F16,
    /// Outbound scattering gain times path loss, applied to `v`.
    pub beta_rho: F16,
}

/// `(g_t * s1 + beta_rho * v) * doppler`, quantized once.
pub fn apply_output_stage(
    v_delayed: ComplexSample,
    s1_delayed: ComplexSample,
    gains: OutputGains,
    doppler_coeff: ComplexSample,
) -> ComplexSample {
    let body = s1_delayed.to_c64() * gains.g_t.to_f64() + v_delayed.to_c64() * gains.beta_rho.to_f64();
    ComplexSample::from_c64(body * doppler_coeff.to_c64())
}

/// Balanced binary adder tree over `g[i] * x[i]`.
///
/// Leaves are the quantized products; inputs are zero-padded to the next
/// power of two and every pairwise sum is quantized, so the result depends
/// only on input order.
#[derive(Clone, Debug, Default)]
pub struct AdderTree {
    scratch: Vec<ComplexSample>,
}

impl AdderTree {
    pub fn sum(&mut self, inputs: &[ComplexSample], gains: &[F16]) -> ComplexSample {
        assert_eq!(inputs.len(), gains.len(), "one gain per adder-tree input");
        if inputs.is_empty() {
            return ComplexSample::ZERO;
        }
        let width = inputs.len().next_power_of_two();
        self.scratch.clear();
        self.scratch.extend(inputs.iter().zip(gains).map(|(x, g)| ComplexSample::from_c64(x.to_c64() * g.to_f64())));
        self.scratch.resize(width, ComplexSample::ZERO);
        let mut n = width;
        while n > 1 {
            for i in 0..n / 2 {
                let s: Complex64 = self.scratch[2 * i].to_c64() + self.scratch[2 * i + 1].to_c64();
                self.scratch[i] = ComplexSample::from_c64(s);
            }
            n /= 2;
        }
        self.scratch[0]
    }
}

/// Receiver combination `sum g_r[i] * inputs[i]` through the adder tree.
pub fn receiver_accumulate(inputs: &[ComplexSample], g_rs: &[F16]) -> ComplexSample {
    AdderTree::default().sum(inputs, g_rs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quantize_f16;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample(rng: &mut ChaCha8Rng) -> ComplexSample {
        ComplexSample::from_c64(Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
    }

    #[test]
    fn transmit_only_and_passive_only() {
        let x = ComplexSample::from_c64(Complex64::new(0.7, -0.2));
        let g = OutputGains { g_t: F16::ONE, beta_rho: F16::ZERO };
        assert_eq!(apply_output_stage(ComplexSample::ONE, x, g, ComplexSample::ONE), x);
        let g = OutputGains { g_t: F16::ZERO, beta_rho: F16::ONE };
        let minus = ComplexSample::new(F16::NEG_ONE, F16::ZERO);
        let out = apply_output_stage(x, ComplexSample::ONE, g, minus);
        assert_eq!(out.to_c64(), -x.to_c64());
    }

    #[test]
    fn random_output_stage_within_four_ulps() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100_000 {
            let (v, s1, d) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            let g = OutputGains { g_t: quantize_f16(rng.gen_range(-1.0..1.0)), beta_rho: quantize_f16(rng.gen_range(-1.0..1.0)) };
            let (gt, br) = (g.g_t.to_f64(), g.beta_rho.to_f64());
            let (vr, vi, sr, si, dr, di) =
                (v.re.to_f64(), v.im.to_f64(), s1.re.to_f64(), s1.im.to_f64(), d.re.to_f64(), d.im.to_f64());
            let (br_, bi_) = (gt * sr + br * vr, gt * si + br * vi);
            let want_re = br_ * dr - bi_ * di;
            let want_im = br_ * di + bi_ * dr;
            let got = apply_output_stage(v, s1, g, d);
            assert!(got.re.ulps_between(quantize_f16(want_re)) <= 4);
            assert!(got.im.ulps_between(quantize_f16(want_im)) <= 4);
        }
    }

    #[test]
    fn adder_tree_identity_and_cancellation() {
        let x = ComplexSample::from_c64(Complex64::new(1.25, 3.5));
        assert_eq!(receiver_accumulate(&[x], &[F16::ONE]), x);
        let z = receiver_accumulate(&[x, x], &[F16::ONE, F16::NEG_ONE]);
        assert!(z.is_zero());
        assert!(receiver_accumulate(&[], &[]).is_zero());
    }

    #[test]
    fn adder_tree_matches_declared_order_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let q = |z: Complex64| ComplexSample::from_c64(z);
        for _ in 0..10_000 {
            let xs: Vec<_> = (0..3).map(|_| sample(&mut rng)).collect();
            let gs: Vec<_> = (0..3).map(|_| quantize_f16(rng.gen_range(-1.5..1.5))).collect();
            let p: Vec<_> = xs.iter().zip(&gs).map(|(x, g)| q(x.to_c64() * g.to_f64())).collect();
            // ((p0 + p1) + (p2 + 0))
            let tree = q(q(p[0].to_c64() + p[1].to_c64()).to_c64() + p[2].to_c64());
            assert_eq!(receiver_accumulate(&xs, &gs), tree);
            let linear = q(q(p[0].to_c64() + p[1].to_c64()).to_c64() + p[2].to_c64());
            assert!(tree.re.ulps_between(linear.re) <= 2);
        }
    }

    #[test]
    fn eight_input_tree_pairs_neighbours() {
        let xs: Vec<_> = [60000.0, -60000.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0].map(ComplexSample::from_real).to_vec();
        // Pairing (60000, -60000) first keeps the total finite and exact.
        assert_eq!(receiver_accumulate(&xs, &[F16::ONE; 8]).re.to_f64(), 21.0);
    }
}
