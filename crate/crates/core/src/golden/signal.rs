use num_complex::Complex64;
use std::f64::consts::PI;

use super::delay::FractionalDelayKernel;
use super::{AntennaPattern, GoldenError, LinkParams, PathLossModel, RcsProfile};

/// Gain models evaluated for one output link.
#[derive(Clone, Copy, Debug)]
pub struct LinkGains<'a> {
    pub antenna: &'a AntennaPattern,
    pub rcs: &'a RcsProfile,
    pub path_loss: &'a PathLossModel,
}

fn check_lengths(inputs: &[&[Complex64]], gains: &[f64]) -> Result<usize, GoldenError> {
    if inputs.len() != gains.len() {
        return Err(GoldenError::GainCountMismatch { gains: gains.len(), streams: inputs.len() });
    }
    let expected = inputs.first().map_or(0, |s| s.len());
    for (index, s) in inputs.iter().enumerate() {
        if s.len() != expected {
            return Err(GoldenError::LengthMismatch { index, len: s.len(), expected });
        }
    }
    Ok(expected)
}

fn weighted_sum(inputs: &[&[Complex64]], gains: &[f64]) -> Result<Vec<Complex64>, GoldenError> {
    let len = check_lengths(inputs, gains)?;
    Ok((0..len)
        .map(|t| inputs.iter().zip(gains).fold(Complex64::new(0.0, 0.0), |acc, (s, &g)| acc + s[t] * g))
        .collect())
}

/// `v(t) = sum_m alpha_m * s_m(t)`.
pub fn intermediate_signal(inputs: &[&[Complex64]], alphas: &[f64]) -> Result<Vec<Complex64>, GoldenError> {
    weighted_sum(inputs, alphas)
}

/// `r(t) = sum_m G_R(theta_m) * s_m(t)`.
pub fn receive_signal(inputs: &[&[Complex64]], g_rs: &[f64]) -> Result<Vec<Complex64>, GoldenError> {
    weighted_sum(inputs, g_rs)
}

/// Doppler rotation `exp(-j 2 pi f n / fs)` at absolute sample index `n`.
pub fn doppler_rotation(doppler_hz: f64, n: i64, sample_rate: f64) -> Complex64 {
    if doppler_hz == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    // Reduce the cycle count before scaling to keep precision for large n.
    let cycles = (doppler_hz / sample_rate * n as f64).rem_euclid(1.0);
    Complex64::from_polar(1.0, -2.0 * PI * cycles)
}

/// One output of a node:
/// `rho(tau) e^{-j 2 pi f t} [G_T(theta) s1(t - tau) + beta(theta) v(t - tau)]`.
///
/// The delay is realized with the 64-tap windowed-sinc kernel; samples
/// before the start of the streams are zero.
pub fn output_signal(
    s1: &[Complex64],
    v: &[Complex64],
    link: &LinkParams,
    gains: LinkGains<'_>,
    sample_rate: f64,
) -> Result<Vec<Complex64>, GoldenError> {
    if !(link.tau > 0.0) {
        return Err(GoldenError::NonPositiveDelay { tau: link.tau });
    }
    check_lengths(&[s1, v], &[0.0, 0.0])?;
    let delay = link.tau * sample_rate;
    let whole = delay.floor();
    let kernel = FractionalDelayKernel::new(delay - whole);
    let whole = whole as i64;
    let rho = gains.path_loss.at_delay(link.tau);
    let g_t = gains.antenna.g_t.eval(link.theta_out);
    let beta = gains.rcs.beta.eval(link.theta_out);
    Ok((0..s1.len() as i64)
        .map(|n| {
            let center = n - whole;
            let body = kernel.interpolate(s1, center, s1.len()) * g_t + kernel.interpolate(v, center, v.len()) * beta;
            body * rho * doppler_rotation(link.doppler_hz, n, sample_rate)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::{AngularTable, SphericalAngle};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_stream(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
        (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    fn zeros(len: usize) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); len]
    }

    fn link(tau: f64) -> LinkParams {
        LinkParams { tau, doppler_hz: 0.0, theta_in: SphericalAngle::default(), theta_out: SphericalAngle::default() }
    }

    #[test]
    fn intermediate_identity_and_cancellation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_stream(&mut rng, 64);
        assert_eq!(intermediate_signal(&[&s], &[1.0]).unwrap(), s);
        let v = intermediate_signal(&[&s, &s], &[1.0, -1.0]).unwrap();
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn weighted_sums_match_per_sample_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let streams: Vec<Vec<Complex64>> = (0..3).map(|_| random_stream(&mut rng, 100)).collect();
        let weights: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let refs: Vec<&[Complex64]> = streams.iter().map(|s| s.as_slice()).collect();
        let v = intermediate_signal(&refs, &weights).unwrap();
        let r = receive_signal(&refs, &weights).unwrap();
        for t in 0..100 {
            let mut want = Complex64::new(0.0, 0.0);
            for m in 0..3 {
                want += streams[m][t] * weights[m];
            }
            assert!((v[t] - want).norm() < 1e-12);
            assert!((r[t] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn receive_cancels_opposite_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_stream(&mut rng, 32);
        let neg: Vec<Complex64> = x.iter().map(|z| -z).collect();
        assert!(receive_signal(&[&x, &neg], &[1.0, 1.0]).unwrap().iter().all(|z| z.norm() == 0.0));
        assert_eq!(receive_signal(&[&x], &[1.0]).unwrap(), x);
    }

    #[test]
    fn length_mismatch_is_a_configuration_error() {
        let a = zeros(4);
        let b = zeros(5);
        assert!(matches!(intermediate_signal(&[&a, &b], &[1.0, 1.0]), Err(GoldenError::LengthMismatch { .. })));
        assert!(matches!(receive_signal(&[&a], &[1.0, 2.0]), Err(GoldenError::GainCountMismatch { .. })));
    }

    #[test]
    fn integer_delay_shifts_s1() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fs = 100e6;
        let s1 = random_stream(&mut rng, 200);
        let antenna = AntennaPattern::default();
        let rcs = RcsProfile { alpha: AngularTable::constant(1.0), beta: AngularTable::constant(0.0) };
        let unity = PathLossModel::unity();
        let gains = LinkGains { antenna: &antenna, rcs: &rcs, path_loss: &unity };
        let out = output_signal(&s1, &zeros(200), &link(17.0 / fs), gains, fs).unwrap();
        for n in 0..200 {
            let want = if n >= 17 { s1[n - 17] } else { Complex64::new(0.0, 0.0) };
            assert!((out[n] - want).norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn impulse_lands_scaled_by_path_loss_and_gain() {
        let fs = 100e6;
        let mut s1 = zeros(100);
        s1[0] = Complex64::new(1.0, 0.0);
        let antenna = AntennaPattern { g_t: AngularTable::constant(0.5), g_r: AngularTable::constant(1.0) };
        let rcs = RcsProfile { alpha: AngularTable::constant(1.0), beta: AngularTable::constant(0.0) };
        let pl = PathLossModel::default();
        let tau = 40.0 / fs;
        let gains = LinkGains { antenna: &antenna, rcs: &rcs, path_loss: &pl };
        let out = output_signal(&s1, &zeros(100), &link(tau), gains, fs).unwrap();
        let amp = pl.at_delay(tau) * 0.5;
        for (n, z) in out.iter().enumerate() {
            let want = if n == 40 { amp } else { 0.0 };
            assert!((z.re - want).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn half_sample_delay_matches_direct_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fs = 1.0e9;
        let v = random_stream(&mut rng, 300);
        let antenna = AntennaPattern { g_t: AngularTable::constant(0.0), g_r: AngularTable::constant(1.0) };
        let rcs = RcsProfile::default();
        let unity = PathLossModel::unity();
        let gains = LinkGains { antenna: &antenna, rcs: &rcs, path_loss: &unity };
        let out = output_signal(&zeros(300), &v, &link(100.5 / fs), gains, fs).unwrap();

        // Independent oracle: direct convolution with the textbook kernel.
        let i0 = |x: f64| -> f64 {
            let mut s = 0.0;
            let mut fact = 1.0;
            for k in 0..60 {
                if k > 0 {
                    fact *= k as f64;
                }
                s += ((x / 2.0).powi(k) / fact).powi(2);
            }
            s
        };
        let h = |x: f64| -> f64 {
            let sinc = (PI * x).sin() / (PI * x);
            sinc * i0(8.0 * (1.0 - (x / 32.0).powi(2)).sqrt()) / i0(8.0)
        };
        for n in 150..300usize {
            let mut want = Complex64::new(0.0, 0.0);
            for j in 0..300usize {
                let x = n as f64 - 100.5 - j as f64;
                if x.abs() < 32.0 {
                    want += v[j] * h(x);
                }
            }
            assert!((out[n] - want).norm() <= 1e-6 * want.norm().max(1e-3), "n={n}");
        }
    }

    #[test]
    fn non_positive_delay_is_a_domain_error() {
        let antenna = AntennaPattern::default();
        let rcs = RcsProfile::default();
        let pl = PathLossModel::default();
        let gains = LinkGains { antenna: &antenna, rcs: &rcs, path_loss: &pl };
        let r = output_signal(&zeros(4), &zeros(4), &link(0.0), gains, 1e6);
        assert!(matches!(r, Err(GoldenError::NonPositiveDelay { .. })));
    }
}
