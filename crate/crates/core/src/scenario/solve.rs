use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Frame, Quaternion, ScenarioConfigPacket, ScenarioError, Scene, ScpLink};
use crate::controlpath::DelayMode;
use crate::datapath::FdcTaps;
use crate::golden::{ExactLink, SphericalAngle};
use crate::numerics::quantize_f16;
use crate::SPEED_OF_LIGHT;

/// Hardware parameters the solver needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub sample_rate: f64,
    pub compute_latency: u32,
    /// Smallest buffer delay the FIFO can serve (one bank depth).
    pub min_buffer_delay: u32,
    /// Largest buffer delay the FIFO can serve.
    pub max_buffer_delay: u32,
    pub mode: DelayMode,
}

/// Split of a total delay `T = d * fs / c` into `K + mu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DelaySplit {
    pub whole: i64,
    pub mu_q16: u16,
}

/// `whole = floor(T)`, `mu` rounded to Q0.16 (carrying into `whole` when
/// it rounds up to one). Without fractional delay, `whole = round(T)`.
pub fn decompose_delay(total_samples: f64, fractional: bool) -> DelaySplit {
    if !fractional {
        return DelaySplit { whole: total_samples.round() as i64, mu_q16: 0 };
    }
    let whole = total_samples.floor();
    let q = ((total_samples - whole) * 65536.0).round() as u32;
    if q >= 65536 {
        DelaySplit { whole: whole as i64 + 1, mu_q16: 0 }
    } else {
        DelaySplit { whole: whole as i64, mu_q16: q as u16 }
    }
}

/// Quantized packet plus the exact parameters the reference model uses.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvedFrame {
    pub scp: ScenarioConfigPacket,
    pub exact: Vec<ExactLink>,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn body_angle(orientation: &Quaternion, world_dir: [f64; 3]) -> SphericalAngle {
    SphericalAngle::from_direction(orientation.conj().rotate(world_dir))
}

/// Solves one frame into a configuration packet for `scenario_id`.
///
/// Per link `i -> j`: the total delay is split into the FIFO buffer delay
/// (whole samples minus compute latency) and the FDC fraction; gains are
/// looked up at the geometric angles in each object's body frame, with the
/// path loss lumped into the emitter-side gain; Doppler is
/// `carrier * closing_speed / c`, positive when closing.
pub fn solve_frame(
    frame: &Frame,
    scene: &Scene,
    opts: &SolveOptions,
    scenario_id: u32,
) -> Result<SolvedFrame, ScenarioError> {
    let fs = opts.sample_rate;
    let mut links = Vec::new();
    let mut exact = Vec::new();
    for (i, j) in scene.links() {
        let (a, b) = (&scene.objects[i], &scene.objects[j]);
        let (sa, sb) = (&frame.objects[i], &frame.objects[j]);
        let los = sub(sb.position, sa.position);
        let d = dot(los, los).sqrt();
        let total = d * fs / SPEED_OF_LIGHT;
        let split = decompose_delay(total, scene.fractional_delay);
        let buffer = split.whole - opts.compute_latency as i64;
        let below = buffer < opts.min_buffer_delay as i64;
        if below && opts.mode == DelayMode::Strict {
            let min_m = (opts.min_buffer_delay + opts.compute_latency) as f64 * SPEED_OF_LIGHT / fs;
            return Err(ScenarioError::BelowMinimumRange { src: a.id, dst: b.id, distance_m: d, min_m });
        }
        if buffer > opts.max_buffer_delay as i64 {
            let max_m = (opts.max_buffer_delay + opts.compute_latency) as f64 * SPEED_OF_LIGHT / fs;
            return Err(ScenarioError::ExceedsMaxRange { src: a.id, dst: b.id, distance_m: d, max_m });
        }
        let theta_out = body_angle(&sa.orientation, los);
        let theta_in = body_angle(&sb.orientation, sub(sa.position, sb.position));
        let rho = scene.path_loss.at_distance(d);
        let g_s1 = if a.role.has_source() { a.antenna.g_t.eval(theta_out) * rho } else { 0.0 };
        let g_v = if a.role.reflects() { a.rcs.beta.eval(theta_out) * rho } else { 0.0 };
        let alpha = if b.role.reflects() { b.rcs.alpha.eval(theta_in) } else { 0.0 };
        let g_r = if b.role.captures() { b.antenna.g_r.eval(theta_in) } else { 0.0 };
        let closing = if d > 0.0 { -dot(los, sub(sb.velocity, sa.velocity)) / d } else { 0.0 };
        // `+ 0.0` keeps a zero Doppler from being stored as -0.
        let doppler_hz = scene.carrier_hz * closing / SPEED_OF_LIGHT + 0.0;
        links.push(ScpLink {
            src: a.id as u16,
            dst: b.id as u16,
            buffer_delay: buffer.max(0) as u32,
            mu_q16: split.mu_q16,
            fdc_taps: FdcTaps::from_mu(split.mu_q16 as f64 / 65536.0),
            alpha: quantize_f16(alpha),
            beta_rho: quantize_f16(g_v),
            g_t: quantize_f16(g_s1),
            g_r: quantize_f16(g_r),
            doppler_hz,
        });
        exact.push(ExactLink { src: i, dst: j, delay_samples: total, doppler_hz, g_s1, g_v, alpha, g_r });
    }
    Ok(SolvedFrame { scp: ScenarioConfigPacket { scenario_id, links }, exact })
}

/// Solves every frame (in parallel); frame `k` becomes scenario `k`.
pub fn solve_frames(frames: &[Frame], scene: &Scene, opts: &SolveOptions) -> Result<Vec<SolvedFrame>, ScenarioError> {
    frames.par_iter().enumerate().map(|(k, f)| solve_frame(f, scene, opts, k as u32)).collect()
}
