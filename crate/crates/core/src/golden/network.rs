use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::delay::FractionalDelayKernel;
use super::signal::doppler_rotation;
use super::GoldenError;

/// A node of the reference network.
#[derive(Clone, Debug, Default)]
pub struct GoldenNode {
    /// Locally generated stream `s1`, if the node transmits.
    pub source: Option<Vec<Complex64>>,
    /// Whether the node forms and re-emits an intermediate signal `v`.
    pub reflects: bool,
    /// Whether the node records a received stream `r`.
    pub captures: bool,
}

/// Exact (unquantized) parameters of one directed link for one scenario.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactLink {
    pub src: usize,
    pub dst: usize,
    /// Total propagation delay in samples.
    pub delay_samples: f64,
    pub doppler_hz: f64,
    /// `rho * G_T`, applied to the emitter's source stream.
    pub g_s1: f64,
    /// `rho * beta`, applied to the emitter's intermediate stream.
    pub g_v: f64,
    /// Inbound scattering gain at the destination.
    pub alpha: f64,
    /// Receive antenna gain at the destination.
    pub g_r: f64,
}

/// Nodes plus a per-scenario link schedule. Every scenario lists the same
/// links in the same order.
#[derive(Clone, Debug)]
pub struct GoldenNetwork {
    pub sample_rate: f64,
    pub nodes: Vec<GoldenNode>,
    pub schedule: Vec<Vec<ExactLink>>,
    pub scenario_length: usize,
}

impl GoldenNetwork {
    fn validate(&self, duration: usize) -> Result<(), GoldenError> {
        if self.scenario_length == 0 {
            return Err(GoldenError::Network("scenario length must be positive".into()));
        }
        let needed = duration.div_ceil(self.scenario_length);
        if self.schedule.len() < needed {
            return Err(GoldenError::Network(format!(
                "{} scenarios scheduled, {needed} needed for {duration} samples",
                self.schedule.len()
            )));
        }
        let first = self.schedule.first().map(|s| s.as_slice()).unwrap_or(&[]);
        for scenario in &self.schedule {
            if scenario.len() != first.len()
                || scenario.iter().zip(first).any(|(a, b)| (a.src, a.dst) != (b.src, b.dst))
            {
                return Err(GoldenError::Network("link topology changes between scenarios".into()));
            }
            for l in scenario {
                if l.src >= self.nodes.len() || l.dst >= self.nodes.len() || l.src == l.dst {
                    return Err(GoldenError::Network(format!("bad link {}->{}", l.src, l.dst)));
                }
                if !(l.delay_samples >= 1.0) {
                    return Err(GoldenError::SubSampleDelay { src: l.src, dst: l.dst, samples: l.delay_samples });
                }
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(s) = &n.source {
                if s.len() < duration {
                    return Err(GoldenError::LengthMismatch { index: i, len: s.len(), expected: duration });
                }
            }
        }
        Ok(())
    }
}

/// Simulates the network for `duration` samples and returns the captured
/// stream of every capturing node (`None` for the others).
///
/// Time advances one sample at a time. A link's value at `t` only reads
/// emitter history strictly before `t`, so feedback loops are causal; the
/// part of the interpolation kernel that would look at not-yet-computed
/// samples sees zeros.
pub fn run_network(net: &GoldenNetwork, duration: usize) -> Result<Vec<Option<Vec<Complex64>>>, GoldenError> {
    net.validate(duration)?;
    let zero = Complex64::new(0.0, 0.0);
    let n_nodes = net.nodes.len();
    let mut v: Vec<Vec<Complex64>> =
        net.nodes.iter().map(|n| if n.reflects { vec![zero; duration] } else { Vec::new() }).collect();
    let mut r: Vec<Option<Vec<Complex64>>> =
        net.nodes.iter().map(|n| n.captures.then(|| vec![zero; duration])).collect();
    let mut link_out = vec![zero; net.schedule.first().map_or(0, |s| s.len())];
    let mut acc_v = vec![zero; n_nodes];
    let mut acc_r = vec![zero; n_nodes];

    let mut kernels: Vec<(i64, FractionalDelayKernel)> = Vec::new();
    let mut loaded = usize::MAX;
    for t in 0..duration {
        let scenario = t / net.scenario_length;
        if scenario != loaded {
            kernels = net.schedule[scenario]
                .iter()
                .map(|l| {
                    let whole = l.delay_samples.floor();
                    (whole as i64, FractionalDelayKernel::new(l.delay_samples - whole))
                })
                .collect();
            loaded = scenario;
        }
        for (li, l) in net.schedule[scenario].iter().enumerate() {
            let (whole, kernel) = &kernels[li];
            let center = t as i64 - whole;
            let mut value = zero;
            if l.g_s1 != 0.0 {
                if let Some(s1) = &net.nodes[l.src].source {
                    value += kernel.interpolate(s1, center, t) * l.g_s1;
                }
            }
            if l.g_v != 0.0 && net.nodes[l.src].reflects {
                value += kernel.interpolate(&v[l.src], center, t) * l.g_v;
            }
            link_out[li] = value * doppler_rotation(l.doppler_hz, t as i64, net.sample_rate);
        }
        acc_v.iter_mut().for_each(|z| *z = zero);
        acc_r.iter_mut().for_each(|z| *z = zero);
        for (l, &out) in net.schedule[scenario].iter().zip(&link_out) {
            acc_v[l.dst] += out * l.alpha;
            acc_r[l.dst] += out * l.g_r;
        }
        for i in 0..n_nodes {
            if net.nodes[i].reflects {
                v[i][t] = acc_v[i];
            }
            if let Some(r) = &mut r[i] {
                r[t] = acc_r[i];
            }
        }
    }
    Ok(r)
}
