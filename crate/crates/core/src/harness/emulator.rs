use serde::{Deserialize, Serialize};

use super::node::DutNode;
use super::waveform::signal_source;
use super::{effective_sample_rate, scenarios_needed, HarnessError, Preset};
use crate::controlpath::{DelayMode, Instrumentation, LddcState};
use crate::numerics::ComplexSample;
use crate::scenario::{ScenarioConfigPacket, Scene};

/// Knobs of a run that do not change its result, except `mode`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// How buffer delays below one bank depth are handled.
    pub mode: DelayMode,
    /// Worker threads for the per-cycle node updates; 1 runs inline.
    pub threads: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { mode: DelayMode::Strict, threads: 1 }
    }
}

/// Stream recorded by one receiving node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Capture {
    pub node: u32,
    pub samples: Vec<ComplexSample>,
}

/// Final controller state of one node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeReport {
    pub node: u32,
    pub outputs: usize,
    pub instrumentation: Instrumentation,
    pub lddc: Vec<LddcState>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmulationRun {
    pub preset: String,
    pub sample_rate: f64,
    pub n_cycles: u64,
    pub scenario_length: u64,
    pub scps: usize,
    pub captures: Vec<Capture>,
    pub nodes: Vec<NodeReport>,
}

impl EmulationRun {
    pub fn capture(&self, node: u32) -> Option<&[ComplexSample]> {
        self.captures.iter().find(|c| c.node == node).map(|c| c.samples.as_slice())
    }

    /// All node counters summed.
    pub fn total_instrumentation(&self) -> Instrumentation {
        let mut total = Instrumentation::default();
        for n in &self.nodes {
            total.merge(&n.instrumentation);
        }
        total
    }
}

fn check_topology(scene: &Scene, scps: &[ScenarioConfigPacket]) -> Result<(), HarnessError> {
    let want: Vec<(u32, u32)> = scene.links().iter().map(|&(i, j)| (scene.objects[i].id, scene.objects[j].id)).collect();
    for (k, scp) in scps.iter().enumerate() {
        let got: Vec<(u32, u32)> = scp.links.iter().map(|l| (l.src as u32, l.dst as u32)).collect();
        if got != want {
            let reason = format!("expected {} links {:?}, packet has {} links", want.len(), want, got.len());
            return Err(HarnessError::TopologyMismatch { scenario: k, reason });
        }
    }
    Ok(())
}

/// Cycle-level run of `scene` on `preset` for `n_cycles`.
///
/// Packet `k` programs scenario `k` (cycles `[k*len, (k+1)*len)`); it is
/// staged at the start of scenario `k - 1` and committed at its boundary.
/// Every cycle has two phases: all nodes compute from the samples that
/// arrived this cycle, then all emissions are exchanged. Nodes never see
/// each other's same-cycle state, so the node updates may run on any
/// number of threads with bitwise identical results.
pub fn run_emulation(
    scene: &Scene,
    preset: &Preset,
    scps: &[ScenarioConfigPacket],
    n_cycles: u64,
    opts: &RunOptions,
) -> Result<EmulationRun, crate::Error> {
    scene.validate()?;
    let need = scenarios_needed(scene, n_cycles).max(1);
    if scps.len() < need {
        return Err(HarnessError::MissingScps { have: scps.len(), need, cycles: n_cycles }.into());
    }
    check_topology(scene, scps)?;
    let fs = effective_sample_rate(scene, preset);
    let source = signal_source(&scene.waveform)?;
    let links = scene.links();
    let mut nodes = Vec::with_capacity(scene.objects.len());
    for (i, o) in scene.objects.iter().enumerate() {
        let in_links = (0..links.len()).filter(|&l| links[l].1 == i).collect();
        let out_links = (0..links.len()).filter(|&l| links[l].0 == i).collect();
        let src = o.role.has_source().then(|| source.clone());
        nodes.push(DutNode::new(
            o.id,
            o.role,
            src,
            in_links,
            out_links,
            &scps[0],
            preset,
            fs,
            opts.mode,
            n_cycles as usize,
        )?);
    }

    let len = scene.scenario_length;
    let mut arrivals = vec![ComplexSample::ZERO; links.len()];
    let mut simulate = |nodes: &mut Vec<DutNode>, parallel: bool| -> Result<(), HarnessError> {
        for c in 0..n_cycles {
            if parallel {
                use rayon::prelude::*;
                nodes.par_iter_mut().try_for_each(|n| n.step(c, len, scps, &arrivals))?;
            } else {
                nodes.iter_mut().try_for_each(|n| n.step(c, len, scps, &arrivals))?;
            }
            for n in nodes.iter() {
                for (&l, &x) in n.out_links.iter().zip(&n.emit) {
                    arrivals[l] = x;
                }
            }
        }
        Ok(())
    };
    if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
        pool.install(|| simulate(&mut nodes, true))?;
    } else {
        simulate(&mut nodes, false)?;
    }

    Ok(EmulationRun {
        preset: preset.name.to_string(),
        sample_rate: fs,
        n_cycles,
        scenario_length: len,
        scps: scps.len(),
        captures: nodes
            .iter_mut()
            .filter_map(|n| n.capture.take().map(|samples| Capture { node: n.id, samples }))
            .collect(),
        nodes: nodes
            .iter()
            .map(|n| NodeReport {
                node: n.id,
                outputs: n.out_links.len(),
                instrumentation: n.instrumentation(),
                lddc: n.lddc_states(),
            })
            .collect(),
    })
}
