use super::HarnessError;
use crate::controlpath::{DelayController, DelayMode, LddcState};
use crate::datapath::{apply_output_stage, fdc_apply_f16, AdderTree, DopplerBank, FdcWindow, OutputGains, SignalSource};
use crate::numerics::{ComplexSample, F16};
use crate::scenario::{su_apply, NodeRole, ScenarioConfigPacket, ScenarioRegisters};
use crate::controlpath::ControlError;

use super::Preset;

/// One accelerator node: source or passive adder tree, pre-FIFO pipeline,
/// SIMO-FIFO with its controller, and one FDC / output stage per outgoing
/// link.
///
/// Timing: the node value `x[c]` enters a `compute_latency - 2` stage
/// pipeline, then the FIFO. The FDC sees the delayed reads with one sample
/// of look-ahead, and the emission of cycle `c` arrives at its destination
/// on cycle `c + 1`, so an arrival lags `x` by `buffer_delay +
/// compute_latency + mu` samples.
#[derive(Clone, Debug)]
pub(crate) struct DutNode {
    pub id: u32,
    role: NodeRole,
    sample_rate: f64,
    source: Option<SignalSource>,
    pub in_links: Vec<usize>,
    pub out_links: Vec<usize>,
    regs: ScenarioRegisters,
    in_gains: Vec<F16>,
    out_gains: Vec<OutputGains>,
    taps: Vec<[F16; 4]>,
    pipe: Vec<ComplexSample>,
    pipe_pos: usize,
    controller: Option<DelayController>,
    reads: Vec<ComplexSample>,
    windows: Vec<FdcWindow>,
    doppler: DopplerBank,
    tree: AdderTree,
    inputs: Vec<ComplexSample>,
    pub emit: Vec<ComplexSample>,
    pub capture: Option<Vec<ComplexSample>>,
}

fn delays(scp: &ScenarioConfigPacket, out_links: &[usize]) -> Vec<u32> {
    out_links.iter().map(|&l| scp.links[l].buffer_delay).collect()
}

impl DutNode {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: u32,
        role: NodeRole,
        source: Option<SignalSource>,
        in_links: Vec<usize>,
        out_links: Vec<usize>,
        first: &ScenarioConfigPacket,
        preset: &Preset,
        sample_rate: f64,
        mode: DelayMode,
        capacity: usize,
    ) -> Result<Self, HarnessError> {
        let controller = if out_links.is_empty() {
            None
        } else {
            let ctl = DelayController::new(preset.geometry(), &delays(first, &out_links), mode)
                .map_err(|source| HarnessError::Node { cycle: 0, node: id, source })?;
            Some(ctl)
        };
        let doppler_hz: Vec<f64> = out_links.iter().map(|&l| first.links[l].doppler_hz).collect();
        let n_out = out_links.len();
        let mut node = Self {
            id,
            role,
            sample_rate,
            source,
            in_links,
            out_links,
            regs: ScenarioRegisters::new(first.clone()),
            in_gains: Vec::new(),
            out_gains: Vec::new(),
            taps: Vec::new(),
            pipe: vec![ComplexSample::ZERO; preset.compute_latency as usize - 2],
            pipe_pos: 0,
            controller,
            reads: vec![ComplexSample::ZERO; n_out],
            windows: vec![FdcWindow::default(); n_out],
            doppler: DopplerBank::new(&doppler_hz, sample_rate, 0),
            tree: AdderTree::default(),
            inputs: Vec::new(),
            emit: vec![ComplexSample::ZERO; n_out],
            capture: role.captures().then(|| Vec::with_capacity(capacity)),
        };
        node.load_registers();
        Ok(node)
    }

    fn load_registers(&mut self) {
        let scp = self.regs.active();
        let role = self.role;
        self.in_gains = self
            .in_links
            .iter()
            .map(|&l| if role.reflects() { scp.links[l].alpha } else { scp.links[l].g_r })
            .collect();
        self.out_gains =
            self.out_links.iter().map(|&l| OutputGains { g_t: scp.links[l].g_t, beta_rho: scp.links[l].beta_rho }).collect();
        self.taps = self.out_links.iter().map(|&l| scp.links[l].fdc_taps.widened()).collect();
    }

    /// Scenario bookkeeping at a boundary: commit the shadow registers and
    /// stage the following packet.
    fn boundary(&mut self, c: u64, next: Option<&ScenarioConfigPacket>, boundary: u64) -> Result<(), HarnessError> {
        let id = self.id;
        if self.regs.tick(c) {
            self.load_registers();
            let hz: Vec<f64> = self.out_links.iter().map(|&l| self.regs.active().links[l].doppler_hz).collect();
            self.doppler
                .set_frequencies(&hz, self.sample_rate)
                .map_err(|source| HarnessError::NodeSetup { node: id, source })?;
        }
        if let Some(scp) = next {
            let late = |_| HarnessError::Node {
                cycle: c,
                node: id,
                source: ControlError::StagedLate { staged_at: c, boundary },
            };
            su_apply(&mut self.regs, scp.clone(), c, boundary).map_err(late)?;
            if let Some(ctl) = &mut self.controller {
                ctl.stage(&delays(scp, &self.out_links), boundary)
                    .map_err(|source| HarnessError::Node { cycle: c, node: id, source })?;
            }
        }
        Ok(())
    }

    /// One clock. `arrivals[l]` is what link `l` delivered this cycle.
    pub fn step(
        &mut self,
        c: u64,
        scenario_length: u64,
        scps: &[ScenarioConfigPacket],
        arrivals: &[ComplexSample],
    ) -> Result<(), HarnessError> {
        if c % scenario_length == 0 {
            let next = (c / scenario_length + 1) as usize;
            self.boundary(c, scps.get(next), next as u64 * scenario_length)?;
        }
        self.inputs.clear();
        self.inputs.extend(self.in_links.iter().map(|&l| arrivals[l]));
        let combined = self.tree.sum(&self.inputs, &self.in_gains);
        if let Some(cap) = &mut self.capture {
            cap.push(combined);
        }
        let Some(ctl) = &mut self.controller else {
            return Ok(());
        };
        let x = match &self.source {
            Some(src) => src.sample(c),
            None => combined,
        };
        let incoming = if self.pipe.is_empty() {
            x
        } else {
            let out = std::mem::replace(&mut self.pipe[self.pipe_pos], x);
            self.pipe_pos = (self.pipe_pos + 1) % self.pipe.len();
            out
        };
        ctl.cycle(incoming, &mut self.reads);
        self.doppler.cycle();
        let has_source = self.source.is_some();
        for k in 0..self.emit.len() {
            self.windows[k].push(self.reads[k]);
            let y = fdc_apply_f16(self.windows[k].window(), &self.taps[k]);
            let coeff = self.doppler.coefficient(k);
            self.emit[k] = if has_source {
                apply_output_stage(ComplexSample::ZERO, y, self.out_gains[k], coeff)
            } else {
                apply_output_stage(y, ComplexSample::ZERO, self.out_gains[k], coeff)
            };
        }
        Ok(())
    }

    pub fn instrumentation(&self) -> crate::controlpath::Instrumentation {
        self.controller.as_ref().map(|c| c.instrumentation().clone()).unwrap_or_default()
    }

    pub fn lddc_states(&self) -> Vec<LddcState> {
        self.controller.as_ref().map(|c| c.lddc_states()).unwrap_or_default()
    }
}
