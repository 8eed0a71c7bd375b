use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::gddc::{gddc_parse, DelayMode, OutputRoute, PrefetchPlan, ScenarioPlan};
use super::{ControlError, FifoGeometry, Instrumentation, Pec, SimoFifo};
use crate::numerics::ComplexSample;

/// Snapshot of one local delay-distribution controller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LddcState {
    pub bank_id: u32,
    /// Row of the active read pointer in this bank, if any.
    pub read_ptr: Option<u32>,
    pub active_outputs: Vec<usize>,
    pub next_lddc: u32,
}

/// One staged sample: FIFO index -> PB slot of `header` at header time `t`.
#[derive(Clone, Copy, Debug)]
struct PrefetchJob {
    index: u64,
    header: usize,
    t: i64,
}

#[derive(Clone, Debug)]
struct Staged {
    plan: ScenarioPlan,
    boundary: u64,
    prefetch: PrefetchPlan,
    resident: VecDeque<PrefetchJob>,
    streaming: VecDeque<PrefetchJob>,
}

/// GDDC + LDDC ring + PECs around one node's SIMO-FIFO.
///
/// Each call to [`cycle`](Self::cycle) is one clock: all reads first
/// (direct outputs, then RTR multicast and member reads, then prefetch
/// reads on idle banks), then the FIFO write and the streaming prefetch
/// fork.
#[derive(Clone, Debug)]
pub struct DelayController {
    geometry: FifoGeometry,
    mode: DelayMode,
    fifo: SimoFifo,
    plan: ScenarioPlan,
    staged: Option<Staged>,
    pecs: Vec<Pec>,
    bank_stamp: Vec<u64>,
    instr: Instrumentation,
}

impl DelayController {
    /// Controller whose first scenario uses `delays` from cycle 0.
    pub fn new(geometry: FifoGeometry, delays: &[u32], mode: DelayMode) -> Result<Self, ControlError> {
        let plan = gddc_parse(delays, &geometry, mode)?;
        let mut instr = Instrumentation::default();
        Self::count_plan(&mut instr, &plan);
        Ok(Self {
            geometry,
            mode,
            fifo: SimoFifo::new(geometry),
            pecs: (0..delays.len()).map(|_| Pec::new(geometry.rtr_depth)).collect(),
            plan,
            staged: None,
            bank_stamp: vec![u64::MAX; geometry.banks as usize],
            instr,
        })
    }

    fn count_plan(instr: &mut Instrumentation, plan: &ScenarioPlan) {
        instr.scenarios += 1;
        instr.groups += plan.groups.len() as u64;
        instr.collisions += plan.groups.iter().map(|g| g.members.len() as u64).sum::<u64>();
        instr.suppressed_outputs += plan.routes.iter().filter(|r| **r == OutputRoute::Suppressed).count() as u64;
    }

    pub fn geometry(&self) -> &FifoGeometry {
        &self.geometry
    }

    pub fn outputs(&self) -> usize {
        self.plan.delays.len()
    }

    pub fn plan(&self) -> &ScenarioPlan {
        &self.plan
    }

    pub fn instrumentation(&self) -> &Instrumentation {
        &self.instr
    }

    /// Current clock cycle (the index of the next sample to be written).
    pub fn cycle_index(&self) -> u64 {
        self.fifo.write_index()
    }

    pub fn write_ptr(&self) -> u32 {
        self.fifo.write_ptr()
    }

    /// Read pointer of a direct output this cycle.
    pub fn read_ptr(&self, output: usize) -> Option<u32> {
        (self.plan.routes[output] == OutputRoute::Direct).then(|| {
            let idx = self.fifo.write_index() as i64 - self.plan.delays[output] as i64;
            idx.rem_euclid(self.geometry.total_depth() as i64) as u32
        })
    }

    /// Prefetch plan of the scenario currently staged, if any.
    pub fn staged_prefetch(&self) -> Option<&PrefetchPlan> {
        self.staged.as_ref().map(|s| &s.prefetch)
    }

    /// LDDC ring state this cycle.
    pub fn lddc_states(&self) -> Vec<LddcState> {
        let p = self.geometry.banks;
        let mut states: Vec<LddcState> = (0..p)
            .map(|b| LddcState { bank_id: b, read_ptr: None, active_outputs: Vec::new(), next_lddc: (b + 1) % p })
            .collect();
        for o in 0..self.outputs() {
            if let Some(addr) = self.read_ptr(o) {
                let s = &mut states[(addr / self.geometry.bank_depth) as usize];
                s.read_ptr = Some(addr % self.geometry.bank_depth);
                s.active_outputs.push(o);
            }
        }
        states
    }

    /// Stages the delays of the scenario starting at `boundary` (GDDC
    /// look-ahead). Must happen before the boundary; staging at the start
    /// of the preceding scenario leaves the whole scenario for prefetch.
    pub fn stage(&mut self, delays: &[u32], boundary: u64) -> Result<(), ControlError> {
        self.settle();
        let now = self.cycle_index();
        if now >= boundary || self.staged.is_some() {
            return Err(ControlError::StagedLate { staged_at: now, boundary });
        }
        if delays.len() != self.outputs() {
            return Err(ControlError::OutputCount { expected: self.outputs(), got: delays.len() });
        }
        let plan = gddc_parse(delays, &self.geometry, self.mode)?;
        let prefetch = plan.prefetch_plan(boundary, now);
        let mut resident = VecDeque::new();
        let mut streaming = VecDeque::new();
        let mut jobs = Vec::new();
        for r in &prefetch.ranges {
            self.pecs[r.header].clear_pb();
            for k in 0..r.len as i64 {
                let index = r.first_index + k;
                if index >= 0 {
                    jobs.push(PrefetchJob { index: index as u64, header: r.header, t: r.first_t + k });
                }
            }
        }
        jobs.sort_by_key(|j| (j.index, j.header));
        for j in jobs {
            if j.index < now {
                resident.push_back(j);
            } else {
                streaming.push_back(j);
            }
        }
        self.staged = Some(Staged { plan, boundary, prefetch, resident, streaming });
        Ok(())
    }

    /// Commits the staged plan once its boundary cycle has been reached.
    fn settle(&mut self) {
        if !self.staged.as_ref().is_some_and(|s| s.boundary == self.cycle_index()) {
            return;
        }
        let staged = self.staged.take().unwrap();
        self.instr.prefetch_underflows += (staged.resident.len() + staged.streaming.len()) as u64;
        for pec in &mut self.pecs {
            pec.swap();
        }
        Self::count_plan(&mut self.instr, &staged.plan);
        self.plan = staged.plan;
    }

    /// Marks a bank busy this cycle; returns false if it already was.
    fn claim(&mut self, bank: u32, cycle: u64) -> bool {
        let stamp = &mut self.bank_stamp[bank as usize];
        if *stamp == cycle {
            false
        } else {
            *stamp = cycle;
            true
        }
    }

    /// One clock: `incoming` is written, `out[o]` receives output `o`.
    pub fn cycle(&mut self, incoming: ComplexSample, out: &mut [ComplexSample]) {
        assert_eq!(out.len(), self.outputs(), "one slot per output");
        self.settle();
        let c = self.cycle_index();
        let g = self.geometry;
        let write_bank = g.bank_of(c);
        self.bank_stamp[write_bank as usize] = c;

        // Phase 1: reads.
        for o in 0..out.len() {
            out[o] = match self.plan.routes[o] {
                OutputRoute::Suppressed => ComplexSample::ZERO,
                OutputRoute::Member { .. } => continue,
                OutputRoute::Direct => {
                    let delay = self.plan.delays[o] as u64;
                    if delay > c {
                        ComplexSample::ZERO
                    } else {
                        let index = c - delay;
                        let bank = g.bank_of(index);
                        if bank == write_bank {
                            self.instr.rw_shared_bank += 1;
                        } else if !self.claim(bank, c) {
                            self.instr.port_conflicts += 1;
                        }
                        if index > 0 && g.address(index) % g.bank_depth == 0 {
                            self.instr.handoffs += 1;
                        }
                        self.instr.bank_reads += 1;
                        self.fifo.read(index)
                    }
                }
            };
        }
        for grp in &self.plan.groups {
            let pec = &mut self.pecs[grp.header];
            pec.rtr_write(c as i64, out[grp.header]);
            for &(m, offset) in &grp.members {
                out[m] = pec.rtr_read(c as i64 - offset as i64);
            }
        }
        if let Some(mut staged) = self.staged.take() {
            while let Some(job) = staged.resident.front().copied() {
                let bank = g.bank_of(job.index);
                if !self.claim(bank, c) {
                    break;
                }
                self.instr.bank_reads += 1;
                self.instr.prefetch_resident += 1;
                let x = self.fifo.read(job.index);
                self.pecs[job.header].pb_write(job.t, x);
                staged.resident.pop_front();
            }
            // Phase 2: write, forking staged samples into the PBs.
            while staged.streaming.front().is_some_and(|j| j.index == c) {
                let job = staged.streaming.pop_front().unwrap();
                self.pecs[job.header].pb_write(job.t, incoming);
                self.instr.prefetch_streaming += 1;
            }
            self.staged = Some(staged);
        }
        self.fifo.write(incoming);
        self.instr.bank_writes += 1;
        self.instr.cycles = c + 1;
    }
}
