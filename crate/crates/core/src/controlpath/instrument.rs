use serde::{Deserialize, Serialize};

/// Access counters of one or more delay controllers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instrumentation {
    pub cycles: u64,
    pub bank_reads: u64,
    pub bank_writes: u64,
    /// Read pointers crossing into the next bank's LDDC.
    pub handoffs: u64,
    /// Grouped (non-header) outputs, summed over scenarios.
    pub collisions: u64,
    pub groups: u64,
    pub prefetch_resident: u64,
    pub prefetch_streaming: u64,
    /// Planned prefetch samples that had not arrived by the boundary.
    pub prefetch_underflows: u64,
    /// Second access to a single-port bank in one cycle. Must stay zero.
    pub port_conflicts: u64,
    /// Reads at delays in ((P-1)S, PS] that share the bank being written.
    pub rw_shared_bank: u64,
    /// Outputs whose delay was below one bank and were emitted as zeros,
    /// summed over scenarios.
    pub suppressed_outputs: u64,
    pub scenarios: u64,
}

impl Instrumentation {
    pub fn merge(&mut self, o: &Instrumentation) {
        self.cycles = self.cycles.max(o.cycles);
        self.bank_reads += o.bank_reads;
        self.bank_writes += o.bank_writes;
        self.handoffs += o.handoffs;
        self.collisions += o.collisions;
        self.groups += o.groups;
        self.prefetch_resident += o.prefetch_resident;
        self.prefetch_streaming += o.prefetch_streaming;
        self.prefetch_underflows += o.prefetch_underflows;
        self.port_conflicts += o.port_conflicts;
        self.rw_shared_bank += o.rw_shared_bank;
        self.suppressed_outputs += o.suppressed_outputs;
        self.scenarios = self.scenarios.max(o.scenarios);
    }
}
