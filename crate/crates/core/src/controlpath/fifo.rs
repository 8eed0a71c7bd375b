use serde::{Deserialize, Serialize};

use super::ControlError;
use crate::numerics::ComplexSample;
use crate::SPEED_OF_LIGHT;

/// Bank geometry of a SIMO-FIFO and its collision stores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FifoGeometry {
    /// Number of sub-banks `P`.
    pub banks: u32,
    /// Samples per bank `S`.
    pub bank_depth: u32,
    /// Depth of each RTR / PB.
    pub rtr_depth: u32,
}

impl FifoGeometry {
    pub fn validate(&self) -> Result<(), ControlError> {
        if self.banks < 2 || self.bank_depth == 0 || self.rtr_depth == 0 {
            return Err(ControlError::Geometry(format!(
                "need at least 2 banks and non-zero depths, got P={} S={} R={}",
                self.banks, self.bank_depth, self.rtr_depth
            )));
        }
        if self.banks.checked_mul(self.bank_depth).is_none() {
            return Err(ControlError::Geometry("total depth overflows".into()));
        }
        Ok(())
    }

    /// `P * S` samples.
    pub fn total_depth(&self) -> u32 {
        self.banks * self.bank_depth
    }

    /// Largest supported buffer delay.
    pub fn max_delay(&self) -> u32 {
        self.total_depth()
    }

    /// Smallest buffer delay whose read never needs the bank being written.
    pub fn min_delay(&self) -> u32 {
        self.bank_depth
    }

    pub fn address(&self, index: u64) -> u32 {
        (index % self.total_depth() as u64) as u32
    }

    pub fn bank_of(&self, index: u64) -> u32 {
        self.address(index) / self.bank_depth
    }
}

/// Buffer delay `round(d * f / c) - compute_latency` in cycles.
pub fn buffer_delay(distance_m: f64, clock_hz: f64, compute_latency: u32) -> Result<u32, ControlError> {
    let delay = (distance_m * clock_hz / SPEED_OF_LIGHT).round() as i64 - compute_latency as i64;
    if delay < 0 {
        return Err(ControlError::BelowMinimumRange { distance_m, delay });
    }
    Ok(delay as u32)
}

/// Smallest total sample delay a node can emulate: one bank plus the
/// compute latency.
pub fn min_emulable_delay(bank_depth: u32, compute_latency: u32) -> u32 {
    bank_depth + compute_latency
}

/// The sample store. Sample `i` lives at address `i mod (P * S)` and is
/// never moved; only the pointers advance.
#[derive(Clone, Debug)]
pub struct SimoFifo {
    geometry: FifoGeometry,
    store: Vec<ComplexSample>,
    written: u64,
}

impl SimoFifo {
    pub fn new(geometry: FifoGeometry) -> Self {
        Self { geometry, store: vec![ComplexSample::ZERO; geometry.total_depth() as usize], written: 0 }
    }

    pub fn geometry(&self) -> &FifoGeometry {
        &self.geometry
    }

    /// Index of the next sample to be written; the write pointer is its
    /// address.
    pub fn write_index(&self) -> u64 {
        self.written
    }

    pub fn write_ptr(&self) -> u32 {
        self.geometry.address(self.written)
    }

    /// Reads stream sample `index`, which must still be resident.
    pub fn read(&self, index: u64) -> ComplexSample {
        debug_assert!(index < self.written && self.written - index <= self.geometry.total_depth() as u64);
        self.store[self.geometry.address(index) as usize]
    }

    pub fn write(&mut self, sample: ComplexSample) {
        let addr = self.geometry.address(self.written) as usize;
        self.store[addr] = sample;
        self.written += 1;
    }
}
