use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::controlpath::{min_emulable_delay, FifoGeometry};
use crate::SPEED_OF_LIGHT;

/// Hardware configuration of one accelerator build.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: &'static str,
    /// Sub-banks per SIMO-FIFO (`P`).
    pub banks: u32,
    /// Samples per sub-bank (`S`).
    pub bank_depth: u32,
    /// Depth of each collision store (`R`).
    pub rtr_depth: u32,
    pub sample_rate: f64,
    /// Cycles from a node's input to its output, excluding the FIFO.
    pub compute_latency: u32,
}

/// Test chip: 16 banks of 1K samples at 518 MHz.
pub const ASIC4: Preset =
    Preset { name: "asic4", banks: 16, bank_depth: 1024, rtr_depth: 256, sample_rate: 518e6, compute_latency: 124 };
/// FPGA build with 512-sample banks.
pub const FPGA9: Preset =
    Preset { name: "fpga9", banks: 40, bank_depth: 512, rtr_depth: 512, sample_rate: 215e6, compute_latency: 124 };
/// FPGA build with 1K-sample banks.
pub const FPGA6: Preset =
    Preset { name: "fpga6", banks: 20, bank_depth: 1024, rtr_depth: 1024, sample_rate: 215e6, compute_latency: 124 };
/// Simulation-only build at 2.5 GS/s with a 48K-sample FIFO.
pub const SIM2G5: Preset =
    Preset { name: "sim2g5", banks: 48, bank_depth: 1024, rtr_depth: 1024, sample_rate: 2.5e9, compute_latency: 124 };

pub const PRESETS: [Preset; 4] = [ASIC4, FPGA9, FPGA6, SIM2G5];

impl Preset {
    pub fn by_name(name: &str) -> Result<Preset, HarnessError> {
        PRESETS.iter().find(|p| p.name == name).copied().ok_or_else(|| HarnessError::UnknownPreset(name.into()))
    }

    pub fn geometry(&self) -> FifoGeometry {
        FifoGeometry { banks: self.banks, bank_depth: self.bank_depth, rtr_depth: self.rtr_depth }
    }

    /// Smallest emulable total delay in samples.
    pub fn min_total_delay(&self) -> u32 {
        min_emulable_delay(self.bank_depth, self.compute_latency)
    }

    /// Largest emulable total delay in samples.
    pub fn max_total_delay(&self) -> u32 {
        self.geometry().max_delay() + self.compute_latency
    }

    /// One-way distance matching the minimum delay at `sample_rate`.
    pub fn min_range_m(&self, sample_rate: f64) -> f64 {
        self.min_total_delay() as f64 * SPEED_OF_LIGHT / sample_rate
    }

    pub fn max_range_m(&self, sample_rate: f64) -> f64 {
        self.max_total_delay() as f64 * SPEED_OF_LIGHT / sample_rate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_limits() {
        let p = Preset::by_name("asic4").unwrap();
        assert_eq!(p.geometry().max_delay(), 16384);
        assert_eq!(p.min_total_delay(), 1148);
        assert!((p.min_range_m(518e6) - 664.4).abs() < 0.1);
        assert!((FPGA6.min_range_m(215e6) - 1600.8).abs() < 0.1);
        assert!(matches!(Preset::by_name("nope"), Err(HarnessError::UnknownPreset(_))));
        for p in PRESETS {
            p.geometry().validate().unwrap();
            assert!(p.compute_latency >= 2);
        }
    }
}
