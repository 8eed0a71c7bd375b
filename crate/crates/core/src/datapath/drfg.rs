use serde::{Deserialize, Serialize};

use super::DatapathError;
use crate::numerics::ComplexSample;

/// Longest programmable DRFG period, in samples.
pub const MAX_DRFG_PERIOD: u32 = 2048;
/// Smallest programmable duty cycle (1/32).
pub const MIN_DUTY_CYCLE: f64 = 0.03125;

/// Digital RF generator program: a periodic I/Q pattern whose first
/// `round(duty_cycle * period)` slots are on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrfgConfig {
    period: u32,
    duty_cycle: f64,
    iq_pattern: Vec<ComplexSample>,
}

impl DrfgConfig {
    pub fn new(period: u32, duty_cycle: f64, iq_pattern: Vec<ComplexSample>) -> Result<Self, DatapathError> {
        if !(1..=MAX_DRFG_PERIOD).contains(&period) {
            return Err(DatapathError::Drfg(format!("period {period} outside 1..={MAX_DRFG_PERIOD}")));
        }
        if !(MIN_DUTY_CYCLE - 1e-12..=1.0).contains(&duty_cycle) {
            return Err(DatapathError::Drfg(format!("duty cycle {duty_cycle} outside [1/32, 1]")));
        }
        let on = Self::on_slots_for(period, duty_cycle);
        if on == 0 {
            return Err(DatapathError::Drfg(format!("duty cycle {duty_cycle} leaves no active sample in period {period}")));
        }
        if iq_pattern.len() != on {
            return Err(DatapathError::Drfg(format!(
                "pattern has {} samples but the duty window has {on} slots",
                iq_pattern.len()
            )));
        }
        Ok(Self { period, duty_cycle, iq_pattern })
    }

    fn on_slots_for(period: u32, duty_cycle: f64) -> usize {
        (duty_cycle * period as f64).round() as usize
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn duty_cycle(&self) -> f64 {
        self.duty_cycle
    }

    pub fn on_slots(&self) -> usize {
        self.iq_pattern.len()
    }

    pub fn pattern(&self) -> &[ComplexSample] {
        &self.iq_pattern
    }
}

/// Output of the generator at `cycle`.
pub fn drfg_step(cfg: &DrfgConfig, cycle: u64) -> ComplexSample {
    let slot = (cycle % cfg.period as u64) as usize;
    cfg.iq_pattern.get(slot).copied().unwrap_or(ComplexSample::ZERO)
}

/// Transmit-side sample source of a node.
#[derive(Clone, Debug, PartialEq)]
pub enum SignalSource {
    Drfg(DrfgConfig),
    /// `pattern` repeated every `pri` cycles, zero in between. Unlike the
    /// DRFG the repetition interval is not limited to 2048 samples, which
    /// keeps long round trips unambiguous.
    PulseTrain { pattern: Vec<ComplexSample>, pri: u64 },
}

impl SignalSource {
    pub fn sample(&self, cycle: u64) -> ComplexSample {
        match self {
            SignalSource::Drfg(cfg) => drfg_step(cfg, cycle),
            SignalSource::PulseTrain { pattern, pri } => {
                pattern.get((cycle % pri) as usize).copied().unwrap_or(ComplexSample::ZERO)
            }
        }
    }
}
