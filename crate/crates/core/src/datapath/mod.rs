//! Cycle-level models of the per-node compute engines.
//!
//! All arithmetic goes through [`crate::numerics`]: samples are binary16,
//! filter taps are 10-bit minifloats widened exactly, and each engine
//! quantizes once at its output unless documented otherwise.

mod doppler;
mod drfg;
mod fdc;
mod stage;

pub use crate::error::DatapathError;
pub use doppler::{
    doppler_coefficient, phase_step, DopplerBank, DopplerFsmState, SineLut, GENERATION_CYCLES, LUT_SEGMENTS,
    MAX_OUTPUTS_PER_FSM, UPDATE_PERIOD,
};
pub use drfg::{drfg_step, DrfgConfig, SignalSource, MAX_DRFG_PERIOD, MIN_DUTY_CYCLE};
pub use fdc::{fdc_apply, fdc_apply_f16, lagrange4, FdcTaps, FdcWindow, FDC_LAGS};
pub use stage::{apply_output_stage, receiver_accumulate, AdderTree, OutputGains};
