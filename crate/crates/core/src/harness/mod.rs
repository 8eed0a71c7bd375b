//! Whole-system simulation: wiring scenes into cycle-level node models,
//! the matching reference-model run, range analysis and run artifacts.

mod analysis;
mod artifact;
mod compile;
mod emulator;
mod node;
mod precision;
mod preset;
mod waveform;

pub use crate::error::HarnessError;
pub use analysis::{
    compare_to_golden, detect_peaks, mainlobe_width, matched_filter, peak_ranges, range_metrics, GoldenComparison, Peak,
    RangeMode, RangeOptions, RangePeak, RangeReport, DEFAULT_MIN_SEPARATION, DEFAULT_THRESHOLD,
};
pub use artifact::{read_expected_ranges, write_correlation_csv, write_iq_csv, CaptureRecord, RunArtifact};
pub use compile::{
    compile_scene, effective_sample_rate, golden_network, run_golden, scenarios_needed, solve_options,
};
pub use emulator::{run_emulation, Capture, EmulationRun, NodeReport, RunOptions};
pub use precision::{precision_fixture, precision_study, PrecisionReport};
pub use preset::{Preset, ASIC4, FPGA6, FPGA9, PRESETS, SIM2G5};
pub use waveform::{pulse_interval, pulse_len, reference_chirp, signal_source, source_stream, widen, CHIRP_LEN};
