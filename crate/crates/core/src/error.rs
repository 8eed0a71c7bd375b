//! Error types for every module, plus the crate-wide [`Error`].

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GoldenError {
    #[error("stream {index} has length {len}, expected {expected}")]
    LengthMismatch { index: usize, len: usize, expected: usize },
    #[error("{gains} gains given for {streams} streams")]
    GainCountMismatch { gains: usize, streams: usize },
    #[error("propagation delay must be positive, got {tau} s")]
    NonPositiveDelay { tau: f64 },
    #[error("link {src}->{dst}: delay of {samples} samples is below one sample period")]
    SubSampleDelay { src: usize, dst: usize, samples: f64 },
    #[error("invalid network: {0}")]
    Network(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatapathError {
    #[error("invalid DRFG configuration: {0}")]
    Drfg(String),
    #[error(
        "{requested} outputs configured on one Doppler FSM (max {max}); add a second FSM unit \
         or reduce the Doppler update rate"
    )]
    TooManyDopplerOutputs { requested: usize, max: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("distance {distance_m} m is below the minimum emulable range (buffer delay would be {delay})")]
    BelowMinimumRange { distance_m: f64, delay: i64 },
    #[error("output {output}: buffer delay {delay} exceeds maximum emulation range of {max} samples")]
    ExceedsMaxRange { output: usize, delay: u32, max: u32 },
    #[error("output {output}: buffer delay {delay} is below the minimum of {min} samples for this bank depth")]
    BelowMinDelay { output: usize, delay: u32, min: u32 },
    #[error(
        "output {member} (offset {offset} from header {header}) is a collision beyond protection range \
         (RTR depth {depth})"
    )]
    CollisionBeyondProtection { header: usize, member: usize, offset: u32, depth: u32 },
    #[error("expected delays for {expected} outputs, got {got}")]
    OutputCount { expected: usize, got: usize },
    #[error("next scenario staged at cycle {staged_at}, outside the look-ahead window before boundary {boundary}")]
    StagedLate { staged_at: u64, boundary: u64 },
    #[error("invalid FIFO geometry: {0}")]
    Geometry(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("invalid scene: {0}")]
    Scene(String),
    #[error("scene file: {0}")]
    Parse(String),
    #[error(
        "link {src}->{dst}: distance {distance_m:.3} m is below the minimum emulable range of {min_m:.3} m"
    )]
    BelowMinimumRange { src: u32, dst: u32, distance_m: f64, min_m: f64 },
    #[error("link {src}->{dst}: distance {distance_m:.3} m exceeds the maximum emulation range of {max_m:.3} m")]
    ExceedsMaxRange { src: u32, dst: u32, distance_m: f64, max_m: f64 },
    #[error("SCP parse error at byte {offset}: {reason}")]
    ScpParse { offset: usize, reason: String },
    #[error("SCP for scenario {scenario} staged at cycle {staged_at}, after its boundary at cycle {boundary}")]
    StagedLate { scenario: u32, staged_at: u64, boundary: u64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("cycle {cycle}, node {node}: {source}")]
    Node { cycle: u64, node: u32, source: ControlError },
    #[error("node {node}: {source}")]
    NodeSetup { node: u32, source: DatapathError },
    #[error("{have} SCPs staged but {need} scenarios are required for {cycles} cycles")]
    MissingScps { have: usize, need: usize, cycles: u64 },
    #[error("SCP {scenario} does not match the scene topology: {reason}")]
    TopologyMismatch { scenario: usize, reason: String },
    #[error("unknown preset '{0}' (expected one of asic4, fpga9, fpga6, sim2g5)")]
    UnknownPreset(String),
    #[error("artifact: {0}")]
    Artifact(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Any error raised by this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Golden(#[from] GoldenError),
    #[error(transparent)]
    Datapath(#[from] DatapathError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
