//! Cycle-level simulator of a near-memory RF channel emulation accelerator.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: binary16 / 10-bit minifloat arithmetic of the datapath.
//! * [`golden`]: double-precision reference model used as the oracle.
//! * [`datapath`]: per-node compute engines (source, FDC, Doppler, adder tree).
//! * [`controlpath`]: sub-banked SIMO-FIFO, delay distribution and collision handling.
//! * [`scenario`]: scenes, frames, parameter solving and configuration packets.
//! * [`harness`]: the cycle scheduler, range analysis and run artifacts.

pub mod controlpath;
pub mod datapath;
pub mod error;
pub mod golden;
pub mod harness;
pub mod numerics;
pub mod scenario;

pub use error::{Error, Result};
pub use numerics::{cmac, quantize_f10, quantize_f16, ComplexSample, MiniF10, F16};

/// Propagation speed used for every delay/range conversion, in m/s.
pub const SPEED_OF_LIGHT: f64 = 2.998e8;
