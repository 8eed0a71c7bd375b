//! Near-memory sample distribution.
//!
//! Each node writes one sample per cycle into a sub-banked SIMO-FIFO and
//! serves every outgoing link from it at that link's buffer delay. Banks
//! are single-ported, so outputs whose delays fall within one bank depth
//! of each other are grouped: only the group header reads the FIFO and its
//! stream is multicast into a dual-ported real-time register (RTR) from
//! which the other members read at their offsets. History a member needs
//! right after a scenario change is staged one scenario ahead in a
//! prefetch buffer (PB); RTR and PB swap roles at every boundary.

mod controller;
mod fifo;
mod gddc;
mod instrument;
mod pec;

pub use crate::error::ControlError;
pub use controller::{DelayController, LddcState};
pub use fifo::{buffer_delay, min_emulable_delay, FifoGeometry, SimoFifo};
pub use gddc::{gddc_parse, CollisionGroup, DelayMode, LddcConfig, OutputRoute, PrefetchPlan, PrefetchRange, PrefetchSource, ScenarioPlan};
pub use instrument::Instrumentation;
pub use pec::Pec;
