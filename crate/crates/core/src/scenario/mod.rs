//! Scenario programming: scene description, per-frame kinematics, solving
//! frames into per-link model parameters, and the binary configuration
//! packets that reprogram the accelerator at scenario boundaries.

mod frame;
mod scene;
mod scp;
mod solve;
mod update;

pub use crate::error::ScenarioError;
pub use frame::{frame_generate, Frame, ObjectState, Quaternion};
pub use scene::{NodeRole, Scene, SceneObject, Waveform};
pub use scp::{
    decode_stream, encode_stream, scp_decode, scp_encode, ScenarioConfigPacket, ScpLink, SCP_HEADER_BYTES,
    SCP_LINK_BYTES, SCP_MAGIC, SCP_VERSION,
};
pub use solve::{decompose_delay, solve_frame, solve_frames, DelaySplit, SolveOptions, SolvedFrame};
pub use update::{su_apply, ScenarioRegisters};
