//! Double-precision reference model of the direct-path channel.
//!
//! Every node forms an intermediate signal from its inputs, emits one
//! delayed, scaled and Doppler-rotated copy per outgoing link, and receivers
//! form a weighted sum of what arrives. Delays are exact (band-limited
//! interpolation), nothing is quantized, and multi-bounce paths appear
//! through the sample-by-sample feedback of the network simulation.

pub mod delay;
mod gains;
mod network;
mod signal;

pub use crate::error::GoldenError;
pub use delay::{delay_stream, FractionalDelayKernel, KAISER_BETA, SINC_TAPS};
pub use gains::{AngularTable, AntennaPattern, LinkParams, PathLossModel, RcsProfile, SphericalAngle};
pub use network::{run_network, ExactLink, GoldenNetwork, GoldenNode};
pub use signal::{doppler_rotation, intermediate_signal, output_signal, receive_signal, LinkGains};
