//! Binary scenario configuration packets.
//!
//! Little-endian layout:
//!
//! ```text
//! header (12 bytes): magic "DPCM" | version u16 | scenario_id u32 | link_count u16
//! link   (34 bytes): src u16 | dst u16 | buffer_delay u32 | mu_q16 u16 |
//!                    tap0..tap3 u16 (MiniF10 in the low 10 bits) |
//!                    alpha u16 | beta_rho u16 | g_t u16 | g_r u16 (F16 bits) |
//!                    doppler_hz f64
//! ```
//!
//! A packet stream is packets back to back.

use serde::{Deserialize, Serialize};

use super::ScenarioError;
use crate::datapath::FdcTaps;
use crate::numerics::{MiniF10, F16};

pub const SCP_MAGIC: &[u8; 4] = b"DPCM";
pub const SCP_VERSION: u16 = 1;
pub const SCP_HEADER_BYTES: usize = 12;
pub const SCP_LINK_BYTES: usize = 34;

/// Parameters of one directed link for one scenario.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScpLink {
    /// Object id of the emitter.
    pub src: u16,
    /// Object id of the destination.
    pub dst: u16,
    pub buffer_delay: u32,
    /// Fractional delay in units of 2^-16 samples.
    pub mu_q16: u16,
    pub fdc_taps: FdcTaps,
    pub alpha: F16,
    pub beta_rho: F16,
    pub g_t: F16,
    pub g_r: F16,
    pub doppler_hz: f64,
}

impl ScpLink {
    pub fn mu(&self) -> f64 {
        self.mu_q16 as f64 / 65536.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfigPacket {
    pub scenario_id: u32,
    pub links: Vec<ScpLink>,
}

pub fn scp_encode(scp: &ScenarioConfigPacket) -> Vec<u8> {
    assert!(scp.links.len() <= u16::MAX as usize, "too many links for one packet");
    let mut out = Vec::with_capacity(SCP_HEADER_BYTES + SCP_LINK_BYTES * scp.links.len());
    out.extend_from_slice(SCP_MAGIC);
    out.extend_from_slice(&SCP_VERSION.to_le_bytes());
    out.extend_from_slice(&scp.scenario_id.to_le_bytes());
    out.extend_from_slice(&(scp.links.len() as u16).to_le_bytes());
    for l in &scp.links {
        out.extend_from_slice(&l.src.to_le_bytes());
        out.extend_from_slice(&l.dst.to_le_bytes());
        out.extend_from_slice(&l.buffer_delay.to_le_bytes());
        out.extend_from_slice(&l.mu_q16.to_le_bytes());
        for t in l.fdc_taps.taps {
            out.extend_from_slice(&t.to_bits().to_le_bytes());
        }
        for g in [l.alpha, l.beta_rho, l.g_t, l.g_r] {
            out.extend_from_slice(&g.to_bits().to_le_bytes());
        }
        out.extend_from_slice(&l.doppler_hz.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self, what: &str) -> Result<[u8; N], ScenarioError> {
        let end = self.pos + N;
        let slice = self.bytes.get(self.pos..end).ok_or_else(|| ScenarioError::ScpParse {
            offset: self.pos,
            reason: format!("truncated {what}: need {N} bytes, {} left", self.bytes.len() - self.pos),
        })?;
        self.pos = end;
        Ok(slice.try_into().unwrap())
    }

    fn u16(&mut self, what: &str) -> Result<u16, ScenarioError> {
        Ok(u16::from_le_bytes(self.take(what)?))
    }

    fn u32(&mut self, what: &str) -> Result<u32, ScenarioError> {
        Ok(u32::from_le_bytes(self.take(what)?))
    }

    fn packet(&mut self) -> Result<ScenarioConfigPacket, ScenarioError> {
        let start = self.pos;
        if &self.take::<4>("magic")? != SCP_MAGIC {
            return Err(ScenarioError::ScpParse { offset: start, reason: "bad magic".into() });
        }
        let version_at = self.pos;
        let version = self.u16("version")?;
        if version != SCP_VERSION {
            return Err(ScenarioError::ScpParse { offset: version_at, reason: format!("unsupported version {version}") });
        }
        let scenario_id = self.u32("scenario id")?;
        let count = self.u16("link count")? as usize;
        let mut links = Vec::with_capacity(count);
        for _ in 0..count {
            let src = self.u16("link")?;
            let dst = self.u16("link")?;
            let buffer_delay = self.u32("link")?;
            let mu_q16 = self.u16("link")?;
            let mut taps = [MiniF10::ZERO; 4];
            for t in &mut taps {
                let at = self.pos;
                let bits = self.u16("link")?;
                *t = MiniF10::from_bits(bits).ok_or_else(|| ScenarioError::ScpParse {
                    offset: at,
                    reason: format!("tap pattern {bits:#06x} uses bits above the 10-bit field"),
                })?;
            }
            let alpha = F16::from_bits(self.u16("link")?);
            let beta_rho = F16::from_bits(self.u16("link")?);
            let g_t = F16::from_bits(self.u16("link")?);
            let g_r = F16::from_bits(self.u16("link")?);
            let doppler_hz = f64::from_le_bytes(self.take("link")?);
            links.push(ScpLink {
                src,
                dst,
                buffer_delay,
                mu_q16,
                fdc_taps: FdcTaps { taps },
                alpha,
                beta_rho,
                g_t,
                g_r,
                doppler_hz,
            });
        }
        Ok(ScenarioConfigPacket { scenario_id, links })
    }
}

/// Decodes exactly one packet; trailing bytes are an error.
pub fn scp_decode(bytes: &[u8]) -> Result<ScenarioConfigPacket, ScenarioError> {
    let mut r = Reader { bytes, pos: 0 };
    let p = r.packet()?;
    if r.pos != bytes.len() {
        return Err(ScenarioError::ScpParse { offset: r.pos, reason: "trailing bytes after packet".into() });
    }
    Ok(p)
}

pub fn encode_stream(packets: &[ScenarioConfigPacket]) -> Vec<u8> {
    packets.iter().flat_map(scp_encode).collect()
}

pub fn decode_stream(bytes: &[u8]) -> Result<Vec<ScenarioConfigPacket>, ScenarioError> {
    let mut r = Reader { bytes, pos: 0 };
    let mut out = Vec::new();
    while r.pos < bytes.len() {
        out.push(r.packet()?);
    }
    Ok(out)
}
