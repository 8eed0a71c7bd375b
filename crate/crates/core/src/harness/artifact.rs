use std::io::Write;

use serde::{Deserialize, Serialize};

use super::emulator::{EmulationRun, NodeReport};
use super::HarnessError;
use crate::numerics::ComplexSample;

/// Captured stream stored as packed `re << 16 | im` binary16 words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaptureRecord {
    pub node: u32,
    pub iq_words: Vec<u32>,
}

impl CaptureRecord {
    pub fn samples(&self) -> Vec<ComplexSample> {
        self.iq_words.iter().map(|&w| ComplexSample::from_word(w)).collect()
    }
}

/// Everything needed to re-analyze a run, as written by `rfemu run`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub preset: String,
    pub sample_rate: f64,
    pub n_cycles: u64,
    pub scenario_length: u64,
    pub scps: usize,
    /// Pulse repetition interval of the source.
    pub pri: u64,
    /// Length of the reference chirp.
    pub chirp_len: usize,
    pub captures: Vec<CaptureRecord>,
    pub nodes: Vec<NodeReport>,
}

impl RunArtifact {
    pub fn from_run(run: &EmulationRun, pri: u64, chirp_len: usize) -> Self {
        Self {
            preset: run.preset.clone(),
            sample_rate: run.sample_rate,
            n_cycles: run.n_cycles,
            scenario_length: run.scenario_length,
            scps: run.scps,
            pri,
            chirp_len,
            captures: run
                .captures
                .iter()
                .map(|c| CaptureRecord { node: c.node, iq_words: c.samples.iter().map(|s| s.to_word()).collect() })
                .collect(),
            nodes: run.nodes.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        serde_json::to_string(self).map_err(|e| HarnessError::Artifact(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Artifact(e.to_string()))
    }
}

fn io(e: std::io::Error) -> HarnessError {
    HarnessError::Artifact(e.to_string())
}

/// `cycle,re,im` rows.
pub fn write_iq_csv(out: &mut impl Write, samples: &[ComplexSample]) -> Result<(), HarnessError> {
    writeln!(out, "cycle,re,im").map_err(io)?;
    for (c, s) in samples.iter().enumerate() {
        writeln!(out, "{c},{},{}", s.re.to_f64(), s.im.to_f64()).map_err(io)?;
    }
    Ok(())
}

/// `lag,magnitude` rows.
pub fn write_correlation_csv(out: &mut impl Write, corr: &[f64]) -> Result<(), HarnessError> {
    writeln!(out, "lag,magnitude").map_err(io)?;
    for (n, v) in corr.iter().enumerate() {
        writeln!(out, "{n},{v}").map_err(io)?;
    }
    Ok(())
}

/// Reads expected ranges in meters: one value per line, or the last
/// column of a CSV; a non-numeric first line is taken as a header.
pub fn read_expected_ranges(text: &str) -> Result<Vec<f64>, HarnessError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if i == 0 => {}
            Err(_) => return Err(HarnessError::Artifact(format!("line {}: '{field}' is not a range", i + 1))),
        }
    }
    Ok(out)
}
