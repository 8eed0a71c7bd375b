use num_complex::Complex64;

use super::waveform::{signal_source, source_stream};
use super::{HarnessError, Preset};
use crate::controlpath::DelayMode;
use crate::golden::{run_network, GoldenNetwork, GoldenNode};
use crate::scenario::{frame_generate, solve_frames, Scene, SolveOptions, SolvedFrame};

/// Clock of a run: the scene's override, else the preset's.
pub fn effective_sample_rate(scene: &Scene, preset: &Preset) -> f64 {
    scene.sample_rate_hz.unwrap_or(preset.sample_rate)
}

pub fn solve_options(scene: &Scene, preset: &Preset, mode: DelayMode) -> SolveOptions {
    let g = preset.geometry();
    SolveOptions {
        sample_rate: effective_sample_rate(scene, preset),
        compute_latency: preset.compute_latency,
        min_buffer_delay: g.min_delay(),
        max_buffer_delay: g.max_delay(),
        mode,
    }
}

/// Generates `n_frames` frames and solves each into a scenario.
pub fn compile_scene(
    scene: &Scene,
    preset: &Preset,
    mode: DelayMode,
    n_frames: usize,
) -> Result<Vec<SolvedFrame>, crate::Error> {
    scene.validate()?;
    let frames = frame_generate(scene, n_frames);
    Ok(solve_frames(&frames, scene, &solve_options(scene, preset, mode))?)
}

/// Scenarios needed to cover `n_cycles`.
pub fn scenarios_needed(scene: &Scene, n_cycles: u64) -> usize {
    n_cycles.div_ceil(scene.scenario_length) as usize
}

/// Reference-model network for the same scene and solved scenarios.
pub fn golden_network(
    scene: &Scene,
    solved: &[SolvedFrame],
    sample_rate: f64,
    duration: usize,
) -> Result<GoldenNetwork, HarnessError> {
    let source = signal_source(&scene.waveform)?;
    let stream = source_stream(&source, duration);
    let nodes = scene
        .objects
        .iter()
        .map(|o| GoldenNode {
            source: o.role.has_source().then(|| stream.clone()),
            reflects: o.role.reflects(),
            captures: o.role.captures(),
        })
        .collect();
    Ok(GoldenNetwork {
        sample_rate,
        nodes,
        schedule: solved.iter().map(|s| s.exact.clone()).collect(),
        scenario_length: scene.scenario_length as usize,
    })
}

/// Runs the reference model; returns the capture of every receiving node
/// (`None` for the others), indexed like `scene.objects`.
pub fn run_golden(
    scene: &Scene,
    solved: &[SolvedFrame],
    sample_rate: f64,
    duration: usize,
) -> Result<Vec<Option<Vec<Complex64>>>, crate::Error> {
    let net = golden_network(scene, solved, sample_rate, duration)?;
    Ok(run_network(&net, duration)?)
}
