use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use super::DatapathError;
use crate::numerics::{quantize_f16, ComplexSample, F16};

/// Segments in the quarter-wave sine table (the table stores one more
/// point so that sin(pi/2) is present).
pub const LUT_SEGMENTS: usize = 1024;
/// Cycles between coefficient commits.
pub const UPDATE_PERIOD: u64 = 256;
/// Cycles needed to generate one coefficient.
pub const GENERATION_CYCLES: u64 = 32;
/// Outputs one FSM can serve at the nominal update rate.
pub const MAX_OUTPUTS_PER_FSM: usize = 4;

const INDEX_BITS: u32 = 10;
const SHIFT: u32 = 64 - 2 - INDEX_BITS;

/// Quarter-wave ROM of binary16 sine values.
#[derive(Clone, Debug)]
pub struct SineLut {
    table: Vec<F16>,
}

impl SineLut {
    pub fn new() -> Self {
        let table =
            (0..=LUT_SEGMENTS).map(|i| quantize_f16((FRAC_PI_2 * i as f64 / LUT_SEGMENTS as f64).sin())).collect();
        Self { table }
    }

    /// Shared ROM instance.
    pub fn shared() -> &'static SineLut {
        static LUT: OnceLock<SineLut> = OnceLock::new();
        LUT.get_or_init(SineLut::new)
    }

    pub fn entries(&self) -> &[F16] {
        &self.table
    }

    /// `(sin, cos)` of a phase given as a fraction of a full turn in
    /// units of 2^-64, using the nearest table entry.
    pub fn sin_cos(&self, phase: u64) -> (F16, F16) {
        let idx = (phase.wrapping_add(1 << (SHIFT - 1)) >> SHIFT) as usize & (4 * LUT_SEGMENTS - 1);
        let quadrant = idx >> INDEX_BITS;
        let i = idx & (LUT_SEGMENTS - 1);
        let a = self.table[i];
        let b = self.table[LUT_SEGMENTS - i];
        let neg = |v: F16| F16::from_bits(v.to_bits() ^ 0x8000);
        match quadrant {
            0 => (a, b),
            1 => (b, neg(a)),
            2 => (neg(a), neg(b)),
            _ => (neg(b), a),
        }
    }
}

impl Default for SineLut {
    fn default() -> Self {
        Self::new()
    }
}

/// Phase increment per sample for `doppler_hz`, as a 64-bit turn fraction.
///
/// The accumulator is wide enough that its rounding drift stays far below
/// the table resolution over any practical run length.
pub fn phase_step(doppler_hz: f64, sample_rate: f64) -> u64 {
    let turns = (doppler_hz / sample_rate).rem_euclid(1.0);
    (turns * 18_446_744_073_709_551_616.0).round() as u64
}

/// `exp(-j * phase)` from the table.
pub fn doppler_coefficient(lut: &SineLut, phase: u64) -> ComplexSample {
    let (s, c) = lut.sin_cos(phase);
    // 0 - s keeps a zero imaginary part positive.
    ComplexSample::new(c, quantize_f16(0.0 - s.to_f64()))
}

/// One Doppler coefficient FSM serving up to four outputs round-robin.
///
/// Output `k` generates its next coefficient during cycles
/// `[32k, 32k + 32)` of each 256-cycle period; every staged coefficient
/// commits when the period counter wraps. The phase of a coefficient is
/// that of the absolute cycle at which it commits.
#[derive(Clone, Debug)]
pub struct DopplerFsmState {
    lut: &'static SineLut,
    steps: Vec<u64>,
    pending: Vec<ComplexSample>,
    committed: Vec<ComplexSample>,
    cycle: u64,
}

impl DopplerFsmState {
    /// FSM starting at `start_cycle`, which must be a commit boundary.
    pub fn new(doppler_hz: &[f64], sample_rate: f64, start_cycle: u64) -> Result<Self, DatapathError> {
        if doppler_hz.len() > MAX_OUTPUTS_PER_FSM {
            return Err(DatapathError::TooManyDopplerOutputs { requested: doppler_hz.len(), max: MAX_OUTPUTS_PER_FSM });
        }
        debug_assert_eq!(start_cycle % UPDATE_PERIOD, 0);
        let lut = SineLut::shared();
        let steps: Vec<u64> = doppler_hz.iter().map(|&f| phase_step(f, sample_rate)).collect();
        let committed: Vec<ComplexSample> =
            steps.iter().map(|s| doppler_coefficient(lut, s.wrapping_mul(start_cycle))).collect();
        Ok(Self { lut, steps, pending: committed.clone(), committed, cycle: start_cycle })
    }

    pub fn outputs(&self) -> usize {
        self.steps.len()
    }

    /// Reprograms the frequencies; coefficients generated from now on use
    /// the new values.
    pub fn set_frequencies(&mut self, doppler_hz: &[f64], sample_rate: f64) -> Result<(), DatapathError> {
        if doppler_hz.len() != self.steps.len() {
            return Err(DatapathError::TooManyDopplerOutputs { requested: doppler_hz.len(), max: self.steps.len() });
        }
        for (step, &f) in self.steps.iter_mut().zip(doppler_hz) {
            *step = phase_step(f, sample_rate);
        }
        Ok(())
    }

    /// Coefficient currently applied to output `k`.
    pub fn coefficient(&self, k: usize) -> ComplexSample {
        self.committed[k]
    }

    /// Advances one cycle. Returns the committed coefficients on the cycle
    /// the period counter wraps.
    pub fn cycle(&mut self) -> Option<&[ComplexSample]> {
        let c = self.cycle;
        let ctr = c % UPDATE_PERIOD;
        let mut committed = false;
        if ctr == 0 && !self.steps.is_empty() {
            self.committed.copy_from_slice(&self.pending);
            committed = true;
        }
        let slot = (ctr / GENERATION_CYCLES) as usize;
        if slot < self.steps.len() && ctr % GENERATION_CYCLES == GENERATION_CYCLES - 1 {
            // Phase is step * t for the absolute commit cycle t.
            let next_commit = c - ctr + UPDATE_PERIOD;
            let phase = self.steps[slot].wrapping_mul(next_commit);
            self.pending[slot] = doppler_coefficient(self.lut, phase);
        }
        self.cycle += 1;
        committed.then_some(self.committed.as_slice())
    }
}

/// All Doppler FSMs of one node: outputs are dealt to units of four in
/// ascending order.
#[derive(Clone, Debug)]
pub struct DopplerBank {
    units: Vec<DopplerFsmState>,
}

impl DopplerBank {
    pub fn new(doppler_hz: &[f64], sample_rate: f64, start_cycle: u64) -> Self {
        let units = doppler_hz
            .chunks(MAX_OUTPUTS_PER_FSM)
            .map(|c| DopplerFsmState::new(c, sample_rate, start_cycle).expect("chunk within FSM capacity"))
            .collect();
        Self { units }
    }

    pub fn fsm_units(&self) -> usize {
        self.units.len()
    }

    pub fn set_frequencies(&mut self, doppler_hz: &[f64], sample_rate: f64) -> Result<(), DatapathError> {
        for (u, c) in self.units.iter_mut().zip(doppler_hz.chunks(MAX_OUTPUTS_PER_FSM)) {
            u.set_frequencies(c, sample_rate)?;
        }
        Ok(())
    }

    pub fn coefficient(&self, output: usize) -> ComplexSample {
        self.units[output / MAX_OUTPUTS_PER_FSM].coefficient(output % MAX_OUTPUTS_PER_FSM)
    }

    pub fn cycle(&mut self) {
        for u in &mut self.units {
            u.cycle();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn run_commits(fsm: &mut DopplerFsmState, commits: usize) -> Vec<Vec<ComplexSample>> {
        let mut out = Vec::new();
        while out.len() < commits {
            if let Some(c) = fsm.cycle() {
                out.push(c.to_vec());
            }
        }
        out
    }

    #[test]
    fn lut_endpoints() {
        let lut = SineLut::new();
        assert_eq!(lut.entries().len(), LUT_SEGMENTS + 1);
        assert_eq!(lut.entries()[0], F16::ZERO);
        assert_eq!(lut.entries()[LUT_SEGMENTS], F16::ONE);
    }

    #[test]
    fn zero_frequency_is_always_one() {
        let mut fsm = DopplerFsmState::new(&[0.0, 0.0], 518e6, 0).unwrap();
        for c in run_commits(&mut fsm, 10) {
            assert!(c.iter().all(|&x| x == ComplexSample::ONE));
        }
    }

    #[test]
    fn quarter_turn_per_commit_cycles_through_axes() {
        let fs = 518e6;
        let f = fs / UPDATE_PERIOD as f64 / 4.0;
        let mut fsm = DopplerFsmState::new(&[f], fs, 0).unwrap();
        let neg_j = ComplexSample::new(F16::ZERO, F16::NEG_ONE);
        let expect = [ComplexSample::ONE, neg_j, ComplexSample::new(F16::NEG_ONE, F16::ZERO), ComplexSample::J];
        for (k, c) in run_commits(&mut fsm, 12).iter().enumerate() {
            let want = expect[k % 4];
            assert_eq!(c[0].re.to_f64(), want.re.to_f64(), "commit {k}");
            assert_eq!(c[0].im.to_f64(), want.im.to_f64(), "commit {k}");
        }
    }

    #[test]
    fn ten_khz_tracks_double_precision_phase() {
        let fs = 518e6;
        let f = 1e4;
        let mut fsm = DopplerFsmState::new(&[f], fs, 0).unwrap();
        let commits = run_commits(&mut fsm, 4000);
        let mut worst: f64 = 0.0;
        for (k, c) in commits.iter().enumerate() {
            let t = (k as u64 * UPDATE_PERIOD) as f64;
            let theta = 2.0 * PI * f * t / fs;
            let err = (c[0].re.to_f64() - theta.cos()).abs().max((c[0].im.to_f64() + theta.sin()).abs());
            worst = worst.max(err);
        }
        assert!(worst <= 2f64.powi(-10), "worst error {worst}");
    }

    #[test]
    fn coefficient_is_held_for_a_full_period() {
        let fs = 100e6;
        let mut fsm = DopplerFsmState::new(&[1e5, -3e5, 7e5], fs, 0).unwrap();
        let mut last = (0..3).map(|k| fsm.coefficient(k)).collect::<Vec<_>>();
        let mut changes = Vec::new();
        for c in 0..256 * 8u64 {
            fsm.cycle();
            let now: Vec<_> = (0..3).map(|k| fsm.coefficient(k)).collect();
            if now != last {
                changes.push(c);
            }
            last = now;
        }
        assert!(changes.iter().all(|c| c % 256 == 0));
        assert!(changes.len() >= 7);
    }

    #[test]
    fn five_outputs_need_a_second_fsm() {
        let err = DopplerFsmState::new(&[0.0; 5], 1e8, 0).unwrap_err();
        assert!(err.to_string().contains("second FSM unit"));
        assert_eq!(DopplerBank::new(&[0.0; 5], 1e8, 0).fsm_units(), 2);
    }

    #[test]
    fn negative_frequency_conjugates() {
        let lut = SineLut::shared();
        let fs = 1e8;
        for t in [1u64, 100, 12345] {
            let a = doppler_coefficient(lut, phase_step(1e6, fs).wrapping_mul(t));
            let b = doppler_coefficient(lut, phase_step(-1e6, fs).wrapping_mul(t));
            assert_eq!(a.re.to_f64(), b.re.to_f64());
            assert!((a.im.to_f64() + b.im.to_f64()).abs() <= 2f64.powi(-10));
        }
    }
}
