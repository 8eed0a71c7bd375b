use serde::{Deserialize, Serialize};

use super::{ControlError, FifoGeometry};

/// How delays below one bank depth are treated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DelayMode {
    /// Reject them as configuration errors.
    #[default]
    Strict,
    /// Accept them and emit zeros on that output, as the hardware does when
    /// the read and write pointers would need the same bank.
    Lenient,
}

/// Where an output's samples come from during one scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputRoute {
    /// Delay below one bank depth; the output carries zeros.
    Suppressed,
    /// Own LDDC read pointer into the FIFO (ungrouped output or header).
    Direct,
    /// Reads the header's RTR `offset` samples behind the header.
    Member { header: usize, offset: u32 },
}

/// Outputs whose delays lie within one bank depth of the header's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionGroup {
    pub header: usize,
    /// `(output, delay - header delay)`, ascending by delay.
    pub members: Vec<(usize, u32)>,
}

impl CollisionGroup {
    pub fn max_offset(&self) -> u32 {
        self.members.iter().map(|m| m.1).max().unwrap_or(0)
    }
}

/// Read-pointer placement of one directly fetched output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LddcConfig {
    pub output: usize,
    pub bank: u32,
    pub row: u32,
}

/// Result of parsing one scenario's delays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioPlan {
    pub delays: Vec<u32>,
    pub routes: Vec<OutputRoute>,
    pub groups: Vec<CollisionGroup>,
}

/// Where staged history comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrefetchSource {
    /// Already in the FIFO when staging starts; read on idle bank cycles.
    Resident,
    /// Written during the staging scenario; forked into the PB on write.
    Streaming,
    /// Partly resident, partly streaming.
    Mixed,
}

/// History staged for one group of the next scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefetchRange {
    pub header: usize,
    /// First header time covered; the range ends at the boundary.
    pub first_t: i64,
    pub len: u32,
    /// FIFO sample index for `first_t`.
    pub first_index: i64,
    pub source: PrefetchSource,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefetchPlan {
    pub ranges: Vec<PrefetchRange>,
}

/// Splits outputs into direct readers and collision groups.
///
/// Outputs are taken in ascending delay order (ties by index). The nearest
/// ungrouped output opens a group and absorbs every following output whose
/// delay is less than one bank depth beyond the header's.
pub fn gddc_parse(delays: &[u32], geometry: &FifoGeometry, mode: DelayMode) -> Result<ScenarioPlan, ControlError> {
    geometry.validate()?;
    let mut routes = vec![OutputRoute::Direct; delays.len()];
    let mut order: Vec<usize> = Vec::with_capacity(delays.len());
    for (o, &d) in delays.iter().enumerate() {
        if d > geometry.max_delay() {
            return Err(ControlError::ExceedsMaxRange { output: o, delay: d, max: geometry.max_delay() });
        }
        if d < geometry.min_delay() {
            match mode {
                DelayMode::Strict => {
                    return Err(ControlError::BelowMinDelay { output: o, delay: d, min: geometry.min_delay() })
                }
                DelayMode::Lenient => routes[o] = OutputRoute::Suppressed,
            }
        } else {
            order.push(o);
        }
    }
    order.sort_by_key(|&o| (delays[o], o));

    let mut groups = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let header = order[i];
        let mut members = Vec::new();
        let mut j = i + 1;
        while j < order.len() && delays[order[j]] - delays[header] < geometry.bank_depth {
            let (member, offset) = (order[j], delays[order[j]] - delays[header]);
            if offset >= geometry.rtr_depth {
                return Err(ControlError::CollisionBeyondProtection {
                    header,
                    member,
                    offset,
                    depth: geometry.rtr_depth,
                });
            }
            routes[member] = OutputRoute::Member { header, offset };
            members.push((member, offset));
            j += 1;
        }
        if !members.is_empty() {
            groups.push(CollisionGroup { header, members });
        }
        i = j;
    }
    Ok(ScenarioPlan { delays: delays.to_vec(), routes, groups })
}

impl ScenarioPlan {
    /// Read-pointer placement of every direct output when the write
    /// pointer is at stream index `write_index`.
    pub fn lddc_configs(&self, geometry: &FifoGeometry, write_index: u64) -> Vec<LddcConfig> {
        let total = geometry.total_depth() as i64;
        self.routes
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == OutputRoute::Direct)
            .map(|(output, _)| {
                let addr = (write_index as i64 - self.delays[output] as i64).rem_euclid(total) as u32;
                LddcConfig { output, bank: addr / geometry.bank_depth, row: addr % geometry.bank_depth }
            })
            .collect()
    }

    /// History each group needs at the start of this scenario, when the
    /// plan is staged at cycle `staged_at` for a boundary at `boundary`.
    pub fn prefetch_plan(&self, boundary: u64, staged_at: u64) -> PrefetchPlan {
        let ranges = self
            .groups
            .iter()
            .filter(|g| g.max_offset() > 0)
            .map(|g| {
                let len = g.max_offset();
                let first_t = boundary as i64 - len as i64;
                let first_index = first_t - self.delays[g.header] as i64;
                let last_index = first_index + len as i64 - 1;
                let source = if last_index < staged_at as i64 {
                    PrefetchSource::Resident
                } else if first_index >= staged_at as i64 {
                    PrefetchSource::Streaming
                } else {
                    PrefetchSource::Mixed
                };
                PrefetchRange { header: g.header, first_t, len, first_index, source }
            })
            .collect();
        PrefetchPlan { ranges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ASIC: FifoGeometry = FifoGeometry { banks: 16, bank_depth: 1024, rtr_depth: 256 };

    #[test]
    fn distant_outputs_are_not_grouped() {
        let plan = gddc_parse(&[3000, 8000], &ASIC, DelayMode::Strict).unwrap();
        assert!(plan.groups.is_empty());
        assert_eq!(plan.routes, vec![OutputRoute::Direct; 2]);
    }

    #[test]
    fn protection_range_limits_offsets() {
        let plan = gddc_parse(&[5000, 5200], &ASIC, DelayMode::Strict).unwrap();
        assert_eq!(plan.groups, vec![CollisionGroup { header: 0, members: vec![(1, 200)] }]);
        let err = gddc_parse(&[5000, 5400], &ASIC, DelayMode::Strict).unwrap_err();
        assert!(err.to_string().contains("collision beyond protection range"));
    }

    #[test]
    fn groups_start_from_the_nearest_output() {
        let geom = FifoGeometry { banks: 48, bank_depth: 1024, rtr_depth: 1024 };
        // Fifteen outputs ~400 samples apart, listed farthest first.
        let delays: Vec<u32> = (0..15).rev().map(|k| 18000 + 417 * k).collect();
        let plan = gddc_parse(&delays, &geom, DelayMode::Strict).unwrap();
        let nearest = 14;
        assert_eq!(plan.groups[0].header, nearest);
        assert_eq!(plan.groups[0].members, vec![(13, 417), (12, 834)]);
        assert_eq!(plan.groups.len(), 5);
        for g in &plan.groups {
            assert!(g.max_offset() < geom.bank_depth);
        }
    }

    #[test]
    fn range_limits() {
        assert!(gddc_parse(&[16384], &ASIC, DelayMode::Strict).is_ok());
        assert!(matches!(
            gddc_parse(&[16385], &ASIC, DelayMode::Strict),
            Err(ControlError::ExceedsMaxRange { delay: 16385, .. })
        ));
        assert!(gddc_parse(&[1023], &ASIC, DelayMode::Strict).is_err());
        let plan = gddc_parse(&[1023, 4000], &ASIC, DelayMode::Lenient).unwrap();
        assert_eq!(plan.routes[0], OutputRoute::Suppressed);
    }

    #[test]
    fn prefetch_source_follows_group_delay() {
        let plan = gddc_parse(&[5000, 5100], &ASIC, DelayMode::Strict).unwrap();
        // Scenario length 2000 < delay: the history is already resident.
        let p = plan.prefetch_plan(4000, 2000).ranges[0];
        assert_eq!((p.first_t, p.len, p.first_index, p.source), (3900, 100, -1100, PrefetchSource::Resident));
        // Scenario length 20000 > delay: it streams in during staging.
        let p = plan.prefetch_plan(40000, 20000).ranges[0];
        assert_eq!(p.source, PrefetchSource::Streaming);
        let p = plan.prefetch_plan(25050, 20000).ranges[0];
        assert_eq!(p.source, PrefetchSource::Mixed);
    }

    #[test]
    fn lddc_placement() {
        let plan = gddc_parse(&[1500, 9000], &ASIC, DelayMode::Strict).unwrap();
        let cfg = plan.lddc_configs(&ASIC, 2000);
        assert_eq!(cfg[0], LddcConfig { output: 0, bank: 0, row: 500 });
        let addr = (2000i64 - 9000).rem_euclid(16384) as u32;
        assert_eq!(cfg[1], LddcConfig { output: 1, bank: addr / 1024, row: addr % 1024 });
    }
}
