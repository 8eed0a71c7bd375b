use super::{ScenarioConfigPacket, ScenarioError};

/// Double-buffered configuration registers of a node: the active packet
/// drives the datapath while the next one waits in the shadow copy until
/// its scenario-update pulse.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioRegisters {
    active: ScenarioConfigPacket,
    shadow: Option<(ScenarioConfigPacket, u64)>,
}

impl ScenarioRegisters {
    pub fn new(initial: ScenarioConfigPacket) -> Self {
        Self { active: initial, shadow: None }
    }

    pub fn active(&self) -> &ScenarioConfigPacket {
        &self.active
    }

    pub fn pending(&self) -> Option<&ScenarioConfigPacket> {
        self.shadow.as_ref().map(|s| &s.0)
    }

    /// Scenario-update pulse: swaps in the shadow packet when `cycle` is its
    /// boundary. Returns whether a swap happened.
    pub fn tick(&mut self, cycle: u64) -> bool {
        if self.shadow.as_ref().is_some_and(|s| s.1 == cycle) {
            self.active = self.shadow.take().unwrap().0;
            true
        } else {
            false
        }
    }
}

/// Stages `scp` to take effect at `boundary`. Staging at or after the
/// boundary (or over a packet still waiting) breaks the no-stall contract.
pub fn su_apply(
    regs: &mut ScenarioRegisters,
    scp: ScenarioConfigPacket,
    staged_at: u64,
    boundary: u64,
) -> Result<(), ScenarioError> {
    regs.tick(staged_at);
    if staged_at >= boundary || regs.shadow.is_some() {
        return Err(ScenarioError::StagedLate { scenario: scp.scenario_id, staged_at, boundary });
    }
    regs.shadow = Some((scp, boundary));
    Ok(())
}
