use serde::{Deserialize, Serialize};

use super::{Quaternion, ScenarioError};
use crate::golden::{AntennaPattern, PathLossModel, RcsProfile};

/// What a node does in the communication graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRole {
    /// Emits its own source; receives nothing.
    Transmitter,
    /// Re-emits the weighted sum of what it receives.
    Passive,
    /// Records the weighted sum of what it receives.
    Receiver,
    /// Emits its own source and records what it receives (monostatic).
    Transceiver,
}

impl NodeRole {
    pub fn has_source(self) -> bool {
        matches!(self, NodeRole::Transmitter | NodeRole::Transceiver)
    }

    pub fn reflects(self) -> bool {
        self == NodeRole::Passive
    }

    pub fn captures(self) -> bool {
        matches!(self, NodeRole::Receiver | NodeRole::Transceiver)
    }

    pub fn emits(self) -> bool {
        self != NodeRole::Receiver
    }

    pub fn listens(self) -> bool {
        self != NodeRole::Transmitter
    }
}

/// Source program shared by every transmitting node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Waveform {
    /// Reference chirp repeated every `pri` samples.
    PulseTrain {
        pri: u64,
        #[serde(default = "default_chirp_len")]
        chirp_len: usize,
    },
    /// DRFG program whose on-window carries the reference chirp.
    Drfg { period: u32, duty_cycle: f64 },
}

fn default_chirp_len() -> usize {
    512
}

impl Default for Waveform {
    fn default() -> Self {
        Waveform::PulseTrain { pri: 32768, chirp_len: default_chirp_len() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub id: u32,
    pub role: NodeRole,
    pub position: [f64; 3],
    #[serde(default)]
    pub velocity: [f64; 3],
    #[serde(default)]
    pub acceleration: [f64; 3],
    #[serde(default)]
    pub orientation: Quaternion,
    /// World-frame angular rate, rad/s.
    #[serde(default)]
    pub angular_rate: [f64; 3],
    #[serde(default)]
    pub rcs: RcsProfile,
    #[serde(default)]
    pub antenna: AntennaPattern,
}

impl SceneObject {
    /// Static object with unity tables.
    pub fn at(id: u32, role: NodeRole, position: [f64; 3]) -> Self {
        Self {
            id,
            role,
            position,
            velocity: [0.0; 3],
            acceleration: [0.0; 3],
            orientation: Quaternion::IDENTITY,
            angular_rate: [0.0; 3],
            rcs: RcsProfile::default(),
            antenna: AntennaPattern::default(),
        }
    }
}

fn default_carrier() -> f64 {
    10e9
}

fn default_frame_interval() -> f64 {
    1e-3
}

fn yes() -> bool {
    true
}

/// Physical scene. Stored as TOML; see the README for the schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    /// Overrides the preset's clock when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_rate_hz: Option<f64>,
    #[serde(default = "default_carrier")]
    pub carrier_hz: f64,
    /// Cycles per scenario (one frame is applied per scenario).
    pub scenario_length: u64,
    #[serde(default = "default_frame_interval")]
    pub frame_interval_s: f64,
    /// Whether passive objects illuminate each other.
    #[serde(default = "yes")]
    pub inter_object_interaction: bool,
    /// Whether sub-sample delays are realized by the FDC (otherwise delays
    /// are rounded to whole samples and the taps pass through).
    #[serde(default = "yes")]
    pub fractional_delay: bool,
    #[serde(default)]
    pub path_loss: PathLossModel,
    #[serde(default)]
    pub waveform: Waveform,
    pub objects: Vec<SceneObject>,
}

impl Scene {
    /// Empty scene with defaults.
    pub fn minimal(sample_rate_hz: f64, scenario_length: u64) -> Self {
        Self {
            sample_rate_hz: Some(sample_rate_hz),
            carrier_hz: default_carrier(),
            scenario_length,
            frame_interval_s: default_frame_interval(),
            inter_object_interaction: true,
            fractional_delay: true,
            path_loss: PathLossModel::default(),
            waveform: Waveform::default(),
            objects: Vec::new(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let mut scene: Scene = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        for o in &mut scene.objects {
            o.orientation = o.orientation.normalized();
        }
        scene.validate()?;
        Ok(scene)
    }

    pub fn to_toml_string(&self) -> Result<String, ScenarioError> {
        toml::to_string(self).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let err = |m: String| Err(ScenarioError::Scene(m));
        if self.scenario_length == 0 {
            return err("scenario_length must be positive".into());
        }
        if !(self.frame_interval_s > 0.0) || !self.carrier_hz.is_finite() {
            return err("frame_interval_s must be positive and carrier_hz finite".into());
        }
        if let Some(fs) = self.sample_rate_hz {
            if !(fs > 0.0) {
                return err(format!("sample rate {fs} must be positive"));
            }
        }
        if !self.objects.iter().any(|o| o.role.has_source()) {
            return err("scene needs at least one transmitter".into());
        }
        if !self.objects.iter().any(|o| o.role.captures()) {
            return err("scene needs at least one receiver".into());
        }
        let mut ids: Vec<u32> = self.objects.iter().map(|o| o.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return err("object ids must be unique".into());
        }
        if ids.last().is_some_and(|&id| id > u16::MAX as u32) {
            return err("object ids must fit in 16 bits".into());
        }
        for o in &self.objects {
            let finite = |v: &[f64; 3]| v.iter().all(|x| x.is_finite());
            if !finite(&o.position) || !finite(&o.velocity) || !finite(&o.acceleration) {
                return err(format!("object {}: kinematics must be finite", o.id));
            }
            if !(o.orientation.norm() > 0.0) {
                return err(format!("object {}: orientation must be a non-zero quaternion", o.id));
            }
            for (name, t) in [("alpha", &o.rcs.alpha), ("beta", &o.rcs.beta), ("g_t", &o.antenna.g_t), ("g_r", &o.antenna.g_r)] {
                t.validate().map_err(|m| ScenarioError::Scene(format!("object {} {name}: {m}", o.id)))?;
            }
            if !o.antenna.g_t.is_non_negative() || !o.antenna.g_r.is_non_negative() {
                return err(format!("object {}: antenna gains must be non-negative", o.id));
            }
        }
        match &self.waveform {
            Waveform::PulseTrain { pri, chirp_len } if *chirp_len == 0 || (*chirp_len as u64) > *pri => {
                err(format!("pulse train: chirp length {chirp_len} must be in 1..=pri ({pri})"))
            }
            _ => Ok(()),
        }
    }

    /// Directed links `(src, dst)` as object indices, sorted. Emitters feed
    /// every other listening node, except that passive-to-passive links
    /// are dropped when inter-object interaction is off.
    pub fn links(&self) -> Vec<(usize, usize)> {
        let mut links = Vec::new();
        for (i, a) in self.objects.iter().enumerate() {
            for (j, b) in self.objects.iter().enumerate() {
                if i == j || !a.role.emits() || !b.role.listens() {
                    continue;
                }
                if !self.inter_object_interaction && a.role.reflects() && b.role.reflects() {
                    continue;
                }
                links.push((i, j));
            }
        }
        links
    }

    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.objects.iter().position(|o| o.id == id)
    }
}
