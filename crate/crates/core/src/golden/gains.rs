use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::SPEED_OF_LIGHT;

/// Direction as (azimuth, elevation) in radians.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SphericalAngle {
    pub azimuth: f64,
    pub elevation: f64,
}

impl SphericalAngle {
    /// Wraps azimuth into [-pi, pi) and clamps elevation to [-pi/2, pi/2].
    pub fn new(azimuth: f64, elevation: f64) -> Self {
        let mut az = (azimuth + PI).rem_euclid(2.0 * PI) - PI;
        if az >= PI {
            az -= 2.0 * PI;
        }
        Self { azimuth: az, elevation: elevation.clamp(-PI / 2.0, PI / 2.0) }
    }

    /// Angle of a direction vector; the zero vector maps to (0, 0).
    pub fn from_direction(v: [f64; 3]) -> Self {
        let horizontal = v[0].hypot(v[1]);
        if horizontal == 0.0 && v[2] == 0.0 {
            return Self::default();
        }
        Self::new(v[1].atan2(v[0]), v[2].atan2(horizontal))
    }
}

/// Real gain as a function of direction: either a constant or a bilinear
/// lookup over an (elevation, azimuth) grid given in degrees. Queries
/// outside the grid clamp to its edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngularTable {
    Constant {
        constant: f64,
    },
    Grid {
        azimuth_deg: Vec<f64>,
        #[serde(default = "zero_elevation")]
        elevation_deg: Vec<f64>,
        /// `values[elevation_index][azimuth_index]`
        values: Vec<Vec<f64>>,
    },
}

fn zero_elevation() -> Vec<f64> {
    vec![0.0]
}

impl Default for AngularTable {
    fn default() -> Self {
        AngularTable::Constant { constant: 1.0 }
    }
}

fn bracket(grid: &[f64], x: f64) -> (usize, usize, f64) {
    if grid.len() == 1 || x <= grid[0] {
        return (0, 0, 0.0);
    }
    let last = grid.len() - 1;
    if x >= grid[last] {
        return (last, last, 0.0);
    }
    let hi = grid.partition_point(|&g| g <= x);
    let lo = hi - 1;
    (lo, hi, (x - grid[lo]) / (grid[hi] - grid[lo]))
}

impl AngularTable {
    pub fn constant(value: f64) -> Self {
        AngularTable::Constant { constant: value }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            AngularTable::Constant { constant } if constant.is_finite() => Ok(()),
            AngularTable::Constant { .. } => Err("gain table constant must be finite".into()),
            AngularTable::Grid { azimuth_deg, elevation_deg, values } => {
                let increasing = |g: &[f64]| !g.is_empty() && g.windows(2).all(|w| w[0] < w[1]);
                if !increasing(azimuth_deg) || !increasing(elevation_deg) {
                    return Err("gain table axes must be non-empty and strictly increasing".into());
                }
                if values.len() != elevation_deg.len()
                    || values.iter().any(|row| row.len() != azimuth_deg.len())
                {
                    return Err("gain table values must be elevation x azimuth".into());
                }
                if values.iter().flatten().any(|v| !v.is_finite()) {
                    return Err("gain table values must be finite".into());
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, angle: SphericalAngle) -> f64 {
        match self {
            AngularTable::Constant { constant } => *constant,
            AngularTable::Grid { azimuth_deg, elevation_deg, values } => {
                let (a0, a1, ta) = bracket(azimuth_deg, angle.azimuth.to_degrees());
                let (e0, e1, te) = bracket(elevation_deg, angle.elevation.to_degrees());
                let row = |e: usize| values[e][a0] * (1.0 - ta) + values[e][a1] * ta;
                row(e0) * (1.0 - te) + row(e1) * te
            }
        }
    }

    pub fn is_non_negative(&self) -> bool {
        match self {
            AngularTable::Constant { constant } => *constant >= 0.0,
            AngularTable::Grid { values, .. } => values.iter().flatten().all(|&v| v >= 0.0),
        }
    }
}

/// Separable scattering profile: sigma(in, out) = alpha(in) * beta(out).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RcsProfile {
    #[serde(default)]
    pub alpha: AngularTable,
    #[serde(default)]
    pub beta: AngularTable,
}

impl RcsProfile {
    pub fn sigma(&self, theta_in: SphericalAngle, theta_out: SphericalAngle) -> f64 {
        self.alpha.eval(theta_in) * self.beta.eval(theta_out)
    }
}

/// Transmit and receive antenna gains.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AntennaPattern {
    #[serde(default)]
    pub g_t: AngularTable,
    #[serde(default)]
    pub g_r: AngularTable,
}

/// Amplitude path loss `reference_gain * (reference_distance / d)^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PathLossModel {
    pub exponent: f64,
    pub reference_distance_m: f64,
    pub reference_gain: f64,
}

impl Default for PathLossModel {
    fn default() -> Self {
        Self { exponent: 1.0, reference_distance_m: 1000.0, reference_gain: 1.0 }
    }
}

impl PathLossModel {
    /// A model with no loss at all.
    pub fn unity() -> Self {
        Self { exponent: 0.0, reference_distance_m: 1.0, reference_gain: 1.0 }
    }

    pub fn at_distance(&self, distance_m: f64) -> f64 {
        self.reference_gain * (self.reference_distance_m / distance_m).powf(self.exponent)
    }

    /// Loss for a propagation delay in seconds.
    pub fn at_delay(&self, tau_s: f64) -> f64 {
        self.at_distance(SPEED_OF_LIGHT * tau_s)
    }
}

/// Direct-path parameters of one link.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkParams {
    /// Propagation delay in seconds.
    pub tau: f64,
    pub doppler_hz: f64,
    pub theta_in: SphericalAngle,
    pub theta_out: SphericalAngle,
}
