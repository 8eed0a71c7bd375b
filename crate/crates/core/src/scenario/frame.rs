use serde::{Deserialize, Serialize};

use super::Scene;

/// Unit quaternion `(w, x, y, z)` rotating body coordinates into the world
/// frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(q: [f64; 4]) -> Self {
        Self { w: q[0], x: q[1], y: q[2], z: q[3] }
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl Default for Quaternion {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    pub fn conj(&self) -> Self {
        Self { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn mul(&self, o: &Quaternion) -> Self {
        Self {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }

    /// Rotation by `|v|` radians about `v`.
    pub fn from_rotation_vector(v: [f64; 3]) -> Self {
        let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if angle == 0.0 {
            return Self::IDENTITY;
        }
        let s = (angle / 2.0).sin() / angle;
        Self { w: (angle / 2.0).cos(), x: v[0] * s, y: v[1] * s, z: v[2] * s }
    }

    pub fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        let p = Quaternion { w: 0.0, x: v[0], y: v[1], z: v[2] };
        let r = self.mul(&p).mul(&self.conj());
        [r.x, r.y, r.z]
    }
}

/// Kinematic state of one object at a frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectState {
    pub id: u32,
    pub position: [f64; 3],
    pub velocity: [f64; 3],
    pub orientation: Quaternion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub index: u64,
    pub timestamp_s: f64,
    pub objects: Vec<ObjectState>,
}

/// Frames at `k * frame_interval` for `k = 0..n_frames`.
///
/// Motion is constant-acceleration, `p + v t + a t^2 / 2`, and orientation
/// turns at the configured world-frame angular rate.
pub fn frame_generate(scene: &Scene, n_frames: usize) -> Vec<Frame> {
    (0..n_frames as u64)
        .map(|k| {
            let t = k as f64 * scene.frame_interval_s;
            let objects = scene
                .objects
                .iter()
                .map(|o| {
                    let mut position = [0.0; 3];
                    let mut velocity = [0.0; 3];
                    for i in 0..3 {
                        position[i] = o.position[i] + o.velocity[i] * t + 0.5 * o.acceleration[i] * t * t;
                        velocity[i] = o.velocity[i] + o.acceleration[i] * t;
                    }
                    let turn = Quaternion::from_rotation_vector(o.angular_rate.map(|w| w * t));
                    let orientation = turn.mul(&o.orientation.normalized()).normalized();
                    ObjectState { id: o.id, position, velocity, orientation }
                })
                .collect();
            Frame { index: k, timestamp_s: t, objects }
        })
        .collect()
}
