//! Single bead chain: kinematics, tension-induced restoring moment and
//! Coulomb jamming capacity per joint.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bead::{
    self, hole_play_warning, joint_limit, validate_bead_spec, BeadError, BeadSpec, JointRange,
    ValidationReport,
};

pub type Vec2 = Vector2<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error(transparent)]
    Bead(#[from] BeadError),
    #[error("expected {expected} joint angles, got {got}")]
    AngleCount { expected: usize, got: usize },
    #[error("joint {joint} belongs to the rigid root but has angle {angle_deg}°")]
    RigidJointMoved { joint: usize, angle_deg: f64 },
    #[error("joint {joint}: {source}")]
    Joint { joint: usize, source: BeadError },
    #[error("invalid chain field `{field}`: {reason}")]
    InvalidField { field: &'static str, reason: String },
}

fn default_true() -> bool {
    true
}

fn default_mu() -> f64 {
    0.3
}

fn default_contact_half_angle() -> f64 {
    45.0
}

/// Geometry and friction parameters of one chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub bead: BeadSpec,
    pub n_units: usize,
    /// Centre-to-centre distance. Defaults to the bead diameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_pitch: Option<f64>,
    /// Joints fused straight at the base.
    #[serde(default)]
    pub rigid_root_units: usize,
    /// One-plane constrained: each joint bends toward positive angles only.
    #[serde(default = "default_true")]
    pub planar: bool,
    /// Bead-to-bead friction coefficient.
    #[serde(default = "default_mu")]
    pub mu: f64,
    /// Half-angle of the annular contact band, degrees.
    #[serde(default = "default_contact_half_angle")]
    pub contact_half_angle: f64,
}

impl ChainSpec {
    pub fn new(bead: BeadSpec, n_units: usize) -> Self {
        Self {
            bead,
            n_units,
            unit_pitch: None,
            rigid_root_units: 0,
            planar: true,
            mu: default_mu(),
            contact_half_angle: default_contact_half_angle(),
        }
    }

    /// Reference chain: 30 units of 6 mm beads, rigid pipe over the first half.
    pub fn table1() -> Self {
        Self {
            rigid_root_units: 15,
            ..Self::new(BeadSpec::table1(), 30)
        }
    }

    pub fn pitch(&self) -> f64 {
        self.unit_pitch.unwrap_or(self.bead.diameter)
    }

    pub fn n_joints(&self) -> usize {
        self.n_units.saturating_sub(1)
    }

    /// Indices of joints that are free to rotate.
    pub fn free_joints(&self) -> std::ops::Range<usize> {
        self.rigid_root_units.min(self.n_joints())..self.n_joints()
    }

    pub fn joint_range(&self, joint: usize) -> JointRange {
        if joint < self.rigid_root_units {
            JointRange { min: 0.0, max: 0.0 }
        } else {
            joint_limit(&self.bead, self.planar)
        }
    }

    /// Effective radius of the annular contact band, mm.
    pub fn contact_radius(&self) -> f64 {
        self.bead.radius * self.contact_half_angle.to_radians().sin()
    }

    /// Structural checks. Returns non-fatal warnings on success.
    pub fn check(&self) -> Result<Vec<String>, ChainError> {
        self.bead.check_finite()?;
        let mut warnings = Vec::new();
        if self.n_units < 2 {
            return Err(ChainError::InvalidField {
                field: "n_units",
                reason: format!("need at least 2 units, got {}", self.n_units),
            });
        }
        if self.rigid_root_units >= self.n_units {
            return Err(ChainError::InvalidField {
                field: "rigid_root_units",
                reason: format!("{} must be below n_units {}", self.rigid_root_units, self.n_units),
            });
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(ChainError::InvalidField {
                field: "mu",
                reason: format!("friction coefficient must be positive, got {}", self.mu),
            });
        }
        if !(self.contact_half_angle > 0.0 && self.contact_half_angle <= 90.0) {
            return Err(ChainError::InvalidField {
                field: "contact_half_angle",
                reason: format!("must lie in (0°, 90°], got {}", self.contact_half_angle),
            });
        }
        let pitch = self.pitch();
        if !(pitch > 0.0 && pitch.is_finite()) {
            return Err(ChainError::InvalidField {
                field: "unit_pitch",
                reason: format!("must be positive, got {pitch}"),
            });
        }
        if pitch > self.bead.diameter {
            warnings.push(format!(
                "unit pitch {pitch} mm exceeds bead diameter {} mm; beads would not touch",
                self.bead.diameter
            ));
        }
        if let Some(w) = hole_play_warning(&self.bead, pitch) {
            warnings.push(w);
        }
        Ok(warnings)
    }

    /// Bead constraint report plus chain-level warnings.
    pub fn validate(&self) -> Result<ValidationReport, ChainError> {
        let mut report = validate_bead_spec(&self.bead)?;
        report.warnings.extend(self.check()?);
        Ok(report)
    }

    pub(crate) fn check_angles(&self, angles: &[f64]) -> Result<(), ChainError> {
        if angles.len() != self.n_joints() {
            return Err(ChainError::AngleCount {
                expected: self.n_joints(),
                got: angles.len(),
            });
        }
        for (joint, &a) in angles.iter().enumerate() {
            if joint < self.rigid_root_units {
                if a != 0.0 {
                    return Err(ChainError::RigidJointMoved {
                        joint,
                        angle_deg: a.to_degrees(),
                    });
                }
            } else if !a.is_finite() || !self.joint_range(joint).contains(a) {
                let range = self.joint_range(joint);
                return Err(ChainError::Joint {
                    joint,
                    source: BeadError::JointLimit {
                        angle_deg: a.to_degrees(),
                        min_deg: range.min.to_degrees(),
                        max_deg: range.max.to_degrees(),
                    },
                });
            }
        }
        Ok(())
    }
}

/// Stick/slip classification of one joint after a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JointStatus {
    Stuck,
    Slipping,
    AtLimit,
}

/// Joint angles, wire tension and per-joint status of one chain.
///
/// Angles are radians in memory and degrees in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    #[serde(rename = "angles_deg", with = "degrees")]
    pub angles: Vec<f64>,
    pub tension: f64,
    pub joint_status: Vec<JointStatus>,
}

impl ChainState {
    pub fn straight(spec: &ChainSpec, tension: f64) -> Self {
        Self {
            angles: vec![0.0; spec.n_joints()],
            tension,
            joint_status: vec![JointStatus::Stuck; spec.n_joints()],
        }
    }

    pub fn check(&self, spec: &ChainSpec) -> Result<(), ChainError> {
        spec.check_angles(&self.angles)?;
        if !(self.tension >= 0.0 && self.tension.is_finite()) {
            return Err(ChainError::InvalidField {
                field: "tension",
                reason: format!("must be finite and non-negative, got {}", self.tension),
            });
        }
        if self.joint_status.len() != self.angles.len() {
            return Err(ChainError::AngleCount {
                expected: self.angles.len(),
                got: self.joint_status.len(),
            });
        }
        Ok(())
    }
}

pub(crate) mod degrees {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|a| a.to_degrees()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Ok(Vec::<f64>::deserialize(d)?
            .into_iter()
            .map(f64::to_radians)
            .collect())
    }
}

/// Position and heading of one bead in the chain plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub position: Vec2,
    /// Unit direction of the segment leaving this bead (the last bead keeps
    /// the incoming direction).
    pub heading: Vec2,
}

pub(crate) fn unit(angle: f64) -> Vec2 {
    Vec2::new(angle.cos(), angle.sin())
}

/// Bead centres for a chain whose first bead sits at `base` with unrotated
/// heading `base_angle`. Segment `s` points along `base_angle + Σ_{j≤s} θ_j`.
pub(crate) fn chain_frames(base: Vec2, base_angle: f64, pitch: f64, angles: &[f64]) -> Vec<Frame> {
    let mut frames = Vec::with_capacity(angles.len() + 1);
    let mut position = base;
    let mut heading_angle = base_angle;
    for &a in angles {
        heading_angle += a;
        let heading = unit(heading_angle);
        frames.push(Frame { position, heading });
        position += heading * pitch;
    }
    let heading = frames.last().map_or(unit(base_angle), |f| f.heading);
    frames.push(Frame { position, heading });
    frames
}

/// Bead frames of a chain based at the origin heading +x.
pub fn forward_kinematics(spec: &ChainSpec, angles: &[f64]) -> Result<Vec<Frame>, ChainError> {
    spec.check_angles(angles)?;
    Ok(chain_frames(Vec2::zeros(), 0.0, spec.pitch(), angles))
}

/// Moment (N·mm) the wire tension exerts against a joint deflection:
/// `tension · dL/dθ`. Zero for cup beads. Positive for positive angles; it
/// acts to reduce the deflection.
pub fn restoring_moment(spec: &ChainSpec, joint_angle: f64, tension: f64) -> Result<f64, ChainError> {
    bead::wire_path_length(&spec.bead, joint_angle)?;
    Ok(tension * bead::path_length_slope(&spec.bead, joint_angle))
}

/// Holding moment per joint (N·mm): `mu · tension · R1 · sin(alpha_c)`.
pub fn friction_capacity(spec: &ChainSpec, tension: f64) -> f64 {
    spec.mu * tension * spec.contact_radius()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointResponse {
    Stuck,
    /// Slipping; `direction` is the sign of the angle change that reduces
    /// the excess moment.
    Slipping { direction: i8 },
}

/// Stick-slip law. The boundary `|load − restoring| = capacity` sticks.
pub fn joint_response(load_moment: f64, capacity: f64, restoring: f64) -> JointResponse {
    let unbalanced = load_moment - restoring;
    if unbalanced.abs() <= capacity {
        JointResponse::Stuck
    } else {
        JointResponse::Slipping {
            direction: if unbalanced > 0.0 { 1 } else { -1 },
        }
    }
}
