//! Parametric cup-shaped bead: geometric constraints and wire path length.
//!
//! Lengths are millimetres. Angles are degrees in serialized form and
//! radians in every function signature.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used when checking the equal-radius constraint.
const RADIUS_EQ_TOL: f64 = 1e-9;

/// Slack allowed when comparing a joint angle against its limit.
const ANGLE_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BeadError {
    #[error("field `{field}` is not finite ({value})")]
    NonFinite { field: &'static str, value: f64 },
    #[error("joint angle {angle_deg:.6}° exceeds the admissible range [{min_deg:.6}°, {max_deg:.6}°]")]
    JointLimit {
        angle_deg: f64,
        min_deg: f64,
        max_deg: f64,
    },
}

/// Contact geometry of the bead-to-bead interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BeadVariant {
    /// Plain spheres. The wire takes a chord detour when the joint bends,
    /// so tension produces a straightening moment.
    SimpleSphere,
    /// Convex front mating a concave rear of the same radius. The wire
    /// centre line length does not depend on the joint angle.
    CupShaped,
}

/// Geometry of one bead plus the wire/clearance dimensions it must satisfy.
///
/// JSON field names follow the drawing labels (`D1`, `R1`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeadSpec {
    /// Outer diameter.
    #[serde(rename = "D1")]
    pub diameter: f64,
    /// Bead radius.
    #[serde(rename = "R1")]
    pub radius: f64,
    /// Radius of the front convex part.
    #[serde(rename = "R2")]
    pub convex_radius: f64,
    /// Radius of the rear concave part.
    #[serde(rename = "R3")]
    pub concave_radius: f64,
    /// Curvature radius of the wire hole's inner surface.
    #[serde(rename = "r1")]
    pub hole_curvature_radius: f64,
    /// Minimum allowed wire bending radius.
    #[serde(rename = "r2")]
    pub min_wire_bend_radius: f64,
    /// Rear hole diameter.
    #[serde(rename = "SD1")]
    pub hole_diameter: f64,
    /// Wire diameter.
    #[serde(rename = "SD2")]
    pub wire_diameter: f64,
    /// Clearance margin for smooth motion.
    #[serde(rename = "e")]
    pub clearance: f64,
    /// Maximum joint deflection per interface, degrees.
    #[serde(rename = "effective_angle")]
    pub effective_angle_deg: f64,
    pub variant: BeadVariant,
}

/// Identifier of a geometric constraint checked by [`validate_bead_spec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConstraintId {
    #[serde(rename = "POSITIVITY")]
    Positivity,
    #[serde(rename = "ANGLE_RANGE")]
    AngleRange,
    #[serde(rename = "EQ1")]
    Eq1,
    #[serde(rename = "EQ2")]
    Eq2,
    #[serde(rename = "EQ3")]
    Eq3,
}

impl ConstraintId {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintId::Positivity => "POSITIVITY",
            ConstraintId::AngleRange => "ANGLE_RANGE",
            ConstraintId::Eq1 => "EQ1",
            ConstraintId::Eq2 => "EQ2",
            ConstraintId::Eq3 => "EQ3",
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub id: ConstraintId,
    pub message: String,
    pub measured: String,
    pub required: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (measured {}, required {})",
            self.id, self.message, self.measured, self.required
        )
    }
}

/// Outcome of a validation pass. `valid` is true iff `violations` is empty;
/// warnings never affect validity.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub(crate) fn from_parts(violations: Vec<Violation>, warnings: Vec<String>) -> Self {
        Self {
            valid: violations.is_empty(),
            violations,
            warnings,
        }
    }

    pub fn ids(&self) -> Vec<ConstraintId> {
        self.violations.iter().map(|v| v.id).collect()
    }
}

/// Admissible bending range of one joint, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointRange {
    pub min: f64,
    pub max: f64,
}

impl JointRange {
    pub fn contains(&self, angle: f64) -> bool {
        angle >= self.min - ANGLE_EPS && angle <= self.max + ANGLE_EPS
    }

    pub fn clamp(&self, angle: f64) -> f64 {
        angle.clamp(self.min, self.max)
    }
}

impl BeadSpec {
    /// Reference-prototype bead (6 mm diameter) with wire and hole dimensions
    /// chosen to satisfy all three constraints.
    pub fn table1() -> Self {
        Self {
            diameter: 6.0,
            radius: 3.0,
            convex_radius: 3.0,
            concave_radius: 3.0,
            hole_curvature_radius: 2.0,
            min_wire_bend_radius: 1.5,
            hole_diameter: 1.2,
            wire_diameter: 0.8,
            clearance: 0.2,
            effective_angle_deg: 15.0,
            variant: BeadVariant::CupShaped,
        }
    }

    pub fn with_variant(mut self, variant: BeadVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_effective_angle_deg(mut self, deg: f64) -> Self {
        self.effective_angle_deg = deg;
        self
    }

    /// Effective angle in radians.
    pub fn effective_angle(&self) -> f64 {
        self.effective_angle_deg.to_radians()
    }

    fn lengths(&self) -> [(&'static str, f64); 9] {
        [
            ("D1", self.diameter),
            ("R1", self.radius),
            ("R2", self.convex_radius),
            ("R3", self.concave_radius),
            ("r1", self.hole_curvature_radius),
            ("r2", self.min_wire_bend_radius),
            ("SD1", self.hole_diameter),
            ("SD2", self.wire_diameter),
            ("e", self.clearance),
        ]
    }

    pub(crate) fn check_finite(&self) -> Result<(), BeadError> {
        for (field, value) in self
            .lengths()
            .into_iter()
            .chain(std::iter::once(("effective_angle", self.effective_angle_deg)))
        {
            if !value.is_finite() {
                return Err(BeadError::NonFinite { field, value });
            }
        }
        Ok(())
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= RADIUS_EQ_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Checks positivity, the angle range and the three geometric relations.
///
/// Every violated constraint is listed once, in the order
/// POSITIVITY, ANGLE_RANGE, EQ1, EQ2, EQ3.
pub fn validate_bead_spec(spec: &BeadSpec) -> Result<ValidationReport, BeadError> {
    spec.check_finite()?;
    let mut violations = Vec::new();

    let non_positive: Vec<String> = spec
        .lengths()
        .iter()
        .filter(|(_, v)| *v <= 0.0)
        .map(|(name, v)| format!("{name}={v}"))
        .collect();
    if !non_positive.is_empty() {
        violations.push(Violation {
            id: ConstraintId::Positivity,
            message: "all lengths must be strictly positive".into(),
            measured: non_positive.join(" "),
            required: "> 0".into(),
        });
    }

    let angle = spec.effective_angle_deg;
    if !(angle > 0.0 && angle < 90.0) {
        violations.push(Violation {
            id: ConstraintId::AngleRange,
            message: "effective angle must lie strictly between 0° and 90°".into(),
            measured: format!("{angle}°"),
            required: "(0°, 90°)".into(),
        });
    }

    let half_d = spec.diameter / 2.0;
    if !(close(spec.convex_radius, spec.radius)
        && close(spec.concave_radius, spec.radius)
        && close(spec.radius, half_d))
    {
        violations.push(Violation {
            id: ConstraintId::Eq1,
            message: "front convex, rear concave and bead radius must all equal D1/2".into(),
            measured: format!(
                "R1={} R2={} R3={} D1/2={}",
                spec.radius, spec.convex_radius, spec.concave_radius, half_d
            ),
            required: "R2 = R3 = R1 = D1/2".into(),
        });
    }

    if !(spec.hole_curvature_radius > spec.min_wire_bend_radius) {
        violations.push(Violation {
            id: ConstraintId::Eq2,
            message: "hole curvature radius must exceed the minimum wire bending radius".into(),
            measured: format!(
                "r1={} r2={}",
                spec.hole_curvature_radius, spec.min_wire_bend_radius
            ),
            required: "r1 > r2".into(),
        });
    }

    let needed = spec.wire_diameter + spec.clearance;
    if !(spec.hole_diameter > needed) {
        violations.push(Violation {
            id: ConstraintId::Eq3,
            message: "rear hole must clear the wire plus the clearance margin".into(),
            measured: format!("SD1={} SD2+e={}", spec.hole_diameter, needed),
            required: "SD1 > SD2 + e".into(),
        });
    }

    Ok(ValidationReport::from_parts(violations, Vec::new()))
}

/// Non-fatal geometry check against a unit pitch: the hole play should
/// allow at least the declared effective angle.
pub fn hole_play_warning(spec: &BeadSpec, unit_pitch: f64) -> Option<String> {
    let play = 2.0 * ((spec.hole_diameter - spec.wire_diameter) / unit_pitch).atan();
    if play < spec.effective_angle() {
        Some(format!(
            "hole play 2·atan((SD1−SD2)/pitch) = {:.3}° is smaller than the effective angle {}°",
            play.to_degrees(),
            spec.effective_angle_deg
        ))
    } else {
        None
    }
}

fn check_angle(spec: &BeadSpec, joint_angle: f64) -> Result<(), BeadError> {
    let range = JointRange {
        min: -spec.effective_angle(),
        max: spec.effective_angle(),
    };
    if !joint_angle.is_finite() || !range.contains(joint_angle) {
        return Err(BeadError::JointLimit {
            angle_deg: joint_angle.to_degrees(),
            min_deg: -spec.effective_angle_deg,
            max_deg: spec.effective_angle_deg,
        });
    }
    Ok(())
}

/// Wire length consumed across one bead-to-bead interface at `joint_angle`
/// (radians).
///
/// The zero-deflection baseline is the centre distance `D1`. Cup beads keep
/// that length at every posture. Sphere beads pivot about their contact
/// point, so the wire runs along both axes to their intersection:
/// `L(θ) = D1 + 2·R1·(sec(θ/2) − 1)`.
pub fn wire_path_length(spec: &BeadSpec, joint_angle: f64) -> Result<f64, BeadError> {
    check_angle(spec, joint_angle)?;
    Ok(path_length_unchecked(spec, joint_angle))
}

pub(crate) fn path_length_unchecked(spec: &BeadSpec, joint_angle: f64) -> f64 {
    match spec.variant {
        BeadVariant::CupShaped => spec.diameter,
        BeadVariant::SimpleSphere => {
            spec.diameter + 2.0 * spec.radius * (1.0 / (joint_angle / 2.0).cos() - 1.0)
        }
    }
}

/// dL/dθ of [`wire_path_length`], mm per radian.
pub(crate) fn path_length_slope(spec: &BeadSpec, joint_angle: f64) -> f64 {
    match spec.variant {
        BeadVariant::CupShaped => 0.0,
        BeadVariant::SimpleSphere => {
            let half = joint_angle / 2.0;
            spec.radius * half.tan() / half.cos()
        }
    }
}

/// d²L/dθ², mm per radian².
pub(crate) fn path_length_curvature(spec: &BeadSpec, joint_angle: f64) -> f64 {
    match spec.variant {
        BeadVariant::CupShaped => 0.0,
        BeadVariant::SimpleSphere => {
            let half = joint_angle / 2.0;
            let sec = 1.0 / half.cos();
            0.5 * spec.radius * sec * (sec * sec + half.tan() * half.tan())
        }
    }
}

/// Bending range of one interface. One-plane constrained chains bend only
/// toward positive angles.
pub fn joint_limit(spec: &BeadSpec, one_plane: bool) -> JointRange {
    let limit = spec.effective_angle();
    if one_plane {
        JointRange { min: 0.0, max: limit }
    } else {
        JointRange {
            min: -limit,
            max: limit,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn table() -> BeadSpec {
        BeadSpec::table1()
    }

    #[test]
    fn table_spec_is_valid() {
        let report = validate_bead_spec(&table()).unwrap();
        assert!(report.valid, "{report:?}");
        assert!(report.violations.is_empty());
    }

    #[test]
    fn unequal_convex_radius_is_eq1() {
        let mut spec = table();
        spec.convex_radius = 2.5;
        assert_eq!(validate_bead_spec(&spec).unwrap().ids(), vec![ConstraintId::Eq1]);
    }

    #[test]
    fn eq3_boundary_is_a_violation() {
        let mut spec = table();
        spec.hole_diameter = 1.0;
        spec.wire_diameter = 0.8;
        spec.clearance = 0.2;
        assert_eq!(validate_bead_spec(&spec).unwrap().ids(), vec![ConstraintId::Eq3]);
    }

    #[test]
    fn zero_clearance_fails_positivity() {
        let mut spec = table();
        spec.clearance = 0.0;
        let report = validate_bead_spec(&spec).unwrap();
        assert_eq!(report.ids(), vec![ConstraintId::Positivity]);
    }

    #[test]
    fn zero_angle_is_rejected() {
        let spec = table().with_effective_angle_deg(0.0);
        assert_eq!(
            validate_bead_spec(&spec).unwrap().ids(),
            vec![ConstraintId::AngleRange]
        );
    }

    #[test]
    fn non_finite_is_an_input_error() {
        let mut spec = table();
        spec.wire_diameter = f64::NAN;
        assert!(matches!(
            validate_bead_spec(&spec),
            Err(BeadError::NonFinite { field: "SD2", .. })
        ));
    }

    #[test]
    fn cup_path_is_posture_independent() {
        let spec = table().with_effective_angle_deg(30.0);
        let l0 = wire_path_length(&spec, 0.0).unwrap();
        let l30 = wire_path_length(&spec, 30f64.to_radians()).unwrap();
        assert_eq!(l30 - l0, 0.0);
    }

    #[test]
    fn sphere_detour_at_thirty_degrees() {
        // 2·3·(sec 15° − 1), frozen from the two-axis intersection construction
        // in tests/oracles.rs.
        let spec = table()
            .with_variant(BeadVariant::SimpleSphere)
            .with_effective_angle_deg(30.0);
        let dl = wire_path_length(&spec, 30f64.to_radians()).unwrap()
            - wire_path_length(&spec, 0.0).unwrap();
        assert_relative_eq!(dl, 0.211_657_082_46, epsilon = 1e-9);
    }

    #[test]
    fn angle_beyond_limit_is_rejected() {
        let spec = table();
        assert!(matches!(
            wire_path_length(&spec, 16f64.to_radians()),
            Err(BeadError::JointLimit { .. })
        ));
        assert!(wire_path_length(&spec, 15f64.to_radians()).is_ok());
    }

    #[test]
    fn joint_limit_ranges() {
        let spec = table();
        let free = joint_limit(&spec, false);
        assert_relative_eq!(free.min.to_degrees(), -15.0, epsilon = 1e-12);
        assert_relative_eq!(free.max.to_degrees(), 15.0, epsilon = 1e-12);
        let one_plane = joint_limit(&spec, true);
        assert_eq!(one_plane.min, 0.0);
        assert_relative_eq!(one_plane.max.to_degrees(), 15.0, epsilon = 1e-12);
    }

    #[test]
    fn slope_matches_finite_difference() {
        let spec = table()
            .with_variant(BeadVariant::SimpleSphere)
            .with_effective_angle_deg(40.0);
        for deg in [-35.0, -10.0, 0.5, 12.0, 33.0] {
            let t = f64::to_radians(deg);
            let h = 1e-6;
            let fd = (path_length_unchecked(&spec, t + h) - path_length_unchecked(&spec, t - h))
                / (2.0 * h);
            assert_relative_eq!(path_length_slope(&spec, t), fd, max_relative = 1e-7);
            let fd2 = (path_length_slope(&spec, t + h) - path_length_slope(&spec, t - h)) / (2.0 * h);
            assert_relative_eq!(path_length_curvature(&spec, t), fd2, max_relative = 1e-6);
        }
    }

    #[test]
    fn json_uses_drawing_labels_and_rejects_unknown_fields() {
        let json = serde_json::to_value(table()).unwrap();
        for key in ["D1", "R1", "R2", "R3", "r1", "r2", "SD1", "SD2", "e", "effective_angle", "variant"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let mut obj = json.as_object().unwrap().clone();
        obj.insert("extra".into(), serde_json::json!(1));
        assert!(serde_json::from_value::<BeadSpec>(serde_json::Value::Object(obj)).is_err());
    }
}
