//! Torus gripper: chains on hinges around a ring, all wires pulled by one
//! pneumatic equalizer.
//!
//! Hinge angles are positive toward closing (tips swing toward the axis).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{degrees, ChainError, ChainSpec, ChainState};

const TABLE1_JSON: &str = include_str!("../data/table1.json");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GripperError {
    #[error("invalid gripper field `{field}`: {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("gripper state does not match config: {0}")]
    StateMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HingeSpring {
    /// N·mm per degree.
    pub stiffness: f64,
    /// Rest angle, degrees.
    pub free_angle: f64,
}

/// Mechanical stops, degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HingeRange {
    pub open: f64,
    pub closed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GripperConfig {
    pub n_chains: usize,
    pub chain: ChainSpec,
    /// mm
    pub torus_diameter: f64,
    /// mm
    pub overall_length: f64,
    /// mm
    pub stroke: f64,
    pub hinge_spring: HingeSpring,
    pub hinge_range: HingeRange,
    /// Converts per-chain wire pull into hinge closing moment, mm.
    pub hinge_lever_arm: f64,
    /// Inward tilt of the chain root from the torus axis, degrees.
    pub mount_angle: f64,
    /// mm²
    #[serde(rename = "piston_area_A")]
    pub piston_area_a: f64,
    /// mm²
    #[serde(rename = "piston_area_B")]
    pub piston_area_b: f64,
    /// N per chain.
    pub wire_tension_limit: f64,
}

fn invalid(field: &'static str, reason: String) -> GripperError {
    GripperError::InvalidField { field, reason }
}

fn positive(field: &'static str, v: f64) -> Result<(), GripperError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive, got {v}")))
    }
}

impl GripperConfig {
    /// The reference prototype, from the bundled `table1.json`.
    pub fn table1() -> Self {
        serde_json::from_str(TABLE1_JSON).expect("bundled table1.json parses")
    }

    pub fn table1_json() -> &'static str {
        TABLE1_JSON
    }

    pub fn check(&self) -> Result<Vec<String>, GripperError> {
        if self.n_chains < 3 {
            return Err(invalid("n_chains", format!("need at least 3, got {}", self.n_chains)));
        }
        let warnings = self.chain.check()?;
        positive("torus_diameter", self.torus_diameter)?;
        if self.torus_diameter <= self.chain.bead.diameter {
            return Err(invalid(
                "torus_diameter",
                format!(
                    "{} mm must exceed the bead diameter {} mm",
                    self.torus_diameter, self.chain.bead.diameter
                ),
            ));
        }
        positive("overall_length", self.overall_length)?;
        positive("stroke", self.stroke)?;
        if self.stroke >= self.overall_length {
            return Err(invalid(
                "stroke",
                format!("{} mm must be below the overall length {} mm", self.stroke, self.overall_length),
            ));
        }
        positive("hinge_spring.stiffness", self.hinge_spring.stiffness)?;
        let HingeRange { open, closed } = self.hinge_range;
        let free = self.hinge_spring.free_angle;
        if !(open.is_finite() && closed.is_finite() && open <= free && free <= closed) {
            return Err(invalid(
                "hinge_range",
                format!("need open ≤ free ≤ closed, got {open} ≤ {free} ≤ {closed}"),
            ));
        }
        positive("hinge_lever_arm", self.hinge_lever_arm)?;
        if !(self.mount_angle.is_finite() && self.mount_angle.abs() < 90.0) {
            return Err(invalid("mount_angle", format!("must lie in (−90°, 90°), got {}", self.mount_angle)));
        }
        positive("piston_area_A", self.piston_area_a)?;
        positive("piston_area_B", self.piston_area_b)?;
        positive("wire_tension_limit", self.wire_tension_limit)?;
        Ok(warnings)
    }

    /// Azimuth of each chain about the torus axis, radians.
    pub fn chain_azimuths(&self) -> Vec<f64> {
        let step = std::f64::consts::TAU / self.n_chains as f64;
        (0..self.n_chains).map(|i| i as f64 * step).collect()
    }

    /// Root (hinge) positions in the gripper frame: torus plane z = 0.
    pub fn chain_roots(&self) -> Vec<[f64; 3]> {
        let r = 0.5 * self.torus_diameter;
        self.chain_azimuths()
            .into_iter()
            .map(|a| [r * a.cos(), r * a.sin(), 0.0])
            .collect()
    }

    pub(crate) fn hinge_stiffness_per_rad(&self) -> f64 {
        self.hinge_spring.stiffness.to_degrees()
    }
}

/// Gauge pressures at the two equalizer ports, kPa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PneumaticState {
    /// Constant-load port.
    pub pressure_a: f64,
    /// Pull port; negative is vacuum.
    pub pressure_b: f64,
}

impl PneumaticState {
    pub fn new(pressure_a: f64, pressure_b: f64) -> Self {
        Self { pressure_a, pressure_b }
    }

    pub fn check(&self) -> Result<(), GripperError> {
        if !(self.pressure_a >= 0.0 && self.pressure_a.is_finite()) {
            return Err(invalid("pressure_A", format!("must be ≥ 0 kPa, got {}", self.pressure_a)));
        }
        if !(self.pressure_b >= -101.0 && self.pressure_b.is_finite()) {
            return Err(invalid("pressure_B", format!("must be ≥ −101 kPa, got {}", self.pressure_b)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GripperState {
    pub chains: Vec<ChainState>,
    #[serde(rename = "hinge_angles_deg", with = "degrees")]
    pub hinge_angles: Vec<f64>,
    /// mm along the stroke; the stroke length means fully extended.
    pub equalizer_position: f64,
}

impl GripperState {
    pub fn check(&self, config: &GripperConfig) -> Result<(), GripperError> {
        let n = config.n_chains;
        if self.chains.len() != n || self.hinge_angles.len() != n {
            return Err(GripperError::StateMismatch(format!(
                "{} chains and {} hinges for {n} lines",
                self.chains.len(),
                self.hinge_angles.len()
            )));
        }
        for c in &self.chains {
            c.check(&config.chain)?;
        }
        if self.chains.iter().any(|c| c.tension != self.chains[0].tension) {
            return Err(GripperError::StateMismatch("wire tensions differ".into()));
        }
        let (lo, hi) = (
            config.hinge_range.open.to_radians(),
            config.hinge_range.closed.to_radians(),
        );
        if let Some(a) = self.hinge_angles.iter().find(|a| !(**a >= lo - 1e-12 && **a <= hi + 1e-12)) {
            return Err(GripperError::StateMismatch(format!(
                "hinge angle {}° outside the stops",
                a.to_degrees()
            )));
        }
        if !(self.equalizer_position >= 0.0 && self.equalizer_position <= config.stroke) {
            return Err(GripperError::StateMismatch(format!(
                "equalizer at {} mm outside [0, {}]",
                self.equalizer_position, config.stroke
            )));
        }
        Ok(())
    }

    pub fn tension(&self) -> f64 {
        self.chains.first().map_or(0.0, |c| c.tension)
    }
}

/// Released gripper: straight chains, slack wires, hinges at rest.
pub fn build_gripper(config: &GripperConfig) -> Result<GripperState, GripperError> {
    config.check()?;
    let n = config.n_chains;
    Ok(GripperState {
        chains: vec![ChainState::straight(&config.chain, 0.0); n],
        hinge_angles: vec![config.hinge_spring.free_angle.to_radians(); n],
        equalizer_position: config.stroke,
    })
}

/// Net pull of the equalizer piston, N. Positive pulls the wires.
pub fn net_piston_force(config: &GripperConfig, pneumatics: &PneumaticState) -> f64 {
    // kPa · mm² = mN
    (pneumatics.pressure_b * config.piston_area_b - pneumatics.pressure_a * config.piston_area_a) * 1e-3
}

/// Wire tension per chain, N. Identical on every chain.
pub fn equalizer_tension(config: &GripperConfig, pneumatics: &PneumaticState) -> f64 {
    let f = net_piston_force(config, pneumatics).max(0.0);
    (f / config.n_chains as f64).min(config.wire_tension_limit)
}

/// Closing moment the wire pull puts on each hinge, N·mm.
pub fn hinge_closing_moment(config: &GripperConfig, pneumatics: &PneumaticState) -> f64 {
    config.hinge_lever_arm * equalizer_tension(config, pneumatics)
}

/// Hinge angles (radians, positive closing) balancing the spring against the
/// wire-induced closing moment and per-hinge external moments (N·mm,
/// positive closing), clamped to the stops.
pub fn hinge_state(
    config: &GripperConfig,
    pneumatics: &PneumaticState,
    external_moments: &[f64],
) -> Result<Vec<f64>, GripperError> {
    pneumatics.check()?;
    if external_moments.len() != config.n_chains {
        return Err(GripperError::StateMismatch(format!(
            "{} external moments for {} hinges",
            external_moments.len(),
            config.n_chains
        )));
    }
    let close = hinge_closing_moment(config, pneumatics);
    let k = config.hinge_stiffness_per_rad();
    let free = config.hinge_spring.free_angle.to_radians();
    let (lo, hi) = (
        config.hinge_range.open.to_radians(),
        config.hinge_range.closed.to_radians(),
    );
    Ok(external_moments
        .iter()
        .map(|m| (free + (close + m) / k).clamp(lo, hi))
        .collect())
}

/// Wire take-up of one chain relative to straight, mm.
pub fn wire_take_up(spec: &ChainSpec, state: &ChainState) -> f64 {
    let straight = crate::bead::path_length_unchecked(&spec.bead, 0.0);
    state
        .angles
        .iter()
        .map(|&a| crate::bead::path_length_unchecked(&spec.bead, a) - straight)
        .sum()
}

/// Equalizer position for the given chains: the stroke minus the mean wire
/// take-up, clamped to the stroke.
pub fn equalizer_position(config: &GripperConfig, chains: &[ChainState]) -> f64 {
    if chains.is_empty() {
        return config.stroke;
    }
    let mean = chains.iter().map(|c| wire_take_up(&config.chain, c)).sum::<f64>() / chains.len() as f64;
    (config.stroke - mean).clamp(0.0, config.stroke)
}

/// Releases a grasp: slack wires, hinges back at rest, chains straightened by
/// the tip restoring element.
pub fn release(config: &GripperConfig, state: &GripperState) -> Result<GripperState, GripperError> {
    state.check(config)?;
    build_gripper(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_builds_eight_chains_at_45_degrees() {
        let cfg = GripperConfig::table1();
        let g = build_gripper(&cfg).unwrap();
        assert_eq!(g.chains.len(), 8);
        let az = cfg.chain_azimuths();
        for w in az.windows(2) {
            assert!((w[1] - w[0] - 45f64.to_radians()).abs() < 1e-12);
        }
        for root in cfg.chain_roots() {
            assert!(((root[0].powi(2) + root[1].powi(2)).sqrt() - 60.0).abs() < 1e-12);
        }
        assert_eq!(g.equalizer_position, 140.0);
        assert!(g.chains.iter().all(|c| c.tension == 0.0 && c.angles.iter().all(|&a| a == 0.0)));
    }

    #[test]
    fn chain_count_bounds() {
        let mut cfg = GripperConfig::table1();
        cfg.n_chains = 3;
        let az = cfg.chain_azimuths();
        assert!((az[1] - 120f64.to_radians()).abs() < 1e-12);
        cfg.n_chains = 2;
        assert!(matches!(
            build_gripper(&cfg),
            Err(GripperError::InvalidField { field: "n_chains", .. })
        ));
    }

    #[test]
    fn invariant_violations_name_the_field() {
        let base = GripperConfig::table1();
        let cases: Vec<(&str, Box<dyn Fn(&mut GripperConfig)>)> = vec![
            ("torus_diameter", Box::new(|c| c.torus_diameter = 5.0)),
            ("stroke", Box::new(|c| c.stroke = 400.0)),
            ("hinge_spring.stiffness", Box::new(|c| c.hinge_spring.stiffness = 0.0)),
            ("piston_area_A", Box::new(|c| c.piston_area_a = -1.0)),
            ("piston_area_B", Box::new(|c| c.piston_area_b = 0.0)),
        ];
        for (name, mutate) in cases {
            let mut cfg = base.clone();
            mutate(&mut cfg);
            match build_gripper(&cfg) {
                Err(GripperError::InvalidField { field, .. }) => assert_eq!(field, name),
                other => panic!("{name}: {other:?}"),
            }
        }
    }

    #[test]
    fn equalizer_examples() {
        let cfg = GripperConfig::table1();
        assert_eq!(equalizer_tension(&cfg, &PneumaticState::new(50.0, 0.0)), 0.0);
        assert!((equalizer_tension(&cfg, &PneumaticState::new(0.0, 200.0)) - 37.0).abs() < 1e-12);
        let t50 = equalizer_tension(&cfg, &PneumaticState::new(0.0, 50.0));
        let t100 = equalizer_tension(&cfg, &PneumaticState::new(0.0, 100.0));
        assert!((t100 - 2.0 * t50).abs() < 1e-12);
        // clamp
        assert_eq!(equalizer_tension(&cfg, &PneumaticState::new(0.0, 400.0)), 37.0);
    }

    #[test]
    fn hinge_examples() {
        let cfg = GripperConfig::table1();
        let zeros = vec![0.0; 8];
        let free = hinge_state(&cfg, &PneumaticState::new(20.0, 0.0), &zeros).unwrap();
        assert!(free.iter().all(|&a| a == 0.0));
        let closed = hinge_state(&cfg, &PneumaticState::new(20.0, 200.0), &zeros).unwrap();
        assert!(closed.iter().all(|&a| a == 30f64.to_radians()));
        let sym = hinge_state(&cfg, &PneumaticState::new(20.0, 20.0), &vec![-40.0; 8]).unwrap();
        assert!(sym.iter().all(|&a| a == sym[0]));
        assert!(hinge_state(&cfg, &PneumaticState::new(-1.0, 0.0), &zeros).is_err());
        assert!(hinge_state(&cfg, &PneumaticState::new(0.0, -120.0), &zeros).is_err());
    }

    #[test]
    fn release_restores_fresh_state() {
        let cfg = GripperConfig::table1();
        let fresh = build_gripper(&cfg).unwrap();
        assert_eq!(release(&cfg, &fresh).unwrap(), fresh);
        let mut gripped = fresh.clone();
        for c in &mut gripped.chains {
            c.tension = 37.0;
            c.angles[20] = 0.1;
        }
        gripped.hinge_angles = vec![0.2; 8];
        gripped.equalizer_position = 100.0;
        assert_eq!(release(&cfg, &gripped).unwrap(), fresh);
    }

    #[test]
    fn unequal_tensions_are_rejected() {
        let cfg = GripperConfig::table1();
        let mut g = build_gripper(&cfg).unwrap();
        g.chains[3].tension = 1.0;
        assert!(g.check(&cfg).is_err());
    }

    #[test]
    fn take_up_is_zero_for_cups() {
        let cfg = GripperConfig::table1();
        let mut s = ChainState::straight(&cfg.chain, 10.0);
        s.angles[20] = 0.2;
        assert_eq!(wire_take_up(&cfg.chain, &s), 0.0);
        assert_eq!(equalizer_position(&cfg, &[s]), 140.0);
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = GripperConfig::table1();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<GripperConfig>(&text).unwrap(), cfg);
        assert!(text.contains("\"piston_area_B\""));
    }
}
