//! Quasi-static equilibrium of a tensioned bead chain.
//!
//! Loads are ramped from zero over `load_steps`. Within a step every joint
//! either sticks or slips by the minimum-energy amount, with dry friction
//! dissipating `capacity · |Δθ|`; joints are swept base to tip and no joint
//! moves more than `angle_step_limit` per sweep.

mod mechanism;
mod obstacle;
pub mod oracle;

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bead::JointRange;
use crate::chain::{friction_capacity, ChainError, ChainSpec, ChainState, JointStatus, Vec2};

pub(crate) use mechanism::{solve_mechanism, MechJoint, MechLoads, MechSolution, Mechanism, Potential};
pub use obstacle::Obstacle;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("invalid load case: {0}")]
    InvalidLoad(String),
    #[error("no equilibrium within budget at step {step}: joint {joint} off by {worst_residual:.3e} N·mm")]
    NotConverged {
        step: usize,
        joint: usize,
        worst_residual: f64,
    },
    #[error("contact set infeasible: bead {bead} penetrates by {penetration:.3e} mm")]
    Infeasible { bead: usize, penetration: f64 },
    #[error("oracle: {0}")]
    Oracle(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointLoad {
    pub bead: usize,
    /// N, in the chain plane.
    pub force: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactConstraint {
    pub bead: usize,
    pub obstacle: Obstacle,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadCase {
    #[serde(default)]
    pub point_loads: Vec<PointLoad>,
    #[serde(default)]
    pub contact_constraints: Vec<ContactConstraint>,
    /// Force on every bead, N.
    #[serde(default)]
    pub gravity: Option<[f64; 2]>,
}

impl LoadCase {
    pub fn tip_load(spec: &ChainSpec, force: [f64; 2]) -> Self {
        Self {
            point_loads: vec![PointLoad {
                bead: spec.n_units - 1,
                force,
            }],
            ..Self::default()
        }
    }

    pub fn check(&self, n_beads: usize) -> Result<(), SolveError> {
        for l in &self.point_loads {
            if l.bead >= n_beads {
                return Err(SolveError::InvalidLoad(format!(
                    "point load on bead {} of {n_beads}",
                    l.bead
                )));
            }
            if !l.force.iter().all(|f| f.is_finite()) {
                return Err(SolveError::InvalidLoad(format!("non-finite force on bead {}", l.bead)));
            }
        }
        for c in &self.contact_constraints {
            if c.bead >= n_beads {
                return Err(SolveError::InvalidLoad(format!(
                    "contact on bead {} of {n_beads}",
                    c.bead
                )));
            }
            c.obstacle.check().map_err(SolveError::InvalidLoad)?;
        }
        if let Some(g) = self.gravity {
            if !g.iter().all(|f| f.is_finite()) {
                return Err(SolveError::InvalidLoad("non-finite gravity".into()));
            }
        }
        Ok(())
    }

    /// Per-bead forces with gravity expanded.
    pub(crate) fn forces(&self, n_beads: usize) -> Vec<(usize, Vec2)> {
        let mut out: Vec<(usize, Vec2)> = self
            .point_loads
            .iter()
            .map(|l| (l.bead, Vec2::new(l.force[0], l.force[1])))
            .collect();
        if let Some(g) = self.gravity {
            out.extend((0..n_beads).map(|k| (k, Vec2::new(g[0], g[1]))));
        }
        out
    }

    pub(crate) fn contacts(&self) -> Vec<(usize, Obstacle)> {
        self.contact_constraints
            .iter()
            .map(|c| (c.bead, c.obstacle.clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveSettings {
    pub load_steps: usize,
    /// Joint sweeps allowed per load step.
    pub max_iterations: usize,
    /// N·mm.
    pub moment_tolerance: f64,
    #[serde(rename = "angle_step_limit")]
    pub angle_step_limit_deg: f64,
}

impl Default for SolveSettings {
    fn default() -> Self {
        Self {
            load_steps: 50,
            max_iterations: 20_000,
            moment_tolerance: 1e-3,
            angle_step_limit_deg: 1.0,
        }
    }
}

impl SolveSettings {
    pub fn check(&self) -> Result<(), SolveError> {
        let ok = self.load_steps > 0
            && self.max_iterations > 0
            && self.moment_tolerance > 0.0
            && self.moment_tolerance.is_finite()
            && self.angle_step_limit_deg > 0.0
            && self.angle_step_limit_deg.is_finite();
        if ok {
            Ok(())
        } else {
            Err(SolveError::InvalidLoad(format!("solve settings must be positive: {self:?}")))
        }
    }
}

/// One row of the per-sweep diagnostic log.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub step: usize,
    pub joint: usize,
    pub angle_deg: f64,
    /// Excess moment over the admissible friction/limit reaction, N·mm.
    pub residual: f64,
}

pub fn write_log_csv<W: Write>(rows: &[LogRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "step,joint,angle_deg,residual_Nmm")?;
    for r in rows {
        writeln!(w, "{},{},{:.9},{:.6e}", r.step, r.joint, r.angle_deg, r.residual)?;
    }
    Ok(())
}

/// Full solver output.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub state: ChainState,
    /// Normal force per contact constraint, N, in load-case order.
    pub contact_forces: Vec<f64>,
    /// Net moment per joint (external minus restoring), N·mm.
    pub joint_moments: Vec<f64>,
    /// Largest excess over `capacity`, after limit reactions. Bounded by the
    /// moment tolerance.
    pub max_excess: f64,
}

pub(crate) fn chain_joints(spec: &ChainSpec, tension: f64) -> Vec<MechJoint> {
    let capacity = friction_capacity(spec, tension);
    (0..spec.n_joints())
        .map(|j| MechJoint {
            pivot: j,
            range: spec.joint_range(j),
            capacity,
            potential: Potential::WirePath {
                bead: spec.bead.clone(),
                tension,
            },
            applied_moment: 0.0,
        })
        .collect()
}

fn chain_mechanism(spec: &ChainSpec, tension: f64) -> Mechanism {
    Mechanism {
        base: Vec2::zeros(),
        base_angle: 0.0,
        pitch: spec.pitch(),
        n_beads: spec.n_units,
        bead_radius: spec.bead.radius,
        joints: chain_joints(spec, tension),
    }
}

const MOVE_EPS: f64 = 1e-12;

pub(crate) fn at_bound(range: &JointRange, a: f64) -> Option<i8> {
    if range.min == range.max {
        None
    } else if a >= range.max - MOVE_EPS {
        Some(1)
    } else if a <= range.min + MOVE_EPS {
        Some(-1)
    } else {
        None
    }
}

/// Classify each joint against its starting angle.
pub(crate) fn classify(
    joints: &[MechJoint],
    theta0: &[f64],
    theta: &[f64],
    moments: &[f64],
    tol: f64,
) -> Vec<JointStatus> {
    joints
        .iter()
        .enumerate()
        .map(|(j, joint)| {
            let moved = (theta[j] - theta0[j]).abs() > MOVE_EPS;
            match at_bound(&joint.range, theta[j]) {
                Some(side) => {
                    let pushed = moments[j] * side as f64 > joint.capacity + tol;
                    if moved || pushed {
                        JointStatus::AtLimit
                    } else {
                        JointStatus::Stuck
                    }
                }
                None if moved => JointStatus::Slipping,
                None => JointStatus::Stuck,
            }
        })
        .collect()
}

/// Equilibrium of `spec` under `loads`, starting from `state0`.
pub fn solve_equilibrium(
    spec: &ChainSpec,
    state0: &ChainState,
    loads: &LoadCase,
    settings: &SolveSettings,
) -> Result<ChainState, SolveError> {
    solve_equilibrium_detailed(spec, state0, loads, settings, None).map(|e| e.state)
}

/// As [`solve_equilibrium`], also returning contact forces and joint moments
/// and optionally recording one log row per joint per sweep.
pub fn solve_equilibrium_detailed(
    spec: &ChainSpec,
    state0: &ChainState,
    loads: &LoadCase,
    settings: &SolveSettings,
    log: Option<&mut Vec<LogRow>>,
) -> Result<Equilibrium, SolveError> {
    spec.check()?;
    state0.check(spec)?;
    settings.check()?;
    loads.check(spec.n_units)?;
    let mech = chain_mechanism(spec, state0.tension);
    let mloads = MechLoads {
        point: loads.forces(spec.n_units),
        contacts: loads.contacts(),
    };
    let sol: MechSolution = mechanism::solve_mechanism(&mech, &state0.angles, &mloads, settings, log)?;
    let joint_status = classify(
        &mech.joints,
        &state0.angles,
        &sol.theta,
        &sol.moments,
        settings.moment_tolerance,
    );
    Ok(Equilibrium {
        state: ChainState {
            angles: sol.theta,
            tension: state0.tension,
            joint_status,
        },
        contact_forces: sol.contact_forces,
        joint_moments: sol.moments,
        max_excess: sol.max_excess,
    })
}

/// Tip deflection against tip force at one tension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantileverSweep {
    pub tension: f64,
    /// (tip force N, tip deflection mm).
    pub points: Vec<(f64, f64)>,
}

/// Straight chain clamped at the base, dead tip load perpendicular to the
/// base axis pushing toward positive bend. Each force is an independent
/// ramp from the straight state. Deflection is the tip's lateral offset.
pub fn cantilever_stiffness(
    spec: &ChainSpec,
    tension: f64,
    tip_forces: &[f64],
    settings: &SolveSettings,
) -> Result<CantileverSweep, SolveError> {
    if !(tension >= 0.0 && tension.is_finite()) {
        return Err(SolveError::InvalidLoad(format!("tension must be ≥ 0, got {tension}")));
    }
    let state0 = ChainState::straight(spec, tension);
    let mut points = Vec::with_capacity(tip_forces.len());
    for &f in tip_forces {
        if !(f >= 0.0 && f.is_finite()) {
            return Err(SolveError::InvalidLoad(format!("tip force must be ≥ 0, got {f}")));
        }
        let loads = LoadCase::tip_load(spec, [0.0, f]);
        let state = solve_equilibrium(spec, &state0, &loads, settings)?;
        let frames = crate::chain::forward_kinematics(spec, &state.angles)?;
        let tip = frames.last().map_or(0.0, |fr| fr.position.y);
        points.push((f, tip));
    }
    Ok(CantileverSweep { tension, points })
}
