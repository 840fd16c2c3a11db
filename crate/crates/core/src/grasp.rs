//! Press, jam and lift protocols on a fixed object.
//!
//! Each chain is solved in its own plane through the torus axis. The plane
//! coordinate `u` points from the chain's hinge toward the axis, so the hinge
//! sits at `u = -torus_diameter / 2`, and `z` is up with the object's top at
//! `z = 0`. In that plane a chain is a planar mechanism whose first joint is
//! the hinge; positive angles, at the hinge and between beads, turn the
//! chain toward the axis. The object is horizontal and
//! centred, so its cut by a chain plane is a convex profile; chains whose
//! planes cut identical profiles are solved once.
//!
//! Force sign: during the press the reported force is the push of the
//! gripper on the object; during jam and lift it is the pull of the object
//! on the gripper (holding force). Bead–object friction is not part of the
//! equilibrium; its effect on the measured force is added as `μ · ΣN`
//! whenever the gripper is moving.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::chain::{chain_frames, ChainState, Vec2};
use crate::gripper::{
    build_gripper, equalizer_position, equalizer_tension, hinge_closing_moment, net_piston_force,
    GripperConfig,
    GripperError, GripperState, PneumaticState,
};
use crate::solver::{
    chain_joints, classify, MechJoint, MechLoads, Mechanism, Obstacle, Potential, SolveError,
    SolveSettings,
};
use crate::trace::{GraspTrace, Phase, Sample, TraceError, TraceMeta};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraspError {
    #[error(transparent)]
    Gripper(#[from] GripperError),
    #[error("solver failed at displacement {displacement} mm: {source}")]
    Solve { displacement: f64, source: SolveError },
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

const DEFAULT_YAW: f64 = 22.5;

fn default_yaw() -> f64 {
    DEFAULT_YAW
}

fn default_length() -> f64 {
    100.0
}

fn default_prism_height() -> f64 {
    40.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// Lying on its side, axis horizontal.
    Cylinder { diameter: f64 },
    /// Apex up, ridge horizontal.
    TriangularPrism {
        apex_angle: f64,
        #[serde(default = "default_prism_height")]
        height: f64,
    },
    /// Flat floor.
    HalfPlane,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectShape {
    #[serde(flatten)]
    pub shape: Shape,
    pub material: String,
    /// Extent along the horizontal axis, mm.
    #[serde(default = "default_length")]
    pub length: f64,
    /// Bead–object friction; defaults by material when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub friction: Option<f64>,
    /// Azimuth of the object's cross-section plane from the first chain,
    /// degrees. The default keeps every chain plane off the object's axis, where
    /// a planar slice would show a flat top a real chain slides off.
    #[serde(default = "default_yaw")]
    pub yaw: f64,
}

impl ObjectShape {
    pub fn cylinder(diameter: f64) -> Self {
        Self {
            shape: Shape::Cylinder { diameter },
            material: "polyacetal".into(),
            length: default_length(),
            friction: None,
            yaw: DEFAULT_YAW,
        }
    }

    pub fn prism(apex_angle: f64) -> Self {
        Self {
            shape: Shape::TriangularPrism {
                apex_angle,
                height: default_prism_height(),
            },
            material: "acrylic".into(),
            length: default_length(),
            friction: None,
            yaw: DEFAULT_YAW,
        }
    }

    pub fn half_plane() -> Self {
        Self {
            shape: Shape::HalfPlane,
            material: "steel".into(),
            length: default_length(),
            friction: Some(0.2),
            yaw: DEFAULT_YAW,
        }
    }

    pub fn check(&self) -> Result<(), GraspError> {
        let bad = |m: String| Err(GraspError::InvalidObject(m));
        match self.shape {
            Shape::Cylinder { diameter } if !(diameter > 0.0 && diameter.is_finite()) => {
                return bad(format!("diameter must be positive, got {diameter}"));
            }
            Shape::TriangularPrism { apex_angle, height } => {
                if !(apex_angle > 0.0 && apex_angle < 180.0) {
                    return bad(format!("apex angle must lie in (0°, 180°), got {apex_angle}"));
                }
                if !(height > 0.0 && height.is_finite()) {
                    return bad(format!("height must be positive, got {height}"));
                }
            }
            _ => {}
        }
        if !self.yaw.is_finite() {
            return bad(format!("yaw must be finite, got {}", self.yaw));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return bad(format!("length must be positive, got {}", self.length));
        }
        self.friction().map(|_| ())
    }

    /// Bead–object friction coefficient.
    pub fn friction(&self) -> Result<f64, GraspError> {
        let mu = match (self.friction, self.material.as_str()) {
            (Some(mu), _) => mu,
            (None, "polyacetal") => 0.2,
            (None, "acrylic") => 0.25,
            (None, other) => {
                return Err(GraspError::InvalidObject(format!(
                    "no default friction for material `{other}`; set `friction`"
                )))
            }
        };
        if mu >= 0.0 && mu.is_finite() {
            Ok(mu)
        } else {
            Err(GraspError::InvalidObject(format!("friction must be ≥ 0, got {mu}")))
        }
    }

    /// The object's cut by the chain plane at `azimuth` from the object's
    /// cross-section plane. The object sits on a slender fixture, so
    /// nothing else is in the chains' way.
    pub fn profile(&self, azimuth: f64) -> Vec<Obstacle> {
        let a = azimuth - self.yaw.to_radians();
        let (c, s) = (a.cos().abs(), a.sin().abs());
        let stretch = |w: f64| if c > 1e-12 { w / c } else { f64::INFINITY };
        let limit = if s > 1e-12 { 0.5 * self.length / s } else { f64::INFINITY };
        match self.shape {
            Shape::HalfPlane => vec![Obstacle::HalfPlane {
                point: [0.0, 0.0],
                normal: [0.0, 1.0],
            }],
            Shape::Cylinder { diameter } => {
                let r = 0.5 * diameter;
                let mut right = Vec::with_capacity(PROFILE_LEVELS + 1);
                for i in 0..=PROFILE_LEVELS {
                    let t = std::f64::consts::PI * i as f64 / PROFILE_LEVELS as f64;
                    let z = -r * (1.0 - t.cos());
                    let w = stretch(r * t.sin()).min(limit);
                    right.push([w, z]);
                }
                vec![mirror_polygon(&right)]
            }
            Shape::TriangularPrism { apex_angle, height } => {
                let slope = (0.5 * apex_angle).to_radians().tan();
                let base = stretch(height * slope);
                let mut right = vec![[0.0, 0.0]];
                if base > limit {
                    let z = -limit / stretch(slope);
                    right.push([limit, z]);
                    right.push([limit, -height]);
                } else {
                    right.push([base, -height]);
                }
                vec![mirror_polygon(&right)]
            }
        }
    }
}

const PROFILE_LEVELS: usize = 48;

/// Closes a right half-outline (top to bottom, `s ≥ 0`) into a symmetric
/// polygon, dropping repeated points on the axis.
fn mirror_polygon(right: &[[f64; 2]]) -> Obstacle {
    let mut pts: Vec<[f64; 2]> = right.to_vec();
    pts.extend(right.iter().rev().map(|p| [-p[0], p[1]]));
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().map_or(true, |q: &[f64; 2]| (q[0] - p[0]).abs() + (q[1] - p[1]).abs() > 1e-12) {
            out.push(p);
        }
    }
    while out.len() > 1 {
        let (a, b) = (out[0], out[out.len() - 1]);
        if (a[0] - b[0]).abs() + (a[1] - b[1]).abs() > 1e-12 {
            break;
        }
        out.pop();
    }
    Obstacle::ConvexPolygon { vertices: out }
}

/// Seeded Gaussian noise on recorded forces, for exercising trial
/// statistics. Off unless present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub seed: u64,
    /// Standard deviation, N.
    pub force_sd: f64,
}

fn default_standoff() -> f64 {
    10.0
}

fn default_speed() -> f64 {
    100.0
}

fn default_trials() -> usize {
    1
}

fn default_step() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Protocol {
    /// mm
    pub press_depth: f64,
    /// mm
    pub lift_distance: f64,
    /// mm/min; recorded only.
    #[serde(default = "default_speed")]
    pub speed: f64,
    /// kPa
    pub pressure_a: f64,
    /// kPa
    pub pressure_b: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// mm
    #[serde(default = "default_step")]
    pub sample_step: f64,
    /// Gap between the fully extended tips and the object top at zero
    /// displacement, mm.
    #[serde(default = "default_standoff")]
    pub standoff: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub solver: SolveSettings,
}

impl Protocol {
    pub fn new(press_depth: f64, lift_distance: f64, pressure_a: f64, pressure_b: f64) -> Self {
        Self {
            press_depth,
            lift_distance,
            speed: default_speed(),
            pressure_a,
            pressure_b,
            trials: 1,
            sample_step: default_step(),
            standoff: default_standoff(),
            noise: None,
            solver: SolveSettings::default(),
        }
    }

    pub fn check(&self) -> Result<(), GraspError> {
        let bad = |m: String| Err(GraspError::InvalidProtocol(m));
        for (name, v) in [
            ("press_depth", self.press_depth),
            ("lift_distance", self.lift_distance),
            ("speed", self.speed),
            ("sample_step", self.sample_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.standoff >= 0.0 && self.standoff.is_finite()) {
            return bad(format!("standoff must be ≥ 0, got {}", self.standoff));
        }
        if self.trials < 1 {
            return bad("trials must be ≥ 1".into());
        }
        if let Some(n) = &self.noise {
            if !(n.force_sd >= 0.0 && n.force_sd.is_finite()) {
                return bad(format!("noise sd must be ≥ 0, got {}", n.force_sd));
            }
        }
        self.pneumatics().check()?;
        self.solver.check().map_err(|e| GraspError::InvalidProtocol(e.to_string()))
    }

    pub fn pneumatics(&self) -> PneumaticState {
        PneumaticState::new(self.pressure_a, self.pressure_b)
    }
}

/// Sample points `step, 2·step, …` up to and including `end`, offset by
/// `start`.
fn samples(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step - 1e-9).ceil().max(0.0) as usize;
    (1..=n)
        .map(|i| if i == n { end } else { start + i as f64 * step })
        .collect()
}

/// One chain plane: its mechanism template and obstacles.
struct Plane {
    obstacles: Vec<Obstacle>,
    /// Chains sharing this plane's profile.
    members: Vec<usize>,
}

fn planes(config: &GripperConfig, object: &ObjectShape) -> Vec<Plane> {
    let mut out: Vec<Plane> = Vec::new();
    for (i, az) in config.chain_azimuths().into_iter().enumerate() {
        let obstacles = object.profile(az);
        match out.iter_mut().find(|p| profiles_match(&p.obstacles, &obstacles)) {
            Some(p) => p.members.push(i),
            None => out.push(Plane {
                obstacles,
                members: vec![i],
            }),
        }
    }
    out
}

fn profiles_match(a: &[Obstacle], b: &[Obstacle]) -> bool {
    let close = |x: &[f64; 2], y: &[f64; 2]| (x[0] - y[0]).abs() <= 1e-9 && (x[1] - y[1]).abs() <= 1e-9;
    a.len() == b.len()
        && a.iter().zip(b).all(|(p, q)| match (p, q) {
            (Obstacle::ConvexPolygon { vertices: u }, Obstacle::ConvexPolygon { vertices: v }) => {
                u.len() == v.len() && u.iter().zip(v).all(|(x, y)| close(x, y))
            }
            _ => p == q,
        })
}

/// Tip drop below the hinge with the hinge at its open stop and the
/// flexible joints turned as far toward hanging straight down as they
/// allow: the gripper's maximum length.
pub fn max_reach(config: &GripperConfig) -> f64 {
    let spec = &config.chain;
    let heading = base_heading(config, config.hinge_range.open.to_radians());
    let mut need = -std::f64::consts::FRAC_PI_2 - heading;
    let angles: Vec<f64> = (0..spec.n_joints())
        .map(|j| {
            let a = spec.joint_range(j).clamp(need);
            need -= a;
            a
        })
        .collect();
    let frames = chain_frames(Vec2::zeros(), heading, spec.pitch(), &angles);
    -frames.iter().map(|f| f.position.y).fold(f64::INFINITY, f64::min)
}

/// Absolute heading of the first chain segment for hinge angle `psi`
/// (positive closing).
fn base_heading(config: &GripperConfig, psi: f64) -> f64 {
    -std::f64::consts::FRAC_PI_2 + config.mount_angle.to_radians() + psi
}

struct Rig<'a> {
    config: &'a GripperConfig,
    mu: f64,
    reach: f64,
    standoff: f64,
}

impl Rig<'_> {
    fn hinge_height(&self, displacement: f64) -> f64 {
        self.standoff + self.reach - displacement
    }

    fn mechanism(&self, displacement: f64, tension: f64, closing: f64) -> Mechanism {
        let config = self.config;
        let spec = &config.chain;
        let lo = config.hinge_range.open.to_radians();
        let hi = config.hinge_range.closed.to_radians();
        let hinge = MechJoint {
            pivot: 0,
            range: crate::bead::JointRange { min: lo, max: hi },
            capacity: 0.0,
            potential: Potential::Spring {
                stiffness: config.hinge_stiffness_per_rad(),
                rest: config.hinge_spring.free_angle.to_radians(),
            },
            applied_moment: closing,
        };
        let mut joints = vec![hinge];
        joints.extend(chain_joints(spec, tension));
        Mechanism {
            base: Vec2::new(-0.5 * config.torus_diameter, self.hinge_height(displacement)),
            base_angle: base_heading(config, 0.0),
            pitch: spec.pitch(),
            n_beads: spec.n_units,
            bead_radius: spec.bead.radius,
            joints,
        }
    }

    fn loads(&self, plane: &Plane, tip_load: f64) -> MechLoads {
        let n = self.config.chain.n_units;
        let contacts = (1..n)
            .flat_map(|k| plane.obstacles.iter().map(move |o| (k, o.clone())))
            .collect();
        MechLoads {
            point: vec![(n - 1, Vec2::new(0.0, -tip_load))],
            contacts,
        }
    }

    /// Vertical object force on the chain and total normal force on the
    /// object (the table excluded).
    fn object_forces(&self, plane: &Plane, mech: &Mechanism, loads: &MechLoads, sol: &[f64], forces: &[f64]) -> (f64, f64) {
        let pos = mech.positions(sol);
        let object = &plane.obstacles[0];
        let mut fz = 0.0;
        let mut total = 0.0;
        for ((k, o), &n) in loads.contacts.iter().zip(forces) {
            if o == object && n > 0.0 {
                let (_, normal) = o.signed_distance(pos[*k]);
                fz += n * normal.y;
                total += n;
            }
        }
        (fz, total)
    }
}

/// Internal per-plane state: mechanism angles `[hinge, chain joints…]`.
#[derive(Clone)]
struct PlaneState {
    theta: Vec<f64>,
}

fn solve_plane(
    rig: &Rig<'_>,
    plane: &Plane,
    state: &PlaneState,
    displacement: f64,
    tension: f64,
    closing: f64,
    tip_load: f64,
    settings: &SolveSettings,
) -> Result<(PlaneState, f64, f64, Vec<f64>), GraspError> {
    let mech = rig.mechanism(displacement, tension, closing);
    let loads = rig.loads(plane, tip_load);
    let sol = crate::solver::solve_mechanism(&mech, &state.theta, &loads, settings, None)
        .map_err(|source| GraspError::Solve { displacement, source })?;
    let (fz, n) = rig.object_forces(plane, &mech, &loads, &sol.theta, &sol.contact_forces);
    Ok((PlaneState { theta: sol.theta }, fz, n, sol.moments))
}

fn rig<'a>(config: &'a GripperConfig, object: &ObjectShape, protocol: &Protocol) -> Result<Rig<'a>, GraspError> {
    config.check()?;
    object.check()?;
    protocol.check()?;
    Ok(Rig {
        config,
        mu: object.friction()?,
        reach: max_reach(config),
        standoff: protocol.standoff,
    })
}

/// Downward push on each chain's tip fastening. A net piston force toward
/// the A side cannot pull the wires; the rod pushes the tips instead.
pub fn tip_load(config: &GripperConfig, pneumatics: &PneumaticState) -> f64 {
    (-net_piston_force(config, pneumatics)).max(0.0) / config.n_chains as f64
}

fn plane_states_from(state: &GripperState, planes: &[Plane]) -> Vec<PlaneState> {
    planes
        .iter()
        .map(|p| {
            let i = p.members[0];
            let mut theta = vec![state.hinge_angles[i]];
            theta.extend(&state.chains[i].angles);
            PlaneState { theta }
        })
        .collect()
}

fn gripper_state_from(
    config: &GripperConfig,
    planes: &[Plane],
    states: &[PlaneState],
    start: &[PlaneState],
    moments: &[Vec<f64>],
    tension: f64,
    tol: f64,
) -> GripperState {
    let n = config.n_chains;
    let mut chains = vec![ChainState::straight(&config.chain, tension); n];
    let mut hinges = vec![0.0; n];
    let joints = chain_joints(&config.chain, tension);
    for (((p, s), s0), m) in planes.iter().zip(states).zip(start).zip(moments) {
        let status = classify(&joints, &s0.theta[1..], &s.theta[1..], &m[1..], tol);
        for &i in &p.members {
            chains[i] = ChainState {
                angles: s.theta[1..].to_vec(),
                tension,
                joint_status: status.clone(),
            };
            hinges[i] = s.theta[0];
        }
    }
    let equalizer = equalizer_position(config, &chains);
    GripperState {
        chains,
        hinge_angles: hinges,
        equalizer_position: equalizer,
    }
}

/// Lowers the released gripper onto the object in `sample_step` increments
/// down to `press_depth`, with the wires slack.
pub fn press(
    config: &GripperConfig,
    gripper: &GripperState,
    object: &ObjectShape,
    protocol: &Protocol,
) -> Result<(GripperState, GraspTrace), GraspError> {
    let rig = rig(config, object, protocol)?;
    gripper.check(config)?;
    if gripper.tension() != 0.0 {
        return Err(GraspError::InvalidProtocol(format!(
            "press needs slack wires, tension is {} N",
            gripper.tension()
        )));
    }
    let planes = planes(config, object);
    let start = plane_states_from(gripper, &planes);
    let mut states = start.clone();
    let mut moments = vec![Vec::new(); planes.len()];
    // port B stays vented until the jam
    let load = tip_load(config, &PneumaticState::new(protocol.pressure_a, 0.0));
    let step_settings = SolveSettings {
        load_steps: 1,
        ..protocol.solver.clone()
    };

    let mut displacements = vec![0.0];
    displacements.extend(samples(0.0, protocol.press_depth, protocol.sample_step));
    let mut out = Vec::with_capacity(displacements.len());
    for (i, &d) in displacements.iter().enumerate() {
        // the first sample ramps the tip load on from rest
        let settings = if i == 0 { &protocol.solver } else { &step_settings };
        let mut force = 0.0;
        for (k, plane) in planes.iter().enumerate() {
            let (next, fz, n, m) = solve_plane(&rig, plane, &states[k], d, 0.0, 0.0, load, settings)?;
            let moving = i > 0;
            let f = fz + if moving { rig.mu * n } else { 0.0 };
            force += f * plane.members.len() as f64;
            states[k] = next;
            moments[k] = m;
        }
        out.push(Sample {
            displacement: d,
            force,
            phase: Phase::Press,
        });
    }
    let state = gripper_state_from(config, &planes, &states, &start, &moments, 0.0, protocol.solver.moment_tolerance);
    let trace = GraspTrace {
        samples: out,
        meta: TraceMeta {
            label: "press".into(),
            config_hash: config_hash(config, object, protocol),
            escaped: false,
            protocol: Some(protocol.clone()),
        },
    };
    Ok((state, trace))
}

/// Pulls the wires to the equalizer tension at the pressed depth, then lifts
/// in `sample_step` increments over `lift_distance` while the object stays
/// fixed. Displacement keeps counting crosshead travel from the press.
pub fn jam_and_lift(
    config: &GripperConfig,
    pressed: &GripperState,
    object: &ObjectShape,
    protocol: &Protocol,
) -> Result<GraspTrace, GraspError> {
    let rig = rig(config, object, protocol)?;
    pressed.check(config)?;
    let planes = planes(config, object);
    let mut states = plane_states_from(pressed, &planes);
    let pneumatics = protocol.pneumatics();
    let tension = equalizer_tension(config, &pneumatics);
    let closing = hinge_closing_moment(config, &pneumatics);
    let load = tip_load(config, &pneumatics);
    let settings = SolveSettings {
        load_steps: 1,
        ..protocol.solver.clone()
    };
    let depth = protocol.press_depth;

    let mut out = Vec::new();
    let mut escaped = false;
    let mut lift_points = vec![depth];
    lift_points.extend(samples(depth, depth + protocol.lift_distance, protocol.sample_step));
    for (i, &travel) in lift_points.iter().enumerate() {
        let phase = if i == 0 { Phase::Jam } else { Phase::Lift };
        if escaped {
            out.push(Sample {
                displacement: travel,
                force: 0.0,
                phase,
            });
            continue;
        }
        // hinge height follows the crosshead back up
        let height_disp = depth - (travel - depth);
        let mut force = 0.0;
        let mut normal = 0.0;
        for (k, plane) in planes.iter().enumerate() {
            let (next, fz, n, _) =
                solve_plane(&rig, plane, &states[k], height_disp, tension, closing, load, &settings)?;
            let moving = phase == Phase::Lift;
            let f = -fz + if moving { rig.mu * n } else { 0.0 };
            force += f * plane.members.len() as f64;
            normal += n;
            states[k] = next;
        }
        if phase == Phase::Lift && normal == 0.0 {
            escaped = true;
        }
        out.push(Sample {
            displacement: travel,
            force,
            phase,
        });
    }
    Ok(GraspTrace {
        samples: out,
        meta: TraceMeta {
            label: "jam_and_lift".into(),
            config_hash: config_hash(config, object, protocol),
            escaped,
            protocol: Some(protocol.clone()),
        },
    })
}

/// Full grasp experiment from a released gripper: press, jam, lift.
pub fn grasp(config: &GripperConfig, object: &ObjectShape, protocol: &Protocol) -> Result<GraspTrace, GraspError> {
    let fresh = build_gripper(config)?;
    let (pressed, press_trace) = press(config, &fresh, object, protocol)?;
    let lift = jam_and_lift(config, &pressed, object, protocol)?;
    let mut samples = press_trace.samples;
    samples.extend(lift.samples);
    Ok(GraspTrace {
        samples,
        meta: TraceMeta {
            label: "grasp".into(),
            ..lift.meta
        },
    })
}

/// One trace per trial. Without noise every trial is identical, so a
/// single trace is returned.
pub fn with_trials(trace: &GraspTrace, protocol: &Protocol) -> Result<Vec<GraspTrace>, GraspError> {
    let Some(noise) = &protocol.noise else {
        return Ok(vec![trace.clone()]);
    };
    let dist = Normal::new(0.0, noise.force_sd)
        .map_err(|e| GraspError::InvalidProtocol(format!("noise: {e}")))?;
    Ok((0..protocol.trials)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(noise.seed.wrapping_add(t as u64));
            let mut out = trace.clone();
            for s in &mut out.samples {
                s.force += dist.sample(&mut rng);
            }
            out
        })
        .collect())
}

/// SHA-256 over the canonical JSON of the inputs, hex encoded.
pub fn config_hash(config: &GripperConfig, object: &ObjectShape, protocol: &Protocol) -> String {
    let mut h = Sha256::new();
    for part in [
        serde_json::to_string(config),
        serde_json::to_string(object),
        serde_json::to_string(protocol),
    ] {
        h.update(part.expect("plain data serializes").as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Number of chains touching the object after a press to
/// `protocol.press_depth`, counting a bead as touching when its gap is at
/// most `tol`.
pub fn chains_in_contact(
    config: &GripperConfig,
    pressed: &GripperState,
    object: &ObjectShape,
    protocol: &Protocol,
    tol: f64,
) -> Result<usize, GraspError> {
    let rig = rig(config, object, protocol)?;
    pressed.check(config)?;
    let mech = rig.mechanism(protocol.press_depth, 0.0, 0.0);
    let azimuths = config.chain_azimuths();
    Ok((0..config.n_chains)
        .filter(|&i| {
            let obstacle = &object.profile(azimuths[i])[0];
            let mut theta = vec![pressed.hinge_angles[i]];
            theta.extend(&pressed.chains[i].angles);
            mech.positions(&theta)[1..]
                .iter()
                .any(|&p| obstacle.signed_distance(p).0 - mech.bead_radius <= tol)
        })
        .count())
}
