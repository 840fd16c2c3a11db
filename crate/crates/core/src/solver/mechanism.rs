//! Planar serial mechanism with dry-friction joints, solved by incremental
//! energy minimisation.
//!
//! Each load step minimises
//! `Π(θ) + Σ_j C_j·|θ_j − θ_ref,j|` subject to joint boxes and contact gaps,
//! where `θ_ref` is the state at the start of the step. Joints are updated
//! one at a time from base to tip; contacts are enforced with an augmented
//! Lagrangian so the returned state is non-penetrating to `PEN_TOL`.

use nalgebra::{DMatrix, DVector};

use crate::bead::{self, BeadSpec, JointRange};
use crate::chain::{unit, Vec2};

use super::obstacle::Obstacle;
use super::{LogRow, SolveError, SolveSettings};

/// Penetration accepted in a returned state, mm.
pub(crate) const PEN_TOL: f64 = 1e-8;
const RHO_START: f64 = 1.0;
/// Fraction of the bead radius a trial point may sink into an obstacle.
const PEN_GUARD: f64 = 0.5;
const RHO_MAX: f64 = 1e12;
const MAX_OUTER: usize = 60;
const LINE_SEARCH_HALVINGS: usize = 40;
const BOUND_EPS: f64 = 1e-12;
const FD_STEP: f64 = 1e-7;

#[derive(Debug, Clone)]
pub(crate) enum Potential {
    #[cfg_attr(not(test), allow(dead_code))]
    None,
    /// Tension times wire path length across the interface.
    WirePath { bead: BeadSpec, tension: f64 },
    /// Torsion spring, N·mm per radian.
    Spring { stiffness: f64, rest: f64 },
}

impl Potential {
    fn value(&self, a: f64) -> f64 {
        match self {
            Potential::None => 0.0,
            Potential::WirePath { bead, tension } => tension * bead::path_length_unchecked(bead, a),
            Potential::Spring { stiffness, rest } => 0.5 * stiffness * (a - rest).powi(2),
        }
    }

    fn slope(&self, a: f64) -> f64 {
        match self {
            Potential::None => 0.0,
            Potential::WirePath { bead, tension } => tension * bead::path_length_slope(bead, a),
            Potential::Spring { stiffness, rest } => stiffness * (a - rest),
        }
    }

    fn curvature(&self, a: f64) -> f64 {
        match self {
            Potential::None => 0.0,
            Potential::WirePath { bead, tension } => {
                tension * bead::path_length_curvature(bead, a)
            }
            Potential::Spring { stiffness, .. } => *stiffness,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct MechJoint {
    /// Bead about which this joint rotates everything distal to it.
    pub pivot: usize,
    pub range: JointRange,
    /// Dry-friction holding moment, N·mm.
    pub capacity: f64,
    pub potential: Potential,
    /// Constant moment applied in the positive sense, N·mm.
    pub applied_moment: f64,
}

impl MechJoint {
    fn is_fixed(&self) -> bool {
        self.range.min == self.range.max
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Mechanism {
    pub base: Vec2,
    pub base_angle: f64,
    pub pitch: f64,
    pub n_beads: usize,
    pub bead_radius: f64,
    /// Sorted by pivot.
    pub joints: Vec<MechJoint>,
}

impl Mechanism {
    pub fn positions(&self, theta: &[f64]) -> Vec<Vec2> {
        let mut pos = Vec::with_capacity(self.n_beads);
        let mut p = self.base;
        let mut heading = self.base_angle;
        let mut j = 0;
        pos.push(p);
        for seg in 0..self.n_beads - 1 {
            while j < self.joints.len() && self.joints[j].pivot <= seg {
                heading += theta[j];
                j += 1;
            }
            p += unit(heading) * self.pitch;
            pos.push(p);
        }
        pos
    }
}

#[derive(Debug, Clone)]
pub(crate) struct MechLoads {
    pub point: Vec<(usize, Vec2)>,
    pub contacts: Vec<(usize, Obstacle)>,
}

#[derive(Debug, Clone)]
pub(crate) struct MechSolution {
    pub theta: Vec<f64>,
    /// Normal force magnitude per contact constraint, N.
    pub contact_forces: Vec<f64>,
    /// Net generalised moment per joint (loads + contacts + applied moment −
    /// restoring), N·mm.
    pub moments: Vec<f64>,
    /// Largest per-joint excess over capacity, after limit reactions.
    pub max_excess: f64,
    #[cfg_attr(not(test), allow(dead_code))]
    pub max_penetration: f64,
}

fn perp(r: Vec2) -> Vec2 {
    Vec2::new(-r.y, r.x)
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn rotate(r: Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(c * r.x - s * r.y, s * r.x + c * r.y)
}

struct Problem<'a> {
    mech: &'a Mechanism,
    loads: Vec<(usize, Vec2)>,
    contacts: &'a [(usize, Obstacle)],
    multipliers: Vec<f64>,
    rho: f64,
    /// Trial points sinking deeper than this into any obstacle are
    /// rejected, so a soft penalty cannot carry a bead through an obstacle.
    pen_limit: f64,
}

impl Problem<'_> {
    fn contact_term(&self, gap: f64, lambda: f64) -> f64 {
        if self.rho * gap < lambda {
            -lambda * gap + 0.5 * self.rho * gap * gap
        } else {
            -lambda * lambda / (2.0 * self.rho)
        }
    }

    fn contact_force(&self, gap: f64, lambda: f64) -> f64 {
        (lambda - self.rho * gap).max(0.0)
    }

    fn gap(&self, obstacle: &Obstacle, p: Vec2) -> (f64, Vec2) {
        let (d, g) = obstacle.signed_distance(p);
        (d - self.mech.bead_radius, g)
    }

    /// Energy terms that change when joint `j` rotates by `delta`, with the
    /// distal beads rotated about the pivot.
    fn local_energy(&self, j: usize, theta_j: f64, delta: f64, pos: &[Vec2]) -> f64 {
        let joint = &self.mech.joints[j];
        let pivot = pos[joint.pivot];
        let mut e = joint.potential.value(theta_j + delta) - joint.applied_moment * (theta_j + delta);
        for &(k, f) in &self.loads {
            if k > joint.pivot {
                let p = pivot + rotate(pos[k] - pivot, delta);
                e -= f.dot(&p);
            }
        }
        for (c, (k, obstacle)) in self.contacts.iter().enumerate() {
            if *k > joint.pivot {
                let p = pivot + rotate(pos[*k] - pivot, delta);
                let (gap, _) = self.gap(obstacle, p);
                if -gap > self.pen_limit {
                    return f64::INFINITY;
                }
                e += self.contact_term(gap, self.multipliers[c]);
            }
        }
        e
    }

    /// dE/dθ_j and a curvature estimate.
    fn gradient(&self, j: usize, theta_j: f64, pos: &[Vec2]) -> (f64, f64) {
        let joint = &self.mech.joints[j];
        let pivot = pos[joint.pivot];
        let mut g = joint.potential.slope(theta_j) - joint.applied_moment;
        let mut h = joint.potential.curvature(theta_j);
        for &(k, f) in &self.loads {
            if k > joint.pivot {
                let r = pos[k] - pivot;
                g -= f.dot(&perp(r));
                h += f.dot(&r);
            }
        }
        for (c, (k, obstacle)) in self.contacts.iter().enumerate() {
            if *k > joint.pivot {
                let r = pos[*k] - pivot;
                let (gap, n) = self.gap(obstacle, pos[*k]);
                let lambda = self.multipliers[c];
                let dg = n.dot(&perp(r));
                let force = self.contact_force(gap, lambda);
                g -= force * dg;
                if self.rho * gap < lambda {
                    h += self.rho * dg * dg;
                }
                h += force * n.dot(&r);
            }
        }
        (g, h)
    }

    /// Smooth part of the incremental energy.
    fn energy(&self, theta: &[f64]) -> f64 {
        let pos = self.mech.positions(theta);
        let mut e = 0.0;
        for (joint, &a) in self.mech.joints.iter().zip(theta) {
            e += joint.potential.value(a) - joint.applied_moment * a;
        }
        for &(k, f) in &self.loads {
            e -= f.dot(&pos[k]);
        }
        for (c, (k, obstacle)) in self.contacts.iter().enumerate() {
            let (gap, _) = self.gap(obstacle, pos[*k]);
            if -gap > self.pen_limit {
                return f64::INFINITY;
            }
            e += self.contact_term(gap, self.multipliers[c]);
        }
        e
    }

    fn dissipation(&self, theta: &[f64], reference: &[f64]) -> f64 {
        self.mech
            .joints
            .iter()
            .zip(theta.iter().zip(reference))
            .map(|(joint, (a, r))| joint.capacity * (a - r).abs())
            .sum()
    }

    /// All of dE/dθ in one pass: external forces are accumulated from the
    /// tip inward, so each joint sees the total force and moment distal to
    /// its pivot.
    fn gradients(&self, theta: &[f64]) -> Vec<f64> {
        let pos = self.mech.positions(theta);
        let n = pos.len();
        let mut force = vec![Vec2::zeros(); n + 1];
        for &(k, f) in &self.loads {
            force[k] += f;
        }
        for (c, (k, obstacle)) in self.contacts.iter().enumerate() {
            let (gap, normal) = self.gap(obstacle, pos[*k]);
            let f = self.contact_force(gap, self.multipliers[c]);
            if f > 0.0 {
                force[*k] += normal * f;
            }
        }
        // suffix sums of force and of p × F
        let mut moment = vec![0.0; n + 1];
        for k in (0..n).rev() {
            let f = force[k];
            moment[k] = moment[k + 1] + cross(pos[k], f);
            force[k] = force[k + 1] + f;
        }
        self.mech
            .joints
            .iter()
            .zip(theta)
            .map(|(joint, &a)| {
                let c = pos[joint.pivot];
                let distal = joint.pivot + 1;
                joint.potential.slope(a) - joint.applied_moment
                    - (moment[distal] - cross(c, force[distal]))
            })
            .collect()
    }

    fn gaps(&self, pos: &[Vec2]) -> Vec<f64> {
        self.contacts
            .iter()
            .map(|(k, o)| self.gap(o, pos[*k]).0)
            .collect()
    }
}

/// Distance of `-g` from the admissible reaction set at a joint.
fn excess(g: f64, z: f64, capacity: f64, range: &JointRange, theta: f64) -> f64 {
    let (mut lo, mut hi) = if z > 0.0 {
        (capacity, capacity)
    } else if z < 0.0 {
        (-capacity, -capacity)
    } else {
        (-capacity, capacity)
    };
    // -g is the net moment pushing the joint; limits absorb any push into them.
    let m = -g;
    if theta >= range.max - BOUND_EPS {
        // reaction set shifted: any extra positive push is carried by the stop
        hi = f64::INFINITY;
    }
    if theta <= range.min + BOUND_EPS {
        lo = f64::NEG_INFINITY;
    }
    if m > hi {
        m - hi
    } else if m < lo {
        lo - m
    } else {
        0.0
    }
}

/// Solve one mechanism. `theta0` must lie within every joint range.
pub(crate) fn solve_mechanism(
    mech: &Mechanism,
    theta0: &[f64],
    loads: &MechLoads,
    settings: &SolveSettings,
    mut log: Option<&mut Vec<LogRow>>,
) -> Result<MechSolution, SolveError> {
    let n_joints = mech.joints.len();
    let cap = settings.angle_step_limit_deg.to_radians();
    let inner_tol = 0.5 * settings.moment_tolerance;
    let mut theta = theta0.to_vec();
    let mut problem = Problem {
        mech,
        loads: Vec::new(),
        contacts: &loads.contacts,
        multipliers: vec![0.0; loads.contacts.len()],
        rho: RHO_START,
        pen_limit: f64::INFINITY,
    };

    for step in 1..=settings.load_steps {
        let factor = step as f64 / settings.load_steps as f64;
        problem.loads = loads.point.iter().map(|&(k, f)| (k, f * factor)).collect();
        let reference = theta.clone();
        let start_pen = problem
            .gaps(&mech.positions(&theta))
            .iter()
            .fold(0.0f64, |m, &g| m.max(-g));
        problem.pen_limit = start_pen.max(PEN_GUARD * mech.bead_radius);
        let mut sweeps = 0usize;
        let mut last_pen = f64::INFINITY;
        let mut unresolved = None;

        for _outer in 0..MAX_OUTER {
            let mut worst;
            loop {
                let pos = mech.positions(&theta);
                worst = worst_excess(&problem, &theta, &reference, &pos);
                if let Some(rows) = log.as_deref_mut() {
                    push_log(rows, &problem, step, &theta, &reference, &pos);
                }
                if worst.0 <= inner_tol || sweeps >= settings.max_iterations {
                    break;
                }
                sweeps += 1;
                if let Some(next) = newton_step(&problem, &theta, &reference, cap) {
                    theta = next;
                    continue;
                }
                // Newton direction failed to descend: fall back to one
                // coordinate sweep, and give up if that stalls too.
                let mut moved = false;
                let mut pos = pos;
                for j in 0..n_joints {
                    if mech.joints[j].is_fixed() {
                        continue;
                    }
                    if let Some(next) = coordinate_step(&problem, j, &theta, &reference, &pos, cap) {
                        theta[j] = next;
                        pos = mech.positions(&theta);
                        moved = true;
                    }
                }
                if !moved {
                    break;
                }
            }
            if worst.0 > inner_tol {
                // A soft penalty may be unable to carry the contact load
                // within the penetration guard: stiffen and retry.
                if !loads.contacts.is_empty() && problem.rho < RHO_MAX && sweeps < settings.max_iterations {
                    let gaps = problem.gaps(&mech.positions(&theta));
                    for (lambda, &g) in problem.multipliers.iter_mut().zip(&gaps) {
                        *lambda = (*lambda - problem.rho * g).max(0.0);
                    }
                    problem.rho *= 10.0;
                    unresolved = Some(worst);
                    continue;
                }
                return Err(SolveError::NotConverged {
                    step,
                    joint: worst.1,
                    worst_residual: worst.0,
                });
            }
            unresolved = None;
            let pos = mech.positions(&theta);

            let gaps = problem.gaps(&pos);
            let pen = gaps.iter().fold(0.0f64, |m, &g| m.max(-g));
            if pen <= PEN_TOL {
                break;
            }
            for (lambda, &g) in problem.multipliers.iter_mut().zip(&gaps) {
                *lambda = (*lambda - problem.rho * g).max(0.0);
            }
            if pen > 0.25 * last_pen && problem.rho < RHO_MAX {
                problem.rho *= 10.0;
            }
            last_pen = pen;
        }

        if let Some(worst) = unresolved {
            return Err(SolveError::NotConverged {
                step,
                joint: worst.1,
                worst_residual: worst.0,
            });
        }
        let pos = mech.positions(&theta);
        let gaps = problem.gaps(&pos);
        let pen = gaps.iter().fold(0.0f64, |m, &g| m.max(-g));
        if pen > PEN_TOL {
            let (bead, _) = gaps
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (i, &g)| if g < acc.1 { (i, g) } else { acc });
            return Err(SolveError::Infeasible {
                bead: loads.contacts[bead].0,
                penetration: pen,
            });
        }
    }

    let pos = mech.positions(&theta);
    let gaps = problem.gaps(&pos);
    let contact_forces = gaps
        .iter()
        .zip(&problem.multipliers)
        .map(|(&g, &l)| problem.contact_force(g, l))
        .collect();
    let moments = (0..n_joints)
        .map(|j| -problem.gradient(j, theta[j], &pos).0)
        .collect();
    let max_penetration = gaps.iter().fold(0.0f64, |m, &g| m.max(-g));
    // Excess is measured against the last step's reference; across all steps
    // the moved joints carry exactly their capacity.
    let max_excess = worst_excess_total(&problem, &theta, theta0, &pos);
    Ok(MechSolution {
        theta,
        contact_forces,
        moments,
        max_excess,
        max_penetration,
    })
}

fn push_log(
    rows: &mut Vec<LogRow>,
    problem: &Problem<'_>,
    step: usize,
    theta: &[f64],
    reference: &[f64],
    pos: &[Vec2],
) {
    for (j, (&a, joint)) in theta.iter().zip(&problem.mech.joints).enumerate() {
        let residual = if joint.is_fixed() {
            0.0
        } else {
            let (g, _) = problem.gradient(j, a, pos);
            excess(g, a - reference[j], joint.capacity, &joint.range, a)
        };
        rows.push(LogRow {
            step,
            joint: j,
            angle_deg: a.to_degrees(),
            residual,
        });
    }
}

/// Projected Newton step on the joints that are free to move.
///
/// Joints sitting at their reference with sub-capacity load, or at a stop
/// and pushed into it, are held. The rest move with the friction moment
/// fixed at its sliding sign; the step is scaled to the angle limit and
/// projected back onto the stops and the stick point.
fn newton_step(problem: &Problem<'_>, theta: &[f64], reference: &[f64], cap: f64) -> Option<Vec<f64>> {
    let joints = &problem.mech.joints;
    let g = problem.gradients(theta);
    let mut free = Vec::new();
    let mut sign = Vec::new();
    let mut rhs = Vec::new();
    for (j, joint) in joints.iter().enumerate() {
        if joint.is_fixed() {
            continue;
        }
        let z = theta[j] - reference[j];
        let c = joint.capacity;
        let s = if z != 0.0 {
            z.signum()
        } else if g[j].abs() > c {
            -g[j].signum()
        } else {
            continue;
        };
        let lin = g[j] + c * s;
        if (theta[j] >= joint.range.max - BOUND_EPS && lin < 0.0)
            || (theta[j] <= joint.range.min + BOUND_EPS && lin > 0.0)
        {
            continue;
        }
        free.push(j);
        sign.push(s);
        rhs.push(-lin);
    }
    if free.is_empty() {
        return None;
    }

    let m = free.len();
    let mut hess = DMatrix::<f64>::zeros(m, m);
    let mut probe = theta.to_vec();
    for (col, &j) in free.iter().enumerate() {
        let step = FD_STEP * (1.0 + theta[j].abs());
        probe[j] = theta[j] + step;
        let gp = problem.gradients(&probe);
        probe[j] = theta[j];
        for (row, &i) in free.iter().enumerate() {
            hess[(row, col)] = (gp[i] - g[i]) / step;
        }
    }
    let hess = (&hess + hess.transpose()) * 0.5;
    let eig = hess.symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(1e-9f64, |a, &e| a.max(e.abs()));
    let floor = 1e-8 * scale;
    let b = DVector::from_vec(rhs);
    let qb = eig.eigenvectors.transpose() * &b;
    let scaled = DVector::from_iterator(
        m,
        qb.iter()
            .zip(eig.eigenvalues.iter())
            .map(|(x, &e)| x / e.abs().max(floor)),
    );
    let mut d = &eig.eigenvectors * scaled;
    let big = d.amax();
    if !(big.is_finite() && big > 0.0) {
        return None;
    }
    if big > cap {
        d *= cap / big;
    }

    let base = problem.energy(theta) + problem.dissipation(theta, reference);
    let mut t = 1.0;
    for _ in 0..LINE_SEARCH_HALVINGS {
        let mut cand = theta.to_vec();
        for (k, &j) in free.iter().enumerate() {
            let joint = &joints[j];
            let mut a = (theta[j] + t * d[k]).clamp(joint.range.min, joint.range.max);
            if (a - reference[j]) * sign[k] < 0.0 {
                a = reference[j];
            }
            if (a - joint.range.max).abs() <= BOUND_EPS {
                a = joint.range.max;
            } else if (a - joint.range.min).abs() <= BOUND_EPS {
                a = joint.range.min;
            }
            cand[j] = a;
        }
        if cand.as_slice() != theta
            && problem.energy(&cand) + problem.dissipation(&cand, reference) < base
        {
            return Some(cand);
        }
        t *= 0.5;
    }
    None
}

fn worst_excess(problem: &Problem<'_>, theta: &[f64], reference: &[f64], pos: &[Vec2]) -> (f64, usize) {
    let mut worst = (0.0, 0);
    for (j, joint) in problem.mech.joints.iter().enumerate() {
        if joint.is_fixed() {
            continue;
        }
        let (g, _) = problem.gradient(j, theta[j], pos);
        let e = excess(g, theta[j] - reference[j], joint.capacity, &joint.range, theta[j]);
        if e > worst.0 {
            worst = (e, j);
        }
    }
    worst
}

/// Excess against the bare stick-slip bound `|m| ≤ C` (limits still absorb).
fn worst_excess_total(problem: &Problem<'_>, theta: &[f64], _theta0: &[f64], pos: &[Vec2]) -> f64 {
    let mut worst = 0.0f64;
    for (j, joint) in problem.mech.joints.iter().enumerate() {
        if joint.is_fixed() {
            continue;
        }
        let (g, _) = problem.gradient(j, theta[j], pos);
        worst = worst.max(excess(g, 0.0, joint.capacity, &joint.range, theta[j]));
    }
    worst
}

/// Proximal Newton step on one coordinate with a monotone line search.
/// Returns the new angle, or `None` if no decrease was found.
fn coordinate_step(
    problem: &Problem<'_>,
    j: usize,
    theta: &[f64],
    reference: &[f64],
    pos: &[Vec2],
    cap: f64,
) -> Option<f64> {
    let joint = &problem.mech.joints[j];
    let a = theta[j];
    let z = a - reference[j];
    let c = joint.capacity;
    let (g, h) = problem.gradient(j, a, pos);
    if excess(g, z, c, &joint.range, a) == 0.0 {
        return None;
    }
    let h = if h.is_finite() && h > 0.0 { h } else { 0.0 };
    let h = h.max(g.abs().max(c) / cap * 1e-3).max(1e-12);

    let w = z - g / h;
    let target = w.signum() * (w.abs() - c / h).max(0.0);
    let delta = (target - z).clamp(-cap, cap);
    // land exactly on a stop rather than a rounding error short of it
    let mut next = (a + delta).clamp(joint.range.min, joint.range.max);
    if (next - joint.range.max).abs() <= BOUND_EPS {
        next = joint.range.max;
    } else if (next - joint.range.min).abs() <= BOUND_EPS {
        next = joint.range.min;
    }
    if next == a {
        return None;
    }

    let objective = |x: f64| problem.local_energy(j, a, x - a, pos) + c * (x - reference[j]).abs();
    let base = objective(a);
    for _ in 0..LINE_SEARCH_HALVINGS {
        if objective(next) < base {
            return Some(next);
        }
        next = a + 0.5 * (next - a);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_chain(n_beads: usize, capacity: f64, limit_deg: f64) -> Mechanism {
        let lim = limit_deg.to_radians();
        Mechanism {
            base: Vec2::zeros(),
            base_angle: 0.0,
            pitch: 1.0,
            n_beads,
            bead_radius: 0.1,
            joints: (0..n_beads - 1)
                .map(|pivot| MechJoint {
                    pivot,
                    range: JointRange { min: -lim, max: lim },
                    capacity,
                    potential: Potential::None,
                    applied_moment: 0.0,
                })
                .collect(),
        }
    }

    fn settings() -> SolveSettings {
        SolveSettings::default()
    }

    #[test]
    fn positions_follow_cumulative_angles() {
        let m = free_chain(4, 0.0, 90.0);
        let t = 0.3f64;
        let pos = m.positions(&[t, t, t]);
        let expected: Vec2 = (1..=3).map(|k| unit(k as f64 * t)).sum();
        assert!((pos[3] - expected).norm() < 1e-14);
    }

    #[test]
    fn single_joint_balances_at_capacity() {
        // One link, tip load pushing it down; frictional joint stops it where
        // the load moment falls to the capacity.
        let m = free_chain(2, 0.5, 80.0);
        let loads = MechLoads {
            point: vec![(1, Vec2::new(0.0, -1.0))],
            contacts: vec![],
        };
        let sol = solve_mechanism(&m, &[0.0], &loads, &settings(), None).unwrap();
        // moment = cos θ must equal 0.5 at rest → θ = −60°
        assert!((sol.theta[0].to_degrees() + 60.0).abs() < 0.05, "{}", sol.theta[0].to_degrees());
    }

    #[test]
    fn contact_stops_rotation() {
        let m = free_chain(2, 0.0, 80.0);
        let loads = MechLoads {
            point: vec![(1, Vec2::new(0.0, -1.0))],
            contacts: vec![(
                1,
                Obstacle::HalfPlane {
                    point: [0.0, -0.5],
                    normal: [0.0, 1.0],
                },
            )],
        };
        let sol = solve_mechanism(&m, &[0.0], &loads, &settings(), None).unwrap();
        // centre must sit at y = −0.4 (bead radius 0.1 above the plane)
        let pos = m.positions(&sol.theta);
        assert!((pos[1].y + 0.4).abs() < 1e-6);
        assert!(sol.max_penetration <= PEN_TOL);
        // normal force carries the vertical load of the tip bead
        let n = sol.contact_forces[0];
        assert!((n - 1.0).abs() < 1e-3, "{n}");
    }
}
