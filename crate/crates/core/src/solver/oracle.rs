//! Exhaustive grid search for small chains, used to check the solver.
//!
//! Minimises `T·ΣL(θ_j) − Σ F·x_k + Σ C·|θ_j − θ0_j|` over a grid anchored
//! at the starting angles. Contacts are hard: grid points with any bead
//! overlapping an obstacle are discarded. Only grid points reachable from
//! the start through neighbouring points without ever climbing in that
//! energy are admissible, so a joint held below capacity cannot jump to a
//! distant, lower minimum. Loads are applied in one step, so the result agrees with the
//! incremental solver whenever joints move monotonically.

use crate::bead::wire_path_length;
use crate::chain::{forward_kinematics, ChainError, friction_capacity, ChainSpec, ChainState, JointStatus};

use super::{at_bound, LoadCase, SolveError};

const MAX_FREE_JOINTS: usize = 3;
const STENCIL: usize = 2;

fn axis(a0: f64, min: f64, max: f64, step: f64) -> Vec<f64> {
    let mut pts = vec![min, max, a0];
    let down = ((a0 - min) / step).floor() as i64;
    let up = ((max - a0) / step).floor() as i64;
    pts.extend((-down..=up).map(|k| a0 + k as f64 * step));
    pts.retain(|a| *a >= min && *a <= max);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Brute-force equilibrium. `grid_step` is in radians.
pub fn brute_force_equilibrium(
    spec: &ChainSpec,
    state0: &ChainState,
    loads: &LoadCase,
    grid_step: f64,
) -> Result<ChainState, SolveError> {
    spec.check()?;
    state0.check(spec)?;
    loads.check(spec.n_units)?;
    if !(grid_step > 0.0) {
        return Err(SolveError::Oracle(format!("grid step must be positive, got {grid_step}")));
    }
    let free: Vec<usize> = spec
        .free_joints()
        .filter(|&j| {
            let r = spec.joint_range(j);
            r.min < r.max
        })
        .collect();
    if free.len() > MAX_FREE_JOINTS {
        return Err(SolveError::Oracle(format!(
            "{} free joints; at most {MAX_FREE_JOINTS} supported",
            free.len()
        )));
    }
    let tension = state0.tension;
    let capacity = friction_capacity(spec, tension);
    let forces = loads.forces(spec.n_units);
    let contacts = loads.contacts();
    let axes: Vec<Vec<f64>> = free
        .iter()
        .map(|&j| {
            let r = spec.joint_range(j);
            axis(state0.angles[j], r.min, r.max, grid_step)
        })
        .collect();

    let energy = |angles: &[f64]| -> Result<Option<f64>, SolveError> {
        let frames = forward_kinematics(spec, angles)?;
        for (k, o) in &contacts {
            if o.signed_distance(frames[*k].position).0 < spec.bead.radius {
                return Ok(None);
            }
        }
        let mut e = 0.0;
        for (j, &a) in angles.iter().enumerate() {
            e += tension * wire_path_length(&spec.bead, a).map_err(|source| ChainError::Joint { joint: j, source })?;
            e += capacity * (a - state0.angles[j]).abs();
        }
        for (k, f) in &forces {
            e -= f.dot(&frames[*k].position);
        }
        Ok(Some(e))
    };

    let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
    let total: usize = dims.iter().product();
    let unflatten = |mut flat: usize| -> Vec<usize> {
        dims.iter()
            .map(|&d| {
                let i = flat % d;
                flat /= d;
                i
            })
            .collect()
    };
    let flatten = |idx: &[usize]| -> usize {
        idx.iter().rev().zip(dims.iter().rev()).fold(0, |acc, (&i, &d)| acc * d + i)
    };
    let config = |idx: &[usize]| -> Vec<f64> {
        let mut a = state0.angles.clone();
        for (i, &j) in free.iter().enumerate() {
            a[j] = axes[i][idx[i]];
        }
        a
    };

    let mut energies: Vec<Option<f64>> = Vec::with_capacity(total);
    for flat in 0..total {
        energies.push(energy(&config(&unflatten(flat)))?);
    }
    let start: Vec<usize> = free
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            axes[i]
                .iter()
                .position(|&a| a == state0.angles[j])
                .expect("start angle lies on its axis")
        })
        .collect();
    let start = flatten(&start);
    if energies[start].is_none() {
        return Err(SolveError::Oracle("starting configuration violates a contact".into()));
    }

    // Flood fill over non-ascending moves within two grid cells along each
    // axis; the wider stencil lets the walk follow a contact boundary whose
    // slope is not a multiple of 45°.
    let width = 2 * STENCIL + 1;
    let offsets: Vec<Vec<i64>> = (0..width.pow(dims.len() as u32))
        .map(|mut k| {
            (0..dims.len())
                .map(|_| {
                    let o = (k % width) as i64 - STENCIL as i64;
                    k /= width;
                    o
                })
                .collect::<Vec<_>>()
        })
        .filter(|o| o.iter().any(|&x| x != 0))
        .collect();
    let mut seen = vec![false; total];
    let mut stack = vec![start];
    seen[start] = true;
    let mut best = start;
    while let Some(cur) = stack.pop() {
        let e = energies[cur].expect("only feasible points are visited");
        let eb = energies[best].expect("feasible");
        if e < eb || (e == eb && cur < best) {
            best = cur;
        }
        let idx = unflatten(cur);
        for o in &offsets {
            let next: Option<Vec<usize>> = idx
                .iter()
                .zip(o)
                .zip(&dims)
                .map(|((&i, &d), &n)| {
                    let v = i as i64 + d;
                    (v >= 0 && v < n as i64).then_some(v as usize)
                })
                .collect();
            let Some(next) = next else { continue };
            let nf = flatten(&next);
            if seen[nf] {
                continue;
            }
            if let Some(en) = energies[nf] {
                if en <= e + 1e-12 {
                    seen[nf] = true;
                    stack.push(nf);
                }
            }
        }
    }
    let best = config(&unflatten(best));
    let joint_status = best
        .iter()
        .enumerate()
        .map(|(j, &a)| {
            let moved = a != state0.angles[j];
            match (moved, at_bound(&spec.joint_range(j), a)) {
                (true, Some(_)) => JointStatus::AtLimit,
                (true, None) => JointStatus::Slipping,
                (false, _) => JointStatus::Stuck,
            }
        })
        .collect();
    Ok(ChainState {
        angles: best,
        tension,
        joint_status,
    })
}
