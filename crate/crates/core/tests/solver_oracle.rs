use jamcord::bead::{BeadSpec, BeadVariant};
use jamcord::chain::{forward_kinematics, ChainSpec, ChainState, JointStatus};
use jamcord::solver::oracle::brute_force_equilibrium;
use jamcord::solver::{
    cantilever_stiffness, solve_equilibrium, solve_equilibrium_detailed, ContactConstraint,
    LoadCase, Obstacle, PointLoad, SolveSettings,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: f64 = 0.1;

fn three_bead(variant: BeadVariant, planar: bool) -> ChainSpec {
    let mut spec = ChainSpec::new(BeadSpec::table1().with_variant(variant), 3);
    spec.planar = planar;
    spec
}

fn max_angle_gap_deg(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs().to_degrees())
        .fold(0.0, f64::max)
}

#[test]
fn floppy_chain_settles_on_floor_like_grid_search() {
    let spec = three_bead(BeadVariant::CupShaped, false);
    let loads = LoadCase {
        point_loads: vec![PointLoad { bead: 2, force: [0.0, -1.0] }],
        contact_constraints: vec![ContactConstraint {
            bead: 2,
            obstacle: Obstacle::HalfPlane {
                point: [0.0, -4.5],
                normal: [0.0, 1.0],
            },
        }],
        gravity: Some([0.0, -0.1]),
    };
    let s0 = ChainState::straight(&spec, 0.0);
    let eq = solve_equilibrium_detailed(&spec, &s0, &loads, &SolveSettings::default(), None).unwrap();
    let oracle = brute_force_equilibrium(&spec, &s0, &loads, GRID.to_radians()).unwrap();
    let gap = max_angle_gap_deg(&eq.state.angles, &oracle.angles);
    assert!(gap <= 0.5, "solver {:?} oracle {:?}", eq.state.angles, oracle.angles);

    // elbow at its stop, tip resting on the floor
    assert_eq!(eq.state.joint_status[1], JointStatus::AtLimit);
    let tip = forward_kinematics(&spec, &eq.state.angles).unwrap()[2].position;
    assert!((tip.y + 1.5).abs() < 1e-6, "{tip}");
    assert!(eq.contact_forces[0] > 0.0);
}

#[test]
fn randomized_two_joint_cases_match_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let settings = SolveSettings::default();
    for case in 0..50 {
        let variant = if rng.gen_bool(0.5) {
            BeadVariant::CupShaped
        } else {
            BeadVariant::SimpleSphere
        };
        let planar = rng.gen_bool(0.5);
        let spec = three_bead(variant, planar);
        let tension = rng.gen_range(0.0..30.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let mag = rng.gen_range(0.0..8.0);
        let loads = LoadCase::tip_load(&spec, [mag * phi.cos(), mag * phi.sin()]);
        let s0 = ChainState::straight(&spec, tension);
        let solved = solve_equilibrium(&spec, &s0, &loads, &settings).unwrap();
        let oracle = brute_force_equilibrium(&spec, &s0, &loads, GRID.to_radians()).unwrap();
        let gap = max_angle_gap_deg(&solved.angles, &oracle.angles);
        assert!(
            gap <= 0.5,
            "case {case}: {variant:?} planar={planar} T={tension:.3} F={mag:.3}@{:.1}°: \
             solver {:?} oracle {:?}",
            phi.to_degrees(),
            solved.angles.iter().map(|a| a.to_degrees()).collect::<Vec<_>>(),
            oracle.angles.iter().map(|a| a.to_degrees()).collect::<Vec<_>>(),
        );
    }
}

#[test]
fn oracle_zero_load_returns_state0() {
    let spec = three_bead(BeadVariant::SimpleSphere, true);
    let s0 = ChainState::straight(&spec, 12.0);
    let s = brute_force_equilibrium(&spec, &s0, &LoadCase::default(), GRID.to_radians()).unwrap();
    assert_eq!(s, s0);
}

#[test]
fn mirrored_load_gives_mirrored_state() {
    let spec = three_bead(BeadVariant::SimpleSphere, false);
    let s0 = ChainState::straight(&spec, 5.0);
    let up = LoadCase::tip_load(&spec, [0.5, 3.0]);
    let down = LoadCase::tip_load(&spec, [0.5, -3.0]);
    let settings = SolveSettings::default();
    let a = solve_equilibrium(&spec, &s0, &up, &settings).unwrap();
    let b = solve_equilibrium(&spec, &s0, &down, &settings).unwrap();
    for (x, y) in a.angles.iter().zip(&b.angles) {
        assert!((x + y).abs() < 1e-9, "{x} vs {y}");
    }
    let oa = brute_force_equilibrium(&spec, &s0, &up, GRID.to_radians()).unwrap();
    let ob = brute_force_equilibrium(&spec, &s0, &down, GRID.to_radians()).unwrap();
    for (x, y) in oa.angles.iter().zip(&ob.angles) {
        assert!((x + y).abs() < 1e-9, "{x} vs {y}");
    }
}

#[test]
fn oracle_rejects_large_chains_and_empty_grids() {
    let spec = ChainSpec::new(BeadSpec::table1(), 6);
    let s0 = ChainState::straight(&spec, 1.0);
    assert!(brute_force_equilibrium(&spec, &s0, &LoadCase::default(), 0.01).is_err());

    // floor above the tip's reach: nothing feasible
    let spec = three_bead(BeadVariant::CupShaped, true);
    let s0 = ChainState::straight(&spec, 1.0);
    let loads = LoadCase {
        contact_constraints: vec![ContactConstraint {
            bead: 2,
            obstacle: Obstacle::Circle {
                center: [12.0, 0.0],
                radius: 5.0,
            },
        }],
        ..LoadCase::default()
    };
    assert!(brute_force_equilibrium(&spec, &s0, &loads, GRID.to_radians()).is_err());
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let spec = ChainSpec::table1();
    let s0 = ChainState::straight(&spec, 10.0);
    let loads = LoadCase::tip_load(&spec, [0.0, 0.4]);
    let settings = SolveSettings::default();
    let a = serde_json::to_string(&solve_equilibrium(&spec, &s0, &loads, &settings).unwrap()).unwrap();
    let b = serde_json::to_string(&solve_equilibrium(&spec, &s0, &loads, &settings).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cantilever_deflection_falls_with_tension() {
    let spec = ChainSpec::new(BeadSpec::table1(), 8);
    let settings = SolveSettings::default();
    let forces = [0.25, 0.5, 1.0, 2.0];
    let sweeps: Vec<_> = [0.0, 10.0, 20.0, 40.0, 80.0]
        .iter()
        .map(|&t| cantilever_stiffness(&spec, t, &forces, &settings).unwrap())
        .collect();
    for pair in sweeps.windows(2) {
        for (lo, hi) in pair[0].points.iter().zip(&pair[1].points) {
            assert!(hi.1 <= lo.1 + 1e-9, "T {} → {}: {:?} vs {:?}", pair[0].tension, pair[1].tension, lo, hi);
        }
    }
    // the softest and stiffest ends of the grid actually differ
    assert!(sweeps[0].points[3].1 > sweeps[4].points[3].1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residual_and_penetration_contract(
        tension in 0.0f64..40.0,
        fx in -3.0f64..3.0,
        fy in -3.0f64..3.0,
        floor in 2.0f64..20.0,
        sphere in any::<bool>(),
        planar in any::<bool>(),
    ) {
        let variant = if sphere { BeadVariant::SimpleSphere } else { BeadVariant::CupShaped };
        let mut spec = ChainSpec::new(BeadSpec::table1().with_variant(variant), 6);
        spec.planar = planar;
        let contacts = (1..6)
            .map(|bead| ContactConstraint {
                bead,
                obstacle: Obstacle::HalfPlane { point: [0.0, -floor], normal: [0.0, 1.0] },
            })
            .collect();
        let loads = LoadCase {
            point_loads: vec![PointLoad { bead: 5, force: [fx, fy] }],
            contact_constraints: contacts,
            gravity: None,
        };
        let s0 = ChainState::straight(&spec, tension);
        let settings = SolveSettings::default();
        let eq = solve_equilibrium_detailed(&spec, &s0, &loads, &settings, None).unwrap();
        prop_assert!(eq.max_excess <= settings.moment_tolerance);
        let frames = forward_kinematics(&spec, &eq.state.angles).unwrap();
        for f in &frames[1..] {
            prop_assert!(f.position.y - spec.bead.radius >= -floor - 1e-6);
        }
        for (j, &a) in eq.state.angles.iter().enumerate() {
            prop_assert!(spec.joint_range(j).contains(a));
        }
    }
}
