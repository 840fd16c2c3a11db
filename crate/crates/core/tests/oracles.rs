//! Derived reference values, each checked against an independent
//! computation rather than the formula the library uses.

use approx::assert_relative_eq;
use jamcord::bead::{wire_path_length, BeadSpec, BeadVariant};
use jamcord::chain::{forward_kinematics, friction_capacity, restoring_moment, ChainSpec};
use jamcord::gripper::{equalizer_tension, GripperConfig, PneumaticState};
use nalgebra::{Matrix2, Vector2};

/// Reference sphere bead with room to bend 30° at one interface.
fn sphere() -> BeadSpec {
    BeadSpec::table1()
        .with_variant(BeadVariant::SimpleSphere)
        .with_effective_angle_deg(40.0)
}

/// Two touching spheres of radius `r` whose wire axes each tilt `θ/2` off
/// the line of centres. The wire runs along each axis to where they cross.
/// Length by intersecting the lines and integrating the polyline's speed.
fn sphere_path_by_construction(r: f64, theta: f64) -> f64 {
    let a = Vector2::new(0.0, 0.0);
    let b = Vector2::new(2.0 * r, 0.0);
    let da = Vector2::new((theta / 2.0).cos(), (theta / 2.0).sin());
    let db = Vector2::new(-(theta / 2.0).cos(), (theta / 2.0).sin());
    // a + s·da = b + t·db; straight axes never cross, any midpoint will do
    let m = Matrix2::from_columns(&[da, -db]);
    let x = match m.lu().solve(&(b - a)) {
        Some(st) if theta != 0.0 => a + da * st[0],
        _ => (a + b) / 2.0,
    };
    let mut len = 0.0;
    let steps = 100_000;
    for (p, q) in [(a, x), (x, b)] {
        let mut prev = p;
        for i in 1..=steps {
            let cur = p + (q - p) * (i as f64 / steps as f64);
            len += (cur - prev).norm();
            prev = cur;
        }
    }
    len
}

#[test]
fn sphere_path_detour_at_30_degrees() {
    let spec = sphere();
    let theta = 30f64.to_radians();
    let detour = wire_path_length(&spec, theta).unwrap() - wire_path_length(&spec, 0.0).unwrap();
    let built = sphere_path_by_construction(spec.radius, theta) - sphere_path_by_construction(spec.radius, 0.0);
    assert_relative_eq!(detour, built, max_relative = 1e-9);
    assert!((detour - 0.2117).abs() < 5e-5, "{detour}");
}

#[test]
fn sphere_restoring_moment_is_tension_times_path_slope() {
    let spec = ChainSpec::new(sphere(), 2);
    let theta = 30f64.to_radians();
    let h = 1e-5;
    let slope = (wire_path_length(&spec.bead, theta + h).unwrap() - wire_path_length(&spec.bead, theta - h).unwrap())
        / (2.0 * h);
    let m = restoring_moment(&spec, theta, 41.0).unwrap();
    assert_relative_eq!(m, 41.0 * slope, max_relative = 1e-8);
    assert!((m - 34.1).abs() < 0.05, "{m}");
}

#[test]
fn friction_capacity_at_table_tension() {
    let spec = ChainSpec::table1();
    let c = friction_capacity(&spec, 37.0);
    // μ·T·R1·sin 45°, sin 45° as √2/2
    assert_relative_eq!(c, 0.3 * 37.0 * 3.0 * 2f64.sqrt() / 2.0, max_relative = 1e-12);
    assert!((c - 23.55).abs() < 0.005, "{c}");
}

#[test]
fn equal_turns_trace_a_regular_polyline() {
    for deg in [5.0, 10.0, 15.0] {
        let theta = f64::to_radians(deg);
        let mut spec = ChainSpec::new(BeadSpec::table1(), 4);
        spec.unit_pitch = Some(1.0);
        let frames = forward_kinematics(&spec, &[theta; 3]).unwrap();
        let tip = frames[3].position;
        // Σ_{k=1..3} e^{ikθ} = e^{2iθ}·sin(3θ/2)/sin(θ/2)
        let scale = (1.5 * theta).sin() / (0.5 * theta).sin();
        assert_relative_eq!(tip.x, scale * (2.0 * theta).cos(), epsilon = 1e-12);
        assert_relative_eq!(tip.y, scale * (2.0 * theta).sin(), epsilon = 1e-12);
    }
}

#[test]
fn b_piston_area_gives_table_tension_at_200_kpa() {
    let config = GripperConfig::table1();
    // 8 chains × 37 N at 200 kPa = 0.2 N/mm²
    assert_relative_eq!(config.piston_area_b, 8.0 * 37.0 / 0.2, max_relative = 1e-12);
    let t = equalizer_tension(&config, &PneumaticState::new(0.0, 200.0));
    assert_relative_eq!(t, 37.0, max_relative = 1e-12);
}
