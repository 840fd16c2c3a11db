use jamcord::grasp::{chains_in_contact, grasp, jam_and_lift, press, ObjectShape, Protocol};
use jamcord::gripper::{build_gripper, release, GripperConfig};
use jamcord::trace::Phase;

#[test]
fn release_then_press_repeats_the_trace() {
    let config = GripperConfig::table1();
    let object = ObjectShape::prism(30.0);
    let protocol = Protocol::new(60.0, 10.0, 20.0, 100.0);
    let fresh = build_gripper(&config).unwrap();
    let (pressed, first) = press(&config, &fresh, &object, &protocol).unwrap();
    jam_and_lift(&config, &pressed, &object, &protocol).unwrap();
    let again = release(&config, &pressed).unwrap();
    let (_, second) = press(&config, &again, &object, &protocol).unwrap();
    assert_eq!(first.to_csv(), second.to_csv());
    assert_eq!(first.meta, second.meta);
}

#[test]
fn most_chains_wrap_the_cylinder_at_every_a_pressure() {
    let config = GripperConfig::table1();
    let object = ObjectShape::cylinder(30.0);
    for pa in [10.0, 20.0, 50.0] {
        let protocol = Protocol::new(60.0, 1.0, pa, 0.0);
        let (pressed, _) = press(&config, &build_gripper(&config).unwrap(), &object, &protocol).unwrap();
        let n = chains_in_contact(&config, &pressed, &object, &protocol, 1e-3).unwrap();
        assert!(n >= 4, "pA {pa}: {n} chains touching");
    }
}

#[test]
fn grasp_trace_has_three_ordered_phases() {
    let config = GripperConfig::table1();
    let trace = grasp(&config, &ObjectShape::cylinder(30.0), &Protocol::new(60.0, 20.0, 50.0, 200.0)).unwrap();
    trace.check().unwrap();
    let phases: Vec<Phase> = trace.samples.iter().map(|s| s.phase).collect();
    let first_jam = phases.iter().position(|&p| p == Phase::Jam).unwrap();
    assert!(phases[..first_jam].iter().all(|&p| p == Phase::Press));
    assert_eq!(phases[first_jam + 1..].iter().filter(|&&p| p != Phase::Lift).count(), 0);
    assert!(trace.samples.windows(2).all(|w| w[1].displacement >= w[0].displacement));
}

#[test]
fn pressing_a_floor_pushes_back() {
    let config = GripperConfig::table1();
    let protocol = Protocol::new(20.0, 1.0, 50.0, 0.0);
    let (_, trace) = press(&config, &build_gripper(&config).unwrap(), &ObjectShape::half_plane(), &protocol).unwrap();
    let last = trace.samples.last().unwrap();
    assert!(last.force > 0.0, "{last:?}");
    // nothing touches before the standoff is used up
    assert!(trace.samples.iter().filter(|s| s.displacement < protocol.standoff).all(|s| s.force == 0.0));
}
