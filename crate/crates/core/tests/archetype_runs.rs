//! Whole-run invariants of the archetype configurations.

use patchdyn::dynamics::{simulate, StepperConfig};
use patchdyn::linspace;
use patchdyn::mesh::archetype_layout;
use patchdyn::model::{make_archetype, ArchetypeId};

#[test]
fn m1_shock_stays_between_the_shock_nodes() {
    let problem = make_archetype(ArchetypeId::M1);
    let layout = archetype_layout(ArchetypeId::M1);
    let times = linspace(0.0, 3.0, 16);
    let stepper = StepperConfig::auto(&problem, &layout, 0.5, times).unwrap();
    let traj = simulate(&problem, &layout, &stepper).unwrap();

    let s = layout.double_index().unwrap();
    let patch = &layout.patches()[s];
    let (left_node, right_node) = patch.shock_node_positions().unwrap();
    for state in &traj.states {
        // The steepest micro jump marks the shock.
        let field = state.field(s);
        let (mut steepest, mut at) = (0.0_f64, 0usize);
        for i in 0..field.len() - 1 {
            let jump = (field[i + 1] - field[i]).abs();
            if jump > steepest {
                steepest = jump;
                at = i;
            }
        }
        let shock_x = 0.5 * (patch.micro_position(at as isize - patch.n() as isize)
            + patch.micro_position(at as isize + 1 - patch.n() as isize));
        assert!(
            shock_x > left_node && shock_x < right_node,
            "shock at {shock_x} escaped ({left_node}, {right_node}) at t={}",
            state.time()
        );
    }
}

#[test]
fn archetype_runs_complete_without_blow_up() {
    // Short horizons; the full-length runs live in the acceptance suite.
    for id in ArchetypeId::ALL {
        let problem = make_archetype(id);
        let layout = archetype_layout(id);
        let stepper = StepperConfig::auto(&problem, &layout, 0.5, vec![0.05, 0.1]).unwrap();
        let traj = simulate(&problem, &layout, &stepper).unwrap();
        assert_eq!(traj.times.len(), 2, "{id}");
    }
}
