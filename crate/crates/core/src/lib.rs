//! Bead-chain jamming gripper model.

pub mod bead;
pub mod chain;
pub mod solver;
pub mod gripper;
pub mod trace;
pub mod grasp;
pub mod thermal;
pub mod harness;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/beads.md")]
    mod beads {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/gripper.md")]
    mod gripper {}
    #[doc = include_str!("../../../book/src/grasping.md")]
    mod grasping {}
    #[doc = include_str!("../../../book/src/fire.md")]
    mod fire {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
}
