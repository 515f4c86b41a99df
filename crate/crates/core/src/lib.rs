//! Rolling horizon NEAT: real-time neuroevolution of network topologies whose
//! rollouts through a forward model pick game actions, plus RHEA, MCTS and
//! random baselines and a small arcade benchmark suite.

pub mod agents;
pub mod bench;
pub mod features;
pub mod gamekit;
pub mod neat;
pub mod phenotype;
