pub mod belief;
pub mod error;
pub mod game;
pub mod graph;
pub mod symmetry;
pub mod visible;
pub mod weight;
pub mod play;
pub mod closed_form;
pub mod drunk;
pub mod strategies;
pub mod adversarial;
pub mod bounds;
pub mod harness;
