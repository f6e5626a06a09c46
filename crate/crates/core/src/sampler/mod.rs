//! Path simulation: exact increments and compound Poisson approximations.

mod jump_table;
mod path;
pub mod rng;
mod variates;

pub use jump_table::JumpSampler;
pub use path::{path_sup, sample_path, PathGenerator, PathSample, Scheme, SmallJumpMode, StepGrid};
pub use rng::{path_rng, PathRng};
pub use variates::{inverse_gaussian, positive_stable, sample_increment, stable_standard, IncrementSampler};
