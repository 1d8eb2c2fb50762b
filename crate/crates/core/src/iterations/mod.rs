//! Iterative computation of canonical tight and dual windows.

mod coeffs;
mod config;
mod runner;
mod scaling;
mod steps;

pub use coeffs::{taylor_coeffs_dual, taylor_coeffs_dual_exact, taylor_coeffs_tight, taylor_coeffs_tight_exact};
pub use config::{Algorithm, IterationConfig, Scaling, StopMode, Target};
pub use runner::{run, run_with_reference, IterationTrace, StepRecord};
pub use scaling::{optimal_scaling_constant, upper_bound_estimate};
pub use steps::{initial_scale, step_dual, step_frame_inverse, step_tight, TermScaling};
