//! Canonical tight and dual windows of finite discrete Gabor frames.
//!
//! Signals are factorized through the discrete Zak transform into a grid of
//! small p×q blocks on which the frame operator acts by matrix products.
//! Canonical windows are computed either directly (eigen-decomposition,
//! SVD or inversion per block) or by polynomial iterations that converge to
//! S^{-1/2}g and S^{-1}g. A dense synthesis-matrix path serves as oracle.

pub mod canonical;
pub mod diagnostics;
pub mod error;
pub mod iterations;
pub mod lattice;
pub mod linalg;
pub mod scalar_lab;
pub mod signal;
pub mod synthesis;
pub mod windows;
pub mod zak;

pub use num_complex::Complex64;

pub use canonical::{eig_tight, inv_dual, svd_tight, DirectMethod};
pub use error::{GaborError, Result};
pub use iterations::{run, Algorithm, IterationConfig, IterationTrace, Scaling, StopMode, Target};
pub use lattice::{derive_lattice, GaborLattice};
pub use signal::{tf_shift, Signal};
pub use windows::{gaussian_window, monster_window, sech_window};
pub use zak::{factorize, unfactorize, BlockOperator, SpectralSummary, ZakFactorization};
