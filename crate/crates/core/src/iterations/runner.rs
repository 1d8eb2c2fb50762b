use super::config::{Algorithm, IterationConfig, Scaling, StopMode, Target};
use super::scaling::optimal_scaling_constant;
use super::steps::{initial_scale, step_dual, step_frame_inverse, step_tight, TermScaling};
use crate::canonical::{inv_dual, svd_tight};
use crate::diagnostics::{
    convergence_order, kantorovich_bound_dual, kantorovich_bound_tight, relative_dual_lattice_norm_dual,
    relative_dual_lattice_norm_tight, z_bounds,
};
use crate::error::{GaborError, Result};
use crate::lattice::GaborLattice;
use crate::signal::Signal;
use crate::zak::{block_gram, factorize, frame_bounds, unfactorize, SpectralSummary, ZakFactorization};

/// Consecutive step-size increases that count as divergence.
const DIVERGENCE_RUN: usize = 3;
/// ...provided the step has grown this much above its running minimum.
const DIVERGENCE_GROWTH: f64 = 10.0;
/// Error vs reference above which a converged run has found the wrong limit.
pub const WRONG_LIMIT_ERROR: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct StepRecord {
    pub step: usize,
    pub iterand: Signal,
    /// ‖γ_k − γ_{k−1}‖/‖γ_k‖, absent for k = 0.
    pub step_size: Option<f64>,
    /// ‖γ_k/‖γ_k‖ − ref/‖ref‖‖, NaN without a reference.
    pub error: f64,
    /// Dual lattice norm divided by its origin term.
    pub dual_lattice_norm: f64,
    /// Frame bounds (A_k, B_k) of the iterand, or Z-bounds (E_k, F_k).
    pub bounds: SpectralSummary,
}

#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub config: IterationConfig,
    pub lattice: GaborLattice,
    pub records: Vec<StepRecord>,
    pub reference: Option<Signal>,
    /// Constant g was divided by (as √B̂); 1 for norm and constant-optimal scaling.
    pub prescale: f64,
    pub converged: bool,
    /// First step whose relative step size fell below the automatic threshold.
    pub converged_at: Option<usize>,
    pub diverging: bool,
    pub oscillating: bool,
}

impl IterationTrace {
    pub fn steps(&self) -> usize {
        self.records.len() - 1
    }

    pub fn final_iterand(&self) -> &Signal {
        &self.records.last().expect("non-empty").iterand
    }

    pub fn errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.error).collect()
    }

    pub fn step_sizes(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.step_size).collect()
    }

    pub fn flatness_defects(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.bounds.flatness_defect()).collect()
    }

    /// Order fitted on the spectral flatness defect 1 − lower/upper.
    pub fn convergence_order(&self) -> Result<f64> {
        convergence_order(&self.flatness_defects())
    }

    /// Kantorovich bound on the normalized error for every record.
    pub fn kantorovich_bounds(&self) -> Vec<f64> {
        self.records
            .iter()
            .map(|r| match self.config.target() {
                Target::Tight => kantorovich_bound_tight(r.bounds.ratio()),
                Target::Dual => kantorovich_bound_dual(r.bounds.ratio()),
            })
            .collect()
    }

    /// Converged by step size to a window far from the reference.
    pub fn wrong_limit(&self) -> bool {
        self.converged && self.records.last().map_or(false, |r| r.error > WRONG_LIMIT_ERROR)
    }
}

struct Context<'a> {
    lattice: GaborLattice,
    target: Target,
    g_scaled: Signal,
    phi_g: ZakFactorization,
    reference: Option<&'a Signal>,
}

impl Context<'_> {
    fn record(&self, step: usize, phi: &ZakFactorization, step_size: Option<f64>) -> Result<StepRecord> {
        let iterand = unfactorize(phi);
        let error = self.reference.map_or(f64::NAN, |r| iterand.normalized_distance(r));
        let (dual_lattice_norm, bounds) = match self.target {
            Target::Tight => (
                relative_dual_lattice_norm_tight(&iterand, &self.lattice),
                frame_bounds(&block_gram(phi, phi)?),
            ),
            Target::Dual => (
                relative_dual_lattice_norm_dual(&self.g_scaled, &iterand, &self.lattice),
                z_bounds(&self.phi_g, phi)?,
            ),
        };
        Ok(StepRecord { step, iterand, step_size, error, dual_lattice_norm, bounds })
    }
}

/// Runs the configured iteration with the block-SVD tight window (tight
/// targets) or the block-inverse dual window (dual targets) as reference.
pub fn run(g: &Signal, lattice: &GaborLattice, config: &IterationConfig) -> Result<IterationTrace> {
    let phi = factorize(g, lattice)?;
    let reference = match config.target() {
        Target::Tight => svd_tight(&phi),
        Target::Dual => inv_dual(&phi),
    };
    match reference {
        Ok(r) => run_with_reference(g, lattice, config, Some(&unfactorize(&r))),
        Err(GaborError::NotAFrame { .. }) if matches!(config.scaling, Scaling::Initial(_)) => {
            run_with_reference(g, lattice, config, None)
        }
        Err(e) => Err(e),
    }
}

pub fn run_with_reference(
    g: &Signal,
    lattice: &GaborLattice,
    config: &IterationConfig,
    reference: Option<&Signal>,
) -> Result<IterationTrace> {
    config.validate()?;
    let phi = factorize(g, lattice)?;
    let alg = config.algorithm;
    let prescale = match config.scaling {
        Scaling::Norm | Scaling::ConstantOptimal => 1.0,
        Scaling::Initial(b) => b,
        Scaling::InitialOptimal => {
            let fb = frame_bounds(&block_gram(&phi, &phi)?);
            if fb.degenerate {
                return Err(GaborError::NotAFrame { min: fb.lower, max: fb.upper });
            }
            optimal_scaling_constant(fb.lower, fb.upper, alg)?
        }
    };
    let phi_g = initial_scale(&phi, prescale);
    let ctx = Context {
        lattice: *lattice,
        target: alg.target(),
        g_scaled: g.scale_real(1.0 / prescale.sqrt()),
        phi_g: phi_g.clone(),
        reference,
    };
    let terms = match config.scaling {
        Scaling::Norm => TermScaling::Norm,
        _ => TermScaling::Raw,
    };
    let auto = config.auto_threshold();
    let threshold = match config.stop {
        StopMode::Auto => Some(auto),
        StopMode::Tolerance(t) => Some(t),
        StopMode::FixedSteps => None,
    };

    let mut records = vec![ctx.record(0, &phi_g, None)?];
    let mut trace_flags = (false, None::<usize>, false, false);
    let mut cur = phi_g.clone();
    let mut prev: Option<ZakFactorization> = None;
    let (mut min_step, mut last_step) = (f64::INFINITY, f64::INFINITY);
    let (mut decreased, mut increases, mut cycles) = (false, 0usize, 0usize);

    for k in 1..=config.max_steps {
        let base = if config.scaling == Scaling::ConstantOptimal {
            let b = &records.last().expect("record").bounds;
            cur.scale(match alg.target() {
                Target::Tight => 1.0 / optimal_scaling_constant(b.lower, b.upper, alg)?.sqrt(),
                Target::Dual => 1.0 / optimal_scaling_constant(b.lower, b.upper, alg)?,
            })
        } else {
            cur.clone()
        };
        let next = match alg {
            Algorithm::FrameInverse => step_frame_inverse(&base)?,
            Algorithm::Tight(m) => step_tight(&base, m, terms),
            Algorithm::Dual(m) => step_dual(&base, &phi_g, m, terms)?,
        };
        if !next.is_finite() || next.norm() > 1e150 || next.norm() == 0.0 {
            trace_flags.2 = true;
            break;
        }
        let st = base.distance(&next) / next.norm();
        let cycle = prev.as_ref().map(|p| p.distance(&next) / next.norm());
        records.push(ctx.record(k, &next, Some(st))?);

        if st < auto && trace_flags.1.is_none() {
            trace_flags.1 = Some(k);
        }
        if st < last_step {
            decreased = true;
            increases = 0;
        } else if decreased {
            increases += 1;
        }
        min_step = min_step.min(st);
        last_step = st;
        let stop_on_flags = threshold.is_some();
        if let Some(t) = threshold {
            if st < t {
                trace_flags.0 = true;
                break;
            }
        }
        if increases >= DIVERGENCE_RUN && st > DIVERGENCE_GROWTH * min_step {
            trace_flags.2 = true;
            if stop_on_flags {
                break;
            }
        }
        let cyc_tol = threshold.unwrap_or(auto);
        match cycle {
            Some(c) if c < cyc_tol && st > 1e3 * cyc_tol => cycles += 1,
            _ => cycles = 0,
        }
        if cycles >= 3 {
            trace_flags.3 = true;
            if stop_on_flags {
                break;
            }
        }
        prev = Some(cur);
        cur = next;
    }
    let (converged, converged_at, diverging, oscillating) = trace_flags;
    Ok(IterationTrace {
        config: *config,
        lattice: *lattice,
        records,
        reference: reference.cloned(),
        prescale,
        converged,
        converged_at,
        diverging,
        oscillating,
    })
}
