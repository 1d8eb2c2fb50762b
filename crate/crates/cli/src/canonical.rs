//! The `canonical` command.

use serde::Serialize;

use gabiter_core::diagnostics::{
    dual_lattice_norm_dual, dual_lattice_norm_tight, relative_dual_lattice_norm_dual,
    relative_dual_lattice_norm_tight, wexler_raz_residual,
};
use gabiter_core::iterations::upper_bound_estimate;
use gabiter_core::synthesis::{reference_dual, reference_tight};
use gabiter_core::zak::frame_bounds_of;
use gabiter_core::{
    eig_tight, factorize, inv_dual, run, svd_tight, unfactorize, Algorithm, GaborLattice, IterationConfig,
    Signal, StopMode, Target,
};

use crate::args::{CommonArgs, MethodSpec};
use crate::error::CliError;
use crate::output::{sidecar_path, write_json, Environment};
use crate::window::write_window;

pub const DEFAULT_MAX_STEPS: usize = 100;
/// Largest L for which reports use the dense synthesis-matrix reference.
pub const DENSE_REFERENCE_LIMIT: usize = 1024;

#[derive(Debug, Clone, Serialize)]
pub struct IterationSummary {
    pub algorithm: String,
    pub scaling: String,
    pub steps: usize,
    pub converged: bool,
    pub diverging: bool,
    pub oscillating: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalReport {
    pub len: usize,
    pub a: usize,
    pub b: usize,
    pub window: String,
    pub target: String,
    pub method: String,
    pub frame_bounds: [f64; 2],
    pub frame_bound_ratio: f64,
    pub norm: f64,
    pub dual_lattice_norm: f64,
    pub relative_dual_lattice_norm: f64,
    pub wexler_raz_residual: f64,
    /// ‖γ − γ_ref‖/‖γ_ref‖ against the dense (small L) or block-SVD/inverse reference.
    pub reference_error: f64,
    pub reference: String,
    pub iteration: Option<IterationSummary>,
    pub seed: u64,
    pub environment: Environment,
}

/// Rescale so that γ is the canonical window itself: ‖g^t‖² = L/(MN) for
/// tight windows, ⟨g, g^d⟩ = L/(MN) for dual ones. Only a positive factor
/// is applied.
pub fn canonical_normalization(g: &Signal, gamma: &Signal, target: Target, lattice: &GaborLattice) -> Signal {
    let kappa = lattice.wexler_raz_constant();
    match target {
        Target::Tight => gamma.scale_real(kappa.sqrt() / gamma.norm()),
        Target::Dual => gamma.scale_real(kappa / gamma.inner(g).re),
    }
}

/// Reference canonical window: dense SVD for L up to
/// [`DENSE_REFERENCE_LIMIT`], block SVD / block inverse beyond.
pub fn reference_window(g: &Signal, lattice: &GaborLattice, target: Target) -> Result<(Signal, &'static str), CliError> {
    if lattice.len <= DENSE_REFERENCE_LIMIT {
        let r = match target {
            Target::Tight => reference_tight(g, lattice)?,
            Target::Dual => reference_dual(g, lattice)?,
        };
        return Ok((r, "dense"));
    }
    let phi = factorize(g, lattice)?;
    let r = match target {
        Target::Tight => svd_tight(&phi)?,
        Target::Dual => inv_dual(&phi)?,
    };
    Ok((unfactorize(&r), "block"))
}

pub fn compute(args: &CommonArgs) -> Result<(Signal, CanonicalReport), CliError> {
    let lattice = args.lattice()?;
    let g = args.window.build(&lattice)?;
    let target = args.resolve_target()?;
    let method = args.method.unwrap_or(MethodSpec::Svd);
    let method = match (method, target) {
        (MethodSpec::Svd, Target::Dual) if args.method.is_none() => MethodSpec::Inv,
        (m, _) => m,
    };
    let bounds = frame_bounds_of(&g, &lattice)?;
    if bounds.degenerate {
        return Err(gabiter_core::GaborError::NotAFrame { min: bounds.lower, max: bounds.upper }.into());
    }
    let mut iteration = None;
    let raw = match method {
        MethodSpec::Eig => unfactorize(&eig_tight(&factorize(&g, &lattice)?)?),
        MethodSpec::Svd => unfactorize(&svd_tight(&factorize(&g, &lattice)?)?),
        MethodSpec::Inv => unfactorize(&inv_dual(&factorize(&g, &lattice)?)?),
        MethodSpec::Dense => match target {
            Target::Tight => reference_tight(&g, &lattice)?,
            Target::Dual => reference_dual(&g, &lattice)?,
        },
        MethodSpec::Iter(alg) => {
            let (trace_window, summary) = iterate(args, &g, &lattice, alg)?;
            iteration = Some(summary);
            trace_window
        }
    };
    let gamma = canonical_normalization(&g, &raw, target, &lattice);
    let (reference, reference_kind) = reference_window(&g, &lattice, target)?;
    let (dln, rel, wr) = match target {
        Target::Tight => (
            dual_lattice_norm_tight(&gamma, &lattice),
            relative_dual_lattice_norm_tight(&gamma, &lattice),
            wexler_raz_residual(&gamma, &gamma, &lattice),
        ),
        Target::Dual => (
            dual_lattice_norm_dual(&g, &gamma, &lattice),
            relative_dual_lattice_norm_dual(&g, &gamma, &lattice),
            wexler_raz_residual(&g, &gamma, &lattice),
        ),
    };
    let report = CanonicalReport {
        len: lattice.len,
        a: lattice.a,
        b: lattice.b,
        window: args.window.to_string(),
        target: format!("{target:?}").to_lowercase(),
        method: method_name(method),
        frame_bounds: [bounds.lower, bounds.upper],
        frame_bound_ratio: bounds.condition(),
        norm: gamma.norm(),
        dual_lattice_norm: dln,
        relative_dual_lattice_norm: rel,
        wexler_raz_residual: wr,
        reference_error: gamma.distance(&reference) / reference.norm(),
        reference: reference_kind.into(),
        iteration,
        seed: args.seed,
        environment: Environment::current(),
    };
    Ok((gamma, report))
}

fn iterate(
    args: &CommonArgs,
    g: &Signal,
    lattice: &GaborLattice,
    alg: Algorithm,
) -> Result<(Signal, IterationSummary), CliError> {
    let scaling = args.scaling_with(|| upper_bound_estimate(g, lattice))?;
    let mut cfg = IterationConfig::new(alg).scaling(scaling).max_steps(args.steps.unwrap_or(DEFAULT_MAX_STEPS));
    if let Some(t) = args.tol {
        cfg = cfg.stop(StopMode::Tolerance(t));
    }
    let trace = run(g, lattice, &cfg)?;
    let summary = IterationSummary {
        algorithm: alg.to_string(),
        scaling: format!("{scaling:?}"),
        steps: trace.steps(),
        converged: trace.converged,
        diverging: trace.diverging,
        oscillating: trace.oscillating,
    };
    Ok((trace.final_iterand().clone(), summary))
}

fn method_name(m: MethodSpec) -> String {
    match m {
        MethodSpec::Eig => "eig".into(),
        MethodSpec::Svd => "svd".into(),
        MethodSpec::Inv => "inv".into(),
        MethodSpec::Dense => "dense".into(),
        MethodSpec::Iter(a) => format!("iter:{a}"),
    }
}

/// Runs the command and writes `<out>.bin` and `<out>.json`. A diverging
/// iteration still writes both files before reporting the failure.
pub fn execute(args: &CommonArgs) -> Result<CanonicalReport, CliError> {
    let out = args.out.clone().ok_or_else(|| CliError::Usage("canonical needs --out <prefix>".into()))?;
    let (gamma, report) = compute(args)?;
    write_window(&sidecar_path(&out, "bin"), &gamma)?;
    write_json(&sidecar_path(&out, "json"), &report)?;
    if let Some(it) = &report.iteration {
        if it.diverging || it.oscillating {
            return Err(CliError::Diverged(format!(
                "{} after {} steps ({})",
                it.algorithm,
                it.steps,
                if it.diverging { "growing step size" } else { "two-cycle" }
            )));
        }
    }
    Ok(report)
}
