//! CSV datasets for the convergence studies.

use rayon::prelude::*;
use serde_json::{json, Value};

use gabiter_core::diagnostics::dual_lattice_norm_tight;
use gabiter_core::iterations::{run_with_reference, upper_bound_estimate, IterationTrace};
use gabiter_core::scalar_lab::{two_point_norm_scaled, two_point_trace, TwoPointAlgorithm};
use gabiter_core::zak::frame_bounds_of;
use gabiter_core::{
    eig_tight, factorize, monster_window, run, svd_tight, unfactorize, Algorithm, GaborError, GaborLattice,
    IterationConfig, Scaling, Signal, StopMode, Target,
};

use crate::args::{CommonArgs, ExperimentArgs, ExperimentName, MethodSpec, ScalingArg};
use crate::canonical::{canonical_normalization, reference_window, DEFAULT_MAX_STEPS};
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::window::WindowSpec;

pub struct Outcome {
    pub table: Table,
    /// Derived quantities for the JSON sidecar.
    pub summary: Value,
}

pub fn run_experiment(name: ExperimentName, args: &CommonArgs, extra: &ExperimentArgs) -> Result<Outcome, CliError> {
    match name {
        ExperimentName::Convergence => convergence(args),
        ExperimentName::ScalingCompare => scaling_compare(args),
        ExperimentName::Monster => monster(args, extra),
        ExperimentName::Precision => precision(args),
        ExperimentName::IterationsVsRatio => iterations_vs_ratio(args),
        ExperimentName::ScalingSweep => scaling_sweep(args),
        ExperimentName::Fibonacci => fibonacci(args, extra),
        ExperimentName::ScalarLab => scalar_lab(args, extra),
    }
}

/// Steps to convergence, −1 if the run did not converge.
pub fn step_count(t: &IterationTrace) -> i64 {
    if t.converged {
        t.steps() as i64
    } else {
        -1
    }
}

/// Value of record `k` (1-based step) or NaN past the end of the trace.
fn at(t: &IterationTrace, k: usize, f: impl Fn(&gabiter_core::iterations::StepRecord) -> f64) -> Cell {
    t.records.get(k).map_or(f64::NAN, f).into()
}

fn nan_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn fixed(alg: Algorithm, scaling: Scaling, steps: usize) -> IterationConfig {
    IterationConfig::new(alg).scaling(scaling).max_steps(steps).stop(StopMode::FixedSteps)
}

fn widths(args: &CommonArgs, ws: &[f64]) -> Result<Vec<WindowSpec>, CliError> {
    ws.iter()
        .map(|&w| {
            args.window
                .with_width(w)
                .ok_or_else(|| CliError::Usage(format!("window {} has no width to sweep", args.window)))
        })
        .collect()
}

/// w = 2^{k/4}, k ∈ [lo, hi].
fn width_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powf(k as f64 / 4.0)).collect()
}

fn convergence(args: &CommonArgs) -> Result<Outcome, CliError> {
    let lattice = args.lattice()?;
    let g = args.window.build(&lattice)?;
    let steps = args.steps.unwrap_or(12);
    let tight = reference_window(&g, &lattice, Target::Tight)?.0;
    let dual = reference_window(&g, &lattice, Target::Dual)?.0;
    let bhat = upper_bound_estimate(&g, &lattice);
    let traces = Algorithm::NAMED
        .par_iter()
        .map(|&alg| {
            let scaling = match alg {
                Algorithm::FrameInverse => Scaling::Norm,
                _ => args.scaling_with(|| bhat)?,
            };
            let reference = if alg.target() == Target::Tight { &tight } else { &dual };
            Ok(run_with_reference(&g, &lattice, &fixed(alg, scaling, steps), Some(reference))?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table = Table::new(["step", "I", "II", "III", "IV", "V"]);
    for k in 1..=steps {
        let mut row = vec![Cell::from(k)];
        row.extend(traces.iter().map(|t| at(t, k, |r| r.error)));
        table.push(row);
    }
    let summary: Vec<Value> = traces
        .iter()
        .map(|t| {
            json!({
                "algorithm": t.config.algorithm.to_string(),
                "order": t.convergence_order().ok(),
                "converged_at": t.converged_at,
                "min_error": t.errors().into_iter().fold(f64::INFINITY, f64::min),
            })
        })
        .collect();
    Ok(Outcome { table, summary: json!({ "algorithms": summary }) })
}

fn scaling_compare(args: &CommonArgs) -> Result<Outcome, CliError> {
    let lattice = args.lattice()?;
    let g = args.window.build(&lattice)?;
    let alg = match args.method {
        None => Algorithm::II,
        Some(MethodSpec::Iter(a)) if a != Algorithm::FrameInverse => a,
        Some(m) => return Err(CliError::Usage(format!("scaling-compare needs an iterative method, got {m:?}"))),
    };
    let steps = args.steps.unwrap_or(12);
    let reference = reference_window(&g, &lattice, alg.target())?.0;
    let bhat = upper_bound_estimate(&g, &lattice);
    let strategies = [
        ("norm", Scaling::Norm),
        ("initial_optimal", Scaling::InitialOptimal),
        ("initial_estimate", Scaling::Initial(bhat)),
        ("constant_optimal", Scaling::ConstantOptimal),
    ];
    let runs = strategies
        .par_iter()
        .map(|&(_, s)| {
            let traced = run_with_reference(&g, &lattice, &fixed(alg, s, steps), Some(&reference))?;
            let auto = IterationConfig::new(alg).scaling(s).max_steps(args.steps.unwrap_or(DEFAULT_MAX_STEPS));
            let counted = run_with_reference(&g, &lattice, &auto, Some(&reference))?;
            Ok((traced, step_count(&counted)))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table = Table::new(std::iter::once("step").chain(strategies.iter().map(|s| s.0)));
    for k in 1..=steps {
        let mut row = vec![Cell::from(k)];
        row.extend(runs.iter().map(|(t, _)| at(t, k, |r| r.error)));
        table.push(row);
    }
    let counts: serde_json::Map<String, Value> =
        strategies.iter().zip(&runs).map(|(s, (_, n))| (s.0.to_string(), json!(n))).collect();
    Ok(Outcome {
        table,
        summary: json!({ "algorithm": alg.to_string(), "bhat_estimate": bhat, "steps_to_convergence": counts }),
    })
}

fn monster(args: &CommonArgs, extra: &ExperimentArgs) -> Result<Outcome, CliError> {
    let lattice = args.lattice()?;
    let sigma = match (extra.sigma, &args.window) {
        (Some(s), _) => s,
        (None, WindowSpec::Monster(s)) => *s,
        (None, _) => 6.0,
    };
    let g = monster_window(&lattice, sigma)?;
    let steps = args.steps.unwrap_or(30);
    let tight = reference_window(&g, &lattice, Target::Tight)?.0;
    let dual = reference_window(&g, &lattice, Target::Dual)?.0;
    // II stops on its own step size; IV runs the full length to expose E_k
    let ii_cfg = IterationConfig::new(Algorithm::II).max_steps(steps);
    let ii = run_with_reference(&g, &lattice, &ii_cfg, Some(&tight))?;
    let iv = run_with_reference(&g, &lattice, &fixed(Algorithm::IV, Scaling::Norm, steps), Some(&dual))?;
    let mut table = Table::new([
        "step",
        "ii_error",
        "ii_dual_lattice_norm",
        "ii_step_size",
        "iv_error",
        "iv_dual_lattice_norm",
        "iv_lower",
        "iv_upper",
    ]);
    for k in 0..=steps {
        table.push(vec![
            k.into(),
            at(&ii, k, |r| r.error),
            at(&ii, k, |r| r.dual_lattice_norm),
            at(&ii, k, |r| r.step_size.unwrap_or(f64::NAN)),
            at(&iv, k, |r| r.error),
            at(&iv, k, |r| r.dual_lattice_norm),
            at(&iv, k, |r| r.bounds.lower),
            at(&iv, k, |r| r.bounds.upper),
        ]);
    }
    let last = ii.records.last().expect("record");
    let lower: Vec<f64> = iv.records.iter().map(|r| r.bounds.lower).collect();
    let factors: Vec<f64> = lower.windows(2).skip(1).map(|w| w[1] / w[0]).collect();
    Ok(Outcome {
        table,
        summary: json!({
            "sigma": sigma,
            "ii_steps": ii.steps(),
            "ii_converged": ii.converged,
            "ii_wrong_limit": ii.wrong_limit(),
            "ii_final_error": nan_or_null(last.error),
            "ii_final_dual_lattice_norm": nan_or_null(last.dual_lattice_norm),
            "iv_lower_factors": factors.iter().map(|&f| nan_or_null(f)).collect::<Vec<_>>(),
        }),
    })
}

/// Dual lattice norm of each tight-window method across window widths.
fn precision(args: &CommonArgs) -> Result<Outcome, CliError> {
    let lattice = args.lattice()?;
    let ws = width_grid(-12, 12);
    let specs = widths(args, &ws)?;
    let rows = specs
        .par_iter()
        .zip(&ws)
        .map(|(spec, &w)| {
            let g = spec.build(&lattice)?;
            let ratio = frame_bounds_of(&g, &lattice)?.condition();
            let phi = factorize(&g, &lattice)?;
            let dln = |gamma: &Signal| {
                dual_lattice_norm_tight(&canonical_normalization(&g, gamma, Target::Tight, &lattice), &lattice)
            };
            let eig = dln(&unfactorize(&eig_tight(&phi)?));
            let svd = dln(&unfactorize(&svd_tight(&phi)?));
            let cfg = IterationConfig::new(Algorithm::II).max_steps(args.steps.unwrap_or(DEFAULT_MAX_STEPS));
            let t = run(&g, &lattice, &cfg)?;
            let it = dln(t.final_iterand());
            Ok(vec![w.into(), ratio.into(), eig.into(), svd.into(), it.into(), step_count(&t).into()])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table = Table::new(["w", "ratio", "eig", "svd", "iterative", "iterative_steps"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(Outcome { table, summary: json!({ "iterative": "II, norm scaling" }) })
}

/// Steps to convergence for I (norm scaling) and II–V (initial scaling by the estimate B̂).
fn count_named(g: &Signal, lattice: &GaborLattice, max_steps: usize, optimal: bool) -> Result<Vec<i64>, CliError> {
    let bhat = upper_bound_estimate(g, lattice);
    Algorithm::NAMED
        .par_iter()
        .map(|&alg| {
            let scaling = match alg {
                Algorithm::FrameInverse => Scaling::Norm,
                _ if optimal => Scaling::InitialOptimal,
                _ => Scaling::Initial(bhat),
            };
            let t = run(g, lattice, &IterationConfig::new(alg).scaling(scaling).max_steps(max_steps))?;
            Ok(step_count(&t))
        })
        .collect()
}

fn iterations_vs_ratio(args: &CommonArgs) -> Result<Outcome, CliError> {
    let lattice = args.lattice()?;
    let ws: Vec<f64> = width_grid(-12, 0).into_iter().rev().collect();
    let specs = widths(args, &ws)?;
    let max_steps = args.steps.unwrap_or(DEFAULT_MAX_STEPS);
    let rows = specs
        .par_iter()
        .zip(&ws)
        .map(|(spec, &w)| {
            let g = spec.build(&lattice)?;
            let ratio = frame_bounds_of(&g, &lattice)?.condition();
            let mut row = vec![Cell::from(w), ratio.into()];
            row.extend(count_named(&g, &lattice, max_steps, false)?.into_iter().map(Cell::from));
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table = Table::new(["w", "ratio", "I", "II", "III", "IV", "V"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(Outcome { table, summary: json!({ "not_converged": -1 }) })
}

/// Steps to convergence against the prescaled upper bound B/B̂.
fn scaling_sweep(args: &CommonArgs) -> Result<Outcome, CliError> {
    let lattice = args.lattice()?;
    let g = args.window.build(&lattice)?;
    let target = args.resolve_target()?;
    let algs = match target {
        Target::Tight => [Algorithm::II, Algorithm::III],
        Target::Dual => [Algorithm::IV, Algorithm::V],
    };
    let upper = frame_bounds_of(&g, &lattice)?.upper;
    let max_steps = args.steps.unwrap_or(DEFAULT_MAX_STEPS);
    let grid: Vec<f64> = (1..=60).map(|k| k as f64 / 10.0).collect();
    let rows = grid
        .par_iter()
        .map(|&bs| {
            let mut row = vec![Cell::from(bs)];
            for alg in algs {
                let cfg = IterationConfig::new(alg).scaling(Scaling::Initial(upper / bs)).max_steps(max_steps);
                row.push(step_count(&run(&g, &lattice, &cfg)?).into());
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let names: Vec<String> = algs.iter().map(|a| a.to_string()).collect();
    let mut table = Table::new(std::iter::once("b_scaled".to_string()).chain(names));
    rows.into_iter().for_each(|r| table.push(r));
    Ok(Outcome { table, summary: json!({ "upper_frame_bound": upper, "not_converged": -1 }) })
}

/// Consecutive Fibonacci pairs (p, q).
pub const FIBONACCI_PAIRS: [(usize, usize); 5] = [(2, 3), (3, 5), (5, 8), (8, 13), (13, 21)];
/// a = b = K·p on L = K²pq, so that c = d = K.
pub const FIBONACCI_SCALE: usize = 4;

pub fn fibonacci_lattice(p: usize, q: usize) -> Result<GaborLattice, GaborError> {
    let k = FIBONACCI_SCALE;
    GaborLattice::new(k * k * p * q, k * p, k * p)
}

/// Width w ≥ 1 at which the window family reaches the frame bound ratio
/// `target`, by bisection in log w.
pub fn matched_width(spec: &WindowSpec, lattice: &GaborLattice, target: f64) -> Result<f64, CliError> {
    let ratio = |w: f64| -> Result<f64, CliError> {
        let g = spec.with_width(w).expect("width family").build(lattice)?;
        let fb = frame_bounds_of(&g, lattice)?;
        // a nearly flat window loses the lower bound to rounding
        Ok(if fb.lower > 0.0 { fb.condition() } else { f64::INFINITY })
    };
    let (mut lo, mut hi) = (0.0f64, 8.0f64);
    if ratio(1.0)? > target || ratio(hi.exp2())? < target {
        return Err(CliError::Usage(format!("ratio {target} not reachable for w in [1, 256]")));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid.exp2())? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp2())
}

fn fibonacci(args: &CommonArgs, extra: &ExperimentArgs) -> Result<Outcome, CliError> {
    if args.window.with_width(1.0).is_none() {
        return Err(CliError::Usage("fibonacci needs a gauss or sech window family".into()));
    }
    let max_steps = args.steps.unwrap_or(DEFAULT_MAX_STEPS);
    let rows = FIBONACCI_PAIRS
        .par_iter()
        .map(|&(p, q)| {
            let lattice = fibonacci_lattice(p, q)?;
            let w = matched_width(&args.window, &lattice, extra.ratio)?;
            let g = args.window.with_width(w).expect("width family").build(&lattice)?;
            let ratio = frame_bounds_of(&g, &lattice)?.condition();
            let mut row = vec![Cell::from(p), q.into(), lattice.len.into(), lattice.a.into(), w.into(), ratio.into()];
            row.extend(count_named(&g, &lattice, max_steps, true)?.into_iter().map(Cell::from));
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table = Table::new(["p", "q", "L", "a", "w", "ratio", "I", "II", "III", "IV", "V"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(Outcome { table, summary: json!({ "target_ratio": extra.ratio, "scaling": "I norm, II-V initial optimal" }) })
}

fn scalar_lab(args: &CommonArgs, extra: &ExperimentArgs) -> Result<Outcome, CliError> {
    let steps = args.steps.unwrap_or(500);
    let xs: Vec<f64> = (1..=100).map(|k| k as f64 * 0.05).collect();
    let rows = xs
        .par_iter()
        .map(|&x| {
            let mut row = vec![Cell::from(x)];
            for alg in [TwoPointAlgorithm::II, TwoPointAlgorithm::IV] {
                let class = two_point_norm_scaled(x, extra.eps, alg, steps)?;
                let end = *two_point_trace(x, extra.eps, alg, steps)?.last().expect("state");
                row.extend([Cell::from(class.name()), end.c.into(), end.d.into()]);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table = Table::new(["x", "ii_class", "ii_c", "ii_d", "iv_class", "iv_c", "iv_d"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(Outcome { table, summary: json!({ "eps": extra.eps, "steps": steps }) })
}

/// Config echo for the sidecar.
pub fn echo(name: ExperimentName, args: &CommonArgs, extra: &ExperimentArgs) -> Value {
    json!({
        "experiment": format!("{name:?}"),
        "L": args.len,
        "a": args.a,
        "b": args.b,
        "window": args.window.to_string(),
        "target": args.target.map(|t| format!("{t:?}")),
        "method": args.method.map(|m| format!("{m:?}")),
        "scaling": format!("{:?}", args.scaling),
        "Bhat": args.bhat,
        "steps": args.steps,
        "tol": args.tol,
        "seed": args.seed,
        "sigma": extra.sigma,
        "eps": extra.eps,
        "ratio": extra.ratio,
        "initial_scaling": matches!(args.scaling, ScalingArg::Initial),
    })
}
