use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gabiter_core::{Algorithm, GaborLattice, Scaling, Target};

use crate::error::CliError;
use crate::window::WindowSpec;

#[derive(Debug, Parser)]
#[command(name = "gabiter", version, about = "Canonical Gabor windows and convergence experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a canonical tight or dual window.
    Canonical(CommonArgs),
    /// Produce one of the CSV datasets.
    Experiment {
        name: ExperimentName,
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        extra: ExperimentArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    Convergence,
    ScalingCompare,
    Monster,
    Precision,
    IterationsVsRatio,
    ScalingSweep,
    Fibonacci,
    ScalarLab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Tight,
    Dual,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Tight => Target::Tight,
            TargetArg::Dual => Target::Dual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    Norm,
    /// Divide g by √B̂ once; B̂ from --Bhat or the dual-lattice estimate.
    Initial,
    InitialOptimal,
    ConstantOptimal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodSpec {
    Eig,
    Svd,
    Inv,
    /// SVD or solve on the full synthesis matrix.
    Dense,
    Iter(Algorithm),
}

impl FromStr for MethodSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "eig" => Ok(MethodSpec::Eig),
            "svd" => Ok(MethodSpec::Svd),
            "inv" => Ok(MethodSpec::Inv),
            "dense" => Ok(MethodSpec::Dense),
            _ => match s.strip_prefix("iter:") {
                Some(alg) => Ok(MethodSpec::Iter(alg.parse()?)),
                None => Err(CliError::Usage(format!("unknown method {s:?}"))),
            },
        }
    }
}

impl MethodSpec {
    /// Target implied by the method, if any.
    pub fn target(&self) -> Option<Target> {
        match self {
            MethodSpec::Eig | MethodSpec::Svd => Some(Target::Tight),
            MethodSpec::Inv => Some(Target::Dual),
            MethodSpec::Dense => None,
            MethodSpec::Iter(a) => Some(a.target()),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Signal length.
    #[arg(long = "L", default_value_t = 432)]
    pub len: usize,
    /// Time step.
    #[arg(long, default_value_t = 18)]
    pub a: usize,
    /// Frequency step.
    #[arg(long, default_value_t = 18)]
    pub b: usize,
    /// gauss:<w>, sech:<w>, monster:<sigma> or file:<path>.
    #[arg(long, default_value = "gauss:1")]
    pub window: WindowSpec,
    #[arg(long, value_enum)]
    pub target: Option<TargetArg>,
    /// eig, svd, inv, dense or iter:<I..V|tight<m>|dual<m>>.
    #[arg(long)]
    pub method: Option<MethodSpec>,
    #[arg(long, value_enum, default_value = "norm")]
    pub scaling: ScalingArg,
    /// Initial scaling constant B̂ (implies --scaling initial).
    #[arg(long = "Bhat")]
    pub bhat: Option<f64>,
    /// Maximum (or, for traces, exact) number of iteration steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Stop when the relative step falls below this value.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output path (CSV for experiments, file prefix for canonical).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed echoed into the sidecar; all experiments are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Inflated singular value of the MONSTER window.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Measure of the second level set in the scalar lab.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Frame bound ratio B/A matched across the Fibonacci lattices.
    #[arg(long, default_value_t = 4.0)]
    pub ratio: f64,
    /// Also write a JSON sidecar next to the CSV.
    #[arg(long)]
    pub json: bool,
}

impl CommonArgs {
    pub fn lattice(&self) -> Result<GaborLattice, CliError> {
        Ok(GaborLattice::new(self.len, self.a, self.b)?)
    }

    /// The explicit --target, checked against the method.
    pub fn resolve_target(&self) -> Result<Target, CliError> {
        let implied = self.method.and_then(|m| m.target());
        match (self.target.map(Target::from), implied) {
            (Some(t), Some(i)) if t != i => {
                Err(CliError::Usage(format!("method {:?} does not compute a {t:?} window", self.method.unwrap())))
            }
            (Some(t), _) | (None, Some(t)) => Ok(t),
            (None, None) => Ok(Target::Tight),
        }
    }

    /// Core scaling for the flags; `estimate` supplies B̂ when not given.
    pub fn scaling_with(&self, estimate: impl FnOnce() -> f64) -> Result<Scaling, CliError> {
        if let Some(b) = self.bhat {
            if !(b > 0.0 && b.is_finite()) {
                return Err(CliError::Usage("--Bhat must be positive".into()));
            }
            if !matches!(self.scaling, ScalingArg::Norm | ScalingArg::Initial) {
                return Err(CliError::Usage("--Bhat only applies to initial scaling".into()));
            }
            return Ok(Scaling::Initial(b));
        }
        Ok(match self.scaling {
            ScalingArg::Norm => Scaling::Norm,
            ScalingArg::Initial => Scaling::Initial(estimate()),
            ScalingArg::InitialOptimal => Scaling::InitialOptimal,
            ScalingArg::ConstantOptimal => Scaling::ConstantOptimal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("gabiter").chain(args.iter().cloned())).unwrap()
    }

    #[test]
    fn canonical_flags() {
        let cli = parse(&[
            "canonical", "--L", "432", "--a", "18", "--b", "18", "--window", "gauss:1", "--target", "tight",
            "--method", "iter:II", "--scaling", "norm",
        ]);
        let Command::Canonical(c) = cli.command else { panic!() };
        assert_eq!(c.len, 432);
        assert_eq!(c.method, Some(MethodSpec::Iter(Algorithm::II)));
        assert_eq!(c.resolve_target().unwrap(), Target::Tight);
    }

    #[test]
    fn experiment_names() {
        let cli = parse(&["experiment", "scaling-sweep", "--target", "dual"]);
        let Command::Experiment { name, common, .. } = cli.command else { panic!() };
        assert_eq!(name, ExperimentName::ScalingSweep);
        assert_eq!(common.target, Some(TargetArg::Dual));
        assert!(Cli::try_parse_from(["gabiter", "experiment", "nonsense"]).is_err());
    }

    #[test]
    fn conflicting_target_is_rejected() {
        let cli = parse(&["canonical", "--target", "dual", "--method", "svd"]);
        let Command::Canonical(c) = cli.command else { panic!() };
        assert!(c.resolve_target().is_err());
    }

    #[test]
    fn bhat_implies_initial_scaling() {
        let cli = parse(&["canonical", "--Bhat", "2.5"]);
        let Command::Canonical(c) = cli.command else { panic!() };
        assert_eq!(c.scaling_with(|| 1.0).unwrap(), Scaling::Initial(2.5));
        assert!(MethodSpec::from_str("iter:VI").is_err());
        assert_eq!(MethodSpec::from_str("iter:tight4").unwrap(), MethodSpec::Iter(Algorithm::Tight(4)));
    }
}
