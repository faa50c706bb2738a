use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldl::lang::NegFlag;
use ldl::optimize::Direction;
use ldl::semantics::{Backend, TruthMode};

/// Compile logical specifications to differentiable losses and check the
/// properties of the logics.
#[derive(Debug, Parser)]
#[command(name = "dlc", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type-check a specification and print its compiled form.
    Compile(CompileArgs),
    /// Interpret a specification under a logic.
    Eval(EvalArgs),
    /// Gradient of the interpretation with respect to a vector leaf.
    Grad(GradArgs),
    /// Run the property matrix and compare it with the golden pattern.
    Table2(Table2Args),
    /// Partials of the n-ary conjunction at a constant point.
    Shadow(ShadowArgs),
    /// Fuzz soundness (and optionally range) on random ground expressions.
    SoundnessFuzz(FuzzArgs),
    /// Projected gradient search over an L∞ box.
    Optimize(OptimizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlagArg {
    Defined,
    Undefined,
}

impl From<FlagArg> for NegFlag {
    fn from(f: FlagArg) -> Self {
        match f {
            FlagArg::Defined => NegFlag::Defined,
            FlagArg::Undefined => NegFlag::Undefined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Finite,
    Ereal,
}

impl From<ModeArg> for TruthMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Finite => TruthMode::FiniteAlt,
            ModeArg::Ereal => TruthMode::ExtendedReal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Min,
    Max,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Min => Direction::Minimize,
            DirectionArg::Max => Direction::Maximize,
        }
    }
}

/// Where the specification comes from.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Specification file.
    pub file: Option<PathBuf>,
    /// Inline goal expression; text containing `goal:` is read as a whole
    /// specification.
    #[arg(long, conflicts_with = "file")]
    pub expr: Option<String>,
    /// Keep parenthesised chains of the same connective nested.
    #[arg(long)]
    pub no_flatten: bool,
    /// Negation flag for inline expressions.
    #[arg(long, value_enum, default_value_t = FlagArg::Undefined)]
    pub flag: FlagArg,
}

#[derive(Debug, Args)]
pub struct LogicArgs {
    /// Logic, e.g. `godel`, `yager:p=2`, `dl2`, `stl:nu=1`.
    #[arg(long)]
    pub logic: Backend,
    /// Truth-constant mode for DL2 and STL.
    #[arg(long, value_enum, default_value_t = ModeArg::Finite)]
    pub mode: ModeArg,
}

impl LogicArgs {
    pub fn backend(&self) -> Backend {
        self.logic.with_mode(self.mode.into())
    }
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub logic: LogicArgs,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    pub emit: Emit,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub logic: LogicArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GradArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub logic: LogicArgs,
    /// Vector leaf to differentiate against; defaults to the only leaf.
    #[arg(long)]
    pub wrt: Option<String>,
    /// Compare every partial with its finite-difference estimate.
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct Table2Args {
    /// Trials per fuzzed property.
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Golden pattern file; the built-in copy is used when omitted.
    #[arg(long)]
    pub golden: Option<PathBuf>,
    /// Overwrite the golden file with the computed pattern.
    #[arg(long)]
    pub update_golden: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ShadowArgs {
    /// Logic to probe; required unless `--grid` is given.
    #[arg(long, required_unless_present = "grid")]
    pub logic: Option<Backend>,
    /// Number of conjuncts, `M + 1`.
    #[arg(long, default_value_t = 3)]
    pub arity: usize,
    /// The constant point.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Run the reference grid for DL2, product and STL and compare it with
    /// the golden file.
    #[arg(long, conflicts_with = "logic")]
    pub grid: bool,
    #[arg(long, requires = "grid")]
    pub golden: Option<PathBuf>,
    #[arg(long, requires = "grid")]
    pub update_golden: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[command(flatten)]
    pub logic: LogicArgs,
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also check that every interpretation stays in the logic's domain.
    #[arg(long)]
    pub range: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub logic: LogicArgs,
    /// Vector leaf to optimise; defaults to the only leaf.
    #[arg(long)]
    pub wrt: Option<String>,
    /// Box as `c1,...,cn,radius`; a single centre value is broadcast.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub bounds: String,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = DirectionArg::Max)]
    pub direction: DirectionArg,
}
