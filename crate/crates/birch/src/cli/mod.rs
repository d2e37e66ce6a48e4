//! Command-line surface: argument parsing into a [`JobSpec`], and
//! [`run`], which executes a job and reports an exit status.

mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::fields::{BirchField, SolverBudget};
use crate::pipeline::{tolerance_from_f64, PipelineConfig, System};
use crate::strength::Threshold;

pub use report::execute;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Solve,
    Sample,
    Strength,
    Regularize,
    Orthogonalize,
    DiagonalSolve,
    Verify,
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Base field: Q, R, R(t1) or R(t1..tp).
    #[arg(long, default_value = "R")]
    pub field: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest numerator or denominator tried by rational searches.
    #[arg(long)]
    pub height_bound: Option<u64>,
    #[arg(long)]
    pub restarts: Option<u32>,
    /// Residual tolerance for enclosures.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Equations inline, or `@path` to read them from a file.
#[derive(Args, Clone, Debug)]
pub struct Inputs {
    #[arg(required = true)]
    pub inputs: Vec<String>,
}

#[derive(Args, Clone, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    /// A polynomial that must not vanish at the point.
    #[arg(long)]
    pub avoid: Option<String>,
    /// Treat each equation as `H(x) = c` and homogenize.
    #[arg(long)]
    pub affine: bool,
    /// Regularize first with this strength threshold (integer or expression in r, d, s).
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub blocks: Option<usize>,
}

#[derive(Args, Clone, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long)]
    pub avoid: Option<String>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub blocks: Option<usize>,
}

#[derive(Args, Clone, Debug)]
pub struct StrengthArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
}

#[derive(Args, Clone, Debug)]
pub struct RegularizeArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long)]
    pub threshold: String,
}

#[derive(Args, Clone, Debug)]
pub struct OrthogonalizeArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
    /// Number of vectors, or of blocks when `--ell` is given.
    #[arg(long, default_value_t = 2)]
    pub count: usize,
    /// Block dimension; switches to orthogonal subspaces.
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub avoid: Option<String>,
}

#[derive(Args, Clone, Debug)]
pub struct DiagonalArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub inputs: Inputs,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Certificate file written by `solve` or `sample` with `--format json`.
    pub certificate: PathBuf,
}

#[derive(Subcommand, Clone, Debug)]
pub enum Sub {
    /// Find a certified nonzero point.
    Solve(SolveArgs),
    /// Certified points from the rational parametrization.
    Sample(SampleArgs),
    /// Strength bounds with their provenance.
    Strength(StrengthArgs),
    /// Replace forms by odd degree generators of higher strength.
    Regularize(RegularizeArgs),
    /// Orthogonal vectors or subspaces.
    Orthogonalize(OrthogonalizeArgs),
    /// Solve one diagonal form with the field's oracle.
    DiagonalSolve(DiagonalArgs),
    /// Re-check a certificate file.
    Verify(VerifyArgs),
}

#[derive(Parser, Clone, Debug)]
#[command(name = "birch", version, about = "Rational points on systems of odd degree forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

/// A fully resolved job.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub field: BirchField,
    /// Equation text, one item per input, files already read.
    pub inputs: Vec<String>,
    pub budget: SolverBudget,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub avoid: Option<String>,
    pub affine: bool,
    pub count: usize,
    pub threshold: Option<Threshold>,
    pub ell: Option<usize>,
    pub blocks: Option<usize>,
    pub certificate: Option<PathBuf>,
}

/// What a job produced: the exit status and the text to emit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;

fn read_input(item: &str) -> Result<String> {
    match item.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => Ok(item.to_string()),
    }
}

impl JobSpec {
    fn base(command: Command, common: &Common, inputs: &[String]) -> Result<JobSpec> {
        let field = BirchField::parse(&common.field)?;
        let mut budget = SolverBudget::with_seed(common.seed);
        if let Some(h) = common.height_bound {
            budget.height_bound = h;
        }
        if let Some(r) = common.restarts {
            budget.restarts = r;
        }
        if let Some(t) = common.tol {
            budget.residual_tol = tolerance_from_f64(t)?;
        }
        budget.validate()?;
        Ok(JobSpec {
            command,
            field,
            inputs: inputs.iter().map(|s| read_input(s)).collect::<Result<_>>()?,
            budget,
            output: common.out.clone(),
            format: common.format,
            avoid: None,
            affine: false,
            count: 1,
            threshold: None,
            ell: None,
            blocks: None,
            certificate: None,
        })
    }

    /// Resolves arguments: reads input files, parses the field, fills in
    /// the budget and validates command-specific flags.
    pub fn from_cli(cli: &Cli) -> Result<JobSpec> {
        let threshold = |t: &Option<String>| t.as_deref().map(Threshold::parse).transpose();
        let job = match &cli.command {
            Sub::Solve(a) => JobSpec {
                avoid: a.avoid.clone(),
                affine: a.affine,
                threshold: threshold(&a.threshold)?,
                ell: a.ell,
                blocks: a.blocks,
                ..JobSpec::base(Command::Solve, &a.common, &a.inputs.inputs)?
            },
            Sub::Sample(a) => JobSpec {
                avoid: a.avoid.clone(),
                count: a.count,
                ell: a.ell,
                blocks: a.blocks,
                ..JobSpec::base(Command::Sample, &a.common, &a.inputs.inputs)?
            },
            Sub::Strength(a) => JobSpec::base(Command::Strength, &a.common, &a.inputs.inputs)?,
            Sub::Regularize(a) => JobSpec {
                threshold: Some(Threshold::parse(&a.threshold)?),
                ..JobSpec::base(Command::Regularize, &a.common, &a.inputs.inputs)?
            },
            Sub::Orthogonalize(a) => JobSpec {
                count: a.count,
                ell: a.ell,
                avoid: a.avoid.clone(),
                ..JobSpec::base(Command::Orthogonalize, &a.common, &a.inputs.inputs)?
            },
            Sub::DiagonalSolve(a) => JobSpec::base(Command::DiagonalSolve, &a.common, &a.inputs.inputs)?,
            Sub::Verify(a) => JobSpec {
                certificate: Some(a.certificate.clone()),
                ..JobSpec::base(Command::Verify, &a.common, &[])?
            },
        };
        job.validate()?;
        Ok(job)
    }

    pub fn validate(&self) -> Result<()> {
        match self.command {
            Command::Verify if self.certificate.is_none() => Err(Error::contract("verify needs a certificate file")),
            Command::Verify => Ok(()),
            _ if self.inputs.iter().all(|s| s.trim().is_empty()) => Err(Error::contract("no equations given")),
            Command::Sample if self.count == 0 => Err(Error::contract("--count must be positive")),
            Command::Regularize if self.threshold.is_none() => Err(Error::contract("regularize needs --threshold")),
            _ if self.ell == Some(0) => Err(Error::contract("--ell must be positive")),
            _ if self.blocks == Some(0) => Err(Error::contract("--blocks must be positive")),
            _ => Ok(()),
        }
    }

    pub fn system(&self) -> Result<System> {
        System::parse(&self.inputs.join("\n"), self.field, self.avoid.as_deref())
    }

    pub fn config(&self) -> PipelineConfig {
        let d = PipelineConfig::default();
        PipelineConfig {
            ell: self.ell.unwrap_or(d.ell),
            blocks: self.blocks,
            regularize_threshold: self.threshold.clone(),
        }
    }
}

/// Exit status for an error: 2 when a bounded search gave up, else 1.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_not_found() {
        EXIT_NOT_FOUND
    } else {
        EXIT_ERROR
    }
}

/// Runs a job. Success writes the report to `--out` when given.
pub fn run(job: &JobSpec) -> Outcome {
    match execute(job) {
        Ok(report) => {
            if let Some(path) = &job.output {
                if let Err(e) = std::fs::write(path, &report) {
                    return Outcome {
                        code: EXIT_ERROR,
                        report: format!("error: {e}\n"),
                    };
                }
            }
            Outcome { code: EXIT_OK, report }
        }
        Err(e) => Outcome {
            code: exit_code(&e),
            report: format!("error: {e}\n"),
        },
    }
}
