//! Batch interface over `pcramsey-core`: JSON artifact formats, seeded
//! generators and independent verification.

pub mod artifacts;
pub mod formats;

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pcramsey_core::arrow::DEFAULT_BUDGET;
use pcramsey_core::axioms::Corruption;
use pcramsey_core::creature::Example;
use pcramsey_core::error::Error as CoreError;
use pcramsey_core::pigeonhole::Variant;

use artifacts::{A4Params, Artifact};
use formats::{parse_example, ColoringSpec, PosColoringSpec};

/// Bad flags or parameters; the process exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn exit_code(e: &anyhow::Error) -> i32 {
    let usage = e.chain().any(|c| {
        c.is::<UsageError>() || matches!(c.downcast_ref::<CoreError>(), Some(CoreError::InvalidInput(_) | CoreError::UnsupportedN(_)))
    });
    if usage {
        EXIT_USAGE
    } else {
        EXIT_FAILED
    }
}

#[derive(Debug, Parser)]
#[command(name = "pcramsey", version, about = "Finite Ramsey, Hales-Jewett and creature-space certificates")]
pub struct Cli {
    /// Seed for every generated coloring and prefix.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide r -> (m)^k_2 by exhaustive enumeration.
    Arrow {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Product bounds S_k, or S_{k,n} with --n.
    Bounds {
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        ms: Vec<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 1 << 40)]
        cap: u64,
        /// Emit the JSON artifact instead of the plain line.
        #[arg(long)]
        json: bool,
    },
    /// Homogenize a product coloring read from a file or seeded.
    Homogenize {
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        ms: Vec<u32>,
        /// Coordinate sizes of a seeded coloring; defaults to the S_k bounds.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<u32>>,
        #[arg(long)]
        coloring: Option<PathBuf>,
    },
    /// Varying-index tree homogenization.
    Tree {
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        ms: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        sizes: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long)]
        coloring: Option<PathBuf>,
    },
    /// Hales-Jewett: the number for --n, or a line in a coloring with --length.
    Hj {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long, default_value_t = 4)]
        cap: usize,
        #[arg(long)]
        coloring: Option<PathBuf>,
    },
    /// A seeded dense prefix of creatures.
    Creatures {
        #[arg(long, value_parser = parse_example)]
        example: Example,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Print one rendered creature per line instead of JSON.
        #[arg(long)]
        pretty: bool,
    },
    /// The pigeonhole axiom on a seeded dense prefix.
    A4(A4Args),
    /// Axiom batteries on seeded fragments.
    Axioms {
        #[arg(long, value_parser = parse_example)]
        example: Example,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum)]
        corrupt: Option<CorruptArg>,
    },
    /// Re-check an artifact file from scratch.
    Verify { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct A4Args {
    #[arg(long, value_parser = parse_example)]
    pub example: Example,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub targets: usize,
    /// seeded, constant, parity-min, size-parity or first-letter.
    #[arg(long, default_value = "seeded")]
    pub coloring: String,
    /// Color of the constant oracle.
    #[arg(long, default_value_t = 0)]
    pub color: u8,
    /// JSON coloring table; overrides --coloring.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Run seeds seed..seed+count and emit a batch.
    #[arg(long)]
    pub count: Option<usize>,
    /// Recover the conclusion with this variant instead.
    #[arg(long, value_enum)]
    pub recover: Option<VariantArg>,
    #[arg(long, default_value_t = 2)]
    pub length: usize,
    /// Possibility coloring for --recover: seeded, constant or least-point-parity.
    #[arg(long, default_value = "seeded")]
    pub d: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    A,
    B,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CorruptArg {
    ApproxIndex,
    Boundary,
    Material,
}

impl From<CorruptArg> for Corruption {
    fn from(c: CorruptArg) -> Self {
        match c {
            CorruptArg::ApproxIndex => Corruption::ApproxIndex,
            CorruptArg::Boundary => Corruption::Boundary,
            CorruptArg::Material => Corruption::Material,
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow::anyhow!(UsageError(format!("{}: {e}", path.display()))))
}

/// Output text and exit status of one invocation.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    let ok = |a: Artifact| Outcome { text: a.to_json(), code: EXIT_OK };
    Ok(match &cli.command {
        Command::Arrow { r, m, k, budget } => ok(Artifact::Arrow(artifacts::arrow(*r, *m, *k, *budget)?)),
        Command::Bounds { k, ms, n, cap, json } => {
            let b = artifacts::bounds(*k, ms, *n, *cap)?;
            if *json {
                ok(Artifact::Bounds(b))
            } else {
                Outcome { text: b.line(), code: EXIT_OK }
            }
        }
        Command::Homogenize { k, ms, sizes, coloring } => {
            let file = coloring.as_ref().map(read_json).transpose()?;
            ok(Artifact::Homogenize(artifacts::homogenize(*k, ms, sizes.clone(), file, seed)?))
        }
        Command::Tree { k, ms, sizes, levels, coloring } => {
            let file = coloring.as_ref().map(read_json).transpose()?;
            ok(Artifact::Tree(artifacts::tree(*k, ms, sizes, *levels, file, seed)?))
        }
        Command::Hj { n, length, cap, coloring } => match (length, coloring) {
            (None, None) => ok(Artifact::HjNumber(artifacts::hj_number_artifact(*n, *cap)?)),
            (len, file) => {
                let file = file.as_ref().map(read_json).transpose()?;
                ok(Artifact::HjLine(artifacts::hj_line(*n, len.unwrap_or(1), file, seed)?))
            }
        },
        Command::Creatures { example, depth, pretty } => {
            let c = artifacts::creatures(*example, *depth, seed)?;
            if *pretty {
                Outcome { text: c.rendered.iter().map(|r| format!("{r}\n")).collect(), code: EXIT_OK }
            } else {
                ok(Artifact::Creatures(c))
            }
        }
        Command::A4(a) => run_a4(a, seed)?,
        Command::Axioms { example, count, corrupt } => {
            let a = artifacts::axioms(*example, seed, *count, corrupt.map(Into::into))?;
            let code = if a.violations == 0 { EXIT_OK } else { EXIT_FAILED };
            Outcome { text: Artifact::Axioms(a).to_json(), code }
        }
        Command::Verify { file } => {
            let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let v = artifacts::verify(&text);
            let code = if v.ok { EXIT_OK } else { EXIT_FAILED };
            let mut text = serde_json::to_string_pretty(&v)?;
            text.push('\n');
            Outcome { text, code }
        }
    })
}

fn run_a4(a: &A4Args, seed: u64) -> Result<Outcome> {
    let p = A4Params { example: a.example, depth: a.depth, k: a.k, targets: a.targets };
    if let Some(v) = a.recover {
        let variant = match v {
            VariantArg::A => Variant::A,
            VariantArg::B => Variant::B,
        };
        let d = match a.d.as_str() {
            "seeded" => PosColoringSpec::Seeded { seed },
            "constant" => PosColoringSpec::Constant { color: a.color },
            "least-point-parity" => PosColoringSpec::LeastPointParity,
            other => return Err(UsageError(format!("unknown possibility coloring {other:?}")).into()),
        };
        let r = artifacts::recovery(a.example, a.depth, variant, a.length, d, seed)?;
        return Ok(Outcome { text: Artifact::Recovery(r).to_json(), code: EXIT_OK });
    }
    if let Some(count) = a.count {
        let b = artifacts::a4_batch(p, &a.coloring, a.color, seed, count)?;
        let code = if b.shortfalls.is_empty() { EXIT_OK } else { EXIT_FAILED };
        return Ok(Outcome { text: Artifact::A4Batch(b).to_json(), code });
    }
    let spec = match &a.table {
        Some(path) => read_json(path)?,
        None => ColoringSpec::named(&a.coloring, seed, a.color).map_err(|e| UsageError(e.to_string()))?,
    };
    Ok(Outcome { text: Artifact::A4(artifacts::a4_run(p, spec, seed)?).to_json(), code: EXIT_OK })
}
