use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hallforge_core::{AntipodeConvention, DimVector, Guards, Quiver, Twist};

use crate::error::{CliError, CliResult};
use crate::quiver_file::QuiverFile;

pub const MAX_POINTS_ENV: &str = "HALLFORGE_MAX_POINTS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// Pairs i < j in the twist exponent
    Composite,
    /// Pairs i <= j in the twist exponent
    Diagonal,
}

impl From<Convention> for AntipodeConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Composite => AntipodeConvention::Composite,
            Convention::Diagonal => AntipodeConvention::DiagonalInclusive,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hallforge", version, about = "Exact Ringel-Hall algebra computations for quivers over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Quiver JSON file
    #[arg(long, global = true)]
    pub quiver: Option<PathBuf>,
    /// Characteristic
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u64,
    /// Degree of the base field over F_p, so q = p^e
    #[arg(long, global = true, default_value_t = 1)]
    pub e: u32,
    /// Extension degree: work over F_{q^s}. For `census`, rows for every s' ≤ s
    #[arg(long, global = true, default_value_t = 1)]
    pub s: u32,
    /// Dimension vector "a,b,..." (repeatable); "0" is the zero vector
    #[arg(long = "dim", global = true)]
    pub dims: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Use the twisted product and coproduct
    #[arg(long, global = true)]
    pub twisted: bool,
    /// Largest point space to enumerate [default: 10000000, or $HALLFORGE_MAX_POINTS]
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_points: Option<u64>,
    /// Largest Hom space to scan element by element
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_hom: Option<u64>,
    /// Bound on total dimension for sweeps without --dim
    #[arg(long, global = true, default_value_t = 4)]
    pub limit_dim: u32,
    /// Worker threads for sweeps; output does not depend on it
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    /// Antipode exponent convention
    #[arg(long, global = true, value_enum, default_value_t = Convention::Composite)]
    pub convention: Convention,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List isomorphism classes for each --dim
    Orbits,
    /// Hall algebra operations on class ids ("1,0:0", "S1", "0")
    Hall {
        #[command(subcommand)]
        op: HallOp,
    },
    /// Run an identity sweep
    Verify {
        #[arg(value_enum)]
        which: Identity,
    },
    /// Frobenius-orbit census rows for each --dim
    Census,
}

#[derive(Debug, Subcommand)]
pub enum HallOp {
    /// Product of two or more basis elements
    Mul {
        #[arg(required = true, num_args = 2..)]
        classes: Vec<String>,
    },
    /// Coproduct of a basis element
    Comul { class: String },
    /// Antipode of a basis element
    Antipode { class: String },
    /// Green's pairing of two basis elements
    Pairing { left: String, right: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Identity {
    Green,
    Rp,
    Bialgebra,
    Adjoint,
    Coassoc,
    Antipode,
    Anti,
    Serre,
    Coincide,
    All,
}

/// Validated settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub quiver_path: PathBuf,
    pub quiver: Arc<Quiver>,
    pub p: u64,
    pub e: u32,
    pub s: u32,
    pub dims: Vec<DimVector>,
    pub guards: Guards,
    pub format: Format,
    pub twist: Twist,
    pub limit_dim: u32,
    pub threads: usize,
    pub convention: AntipodeConvention,
}

fn parse_dim(text: &str, quiver: &Quiver) -> CliResult<DimVector> {
    if text.trim() == "0" {
        return Ok(quiver.zero_dims());
    }
    let d: DimVector = text.parse()?;
    if d.len() != quiver.num_vertices() {
        return Err(CliError::input(format!(
            "dimension vector {text:?} has {} entries, the quiver has {} vertices",
            d.len(),
            quiver.num_vertices()
        )));
    }
    Ok(d)
}

impl RunConfig {
    /// `env_max_points` is the raw value of `HALLFORGE_MAX_POINTS`, if set.
    pub fn from_args(args: &CommonArgs, env_max_points: Option<&str>) -> CliResult<Self> {
        let quiver_path = args
            .quiver
            .clone()
            .ok_or_else(|| CliError::input("--quiver is required"))?;
        let quiver = QuiverFile::load(&quiver_path)?.to_quiver()?;
        hallforge_core::FieldSpec::new(args.p, args.e)?;
        if args.e == 0 || args.s == 0 {
            return Err(CliError::input("--e and --s must be positive"));
        }
        let mut guards = Guards::default();
        if let Some(v) = env_max_points {
            guards.max_points = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::input(format!("{MAX_POINTS_ENV} must be a positive integer, got {v:?}")))?;
        }
        if let Some(n) = args.max_points {
            guards.max_points = n;
        }
        if let Some(n) = args.max_hom {
            guards.max_hom = n;
        }
        let dims = args
            .dims
            .iter()
            .map(|d| parse_dim(d, &quiver))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(RunConfig {
            quiver_path,
            quiver: Arc::new(quiver),
            p: args.p,
            e: args.e,
            s: args.s,
            dims,
            guards,
            format: args.format,
            twist: Twist::from_flag(args.twisted),
            limit_dim: args.limit_dim,
            threads: args.threads as usize,
            convention: args.convention.into(),
        })
    }

    /// Name used in census rows: the quiver file stem.
    pub fn quiver_name(&self) -> String {
        self.quiver_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "quiver".into())
    }

    /// The dimension vectors a sweep visits: everything below some --dim
    /// componentwise, or every vector of total at most --limit-dim.
    pub fn sweep_dims(&self) -> Vec<DimVector> {
        if self.dims.is_empty() {
            return self.quiver.dims_up_to_total(self.limit_dim);
        }
        let mut all: Vec<DimVector> = self.dims.iter().flat_map(|d| d.sub_vectors()).collect();
        all.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
        all.dedup();
        all
    }
}
