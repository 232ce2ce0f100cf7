use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use anticonc::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags shared by every subcommand. Each one overrides the matching key of
/// the `--config` file.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// JSON run configuration; unknown keys are rejected.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Group file, or a catalog name such as `SL2(5)`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Sequence file.
    #[arg(long, global = true)]
    pub seq: Option<PathBuf>,
    /// Use a seeded random sequence of this length (elements uniform off the identity).
    #[arg(long, global = true)]
    pub random: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Closure cap (elements).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

/// Everything a run may take from a file. Command-specific keys are ignored
/// by commands that do not use them.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: Option<String>,
    pub seq: Option<PathBuf>,
    pub random: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub tol: Option<f64>,
    pub cap: Option<usize>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub alpha: Option<f64>,
    pub pairs: Option<usize>,
    pub unitaries: Option<usize>,
    pub step: Option<f64>,
    pub dim: Option<usize>,
    pub p: Option<u64>,
    pub m: Option<u32>,
    pub input: Option<PathBuf>,
    pub n: Option<u64>,
    pub p_min: Option<u64>,
    pub s: Option<u64>,
    pub k: Option<u64>,
    pub instances: Option<usize>,
}

impl RunConfig {
    /// Relative paths inside the file are taken relative to the file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: RunConfig = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(x) = p.as_mut() {
                if x.is_relative() {
                    *x = base.join(&*x);
                }
            }
        };
        rebase(&mut cfg.seq);
        rebase(&mut cfg.out);
        rebase(&mut cfg.input);
        if let Some(g) = cfg.group.as_mut() {
            let joined = base.join(&*g);
            if Path::new(g).is_relative() && joined.exists() {
                *g = joined.to_string_lossy().into_owned();
            }
        }
        Ok(cfg)
    }

    /// Flags win over file values.
    pub fn merge(mut self, a: &CommonArgs) -> Result<Self> {
        macro_rules! take {
            ($($f:ident),*) => {$(if a.$f.is_some() { self.$f = a.$f.clone(); })*};
        }
        take!(group, seq, random, seed, samples, tol, cap, threads, out, format);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("tol", self.tol), ("alpha", self.alpha), ("step", self.step)] {
            if let Some(x) = v {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(Error::InvalidArgument(format!("{name} must be positive, got {x}")));
                }
            }
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn threads(&self) -> usize {
        self.threads.unwrap_or(1)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}
