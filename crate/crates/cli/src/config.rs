//! Run configuration: JSON config files, parameter files and the flags that
//! override them.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use lpp_core::lpp::{FullSpaceParams, HalfSpaceParams};
use lpp_core::measure::Model;
use lpp_core::shapes::{parse_vertex, path_from_word};
use lpp_core::DownRightPath;
use serde::de::DeserializeOwned;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Full,
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exact,
    Mc,
}

/// Everything a run can be configured with. Rationals are `"p/q"` strings.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub side: Option<SideArg>,
    pub params: Option<serde_json::Value>,
    pub path: Option<DownRightPath>,
    pub seed: Option<u64>,
    pub mode: Option<ModeArg>,
    pub trunc: Option<u64>,
    pub samples: Option<u64>,
    pub cap: Option<u64>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Flags shared by the commands that sample or evaluate along a path.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON run configuration; flags given explicitly take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Parameter file: {"x": [...], "y": [...]} or {"x": [...], "c": "..."}.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Path word over {R, D}.
    #[arg(long)]
    pub path: Option<String>,
    /// Start vertex "x,y". Defaults to (0, #D) in full-space and (#D, #D) in
    /// half-space.
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl RunArgs {
    pub fn load(&self) -> Result<RunConfig> {
        match &self.config {
            Some(p) => read_json(p),
            None => Ok(RunConfig::default()),
        }
    }

    pub fn path(&self, config: &RunConfig, side: SideArg) -> Result<DownRightPath> {
        match (&self.path, &config.path) {
            (Some(word), _) => path_from_flags(word, self.start.as_deref(), side),
            (None, Some(p)) => match &self.start {
                Some(s) => Ok(DownRightPath::new(parse_vertex(s)?, p.word().to_vec())?),
                None => Ok(p.clone()),
            },
            (None, None) => bail!("a path is required (--path or \"path\" in --config)"),
        }
    }

    pub fn model(&self, config: &RunConfig, side: SideArg) -> Result<Model> {
        let raw = match (&self.params, &config.params) {
            (Some(file), _) => read_json::<serde_json::Value>(file)?,
            (None, Some(v)) => v.clone(),
            (None, None) => bail!("parameters are required (--params or \"params\" in --config)"),
        };
        model_from_json(raw, side)
    }

    pub fn seed(&self, config: &RunConfig) -> u64 {
        self.seed.or(config.seed).unwrap_or(0)
    }
}

pub fn model_from_json(raw: serde_json::Value, side: SideArg) -> Result<Model> {
    Ok(match side {
        SideArg::Full => Model::Full(
            serde_json::from_value::<FullSpaceParams>(raw).context("full-space parameters need \"x\" and \"y\"")?,
        ),
        SideArg::Half => Model::Half(
            serde_json::from_value::<HalfSpaceParams>(raw).context("half-space parameters need \"x\" and \"c\"")?,
        ),
    })
}

/// The side a config asks for, if no flag says otherwise.
pub fn resolve_side(flag: Option<SideArg>, config: &RunConfig) -> SideArg {
    flag.or(config.side).unwrap_or(SideArg::Full)
}

/// Bounding dimensions of a path: its final x and its initial y.
pub fn window(path: &DownRightPath) -> (usize, usize) {
    (path.end().0, path.start().1)
}

/// A path from its word and optional start. Without a start the path begins
/// at `(0, #D)` in full-space and `(#D, #D)` in half-space.
pub fn path_from_flags(word: &str, start: Option<&str>, side: SideArg) -> Result<DownRightPath> {
    let downs = word.chars().filter(|&c| c == 'D').count();
    let start = match start {
        Some(s) => parse_vertex(s)?,
        None if side == SideArg::Full => (0, downs),
        None => (downs, downs),
    };
    Ok(path_from_word(start, word)?)
}
