//! Run configuration shared by every subcommand.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vilenkin::summability::SchemeKind;
use vilenkin::{Error, RadixSequence, Result, VilenkinGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    #[default]
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Resolved settings.
///
/// Defaults: Walsh radices (cycle `2`), level 6, float mode, `fejer`, CSV to stdout, seed 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub radices: RadixSequence,
    pub level: usize,
    pub mode: Mode,
    pub scheme: String,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            radices: RadixSequence::walsh(),
            level: 6,
            mode: Mode::Float,
            scheme: "fejer".into(),
            format: Format::Csv,
            out: None,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn group(&self) -> Result<VilenkinGroup> {
        self.radices.group(self.level)
    }

    pub fn scheme_kind(&self) -> Result<SchemeKind> {
        self.scheme.parse()
    }
}

/// `2,3,2` into radices.
pub fn parse_radix_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad radix {t:?} in {text:?}"))))
        .collect()
}

/// Index lists: `5`, `1,2,4`, `3..9` (inclusive), `M2..M6` (scales), `M4`.
pub fn parse_index_list(text: &str, group: &VilenkinGroup) -> Result<Vec<u64>> {
    let scale = |t: &str| -> Result<u64> {
        let k: usize = t.parse().map_err(|_| Error::Parse(format!("bad scale index {t:?}")))?;
        if k > group.level() {
            return Err(Error::IndexOutOfRange { index: format!("M{k}"), limit: format!("M{}", group.level()) });
        }
        Ok(group.scale(k))
    };
    let number = |t: &str| -> Result<u64> { t.parse().map_err(|_| Error::Parse(format!("bad index {t:?}"))) };
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            match (a.strip_prefix('M'), b.strip_prefix('M')) {
                (Some(a), Some(b)) => {
                    let (a, b) = (number(a)?, number(b)?);
                    for k in a..=b {
                        out.push(scale(&k.to_string())?);
                    }
                }
                _ => out.extend(number(a)?..=number(b)?),
            }
        } else if let Some(k) = item.strip_prefix('M') {
            out.push(scale(k)?);
        } else {
            out.push(number(item)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("empty index list {text:?}")));
    }
    Ok(out)
}
