//! On-disk cache of structure tables and minimal-marked tables.
//!
//! Layout: `<dir>/<sha256 of the class theory key>/levels-<n>.json` and
//! `minimal-<bound>.json`. Every file carries `format`; files with another
//! format are ignored (with a warning) and rewritten.

use std::fs;
use std::path::{Path, PathBuf};

use amalgam::marked::MinimalMarkedTable;
use amalgam::structures::{CanonicalStructure, Certificate};
use amalgam::Context;
use anyhow::{Context as _, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT: u32 = 1;

#[derive(Serialize, Deserialize)]
struct LevelFile {
    format: u32,
    theory: String,
    size: usize,
    structures: Vec<LevelEntry>,
}

#[derive(Serialize, Deserialize)]
struct LevelEntry {
    certificate: Certificate,
    aut_order: u64,
}

#[derive(Serialize, Deserialize)]
struct MinimalFile {
    format: u32,
    theory: String,
    bound: usize,
    classes: Vec<Certificate>,
}

pub struct Cache {
    dir: PathBuf,
}

/// Outcome of a load: whether some file had to be discarded.
#[derive(Default)]
pub struct LoadStats {
    pub levels: usize,
    pub tables: usize,
    pub stale: usize,
}

impl Cache {
    pub fn new(root: &Path, ctx: &Context) -> Cache {
        let digest = Sha256::digest(ctx.class().theory_key().as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        Cache {
            dir: root.join(hex),
        }
    }

    pub fn load(&self, ctx: &Context) -> LoadStats {
        let mut stats = LoadStats::default();
        let theory = ctx.class().theory_key();
        let arities = ctx.class().arities();
        let mut levels = Vec::new();
        loop {
            let path = self.dir.join(format!("levels-{}.json", levels.len()));
            let Some(file) = read_json::<LevelFile>(&path, &mut stats) else {
                break;
            };
            if file.format != FORMAT || file.theory != theory || file.size != levels.len() {
                warn_stale(&path, &mut stats);
                break;
            }
            let decoded: Option<Vec<CanonicalStructure>> = file
                .structures
                .into_iter()
                .map(|e| {
                    let (structure, _) = e.certificate.decode(&arities)?;
                    Some(CanonicalStructure {
                        structure,
                        certificate: e.certificate,
                        aut_order: e.aut_order,
                    })
                })
                .collect();
            let Some(level) = decoded else {
                warn_stale(&path, &mut stats);
                break;
            };
            levels.push(level);
        }
        stats.levels = levels.len();
        if !levels.is_empty() {
            ctx.seed_levels(levels);
        }
        if let Ok(entries) = fs::read_dir(&self.dir) {
            let mut paths: Vec<PathBuf> = entries.flatten().map(|e| e.path()).collect();
            paths.sort();
            for path in paths {
                let is_minimal = path
                    .file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with("minimal-"));
                if !is_minimal {
                    continue;
                }
                let Some(file) = read_json::<MinimalFile>(&path, &mut stats) else {
                    continue;
                };
                if file.format != FORMAT || file.theory != theory {
                    warn_stale(&path, &mut stats);
                    continue;
                }
                match MinimalMarkedTable::from_certificates(file.bound, &file.classes, &arities) {
                    Ok(t) => {
                        ctx.seed_minimal(t);
                        stats.tables += 1;
                    }
                    Err(_) => warn_stale(&path, &mut stats),
                }
            }
        }
        stats
    }

    pub fn store(&self, ctx: &Context) -> Result<()> {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating cache dir {}", self.dir.display()))?;
        let theory = ctx.class().theory_key();
        for (size, level) in ctx.levels_snapshot().iter().enumerate() {
            let file = LevelFile {
                format: FORMAT,
                theory: theory.clone(),
                size,
                structures: level
                    .iter()
                    .map(|c| LevelEntry {
                        certificate: c.certificate.clone(),
                        aut_order: c.aut_order,
                    })
                    .collect(),
            };
            write_json(&self.dir.join(format!("levels-{size}.json")), &file)?;
        }
        for table in ctx.minimal_snapshot() {
            let file = MinimalFile {
                format: FORMAT,
                theory: theory.clone(),
                bound: table.bound,
                classes: table
                    .classes
                    .iter()
                    .map(|c| c.class.certificate.clone())
                    .collect(),
            };
            write_json(
                &self.dir.join(format!("minimal-{}.json", table.bound)),
                &file,
            )?;
        }
        Ok(())
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, stats: &mut LoadStats) -> Option<T> {
    let text = fs::read_to_string(path).ok()?;
    match serde_json::from_str(&text) {
        Ok(v) => Some(v),
        Err(_) => {
            warn_stale(path, stats);
            None
        }
    }
}

fn warn_stale(path: &Path, stats: &mut LoadStats) {
    stats.stale += 1;
    eprintln!("warning: ignoring stale or unreadable cache file {} (format {FORMAT} expected); it will be rebuilt", path.display());
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(value)?)
        .with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
