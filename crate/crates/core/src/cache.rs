//! On-disk cache of subgroup lattices.
//!
//! Files are keyed by the SHA-256 of the canonical group spec and carry a
//! checksum of their subgroup list. Anything that fails to parse or verify
//! is treated as corrupt: the lattice is recomputed and the file rewritten.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::subgroup::{enumerate_subgroups, Subgroup};

pub const LATTICE_FORMAT: &str = "cosetlab-lattice-v1";
pub const DEFAULT_CACHE_DIR: &str = ".cosetlab-cache";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    /// No usable file; computed and written.
    Cold,
    /// Loaded from disk.
    Warm,
    /// File was corrupt; recomputed and rewritten.
    Recomputed,
}

impl CacheStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CacheStatus::Cold => "cold",
            CacheStatus::Warm => "warm",
            CacheStatus::Recomputed => "recomputed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub path: PathBuf,
    pub key: String,
    pub status: CacheStatus,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    format: String,
    key: String,
    order: usize,
    subgroups: Vec<Vec<usize>>,
    checksum: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Cache key of a group: SHA-256 of its canonical spec JSON.
pub fn spec_key(g: &FiniteGroup) -> String {
    sha256_hex(g.spec().to_canonical_json().as_bytes())
}

fn checksum(subgroups: &[Vec<usize>]) -> String {
    sha256_hex(
        serde_json::to_string(subgroups)
            .expect("integers serialize")
            .as_bytes(),
    )
}

/// Path of the cache file for `g` under `dir`.
pub fn cache_path(g: &FiniteGroup, dir: &Path) -> PathBuf {
    dir.join(format!("{}.json", spec_key(g)))
}

/// Reads and verifies a cache file. Any mismatch is [`Error::CacheCorrupt`].
pub fn load_cached(g: &Arc<FiniteGroup>, path: &Path) -> Result<Vec<Subgroup>> {
    let corrupt = |reason: String| Error::CacheCorrupt {
        path: path.to_path_buf(),
        reason,
    };
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: LatticeFile =
        serde_json::from_slice(&bytes).map_err(|e| corrupt(format!("unparseable: {e}")))?;
    if file.format != LATTICE_FORMAT {
        return Err(corrupt(format!("unexpected format {:?}", file.format)));
    }
    if file.key != spec_key(g) || file.order != g.order() {
        return Err(corrupt("written for a different group".into()));
    }
    if file.checksum != checksum(&file.subgroups) {
        return Err(corrupt("checksum mismatch".into()));
    }
    let mut lattice = Vec::with_capacity(file.subgroups.len());
    for elements in file.subgroups {
        let s = Subgroup::from_elements(g.clone(), elements).map_err(|e| corrupt(e.to_string()))?;
        lattice.push(s);
    }
    if !lattice.windows(2).all(|w| w[0] < w[1]) {
        return Err(corrupt("subgroups not in canonical order".into()));
    }
    Ok(lattice)
}

fn write_cache(g: &FiniteGroup, lattice: &[Subgroup], path: &Path) -> Result<()> {
    let subgroups: Vec<Vec<usize>> = lattice.iter().map(Subgroup::elements).collect();
    let file = LatticeFile {
        format: LATTICE_FORMAT.to_string(),
        key: spec_key(g),
        order: g.order(),
        checksum: checksum(&subgroups),
        subgroups,
    };
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(&file)?).map_err(|source| Error::Io {
        path: tmp.clone(),
        source,
    })?;
    fs::rename(&tmp, path).map_err(io)
}

/// Returns the lattice of `g`, from `dir` when a valid file exists,
/// otherwise by enumeration (writing the result back).
pub fn cache_lattice(
    g: &Arc<FiniteGroup>,
    dir: &Path,
    subgroup_cap: usize,
) -> Result<(Vec<Subgroup>, CacheRecord)> {
    let path = cache_path(g, dir);
    let key = spec_key(g);
    let status = if path.exists() {
        match load_cached(g, &path) {
            Ok(lattice) if lattice.len() <= subgroup_cap => {
                log::debug!("lattice cache hit {}", path.display());
                return Ok((
                    lattice,
                    CacheRecord {
                        path,
                        key,
                        status: CacheStatus::Warm,
                    },
                ));
            }
            Ok(_) => return Err(Error::SubgroupCountCapExceeded { cap: subgroup_cap }),
            Err(e @ Error::CacheCorrupt { .. }) => {
                log::warn!("{e}; recomputing");
                CacheStatus::Recomputed
            }
            Err(e) => return Err(e),
        }
    } else {
        CacheStatus::Cold
    };
    let lattice = enumerate_subgroups(g, subgroup_cap)?;
    write_cache(g, &lattice, &path)?;
    Ok((lattice, CacheRecord { path, key, status }))
}
