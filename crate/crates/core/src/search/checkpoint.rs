//! Versioned JSON checkpoints, written atomically (temp file, then rename).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{block_count, kernel::SEARCH_MAX_N};
use crate::error::{Error, Result};
use crate::pattern::pattern_count;

pub const CHECKPOINT_VERSION: &str = "ihm-checkpoint/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub version: String,
    pub n: usize,
    /// Indices per block.
    pub block_size: u64,
    /// Sorted, without duplicates.
    pub completed_block_ids: Vec<u64>,
    /// Least eigenvalue over the completed blocks; `null` before the first block.
    pub running_min: Option<f64>,
    pub running_argmin_indices: Vec<u64>,
    /// Seconds since the Unix epoch.
    pub created: u64,
    pub updated: u64,
}

pub(crate) fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl Checkpoint {
    pub fn new(n: usize, block_size: u64) -> Self {
        let now = unix_now();
        Self {
            version: CHECKPOINT_VERSION.to_string(),
            n,
            block_size,
            completed_block_ids: Vec::new(),
            running_min: None,
            running_argmin_indices: Vec::new(),
            created: now,
            updated: now,
        }
    }

    /// Internal consistency, independent of any particular run.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.version != CHECKPOINT_VERSION {
            return Err(format!(
                "version {:?}, expected {CHECKPOINT_VERSION:?}",
                self.version
            ));
        }
        if !(1..=SEARCH_MAX_N).contains(&self.n) {
            return Err(format!("n = {} outside 1..={SEARCH_MAX_N}", self.n));
        }
        if self.block_size == 0 {
            return Err("block_size must be positive".into());
        }
        let blocks = block_count(self.n, self.block_size);
        if self.completed_block_ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err("completed_block_ids must be strictly increasing".into());
        }
        if self
            .completed_block_ids
            .last()
            .is_some_and(|&id| id >= blocks)
        {
            return Err(format!("block id beyond the {blocks} blocks of this run"));
        }
        let count = pattern_count(self.n) as u64;
        if self.running_argmin_indices.iter().any(|&i| i >= count) {
            return Err("argmin index out of range".into());
        }
        if self.running_argmin_indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err("running_argmin_indices must be strictly increasing".into());
        }
        match (
            self.running_min,
            self.running_argmin_indices.is_empty(),
            self.completed_block_ids.is_empty(),
        ) {
            (None, true, true) => Ok(()),
            (Some(v), false, false) if v.is_finite() && v > 0.0 => Ok(()),
            _ => Err("running minimum inconsistent with completed blocks".into()),
        }
    }

    /// Rejects a checkpoint that belongs to a different run.
    pub fn check_compatible(&self, n: usize, block_size: u64) -> std::result::Result<(), String> {
        if self.n != n {
            return Err(format!(
                "checkpoint is for n = {}, run is for n = {n}",
                self.n
            ));
        }
        if self.block_size != block_size {
            return Err(format!(
                "checkpoint uses block_size {}, run uses {block_size}",
                self.block_size
            ));
        }
        Ok(())
    }
}

fn checkpoint_error(path: &Path, reason: impl Into<String>) -> Error {
    Error::Checkpoint {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

pub fn checkpoint_save(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let json =
        serde_json::to_vec_pretty(checkpoint).map_err(|e| checkpoint_error(path, e.to_string()))?;
    let mut tmp = PathBuf::from(path);
    let mut name = path
        .file_name()
        .map(|s| s.to_os_string())
        .unwrap_or_else(|| "checkpoint".into());
    name.push(".tmp");
    tmp.set_file_name(name);
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(&json)?;
        file.write_all(b"\n")?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn checkpoint_load(path: &Path) -> Result<Checkpoint> {
    let bytes = fs::read(path)?;
    let checkpoint: Checkpoint = serde_json::from_slice(&bytes)
        .map_err(|e| checkpoint_error(path, format!("corrupt: {e}")))?;
    checkpoint
        .validate()
        .map_err(|reason| checkpoint_error(path, reason))?;
    Ok(checkpoint)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        let mut c = Checkpoint::new(6, 1024);
        c.completed_block_ids = vec![0, 3, 7];
        c.running_min = Some(0.05);
        c.running_argmin_indices = vec![17];
        c
    }

    #[test]
    fn save_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let c = sample();
        checkpoint_save(&path, &c).unwrap();
        assert_eq!(checkpoint_load(&path).unwrap(), c);
        assert!(!dir.path().join("ck.json.tmp").exists());
    }

    #[test]
    fn corrupt_and_mismatched_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        fs::write(&path, b"{ not json").unwrap();
        assert!(matches!(
            checkpoint_load(&path),
            Err(Error::Checkpoint { .. })
        ));

        let mut c = sample();
        c.version = "ihm-checkpoint/0".into();
        checkpoint_save(&path, &c).unwrap();
        assert!(matches!(
            checkpoint_load(&path),
            Err(Error::Checkpoint { .. })
        ));

        let mut c = sample();
        c.completed_block_ids = vec![3, 1];
        checkpoint_save(&path, &c).unwrap();
        assert!(checkpoint_load(&path).is_err());

        let mut c = sample();
        c.completed_block_ids = vec![32];
        assert!(c.validate().is_err());

        let c = Checkpoint {
            n: 7,
            ..Checkpoint::new(7, 1 << 20)
        };
        assert!(c.check_compatible(8, 1 << 20).is_err());
        assert!(c.check_compatible(7, 1 << 10).is_err());
        assert!(c.check_compatible(7, 1 << 20).is_ok());
    }

    #[test]
    fn missing_file_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            checkpoint_load(&dir.path().join("absent.json")),
            Err(Error::Io(_))
        ));
    }
}
