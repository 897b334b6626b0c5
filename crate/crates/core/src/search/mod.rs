//! Exhaustive scan of Kₙ for the least smallest eigenvalue of `YYᵀ`.
//!
//! The index space `[0, 2^{n(n−1)/2})` is cut into contiguous blocks. Workers
//! pull block ids from a shared counter and send each block's minimum set to
//! a single reducer, which merges them, reports progress and writes
//! checkpoints. Merging is exact (see [`MinSet::merge`]), so the final
//! minimum and argmin set do not depend on worker count, block size or the
//! order in which blocks finish.

mod checkpoint;
mod kernel;

use std::collections::BTreeSet;
use std::ops::Range;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::charpoly::{smallest_eigenvalue, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::pattern::{gram, pattern_count, LowerUnitMatrix};

pub use checkpoint::{checkpoint_load, checkpoint_save, Checkpoint, CHECKPOINT_VERSION};
use kernel::{merge_opt, scan_range, Kernel};
pub use kernel::{MinSet, SEARCH_MAX_N, TIE_WINDOW};

pub const DEFAULT_BLOCK_SIZE: u64 = 1 << 20;

/// Agreement required between the scanned minimum and `λ_min(Z₀)`.
pub const CONJECTURE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    pub total_scanned: u64,
    /// Least smallest eigenvalue found, i.e. the computed `cₙ`.
    pub c_n_estimate: f64,
    /// Every index of Kₙ attaining the minimum exactly, ascending.
    pub argmin_indices: Vec<u64>,
    /// Smallest eigenvalue of `Y₀Y₀ᵀ`.
    pub z0_value: f64,
    pub conjecture_holds: bool,
    pub unique_argmin: bool,
    /// Wall-clock seconds for this invocation.
    pub elapsed: f64,
    pub blocks_completed: u64,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n: usize,
    pub workers: usize,
    pub block_size: u64,
    /// Relative tolerance for the Newton root.
    pub tol: f64,
    /// Skip matrices whose Gershgorin lower bound already exceeds the block minimum.
    pub prune: bool,
    /// Resume from this file if it exists, and keep it updated.
    pub checkpoint: Option<PathBuf>,
    /// Minimum time between checkpoint writes (the final state is always written).
    pub checkpoint_interval: Duration,
    /// Stop after this many blocks complete in this invocation.
    pub max_blocks: Option<u64>,
}

impl SearchConfig {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            workers: 1,
            block_size: DEFAULT_BLOCK_SIZE,
            tol: DEFAULT_TOL,
            prune: false,
            checkpoint: None,
            checkpoint_interval: Duration::from_secs(10),
            max_blocks: None,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn block_size(mut self, block_size: u64) -> Self {
        self.block_size = block_size;
        self
    }

    pub fn checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    fn validate(&self) -> Result<()> {
        if !(1..=SEARCH_MAX_N).contains(&self.n) {
            return Err(Error::Dimension {
                n: self.n,
                reason: "exhaustive search supports 1 ≤ n ≤ 9",
            });
        }
        if self.n == SEARCH_MAX_N && self.checkpoint.is_none() {
            return Err(Error::Validation(
                "n = 9 runs require a checkpoint file".into(),
            ));
        }
        if self.workers == 0 || self.block_size == 0 {
            return Err(Error::Validation(
                "workers and block_size must be positive".into(),
            ));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Validation(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progress {
    pub blocks_done: u64,
    pub blocks_total: u64,
    pub scanned: u64,
}

/// Number of blocks covering Kₙ.
pub fn block_count(n: usize, block_size: u64) -> u64 {
    (pattern_count(n) as u64).div_ceil(block_size)
}

/// Contiguous, disjoint ranges covering `[0, 2^{n(n−1)/2})`.
pub fn partition(n: usize, block_size: u64) -> Vec<Range<u64>> {
    assert!(block_size >= 1, "block_size must be positive");
    (0..block_count(n, block_size))
        .map(|id| block_range(n, block_size, id))
        .collect()
}

fn block_range(n: usize, block_size: u64, id: u64) -> Range<u64> {
    let total = pattern_count(n) as u64;
    let start = id * block_size;
    start..(start + block_size).min(total)
}

struct BlockResult {
    id: u64,
    scanned: u64,
    best: Result<Option<MinSet>>,
}

/// Rebuilds the running minimum from the indices stored in a checkpoint.
fn restore(kernel: &Kernel, ck: &Checkpoint) -> Result<Option<MinSet>> {
    let Some(&rep) = ck.running_argmin_indices.first() else {
        return Ok(None);
    };
    let (value, poly) = kernel.value(rep)?;
    let stored = ck.running_min.unwrap_or(f64::NAN);
    if (value - stored).abs() > 1e-12 * value.max(1.0) {
        return Err(Error::Validation(format!(
            "checkpoint running_min {stored} does not match the recomputed {value} at index {rep}"
        )));
    }
    Ok(Some(MinSet {
        value,
        poly,
        indices: ck.running_argmin_indices.clone(),
    }))
}

fn snapshot(ck: &mut Checkpoint, completed: &BTreeSet<u64>, best: &Option<MinSet>) {
    ck.completed_block_ids = completed.iter().copied().collect();
    ck.running_min = best.as_ref().map(|b| b.value);
    ck.running_argmin_indices = best.as_ref().map(|b| b.indices.clone()).unwrap_or_default();
    ck.updated = checkpoint::unix_now();
}

/// Exhaustive minimum with progress reporting. Returns
/// [`Error::Interrupted`] (after writing the checkpoint) when `max_blocks`
/// stops the run early.
pub fn exhaustive_min_with_progress(
    config: &SearchConfig,
    mut on_progress: impl FnMut(Progress),
) -> Result<SearchReport> {
    config.validate()?;
    let started = Instant::now();
    let n = config.n;
    let kernel = Kernel::new(n, config.tol);
    let blocks_total = block_count(n, config.block_size);

    let mut ck = match &config.checkpoint {
        Some(path) if path.exists() => {
            let ck = checkpoint_load(path)?;
            ck.check_compatible(n, config.block_size)
                .map_err(|reason| Error::Checkpoint {
                    path: path.clone(),
                    reason,
                })?;
            ck
        }
        _ => Checkpoint::new(n, config.block_size),
    };
    let mut best = restore(&kernel, &ck).map_err(|e| match (&config.checkpoint, e) {
        (Some(path), Error::Validation(reason)) => Error::Checkpoint {
            path: path.clone(),
            reason,
        },
        (_, e) => e,
    })?;
    let mut completed: BTreeSet<u64> = ck.completed_block_ids.iter().copied().collect();
    let mut scanned: u64 = completed
        .iter()
        .map(|&id| {
            block_range(n, config.block_size, id).end - block_range(n, config.block_size, id).start
        })
        .sum();
    let pending: Vec<u64> = (0..blocks_total)
        .filter(|id| !completed.contains(id))
        .collect();

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let mut failure: Option<Error> = None;
    let mut done_this_run = 0u64;
    let mut last_write = Instant::now();

    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<BlockResult>();
        for _ in 0..config.workers.min(pending.len().max(1)) {
            let tx = tx.clone();
            let (kernel, pending, next, stop) = (&kernel, &pending, &next, &stop);
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&id) = pending.get(k) else { break };
                let range = block_range(n, config.block_size, id);
                let result = BlockResult {
                    id,
                    scanned: range.end - range.start,
                    best: scan_range(kernel, range, config.prune),
                };
                if tx.send(result).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        for block in rx {
            if failure.is_some() || config.max_blocks == Some(0) {
                break;
            }
            let merged = block.best.and_then(|b| merge_opt(best.take(), b));
            match merged {
                Ok(m) => best = m,
                Err(e) => {
                    failure = Some(e);
                    stop.store(true, Ordering::Relaxed);
                    continue;
                }
            }
            completed.insert(block.id);
            scanned += block.scanned;
            done_this_run += 1;
            on_progress(Progress {
                blocks_done: completed.len() as u64,
                blocks_total,
                scanned,
            });

            if let Some(path) = &config.checkpoint {
                if last_write.elapsed() >= config.checkpoint_interval {
                    snapshot(&mut ck, &completed, &best);
                    if let Err(e) = checkpoint_save(path, &ck) {
                        failure = Some(e);
                        stop.store(true, Ordering::Relaxed);
                    }
                    last_write = Instant::now();
                }
            }
            if config.max_blocks.is_some_and(|m| done_this_run >= m) {
                stop.store(true, Ordering::Relaxed);
                break;
            }
        }
    });

    if let Some(e) = failure {
        return Err(e);
    }
    if let Some(path) = &config.checkpoint {
        snapshot(&mut ck, &completed, &best);
        checkpoint_save(path, &ck)?;
    }
    let blocks_completed = completed.len() as u64;
    if blocks_completed < blocks_total {
        return Err(Error::Interrupted {
            blocks_completed,
            blocks_total,
        });
    }
    let best = best.expect("a complete scan has a minimum");

    let y0 = LowerUnitMatrix::y0(n)?;
    let y0_index = y0.index() as u64;
    let z0_value = smallest_eigenvalue(&gram(&y0), config.tol)?;
    let attains = best.indices.binary_search(&y0_index).is_ok();
    Ok(SearchReport {
        n,
        total_scanned: scanned,
        c_n_estimate: best.value,
        conjecture_holds: attains && (best.value - z0_value).abs() <= CONJECTURE_TOLERANCE,
        unique_argmin: best.indices == [y0_index],
        argmin_indices: best.indices,
        z0_value,
        elapsed: started.elapsed().as_secs_f64(),
        blocks_completed,
    })
}

pub fn exhaustive_min(config: &SearchConfig) -> Result<SearchReport> {
    exhaustive_min_with_progress(config, |_| {})
}

/// Exhaustive run compared against `λ_min(Y₀Y₀ᵀ)`.
pub fn verify_conjecture(n: usize, workers: usize) -> Result<SearchReport> {
    exhaustive_min(&SearchConfig::new(n).workers(workers))
}

/// Exhaustive run; `unique_argmin` says whether `Y₀` is the only minimizer.
pub fn verify_uniqueness(n: usize, workers: usize) -> Result<SearchReport> {
    exhaustive_min(&SearchConfig::new(n).workers(workers))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_examples() {
        assert_eq!(partition(3, 4), vec![0..4, 4..8]);
        assert_eq!(partition(4, 100), vec![0..64]);
        let p = partition(8, 1 << 20);
        assert_eq!(p.len(), 256);
        assert_eq!(p.last().unwrap().end, 1 << 28);
        assert!(p.windows(2).all(|w| w[0].end == w[1].start));
        assert_eq!(partition(3, 3), vec![0..3, 3..6, 6..8]);
    }

    #[test]
    fn tiny_cases() {
        let r = exhaustive_min(&SearchConfig::new(1)).unwrap();
        assert_eq!(r.c_n_estimate, 1.0);
        assert_eq!(r.argmin_indices, vec![0]);
        assert!(r.conjecture_holds && r.unique_argmin);

        let r = exhaustive_min(&SearchConfig::new(2)).unwrap();
        assert!((r.c_n_estimate - 0.381_966_011_3).abs() < 1e-10);
        assert_eq!(
            r.argmin_indices,
            vec![LowerUnitMatrix::y0(2).unwrap().index() as u64]
        );
        assert_eq!(r.total_scanned, 2);
    }

    #[test]
    fn config_validation() {
        assert!(exhaustive_min(&SearchConfig::new(0)).is_err());
        assert!(exhaustive_min(&SearchConfig::new(10)).is_err());
        assert!(matches!(
            exhaustive_min(&SearchConfig::new(9)),
            Err(Error::Validation(_))
        ));
        assert!(exhaustive_min(&SearchConfig::new(3).workers(0)).is_err());
        assert!(exhaustive_min(&SearchConfig::new(3).block_size(0)).is_err());
    }
}
