//! The `ihm` command line: exhaustive verification runs, the extremal
//! matrices, the bounds table and the GCD-matrix checks.

mod config;
mod report;

use std::io::Write;
use std::time::{Duration, Instant};

use ihm_core::bounds::{bounds_row, hong_loewy_check, smith_determinant_check};
use ihm_core::extremal::{
    fibonacci_attained, sign_pattern_check, trace_equality_check, y0_dense, y0_inverse_closed,
    z0_dense, z0_inverse_closed, z0_smallest_eigenvalue,
};
use ihm_core::search::{
    exhaustive_min, exhaustive_min_with_progress, Progress, SearchConfig, SearchReport,
};
use ihm_core::Error;

pub use config::{
    Cli, Command, Common, Format, RunConfig, SearchArgs, CLOSED_FORM_MAX_N, EXHAUSTIVE_MAX_N,
};
pub use report::{BoundsReport, ExtremalReport, GcdReport, SmithReport};

pub const EXIT_OK: u8 = 0;
/// The checked statement came out false.
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CHECKPOINT: u8 = 3;
/// `--max-blocks` stopped the scan; the checkpoint holds the progress.
pub const EXIT_INTERRUPTED: u8 = 4;
pub const EXIT_FAILURE: u8 = 5;

/// Trace equality costs `n` big-integer matrix products; it is skipped above this size.
pub const TRACE_CHECK_MAX_N: usize = 30;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Checkpoint { .. } => EXIT_CHECKPOINT,
        Error::Interrupted { .. } => EXIT_INTERRUPTED,
        Error::Dimension { .. }
        | Error::Validation(_)
        | Error::Domain(_)
        | Error::IndexOutOfRange { .. }
        | Error::InvalidPattern { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

pub fn run(cli: Cli) -> u8 {
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    match execute(&config) {
        Ok(code) => code,
        Err(e) => {
            if let Error::Interrupted {
                blocks_completed,
                blocks_total,
            } = e
            {
                eprintln!("stopped after {blocks_completed} of {blocks_total} blocks; rerun with the same --checkpoint to continue");
            } else {
                eprintln!("error: {e}");
            }
            exit_code(&e)
        }
    }
}

fn execute(config: &RunConfig) -> Result<u8, Error> {
    match &config.command {
        Command::Verify(args) => {
            let r = search(config, args)?;
            emit(config, &r)?;
            Ok(if r.conjecture_holds {
                EXIT_OK
            } else {
                EXIT_FALSE
            })
        }
        Command::Uniqueness(args) => {
            let r = search(config, args)?;
            emit(config, &r)?;
            Ok(if r.unique_argmin { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Extremal { n } => {
            let r = extremal(*n, config.tol)?;
            emit(config, &r)?;
            Ok(if r.all_checks_pass() {
                EXIT_OK
            } else {
                EXIT_FALSE
            })
        }
        Command::Bounds { n_max } => {
            let r = bounds(config, *n_max)?;
            emit(config, &r)?;
            Ok(if r.rows.iter().all(|row| row.holds == Some(true)) {
                EXIT_OK
            } else {
                EXIT_FALSE
            })
        }
        Command::GcdCheck { set, eps } => {
            let r = gcd_check(config, set, *eps)?;
            emit(config, &r)?;
            let smith_ok = r.smith.as_ref().is_none_or(|s| s.equal);
            let hong_loewy_ok = r.hong_loewy.holds || !r.c_n_exhaustive;
            Ok(if smith_ok && hong_loewy_ok {
                EXIT_OK
            } else {
                EXIT_FALSE
            })
        }
    }
}

fn search_config(config: &RunConfig, n: usize) -> SearchConfig {
    let mut sc = SearchConfig::new(n)
        .workers(config.workers)
        .block_size(config.block_size);
    sc.tol = config.tol;
    sc.checkpoint = config.checkpoint.clone();
    sc
}

fn search(config: &RunConfig, args: &SearchArgs) -> Result<SearchReport, Error> {
    let mut sc = search_config(config, args.n);
    sc.prune = args.prune;
    sc.max_blocks = args.max_blocks;
    let started = Instant::now();
    let mut last: Option<Instant> = None;
    exhaustive_min_with_progress(&sc, |p: Progress| {
        let due = last.is_none_or(|t| t.elapsed() >= Duration::from_secs(1));
        if due || p.blocks_done == p.blocks_total {
            eprintln!(
                "progress: {}/{} blocks, {} matrices, {:.1}s",
                p.blocks_done,
                p.blocks_total,
                p.scanned,
                started.elapsed().as_secs_f64()
            );
            last = Some(Instant::now());
        }
    })
}

pub fn extremal(n: usize, tol: f64) -> Result<ExtremalReport, Error> {
    let (y0, z0) = (y0_dense(n)?, z0_dense(n)?);
    let (y0_inv, z0_inv) = (y0_inverse_closed(n)?, z0_inverse_closed(n)?);
    let closed_forms_exact = y0_inv.matmul(&y0).is_identity() && z0_inv.matmul(&z0).is_identity();
    let trace_equality = if n <= TRACE_CHECK_MAX_N {
        Some(trace_equality_check(n)?)
    } else {
        None
    };
    Ok(ExtremalReport {
        n,
        lambda_min: z0_smallest_eigenvalue(n, tol)?,
        closed_forms_exact,
        sign_pattern: sign_pattern_check(&z0_inv),
        trace_equality,
        fibonacci_attained: fibonacci_attained(n)?,
        y0: y0.to_decimal_rows(),
        y0_inverse: y0_inv.to_decimal_rows(),
        z0: z0.to_decimal_rows(),
        z0_inverse: z0_inv.to_decimal_rows(),
    })
}

/// `c_n` by exhaustive scan for `n ≤ EXHAUSTIVE_MAX_N`, otherwise `λ_min(Z₀)`;
/// the flag says which.
fn c_n(config: &RunConfig, n: usize) -> Result<(f64, bool), Error> {
    if n <= EXHAUSTIVE_MAX_N {
        let mut sc = search_config(config, n);
        sc.checkpoint = None;
        Ok((exhaustive_min(&sc)?.c_n_estimate, true))
    } else {
        Ok((z0_smallest_eigenvalue(n, config.tol)?, false))
    }
}

fn bounds(config: &RunConfig, n_max: usize) -> Result<BoundsReport, Error> {
    let rows = (2..=n_max)
        .map(|n| {
            eprintln!("progress: bounds row {n}/{n_max}");
            bounds_row(n, Some(c_n(config, n)?.0))
        })
        .collect::<Result<_, _>>()?;
    Ok(BoundsReport {
        exhaustive_max_n: EXHAUSTIVE_MAX_N,
        rows,
    })
}

fn gcd_check(config: &RunConfig, set: &[u64], eps: f64) -> Result<GcdReport, Error> {
    // Validate the set before paying for a scan.
    ihm_core::bounds::power_gcd_matrix(set, eps)?;
    let (c_n, c_n_exhaustive) = c_n(config, set.len())?;
    let hong_loewy = hong_loewy_check(set, eps, c_n)?;
    let (smith, smith_skipped) = match smith_determinant_check(set) {
        Ok(s) => (Some(SmithReport::from(s)), None),
        Err(Error::Validation(reason)) => (None, Some(reason)),
        Err(e) => return Err(e),
    };
    Ok(GcdReport {
        set: set.to_vec(),
        eps,
        c_n,
        c_n_exhaustive,
        hong_loewy,
        smith,
        smith_skipped,
    })
}

fn emit<R: report::Render>(config: &RunConfig, r: &R) -> Result<(), Error> {
    let text = match config.format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(r).map_err(|e| Error::Validation(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => r.csv().map_err(|e| Error::Validation(e.to_string()))?,
        Format::Text => r.text(),
    };
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
