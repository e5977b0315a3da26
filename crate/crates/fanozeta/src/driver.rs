//! Multi-threaded counting. Work is split into fixed index ranges of P^2 and the
//! per-range tallies are summed in range order, so the result does not depend on
//! the number of threads or on scheduling.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use fanozeta_core::counting::DEFAULT_CHUNK;
use fanozeta_core::projective::chunks;
use fanozeta_core::{CountError, CountKernel, CountRow, FieldDesc, LineFrame, Tally};
use rayon::prelude::*;

use crate::error::AppError;

pub type Progress<'a> = &'a (dyn Fn(u32, u64, u64) + Sync);

#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    /// `None` uses rayon's default pool
    pub threads: Option<usize>,
    pub chunk: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { threads: None, chunk: DEFAULT_CHUNK }
    }
}

pub fn count_tally(
    kernel: &CountKernel,
    opts: &CountOptions,
    progress: impl Fn(u64, u64) + Sync,
) -> Result<Tally, CountError> {
    let total = kernel.total_points();
    let ranges: Vec<_> = chunks(total, opts.chunk).collect();
    let done = AtomicU64::new(0);
    let work = || {
        ranges
            .par_iter()
            .map(|r| {
                let t = kernel.count_range(r.clone());
                let d = done.fetch_add(r.end - r.start, Ordering::Relaxed) + (r.end - r.start);
                progress(d, total);
                t
            })
            .collect::<Vec<_>>()
    };
    let parts = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().expect("thread pool").install(work),
        None => work(),
    };
    let mut tally = Tally::default();
    for p in parts {
        tally += p?;
    }
    Ok(tally)
}

/// `D_r` over the degree r extension of `base`, with wall-clock time.
pub fn count_row(
    base: &FieldDesc,
    frame: &LineFrame,
    r: u32,
    opts: &CountOptions,
    progress: Option<Progress<'_>>,
) -> Result<CountRow, AppError> {
    let start = Instant::now();
    let kernel = CountKernel::for_degree(base, frame, r)?;
    let tally = count_tally(&kernel, opts, |d, t| {
        if let Some(p) = progress {
            p(r, d, t)
        }
    })?;
    let mut row = CountRow::from_tally(r, tally);
    row.millis = Some(start.elapsed().as_millis() as u64);
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fanozeta_core::presets::example_cubic;
    use fanozeta_core::{count_difference, normalize, Line};

    #[test]
    fn parallel_matches_serial() {
        let base = FieldDesc::new(5, 1).unwrap();
        let frame = normalize(&base, &example_cubic(&base), &Line::standard()).unwrap();
        for r in 1..=3 {
            let serial = count_difference(&base, &frame, r).unwrap();
            for threads in [1, 3] {
                let opts = CountOptions { threads: Some(threads), chunk: 97 };
                let mut row = count_row(&base, &frame, r, &opts, None).unwrap();
                row.millis = None;
                assert_eq!(row, serial);
            }
        }
    }
}
