//! Data-parallel wrappers around the core map evaluation. Every centre is
//! evaluated independently and collected in centre order, so the result does
//! not depend on the number of worker threads.

use anrecip_core::correlation::{CorrelationMap, CorrelationMode, MapBuilder};
use anrecip_core::footprint::FootprintShape;
use anrecip_core::{Pattern, Result};
use rayon::prelude::*;

pub fn correlation_map(
    hj: &Pattern,
    hk: &Pattern,
    sigma_rel: f64,
    xpd_db: f64,
    mode: CorrelationMode,
    shape: FootprintShape,
) -> Result<CorrelationMap> {
    let b = MapBuilder::new(hj, hk, sigma_rel, xpd_db, mode)?.with_shape(shape);
    let values = (0..b.len())
        .into_par_iter()
        .map(|i| b.center(i))
        .collect::<Result<Vec<_>>>()?;
    b.finish(values)
}

/// Builds a dedicated pool; `None` keeps rayon's default size.
pub fn pool(workers: Option<usize>) -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        anyhow::ensure!(n > 0, "worker count must be positive");
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}
