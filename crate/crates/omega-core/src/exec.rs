//! Execution helpers for the data-parallel inner loops (contour sample
//! grids, battery-times-grid residual sweeps). With the `parallel` feature
//! (on by default) the indexed map runs on the rayon pool; without it the
//! same code path degrades to a plain sequential loop. Reductions stay in
//! fixed index order either way, so results are identical bit for bit.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, parallel when compiled with the `parallel` feature.
pub fn map_indexed<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential reference path, always available; the criterion bench suite
/// compares it against [`map_indexed`].
pub fn map_indexed_seq<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Dispatches on a runtime flag so that public `*_seq` API variants share
/// one implementation with their default counterparts.
pub fn map_indexed_with<U: Send>(
    parallel: bool,
    n: usize,
    f: impl Fn(usize) -> U + Sync + Send,
) -> Vec<U> {
    if parallel {
        map_indexed(n, f)
    } else {
        map_indexed_seq(n, f)
    }
}
