//! Indexed map that fans out across a rayon pool when the `parallel`
//! feature is enabled and degrades to a plain sequential loop otherwise.
//! Results come back in index order either way, so callers see identical
//! output from both builds.

#[cfg(feature = "parallel")]
pub(crate) fn par_map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).map(f).collect()
}
