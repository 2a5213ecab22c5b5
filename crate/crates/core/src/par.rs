//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) the hot loops run on the rayon pool;
//! without it every helper degrades to the plain sequential iterator. Callers
//! can also force a strategy explicitly, which is how the benches compare the
//! two paths inside one binary.

/// How a data-parallel loop should execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Pick parallel execution when the work item count is large enough.
    #[default]
    Auto,
    Sequential,
    Parallel,
}

/// Work size (in scalar operations) below which `Auto` stays sequential.
pub const PAR_THRESHOLD: usize = 1 << 15;

impl Strategy {
    pub fn use_parallel(self, work: usize) -> bool {
        if !cfg!(feature = "parallel") {
            return false;
        }
        match self {
            Strategy::Auto => work >= PAR_THRESHOLD,
            Strategy::Sequential => false,
            Strategy::Parallel => true,
        }
    }
}

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(strategy: Strategy, work: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if strategy.use_parallel(work) {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = (strategy, work);
    items.iter().map(f).collect()
}

/// Map `f` over `0..n`, preserving order.
pub fn map_range<R, F>(strategy: Strategy, work: usize, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if strategy.use_parallel(work) {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = (strategy, work);
    (0..n).map(f).collect()
}

/// Apply `f` to each fixed-width row of `data`.
pub fn for_each_row<F>(strategy: Strategy, data: &mut [u32], width: usize, f: F)
where
    F: Fn(usize, &mut [u32]) + Sync + Send,
{
    if width == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    {
        if strategy.use_parallel(data.len()) {
            use rayon::prelude::*;
            data.par_chunks_mut(width).enumerate().for_each(|(r, row)| f(r, row));
            return;
        }
    }
    let _ = strategy;
    data.chunks_mut(width).enumerate().for_each(|(r, row)| f(r, row));
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
