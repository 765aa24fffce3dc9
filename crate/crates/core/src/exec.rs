//! Sequential or data-parallel execution of chunked work.
//!
//! Every parallel loop in the crate goes through [`map_chunks`], which
//! returns per-chunk results in chunk order. Callers merge those results
//! associatively, so output does not depend on the thread count. With the
//! `parallel` feature disabled everything runs on the calling thread.

/// How chunked loops are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Runs `f` over `0..chunks` and returns the results in index order.
pub fn map_chunks<T, F>(exec: Execution, chunks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..chunks).into_par_iter().map(f).collect()
        }
        _ => (0..chunks).map(f).collect(),
    }
}

/// Number of worker threads `Execution::Parallel` will use.
pub fn available_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let out = map_chunks(exec, 100, |i| i * i);
            assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
        }
    }
}
