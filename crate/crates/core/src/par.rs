//! Task execution with an optional rayon backend.
//!
//! Callers split work into indexed tasks and receive results in index order,
//! so any merge they perform sees the same sequence whatever the worker
//! count. Without the `parallel` feature every task runs on the caller's
//! thread.

/// Runs `f(i)` for `i in 0..tasks` on up to `workers` threads and returns
/// the results in index order.
pub fn run_indexed<T, F>(tasks: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if workers <= 1 || tasks <= 1 {
        return (0..tasks).map(f).collect();
    }
    backend::run(tasks, workers, f)
}

/// Whether tasks may actually run concurrently in this build.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
mod backend {
    use rayon::prelude::*;

    pub fn run<T, F>(tasks: usize, workers: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(|| (0..tasks).into_par_iter().map(&f).collect()),
            Err(_) => (0..tasks).map(f).collect(),
        }
    }
}

#[cfg(not(feature = "parallel"))]
mod backend {
    pub fn run<T, F>(tasks: usize, _workers: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..tasks).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_workers() {
        let one = run_indexed(37, 1, |i| i * i);
        let many = run_indexed(37, 8, |i| i * i);
        assert_eq!(one, many);
        assert_eq!(one[6], 36);
        assert!(run_indexed(0, 4, |i| i).is_empty());
    }
}
