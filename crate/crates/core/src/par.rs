//! Order-preserving map over an index range, parallel when the `parallel`
//! feature is on and more than one job is requested.

/// Evaluates `f(0), …, f(len - 1)` and returns the results in index order.
/// `jobs = Some(1)` forces the sequential path; `None` uses every core.
pub fn map_indexed<T, F>(len: usize, jobs: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match jobs {
            Some(1) => {}
            None => return (0..len).into_par_iter().map(f).collect(),
            Some(k) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .expect("thread pool");
                return pool.install(|| (0..len).into_par_iter().map(&f).collect());
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    (0..len).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        for jobs in [None, Some(1), Some(3)] {
            let v = map_indexed(1000, jobs, |i| i * i);
            assert_eq!(v, (0..1000).map(|i| i * i).collect::<Vec<_>>());
        }
    }
}
