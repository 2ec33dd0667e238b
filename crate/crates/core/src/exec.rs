//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) the helpers fan out over rayon;
//! without it, or with [`Execution::Sequential`], they run inline. Every
//! helper returns results in index order, so callers reduce
//! deterministically and both modes produce identical output.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

/// `(0..n).map(f).collect()`, possibly in parallel; output is in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Like [`map_indexed`] over a slice.
pub fn map_slice<'a, A, T, F>(exec: Execution, items: &'a [A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&'a A) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Smallest index in `0..n` for which `f` returns `Some`, with its value.
pub fn find_first<T, F>(exec: Execution, n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .find_map_first(|i| f(i).map(|v| (i, v)))
        }
        _ => (0..n).find_map(|i| f(i).map(|v| (i, v))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(map_indexed(exec, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(map_slice(exec, &[3, 1, 2], |x| x + 1), vec![4, 2, 3]);
            assert_eq!(
                find_first(exec, 100, |i| (i % 7 == 6).then_some(i * 2)),
                Some((6, 12))
            );
            assert_eq!(find_first(exec, 5, |_| None::<()>), None);
        }
    }
}
