//! Thin switch between rayon and sequential iteration so the crate also
//! builds for targets without threads.

use crate::error::Result;

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Applies `f` to every element in place. On failure the error of the
/// lowest failing index is returned, whatever the scheduling.
#[cfg(feature = "parallel")]
pub(crate) fn try_update<T, F>(items: &mut [T], f: F) -> Result<()>
where
    T: Send + Clone,
    F: Fn(&mut T) -> Result<()> + Sync + Send,
{
    use rayon::prelude::*;
    let failed = items.par_iter_mut().map(|x| f(x).is_err()).reduce(|| false, |a, b| a || b);
    if failed {
        // Rerun sequentially on copies to report the first error deterministically.
        for x in items.iter() {
            f(&mut x.clone())?;
        }
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_update<T, F>(items: &mut [T], f: F) -> Result<()>
where
    F: Fn(&mut T) -> Result<()>,
{
    items.iter_mut().try_for_each(f)
}

/// Indices in `0..n` satisfying `pred`, in increasing order.
#[cfg(feature = "parallel")]
pub(crate) fn filter_range<F>(n: usize, pred: F) -> Vec<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().filter(|&i| pred(i)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn filter_range<F>(n: usize, pred: F) -> Vec<usize>
where
    F: Fn(usize) -> bool,
{
    (0..n).filter(|&i| pred(i)).collect()
}
