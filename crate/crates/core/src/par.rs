//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! the rayon pool; without it every helper runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Short-circuiting existential over `items`; errors win over `false`.
#[cfg(feature = "parallel")]
pub(crate) fn try_any<T, F>(items: &[T], f: F) -> crate::Result<bool>
where
    T: Sync,
    F: Fn(&T) -> crate::Result<bool> + Sync + Send,
{
    let found = items
        .par_iter()
        .map(|item| f(item))
        .find_any(|r| !matches!(r, Ok(false)));
    match found {
        Some(Ok(_)) => Ok(true),
        Some(Err(e)) => Err(e),
        None => Ok(false),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn try_any<T, F>(items: &[T], f: F) -> crate::Result<bool>
where
    F: Fn(&T) -> crate::Result<bool>,
{
    for item in items {
        if f(item)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub(crate) fn try_map<T, R, F>(items: &[T], f: F) -> crate::Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> crate::Result<R> + Sync + Send,
{
    map(items, f).into_iter().collect()
}
