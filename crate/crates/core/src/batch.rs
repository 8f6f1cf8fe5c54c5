//! Batch drivers over independent relations.
//!
//! Every routine in the crate is pure, so batches parallelize trivially. With
//! the `parallel` feature (on by default) [`map`] runs on the rayon pool;
//! without it, or through [`map_seq`], items are processed in order on the
//! calling thread. Both paths return results in input order.

use crate::decompose::{decompose, DecompositionMode, DecompositionResult};
use crate::error::Result;
use crate::linalg::C64;
use crate::relation::{ClassificationReport, Relation, SpectralPointClass};
use crate::subspace::ToleranceConfig;

pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_par(items, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_seq(items, f)
}

pub fn classify_batch(relations: &[Relation], cfg: &ToleranceConfig) -> Vec<ClassificationReport> {
    map(relations, |t| t.classify(cfg))
}

pub fn decompose_batch(
    relations: &[Relation],
    mode: DecompositionMode,
    cfg: &ToleranceConfig,
) -> Vec<Result<DecompositionResult>> {
    map(relations, |t| decompose(t, mode, cfg))
}

/// `classify_point` over a grid of spectral parameters.
pub fn spectral_sweep(
    t: &Relation,
    points: &[C64],
    cfg: &ToleranceConfig,
) -> Vec<SpectralPointClass> {
    map(points, |&z| t.classify_point(z, cfg))
}
