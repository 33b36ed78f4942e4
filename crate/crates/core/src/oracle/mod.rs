//! Independent numerical checks of the exact spectral formulas: harmonic
//! polynomial eigenfunctions on the ambient embedding, geodesic finite
//! differences and tensor-product quadrature.

pub mod checks;
pub mod eigenfunction;
pub mod fd;
pub mod geometry;
pub mod harmonic;
pub mod quadrature;

use alloc::vec::Vec;

pub use checks::{
    check_apply_a, convergence_orders, oracle_apply_a, verify_bochner, verify_lstar_identity,
    ApplyReport, ConvergenceReport, IdentityReport, OracleSettings, TermCheck,
};
pub use eigenfunction::{ScalarField, SeparatedEigenfunction};
pub use fd::{Fd, FdStep};
pub use geometry::{geodesic, Embedding, Frame, ProductPoint, TangentVector};
pub use quadrature::{NodeCounts, QuadratureRule};

/// Evaluates `f(0..count)` and returns the results in index order. Callers
/// may parallelize; the output order is fixed, so downstream sums are
/// reproducible.
pub trait NodeMap {
    fn map_nodes<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl NodeMap for Sequential {
    fn map_nodes<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(f).collect()
    }
}

/// Pairwise (cascade) summation; the association order depends only on the
/// length, never on how the terms were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
