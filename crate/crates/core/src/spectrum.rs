//! Exact joint Laplace spectrum of a product of round spheres.
//!
//! The spectrum of `S^m(ρ)` is `k(k + m − 1)/ρ²`, `k ≥ 0`, with the space of
//! degree-`k` spherical harmonics as eigenspace. For a circle the same formula
//! gives `k²/ρ²`, with multiplicity 2 for `k ≥ 1`. On a product, eigenfunctions
//! separate and the eigenvalues add.
//!
//! [`JointSpectrum`] walks the level lattice lazily with a priority queue, so
//! modes come out in non-decreasing total order without a cutoff; ties are
//! broken by lexicographic level vector.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::manifold::{ProductManifold, SphereFactor};
use crate::rational::{self, Rational};

/// Level `k` of a single factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorMode {
    pub level: u32,
    pub eigenvalue: Rational,
    pub multiplicity: u64,
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Dimension of degree-`k` spherical harmonics on `S^m`:
/// `C(k+m, m) − C(k+m−2, m)`, the second term absent for `k < 2`.
pub fn harmonic_dimension(m: u32, k: u32) -> u64 {
    let (m, k) = (u64::from(m), u64::from(k));
    let all = binomial(k + m, m);
    let lower = if k >= 2 { binomial(k + m - 2, m) } else { 0 };
    u64::try_from(all - lower).expect("harmonic dimension overflows u64")
}

pub fn factor_eigenvalue(f: &SphereFactor, k: u32) -> Rational {
    let k = i64::from(k);
    rational::int(k * (k + i64::from(f.dim()) - 1)) / f.radius_sq()
}

pub fn factor_mode(f: &SphereFactor, k: u32) -> FactorMode {
    FactorMode {
        level: k,
        eigenvalue: factor_eigenvalue(f, k),
        multiplicity: harmonic_dimension(f.dim(), k),
    }
}

/// One joint eigenvalue `λ = Σ λ^(i)` of the product Laplacian.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JointEigenvalue {
    pub levels: Vec<u32>,
    pub components: Vec<Rational>,
    pub total: Rational,
    pub multiplicity: u64,
}

impl JointEigenvalue {
    pub fn from_levels(m: &ProductManifold, levels: &[u32]) -> Self {
        assert_eq!(levels.len(), m.factor_count(), "level vector length");
        let modes: Vec<FactorMode> = m
            .factors()
            .iter()
            .zip(levels)
            .map(|(f, &k)| factor_mode(f, k))
            .collect();
        Self::from_factor_modes(&modes)
    }

    fn from_factor_modes(modes: &[FactorMode]) -> Self {
        let components: Vec<Rational> = modes.iter().map(|m| m.eigenvalue.clone()).collect();
        let total = components.iter().fold(rational::zero(), |acc, c| acc + c);
        Self {
            levels: modes.iter().map(|m| m.level).collect(),
            components,
            total,
            multiplicity: modes.iter().map(|m| m.multiplicity).product(),
        }
    }

    /// The constant mode, all levels zero.
    pub fn constant(m: &ProductManifold) -> Self {
        Self::from_levels(m, &vec![0; m.factor_count()])
    }

    pub fn is_constant(&self) -> bool {
        self.levels.iter().all(|&k| k == 0)
    }
}

#[derive(PartialEq, Eq)]
struct Key {
    total: Rational,
    levels: Vec<u32>,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total
            .cmp(&other.total)
            .then_with(|| self.levels.cmp(&other.levels))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Unbounded iterator over the joint spectrum in `(total, levels)` order.
///
/// Each level vector `v ≠ 0` has exactly one parent, `v` with its last nonzero
/// level decremented, so pushing `v + e_i` for `i ≥ last_nonzero(v)` visits
/// every vector once. Children have strictly larger totals, which makes the
/// heap order a valid traversal order.
pub struct JointSpectrum {
    factors: Vec<SphereFactor>,
    cache: Vec<Vec<FactorMode>>,
    heap: BinaryHeap<Reverse<Key>>,
}

impl JointSpectrum {
    pub fn new(m: &ProductManifold) -> Self {
        let factors = m.factors().to_vec();
        let cache = factors.iter().map(|f| vec![factor_mode(f, 0)]).collect();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse(Key {
            total: rational::zero(),
            levels: vec![0; factors.len()],
        }));
        Self {
            factors,
            cache,
            heap,
        }
    }

    fn mode(&mut self, factor: usize, level: u32) -> &FactorMode {
        let cache = &mut self.cache[factor];
        while cache.len() <= level as usize {
            let next = factor_mode(&self.factors[factor], cache.len() as u32);
            cache.push(next);
        }
        &cache[level as usize]
    }

    /// Next total that would be yielded, without consuming it.
    pub fn peek_total(&self) -> Option<&Rational> {
        self.heap.peek().map(|Reverse(k)| &k.total)
    }
}

impl Iterator for JointSpectrum {
    type Item = JointEigenvalue;

    fn next(&mut self) -> Option<JointEigenvalue> {
        let Reverse(key) = self.heap.pop()?;
        let start = key.levels.iter().rposition(|&k| k != 0).unwrap_or(0);
        for i in start..key.levels.len() {
            let mut child = key.levels.clone();
            child[i] += 1;
            let upper = self.mode(i, child[i]).eigenvalue.clone();
            let delta = upper - &self.mode(i, key.levels[i]).eigenvalue;
            self.heap.push(Reverse(Key {
                total: &key.total + delta,
                levels: child,
            }));
        }
        let modes: Vec<FactorMode> = key
            .levels
            .iter()
            .enumerate()
            .map(|(i, &k)| self.mode(i, k).clone())
            .collect();
        Some(JointEigenvalue::from_factor_modes(&modes))
    }
}

/// Every joint eigenvalue with `total ≤ cutoff`, sorted by total.
pub fn enumerate_joint(
    m: &ProductManifold,
    cutoff: &Rational,
) -> impl Iterator<Item = JointEigenvalue> {
    let cutoff = cutoff.clone();
    JointSpectrum::new(m).take_while(move |j| j.total <= cutoff)
}

/// Smallest nonzero total, `λ₁(M)`.
pub fn first_nonzero(m: &ProductManifold) -> Rational {
    m.factors()
        .iter()
        .map(|f| factor_eigenvalue(f, 1))
        .min()
        .expect("non-empty product")
}
