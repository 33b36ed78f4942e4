//! Exact minima `ν`, `μ` and `α*` of the diagonal operators over the full
//! joint spectrum.
//!
//! The joint eigenbasis is L²-complete and every [`OperatorKind`] is diagonal on
//! it, so the Rayleigh quotient of any expansion is a convex combination of
//! symbol values and the infimum over `H²(M)` is the smallest symbol. Only
//! finitely many modes need inspection: since `c_i ≥ 0`,
//!
//! ```text
//! q_{A_α}(mode) ≥ q_low(λ) = (n−1)λ² − 2sλ + (1−α)|r|²,
//! ```
//!
//! and once the enumeration cutoff `Λ` lies past the vertex `s/(n−1)` with
//! `q_low(Λ)` no smaller than the running minimum, every mode with `λ > Λ` has a
//! strictly larger symbol. That `(Λ, q_low(Λ))` pair is the [`Certificate`].
//!
//! This uses `|r|²` as a constant. On a non-homogeneous metric the bound would
//! need `max_M |r|²` and the diagonal reduction would fail altogether.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::manifold::{GeometryData, ProductManifold};
use crate::operators::{self, OperatorKind};
use crate::rational::{self, Rational};
use crate::spectrum::{first_nonzero, JointEigenvalue, JointSpectrum};

/// Proof that no mode beyond `cutoff` attains the minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Every mode with total `≤ cutoff` was inspected.
    pub cutoff: Rational,
    /// `q_low(cutoff)`; every mode with total `> cutoff` has symbol `> witness`.
    pub witness: Rational,
    pub modes_examined: usize,
}

impl Certificate {
    pub fn statement(&self) -> String {
        format!(
            "for all total lambda > {}, symbol > {}",
            rational::to_exact(&self.cutoff),
            rational::to_exact(&self.witness)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationalResult {
    pub kind: OperatorKind,
    pub value: Rational,
    /// All modes attaining `value`, in spectrum order.
    pub minimizers: Vec<JointEigenvalue>,
    /// Total multiplicity of the minimizers when `value = 0`, else 0.
    pub kernel_dim: u64,
    pub certificate: Certificate,
}

/// Minimizes an arbitrary per-mode evaluator over the spectrum.
///
/// `eval` must dominate `q_low` for the kind's `α`, or the certificate is void.
pub fn minimize_by<F>(
    m: &ProductManifold,
    kind: &OperatorKind,
    mut eval: F,
) -> Result<VariationalResult>
where
    F: FnMut(&GeometryData, &JointEigenvalue) -> Result<Rational>,
{
    let geom = m.geometry();
    let alpha = kind.alpha_value();
    let vertex = &geom.s / geom.n_minus_one();
    let mut cutoff = core::cmp::max(
        rational::int(4) * &geom.s / geom.n_minus_one(),
        first_nonzero(m),
    );

    let mut stream = JointSpectrum::new(m);
    let mut best: Option<Rational> = None;
    let mut minimizers: Vec<JointEigenvalue> = Vec::new();
    let mut examined = 0usize;
    loop {
        while stream.peek_total().is_some_and(|t| *t <= cutoff) {
            let mode = stream.next().expect("peeked");
            examined += 1;
            let q = eval(&geom, &mode)?;
            match best.as_ref().map(|b| q.cmp(b)) {
                None | Some(core::cmp::Ordering::Less) => {
                    best = Some(q);
                    minimizers.clear();
                    minimizers.push(mode);
                }
                Some(core::cmp::Ordering::Equal) => minimizers.push(mode),
                Some(core::cmp::Ordering::Greater) => {}
            }
        }
        let value = best.as_ref().expect("constant mode is always inspected");
        let witness = operators::symbol_lower_bound(&geom, &alpha, &cutoff);
        if cutoff >= vertex && witness >= *value {
            let value = value.clone();
            let kernel_dim = if value.is_zero() {
                minimizers.iter().map(|j| j.multiplicity).sum()
            } else {
                0
            };
            return Ok(VariationalResult {
                kind: kind.clone(),
                value,
                minimizers,
                kernel_dim,
                certificate: Certificate {
                    cutoff,
                    witness,
                    modes_examined: examined,
                },
            });
        }
        cutoff *= rational::int(2);
    }
}

pub fn minimize_symbol(m: &ProductManifold, kind: &OperatorKind) -> Result<VariationalResult> {
    minimize_by(m, kind, |g, mode| operators::symbol(g, kind, mode))
}

/// `ν = inf ∫φ𝒜φ` over unit-norm `φ`.
pub fn nu(m: &ProductManifold) -> Result<VariationalResult> {
    minimize_symbol(m, &OperatorKind::A)
}

/// `μ = inf ∫φPφ / ∫φ²`.
pub fn mu(m: &ProductManifold) -> Result<VariationalResult> {
    minimize_symbol(m, &OperatorKind::P)
}

/// `α* = ν/|r|²`: the largest `α` with `ker 𝒜_α = 0` for all `α < α*`, and
/// `min q_{A_α*} = 0`. Zero when `ν = 0`; an error on Ricci-flat input.
pub fn alpha_star(m: &ProductManifold) -> Result<Rational> {
    let geom = m.geometry();
    if geom.ricci_norm_sq.is_zero() {
        return Err(Error::RicciFlat);
    }
    Ok(nu(m)?.value / &geom.ricci_norm_sq)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaStarReport {
    pub alpha_star: Rational,
    pub nu: Rational,
    pub ricci_norm_sq: Rational,
    /// Minimum of the `𝒜_{α*}` symbol, recomputed by a fresh enumeration.
    pub at_alpha_star: VariationalResult,
}

pub fn alpha_star_report(m: &ProductManifold) -> Result<AlphaStarReport> {
    let geom = m.geometry();
    let alpha_star = alpha_star(m)?;
    let at_alpha_star = minimize_symbol(m, &OperatorKind::alpha(alpha_star.clone())?)?;
    Ok(AlphaStarReport {
        nu: &alpha_star * &geom.ricci_norm_sq,
        alpha_star,
        ricci_norm_sq: geom.ricci_norm_sq,
        at_alpha_star,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelReport {
    pub nu: Rational,
    pub kernel_dim: u64,
    pub kernel_modes: Vec<JointEigenvalue>,
    /// Laplace eigenvalue shared by all kernel modes, when the kernel is non-trivial.
    pub laplace_eigenvalue: Option<Rational>,
}

/// `ker 𝒜 = ker s′*`. With `s > 0`, tracing `s′*φ = 0` gives
/// `(1 − n)Δφ = sφ`, so every kernel mode must sit at `λ = s/(n−1)`; a mode
/// elsewhere is reported as [`Error::Consistency`].
pub fn kernel_report(m: &ProductManifold) -> Result<KernelReport> {
    let geom = m.geometry();
    let res = nu(m)?;
    if res.value.is_negative() {
        return Err(Error::Consistency(format!(
            "nu = {} is negative",
            rational::to_exact(&res.value)
        )));
    }
    if !res.value.is_zero() {
        return Ok(KernelReport {
            nu: res.value,
            kernel_dim: 0,
            kernel_modes: Vec::new(),
            laplace_eigenvalue: None,
        });
    }
    let expected = if geom.s.is_positive() {
        geom.kernel_eigenvalue()
    } else {
        rational::zero()
    };
    if let Some(bad) = res.minimizers.iter().find(|j| j.total != expected) {
        return Err(Error::Consistency(format!(
            "kernel mode {:?} has lambda = {}, expected s/(n-1) = {}",
            bad.levels,
            rational::to_exact(&bad.total),
            rational::to_exact(&expected)
        )));
    }
    Ok(KernelReport {
        nu: res.value,
        kernel_dim: res.kernel_dim,
        kernel_modes: res.minimizers,
        laplace_eigenvalue: Some(expected),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::SphereFactor;
    use crate::operators::{rayleigh, CoefficientExpansion};
    use crate::rational::{int, ratio};
    use crate::spectrum::enumerate_joint;
    use alloc::vec;

    fn unit(dims: &[u32]) -> ProductManifold {
        ProductManifold::unit_product(dims).unwrap()
    }

    #[test]
    fn sm_sm_nu_is_m() {
        for m in 2..=4u32 {
            let r = nu(&unit(&[m, m])).unwrap();
            assert_eq!(r.value, int(i64::from(m)));
            assert_eq!(r.kernel_dim, 0);
            let levels: Vec<_> = r.minimizers.iter().map(|j| j.levels.clone()).collect();
            assert_eq!(levels, [vec![0, 1], vec![1, 0]]);
            assert!(r.certificate.witness >= r.value);
        }
    }

    #[test]
    fn s2_s3_kernel() {
        let r = nu(&unit(&[2, 3])).unwrap();
        assert_eq!(r.value, int(0));
        assert_eq!(r.minimizers.len(), 1);
        assert_eq!(r.minimizers[0].levels, [1, 0]);
        assert_eq!(r.kernel_dim, 3);
        assert_eq!(mu(&unit(&[2, 3])).unwrap().value, int(-14));
    }

    #[test]
    fn round_sphere_kernel() {
        for n in 2..=6u32 {
            let r = nu(&ProductManifold::sphere(n).unwrap()).unwrap();
            assert_eq!(r.value, int(0));
            assert_eq!(r.kernel_dim, u64::from(n + 1));
        }
    }

    #[test]
    fn flat_torus() {
        let t = unit(&[1, 1]);
        let n = nu(&t).unwrap();
        assert_eq!(n.value, int(0));
        assert_eq!(n.kernel_dim, 1);
        assert!(n.minimizers[0].is_constant());
        assert_eq!(mu(&t).unwrap().value, int(0));
        assert_eq!(alpha_star(&t), Err(Error::RicciFlat));
        let k = kernel_report(&t).unwrap();
        assert_eq!(k.kernel_dim, 1);
    }

    #[test]
    fn remark_upper_bound_for_unequal_dimensions() {
        for (m, k) in [(2i64, 2i64), (2, 3), (3, 2), (2, 1), (4, 1)] {
            let r = nu(&unit(&[m as u32, (m + k) as u32])).unwrap();
            let cap = core::cmp::min((m + k) * (k - 1) * (k - 1), m * (k + 1) * (k + 1));
            assert!(r.value <= int(cap), "m={m} k={k} nu={}", r.value);
        }
    }

    #[test]
    fn alpha_star_examples() {
        assert_eq!(alpha_star(&unit(&[2, 2])).unwrap(), ratio(1, 2));
        assert_eq!(alpha_star(&unit(&[2, 3])).unwrap(), int(0));
        for dims in [&[2u32, 2][..], &[3, 3], &[2, 4], &[2, 3]] {
            let rep = alpha_star_report(&unit(dims)).unwrap();
            assert_eq!(rep.at_alpha_star.value, int(0));
        }
    }

    #[test]
    fn kernel_reports() {
        let k = kernel_report(&unit(&[2, 3])).unwrap();
        assert_eq!(k.laplace_eigenvalue, Some(int(2)));
        let k = kernel_report(&ProductManifold::sphere(4).unwrap()).unwrap();
        assert_eq!(k.laplace_eigenvalue, Some(int(4)));
        let k = kernel_report(&unit(&[2, 2])).unwrap();
        assert_eq!(k.nu, int(2));
        assert!(k.kernel_modes.is_empty());
    }

    #[test]
    fn kernel_at_special_radius() {
        // S²(ρ)×S²(1): the (1,0) symbol is 2(2a − 1)² with a = 1/ρ², null at ρ² = 2.
        let m = ProductManifold::new(vec![
            SphereFactor::new(2, int(2)).unwrap(),
            SphereFactor::unit(2).unwrap(),
        ])
        .unwrap();
        let k = kernel_report(&m).unwrap();
        assert_eq!(k.kernel_dim, 3);
        assert_eq!(k.laplace_eigenvalue, Some(int(1)));
    }

    #[test]
    fn minimum_matches_exhaustive_scan() {
        for dims in [&[2u32, 3][..], &[2, 2], &[3, 4], &[2, 1, 1]] {
            let m = unit(dims);
            let g = m.geometry();
            for kind in [
                OperatorKind::A,
                OperatorKind::P,
                OperatorKind::alpha(ratio(1, 3)).unwrap(),
            ] {
                let r = minimize_symbol(&m, &kind).unwrap();
                let scan = enumerate_joint(&m, &int(200))
                    .map(|j| operators::symbol(&g, &kind, &j).unwrap())
                    .min()
                    .unwrap();
                assert_eq!(r.value, scan);
                for j in &r.minimizers {
                    assert_eq!(operators::symbol(&g, &kind, j).unwrap(), r.value);
                }
            }
        }
    }

    #[test]
    fn scaling_law() {
        for dims in [&[2u32, 2][..], &[2, 4], &[3]] {
            let m = unit(dims);
            let base = nu(&m).unwrap().value;
            for t_sq in [ratio(1, 4), int(1), int(9)] {
                let v = nu(&m.scale(&t_sq).unwrap()).unwrap().value;
                assert_eq!(v * &t_sq * &t_sq, base);
            }
        }
    }

    #[test]
    fn rayleigh_of_mixes_dominates_nu() {
        let m = unit(&[2, 4]);
        let g = m.geometry();
        let nu_val = nu(&m).unwrap().value;
        let modes: Vec<_> = enumerate_joint(&m, &int(30)).collect();
        for (i, w) in modes.windows(3).enumerate() {
            let phi = CoefficientExpansion::new(
                w.iter()
                    .enumerate()
                    .map(|(j, mode)| (mode.clone(), ratio((i + j) as i64 % 5 + 1, 3)))
                    .collect(),
            )
            .unwrap();
            assert!(rayleigh(&g, &OperatorKind::A, &phi).unwrap() >= nu_val);
        }
    }
}
