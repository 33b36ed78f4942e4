//! Closed-form eigenvalue bounds, checked against the exact spectrum.
//!
//! Every bound is conditional. A report either evaluates the inequality
//! (`Satisfied` / `Violated`) or records which hypothesis failed
//! (`HypothesisNotMet`); nothing is skipped silently. Square-root hypotheses
//! such as `k ≤ 2s(1 − √(1 − 1/n))` are decided exactly by squaring, bound
//! values themselves are `f64`.
//!
//! Upper bounds report `slack = bound − observed`, lower bounds
//! `slack = observed − bound`; a verdict is `Violated` only when the
//! hypotheses hold and `slack < −tol·max(1, |bound|)` with `tol = 1e-12`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Signed;

use crate::error::Result;
use crate::manifold::{GeometryData, ProductManifold};
use crate::rational::{self, Rational};
use crate::spectrum::{first_nonzero, JointEigenvalue};
use crate::variational;

pub const RELATIVE_TOLERANCE: f64 = 1e-12;
/// Discriminants within this window (relative to `s²`) of zero are clamped to 0.
pub const DISCRIMINANT_WINDOW: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundName {
    /// `λ₁ ≤ (2s − k + √(k² − 4ks + 4s²/n)) / (2(n−1))` under the
    /// `𝒜`-superharmonic condition and `0 < k ≤ 2(1 − √(1−1/n))s`.
    Superharmonic,
    /// The `k = 0` case, `λ₁ ≤ s/(n−1)·(1 + 1/√n)`, for `r ≥ 0`.
    SuperharmonicRicciNonnegative,
    /// `λ₁ ≤ (2s − k + √(k² − 4ks + 4s²/n + 4(n−1)ν)) / (2(n−1))` for `ν > s²/n`.
    NuEigenLarge,
    /// Same formula for `0 < ν ≤ s²/n` and `k ≤ 2s(1 − √(1 − 1/n − (n−1)ν/s²))`.
    NuEigenSmall,
    /// `λ₁ ≤ (s + √(s²/n + (n−1)ν)) / (n−1)` for positive Ricci curvature.
    NuEigenPositiveRicci,
    /// `λ₁ ≥ n k/(n−1)` for `r ≥ k > 0`.
    Lichnerowicz,
    /// `(n−1)λ₁ ≥ 2s + |r|` implies `ν ≥ s²/n`.
    GapThreshold,
}

impl BoundName {
    pub fn id(self) -> &'static str {
        match self {
            Self::Superharmonic => "superharmonic",
            Self::SuperharmonicRicciNonnegative => "superharmonic_ricci_nonnegative",
            Self::NuEigenLarge => "nu_eigen_large_nu",
            Self::NuEigenSmall => "nu_eigen_small_nu",
            Self::NuEigenPositiveRicci => "nu_eigen_positive_ricci",
            Self::Lichnerowicz => "lichnerowicz_lower",
            Self::GapThreshold => "gap_threshold",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Self::Lichnerowicz | Self::GapThreshold => Direction::Lower,
            _ => Direction::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
    HypothesisNotMet,
}

impl Verdict {
    pub fn id(self) -> &'static str {
        match self {
            Self::Satisfied => "satisfied",
            Self::Violated => "violated",
            Self::HypothesisNotMet => "hypothesis_not_met",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: BoundName,
    pub hypothesis_ok: bool,
    pub reason: String,
    pub bound_value: Option<f64>,
    /// `λ₁` for eigenvalue bounds, `ν` for the gap threshold.
    pub observed: f64,
    pub verdict: Verdict,
    pub slack: Option<f64>,
}

fn clamp_discriminant(d: f64, s: f64) -> Option<f64> {
    let window = DISCRIMINANT_WINDOW * (s * s).max(1.0);
    if d.abs() <= window {
        Some(0.0)
    } else if d > 0.0 {
        Some(d)
    } else {
        None
    }
}

/// `(2s − k + √(k² − 4ks + 4s²/n)) / (2(n−1))`; `None` when the discriminant
/// is negative beyond [`DISCRIMINANT_WINDOW`].
pub fn superharmonic_bound(n: u32, s: f64, k: f64) -> Option<f64> {
    let nf = f64::from(n);
    let d = clamp_discriminant(k * k - 4.0 * k * s + 4.0 * s * s / nf, s)?;
    Some((2.0 * s - k + d.sqrt()) / (2.0 * (nf - 1.0)))
}

/// `2(1 − √(1 − 1/n))s`, the largest admissible `k`.
pub fn superharmonic_k_max(n: u32, s: f64) -> f64 {
    let nf = f64::from(n);
    2.0 * (1.0 - (1.0 - 1.0 / nf).sqrt()) * s
}

/// `s/(n−1)·(1 + 1/√n)`.
pub fn superharmonic_bound_k0(n: u32, s: f64) -> f64 {
    let nf = f64::from(n);
    s / (nf - 1.0) * (1.0 + 1.0 / nf.sqrt())
}

/// Which hypothesis branch of the `ν`-dependent bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuBranch {
    /// `ν > s²/n`.
    Large,
    /// `0 < ν ≤ s²/n`.
    Small,
}

/// `(2s − k + √(k² − 4ks + 4s²/n + 4(n−1)ν)) / (2(n−1))`.
pub fn nu_eigen_bound(n: u32, s: f64, k: f64, nu: f64) -> Option<f64> {
    let nf = f64::from(n);
    let d = clamp_discriminant(
        k * k - 4.0 * k * s + 4.0 * s * s / nf + 4.0 * (nf - 1.0) * nu,
        s,
    )?;
    Some((2.0 * s - k + d.sqrt()) / (2.0 * (nf - 1.0)))
}

pub fn nu_branch(geom: &GeometryData, nu: &Rational) -> Option<NuBranch> {
    if !nu.is_positive() {
        None
    } else if *nu > geom.s_sq_over_n() {
        Some(NuBranch::Large)
    } else {
        Some(NuBranch::Small)
    }
}

/// `(s + √(s²/n + (n−1)ν)) / (n−1)`, the `k = 0` form of [`nu_eigen_bound`].
pub fn nu_eigen_bound_k0(n: u32, s: f64, nu: f64) -> f64 {
    let nf = f64::from(n);
    (s + (s * s / nf + (nf - 1.0) * nu).sqrt()) / (nf - 1.0)
}

pub fn lichnerowicz_lower(n: u32, k: f64) -> f64 {
    let nf = f64::from(n);
    nf / (nf - 1.0) * k
}

pub fn lichnerowicz_lower_exact(n: u32, k: &Rational) -> Rational {
    rational::int(i64::from(n)) / rational::int(i64::from(n) - 1) * k
}

/// Exact `k ≤ 2s(1 − √x)` for `s > 0`: `1 − k/(2s) ≥ 0` and `x ≤ (1 − k/(2s))²`.
fn k_within(k: &Rational, s: &Rational, x: &Rational) -> bool {
    let t = rational::one() - k / (rational::int(2) * s);
    !t.is_negative() && *x <= &t * &t
}

fn slack_of(direction: Direction, bound: f64, observed: f64) -> f64 {
    match direction {
        Direction::Upper => bound - observed,
        Direction::Lower => observed - bound,
    }
}

fn judge(
    name: BoundName,
    bound: Option<f64>,
    observed: f64,
    reason: Result<(), String>,
) -> BoundReport {
    match (reason, bound) {
        (Ok(()), Some(b)) => {
            let slack = slack_of(name.direction(), b, observed);
            let tol = RELATIVE_TOLERANCE * b.abs().max(1.0);
            BoundReport {
                name,
                hypothesis_ok: true,
                reason: String::from("hypotheses hold"),
                bound_value: Some(b),
                observed,
                verdict: if slack < -tol {
                    Verdict::Violated
                } else {
                    Verdict::Satisfied
                },
                slack: Some(slack),
            }
        }
        (Ok(()), None) => BoundReport {
            name,
            hypothesis_ok: false,
            reason: String::from("negative discriminant"),
            bound_value: None,
            observed,
            verdict: Verdict::HypothesisNotMet,
            slack: None,
        },
        (Err(why), b) => BoundReport {
            name,
            hypothesis_ok: false,
            reason: why,
            bound_value: b,
            observed,
            verdict: Verdict::HypothesisNotMet,
            slack: b.map(|b| slack_of(name.direction(), b, observed)),
        },
    }
}

/// Evidence for the `𝒜`-superharmonic condition: a kernel mode `φ` has
/// `𝒜φ = 0` everywhere and `Δφ = −s/(n−1)φ`, so `Δφ` vanishes wherever `φ`
/// does, in particular on `∂M⁺_φ`. `−φ` serves the mirrored condition on `M⁻_φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperharmonicWitness {
    pub mode: JointEigenvalue,
    pub symbol: Rational,
    pub laplace_eigenvalue: Rational,
}

/// A witness from `ker 𝒜`; `None` when the kernel is trivial (no search over
/// general functions is attempted).
pub fn superharmonic_witness(m: &ProductManifold) -> Result<Option<SuperharmonicWitness>> {
    let report = variational::kernel_report(m)?;
    Ok(report
        .kernel_modes
        .into_iter()
        .next()
        .map(|mode| SuperharmonicWitness {
            laplace_eigenvalue: mode.total.clone(),
            symbol: rational::zero(),
            mode,
        }))
}

/// `(n−1)λ₁ ≥ 2s + |r| ⇒ ν ≥ s²/n`, with both sides compared exactly.
pub fn threshold_check(geom: &GeometryData, lambda1: &Rational, nu: &Rational) -> BoundReport {
    let lhs = geom.n_minus_one() * lambda1 - rational::int(2) * &geom.s;
    let bound = geom.s_sq_over_n();
    let observed = rational::to_f64(nu);
    let bound_f = rational::to_f64(&bound);
    if !rational::ge_sqrt(&lhs, &geom.ricci_norm_sq) {
        return judge(
            BoundName::GapThreshold,
            Some(bound_f),
            observed,
            Err(format!(
                "(n-1)*lambda1 = {} < 2s + |r| = {} + sqrt({})",
                rational::to_exact(&(geom.n_minus_one() * lambda1)),
                rational::to_exact(&(rational::int(2) * &geom.s)),
                rational::to_exact(&geom.ricci_norm_sq)
            )),
        );
    }
    let mut report = judge(BoundName::GapThreshold, Some(bound_f), observed, Ok(()));
    report.verdict = if *nu >= bound {
        Verdict::Satisfied
    } else {
        Verdict::Violated
    };
    report
}

/// Inputs shared by every bound in a suite.
#[derive(Debug, Clone)]
pub struct SuiteInputs {
    pub geom: GeometryData,
    pub lambda1: Rational,
    pub nu: Rational,
    /// Ricci lower bound used in the hypotheses; defaults to `min c_i`.
    pub k: Rational,
    pub witness: Option<SuperharmonicWitness>,
    /// Some non-constant mode attains `ν`.
    pub nu_nonconstant: bool,
}

impl SuiteInputs {
    pub fn compute(m: &ProductManifold, k_override: Option<&Rational>) -> Result<Self> {
        let geom = m.geometry();
        let res = variational::nu(m)?;
        let nu_nonconstant = res.minimizers.iter().any(|j| !j.is_constant());
        let nu = res.value;
        let witness = superharmonic_witness(m)?;
        Ok(Self {
            nu_nonconstant,
            k: k_override
                .cloned()
                .unwrap_or_else(|| geom.ricci_lower.clone()),
            lambda1: first_nonzero(m),
            nu,
            witness,
            geom,
        })
    }
}

/// One report per bound, in [`BoundName`] order.
pub fn evaluate_suite(inp: &SuiteInputs) -> Vec<BoundReport> {
    let g = &inp.geom;
    let n = g.n;
    let s = rational::to_f64(&g.s);
    let k = rational::to_f64(&inp.k);
    let nu = rational::to_f64(&inp.nu);
    let lambda1 = rational::to_f64(&inp.lambda1);
    let s_positive = g.s.is_positive();
    let ricci_ok = inp.k <= g.ricci_lower;

    let mut out = Vec::new();

    let need = |cond: bool, why: &str| if cond { Ok(()) } else { Err(String::from(why)) };

    let superharmonic = need(s_positive, "scalar curvature not positive")
        .and(need(
            inp.witness.is_some(),
            "no superharmonic witness (kernel is trivial)",
        ))
        .and(need(inp.k.is_positive(), "k must be positive"))
        .and(need(ricci_ok, "Ricci curvature is not bounded below by k"))
        .and_then(|()| {
            let x = rational::one() - rational::one() / rational::int(i64::from(n));
            need(
                k_within(&inp.k, &g.s, &x),
                "k exceeds 2(1 - sqrt(1 - 1/n)) s",
            )
        });
    let sh_bound = if s_positive {
        superharmonic_bound(n, s, k)
    } else {
        None
    };
    out.push(judge(
        BoundName::Superharmonic,
        sh_bound,
        lambda1,
        superharmonic,
    ));

    let k0 = need(s_positive, "scalar curvature not positive").and(need(
        inp.witness.is_some(),
        "no superharmonic witness (kernel is trivial)",
    ));
    let k0_bound = s_positive.then(|| superharmonic_bound_k0(n, s));
    out.push(judge(
        BoundName::SuperharmonicRicciNonnegative,
        k0_bound,
        lambda1,
        k0,
    ));

    // The factorization argument needs Δu ≢ 0. With only constant
    // ν-eigenfunctions the inequality can fail, e.g. on S¹(1/2)×S¹(1/2)×S²(3).
    let nonconstant = need(inp.nu_nonconstant, "nu is attained only by constants");
    let branch = nu_branch(g, &inp.nu);
    let nu_common = nonconstant
        .clone()
        .and(need(s_positive, "scalar curvature not positive"))
        .and(need(!g.is_einstein, "Einstein metrics are excluded"))
        .and(need(!inp.k.is_negative(), "k must be nonnegative"))
        .and(need(ricci_ok, "Ricci curvature is not bounded below by k"));
    let nu_bound = if s_positive {
        nu_eigen_bound(n, s, k, nu)
    } else {
        None
    };

    let large = nu_common
        .clone()
        .and(need(branch == Some(NuBranch::Large), "requires nu > s^2/n"));
    out.push(judge(BoundName::NuEigenLarge, nu_bound, lambda1, large));

    let small = nu_common
        .and(need(
            branch == Some(NuBranch::Small),
            "requires 0 < nu <= s^2/n",
        ))
        .and_then(|()| {
            let nf = rational::int(i64::from(n));
            let x = rational::one()
                - rational::one() / &nf
                - (&nf - rational::one()) * &inp.nu / (&g.s * &g.s);
            need(
                k_within(&inp.k, &g.s, &x),
                "k exceeds 2s(1 - sqrt(1 - 1/n - (n-1) nu / s^2))",
            )
        });
    out.push(judge(BoundName::NuEigenSmall, nu_bound, lambda1, small));

    let pos = nonconstant
        .and(need(s_positive, "scalar curvature not positive"))
        .and(need(
            g.ricci_lower.is_positive(),
            "Ricci curvature not positive",
        ))
        .and(need(inp.nu.is_positive(), "requires nu > 0"));
    let pos_bound = s_positive.then(|| nu_eigen_bound_k0(n, s, nu));
    out.push(judge(
        BoundName::NuEigenPositiveRicci,
        pos_bound,
        lambda1,
        pos,
    ));

    let lich = need(inp.k.is_positive(), "k must be positive")
        .and(need(ricci_ok, "Ricci curvature is not bounded below by k"));
    let mut lr = judge(
        BoundName::Lichnerowicz,
        Some(lichnerowicz_lower(n, k)),
        lambda1,
        lich,
    );
    if lr.hypothesis_ok {
        lr.verdict = if inp.lambda1 >= lichnerowicz_lower_exact(n, &inp.k) {
            Verdict::Satisfied
        } else {
            Verdict::Violated
        };
    }
    out.push(lr);

    out.push(threshold_check(g, &inp.lambda1, &inp.nu));
    out
}

pub fn bound_suite(m: &ProductManifold, k_override: Option<&Rational>) -> Result<Vec<BoundReport>> {
    Ok(evaluate_suite(&SuiteInputs::compute(m, k_override)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::vec;

    fn unit(dims: &[u32]) -> ProductManifold {
        ProductManifold::unit_product(dims).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    #[test]
    fn superharmonic_bound_is_sharp_on_spheres() {
        for n in 2..=10u32 {
            let nf = f64::from(n);
            let b = superharmonic_bound(n, nf * (nf - 1.0), nf - 1.0).unwrap();
            assert!(rel(b, nf) <= 1e-12, "n={n} b={b}");
            assert!(nf - 1.0 <= superharmonic_k_max(n, nf * (nf - 1.0)));
        }
    }

    #[test]
    fn borderline_k_gives_zero_discriminant() {
        for (n, s) in [(4u32, 4.0), (5, 8.0), (7, 3.5)] {
            let nf = f64::from(n);
            let k = superharmonic_k_max(n, s);
            let b = superharmonic_bound(n, s, k).unwrap();
            // Zero discriminant leaves (2s − k)/(2(n−1)) = s/√(n(n−1)).
            let expected = s / (nf * (nf - 1.0)).sqrt();
            assert!(rel(b, expected) <= 1e-9, "{b} vs {expected}");
        }
        assert!(superharmonic_bound(5, 8.0, 4.0).is_none());
    }

    #[test]
    fn s2_s3_superharmonic_value() {
        // n = 5, s = 8, k = 1: (15 + sqrt(1 − 32 + 256/5)) / 8 = (15 + sqrt(20.2)) / 8.
        let b = superharmonic_bound(5, 8.0, 1.0).unwrap();
        assert!(rel(b, 2.436_805_126_356_105_8) <= 1e-12);
    }

    #[test]
    fn k0_form_is_the_limit() {
        let b = superharmonic_bound_k0(5, 8.0);
        assert!(rel(b, 2.0 * (1.0 + 1.0 / 5f64.sqrt())) <= 1e-14);
        assert!((b - 2.894_427_190_999_916).abs() < 1e-12);
        let near = superharmonic_bound(5, 8.0, 1e-9).unwrap();
        assert!((b - near).abs() <= 1e-6);
        for n in 2..=8u32 {
            let nf = f64::from(n);
            assert!(superharmonic_bound_k0(n, nf * (nf - 1.0)) >= nf);
        }
    }

    #[test]
    fn nu_bound_reduces_at_zero_nu() {
        for (n, s, k) in [(5u32, 8.0, 1.0), (4, 4.0, 0.5), (3, 2.0, 0.0)] {
            let a = nu_eigen_bound(n, s, k, 0.0).unwrap();
            let b = superharmonic_bound(n, s, k).unwrap();
            assert!(rel(a, b) <= 1e-12);
        }
        let nf = 4.0;
        let k0 = nu_eigen_bound(4, 4.0, 0.0, 2.0).unwrap();
        let direct = (4.0 + (16.0 / nf + 3.0 * 2.0f64).sqrt()) / 3.0;
        assert!(rel(k0, direct) <= 1e-14);
        assert!(rel(nu_eigen_bound_k0(4, 4.0, 2.0), direct) <= 1e-14);
        // S²×S²: k = 1, ν = 2: (7 + sqrt(1 − 16 + 16 + 24)) / 6 = 2.
        let b = nu_eigen_bound(4, 4.0, 1.0, 2.0).unwrap();
        assert!(rel(b, 2.0) <= 1e-12);
    }

    #[test]
    fn superharmonic_bound_decreases_in_k() {
        for (n, s) in [(4u32, 4.0), (5, 8.0), (10, 90.0)] {
            let kmax = superharmonic_k_max(n, s);
            let mut prev = f64::INFINITY;
            for i in 1..=200 {
                let k = kmax * f64::from(i) / 200.0;
                let b = superharmonic_bound(n, s, k).unwrap();
                assert!(b <= prev + 1e-9);
                prev = b;
            }
        }
    }

    #[test]
    fn lichnerowicz_examples() {
        for n in 2..=8u32 {
            let l = lichnerowicz_lower_exact(n, &int(i64::from(n) - 1));
            assert_eq!(l, int(i64::from(n)));
        }
        assert_eq!(lichnerowicz_lower(4, 0.0), 0.0);
        assert_eq!(lichnerowicz_lower_exact(5, &int(1)), ratio(5, 4));
    }

    #[test]
    fn threshold_examples() {
        let m = unit(&[2, 3]);
        let r = threshold_check(&m.geometry(), &int(2), &int(0));
        assert_eq!(r.verdict, Verdict::HypothesisNotMet);
        let t = unit(&[1, 1]);
        let r = threshold_check(&t.geometry(), &int(1), &int(0));
        assert_eq!(r.verdict, Verdict::Satisfied);
    }

    #[test]
    fn threshold_holds_with_two_small_circles() {
        use crate::manifold::SphereFactor;
        let m = ProductManifold::new(vec![
            SphereFactor::unit(2).unwrap(),
            SphereFactor::new(1, ratio(1, 100)).unwrap(),
            SphereFactor::new(1, ratio(1, 100)).unwrap(),
        ])
        .unwrap();
        let reports = bound_suite(&m, None).unwrap();
        let t = reports
            .iter()
            .find(|r| r.name == BoundName::GapThreshold)
            .unwrap();
        assert!(t.hypothesis_ok);
        assert_eq!(t.verdict, Verdict::Satisfied);
    }

    #[test]
    fn witnesses() {
        let w = superharmonic_witness(&ProductManifold::sphere(3).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(w.mode.levels, [1]);
        assert_eq!(w.laplace_eigenvalue, int(3));
        let w = superharmonic_witness(&unit(&[2, 3])).unwrap().unwrap();
        assert_eq!(w.laplace_eigenvalue, int(2));
        assert!(superharmonic_witness(&unit(&[2, 2])).unwrap().is_none());
    }

    #[test]
    fn suites_on_reference_manifolds() {
        for dims in [&[3u32][..], &[2, 3], &[2, 2], &[3, 3], &[4]] {
            let reports = bound_suite(&unit(dims), None).unwrap();
            assert_eq!(reports.len(), 7);
            assert!(
                reports.iter().all(|r| r.verdict != Verdict::Violated),
                "{dims:?}: {reports:?}"
            );
        }
        let s2s3 = bound_suite(&unit(&[2, 3]), None).unwrap();
        let sh = &s2s3[0];
        assert_eq!(sh.name, BoundName::Superharmonic);
        assert_eq!(sh.verdict, Verdict::Satisfied);
        let sphere = bound_suite(&ProductManifold::sphere(5).unwrap(), None).unwrap();
        assert_eq!(sphere[0].verdict, Verdict::Satisfied);
        assert!(sphere[0].slack.unwrap().abs() <= 1e-12 * 5.0);
        let s2s2 = bound_suite(&unit(&[2, 2]), None).unwrap();
        assert_eq!(s2s2[0].verdict, Verdict::HypothesisNotMet);
        // Einstein exclusion.
        assert_eq!(s2s2[2].verdict, Verdict::HypothesisNotMet);
        assert_eq!(s2s2[3].verdict, Verdict::HypothesisNotMet);
    }

    #[test]
    fn k_override_outside_ricci_bound() {
        let reports = bound_suite(&unit(&[2, 3]), Some(&int(3))).unwrap();
        assert_eq!(reports[0].verdict, Verdict::HypothesisNotMet);
        assert!(reports[0].reason.contains("Ricci"));
    }

    #[test]
    fn constant_nu_eigenfunction_does_not_license_the_nu_bound() {
        let m = ProductManifold::new(vec![
            crate::SphereFactor::new(1, ratio(1, 2)).unwrap(),
            crate::SphereFactor::new(1, ratio(1, 2)).unwrap(),
            crate::SphereFactor::new(2, int(3)).unwrap(),
        ])
        .unwrap();
        let inp = SuiteInputs::compute(&m, None).unwrap();
        assert_eq!(inp.nu, ratio(2, 9));
        assert_eq!(inp.nu, inp.geom.ricci_norm_sq);
        assert!(!inp.nu_nonconstant);
        assert_eq!(nu_branch(&inp.geom, &inp.nu), Some(NuBranch::Large));
        // The inequality itself fails here: λ₁ = 2/3 exceeds the bound.
        let b = nu_eigen_bound(4, 2.0 / 3.0, 0.0, 2.0 / 9.0).unwrap();
        assert!(b < 2.0 / 3.0);
        let reports = evaluate_suite(&inp);
        assert_eq!(reports[2].name, BoundName::NuEigenLarge);
        assert_eq!(reports[2].verdict, Verdict::HypothesisNotMet);
        assert!(reports[2].reason.contains("constants"));
    }
}
