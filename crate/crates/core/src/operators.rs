//! Symbols and quadratic forms of the fourth-order operators
//! `𝒜 = s′∘s′*`, `P = 𝒜 − |r|²` and `𝒜_α = 𝒜 − α|r|²`.
//!
//! For constant `s`,
//!
//! ```text
//! 𝒜φ = (n−1)Δ²φ + 2sΔφ − ⟨Ddφ, r⟩ + |r|²φ      (Δ = −λ on eigenfunctions)
//! ```
//!
//! On a product of round spheres `r = Σ c_i g_i` is parallel, so
//! `⟨Ddφ, r⟩ = Σ c_i tr_{g_i} Ddφ = Σ c_i Δ_i φ`. Each `Δ_i` preserves the joint
//! eigenspaces, hence every operator here multiplies a joint mode with
//! components `λ^(i)` and total `λ` by the scalar
//!
//! ```text
//! q_A = (n−1)λ² − 2sλ + Σ c_i λ^(i) + |r|²,   q_{A_α} = q_A − α|r|²,   q_P = q_{A_1}.
//! ```
//!
//! The reduction is checked pointwise by finite differences in [`crate::oracle`].

use alloc::vec::Vec;
use core::ops::{Div, Mul};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::manifold::GeometryData;
use crate::rational::{self, Rational};
use crate::spectrum::JointEigenvalue;

/// Interpolation parameter `α ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alpha(Rational);

impl Alpha {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() || value > rational::one() {
            return Err(Error::AlphaOutOfRange(rational::to_exact(&value)));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    A,
    P,
    AAlpha(Alpha),
}

impl OperatorKind {
    pub fn alpha(value: Rational) -> Result<Self> {
        Alpha::new(value).map(Self::AAlpha)
    }

    /// The `α` this kind corresponds to: 0 for `𝒜`, 1 for `P`.
    pub fn alpha_value(&self) -> Rational {
        match self {
            Self::A => rational::zero(),
            Self::P => rational::one(),
            Self::AAlpha(a) => a.0.clone(),
        }
    }

    pub fn name(&self) -> alloc::string::String {
        match self {
            Self::A => "A".into(),
            Self::P => "P".into(),
            Self::AAlpha(a) => alloc::format!("A_alpha({})", rational::to_exact(&a.0)),
        }
    }
}

fn check_arity(geom: &GeometryData, mode: &JointEigenvalue) -> Result<()> {
    if mode.components.len() != geom.factor_count() {
        return Err(Error::FactorCountMismatch {
            expected: geom.factor_count(),
            got: mode.components.len(),
        });
    }
    Ok(())
}

/// `Σ c_i λ^(i)`, the symbol of `⟨Ddφ, r⟩` up to sign.
pub fn ricci_contraction(geom: &GeometryData, mode: &JointEigenvalue) -> Rational {
    geom.ricci_eigs
        .iter()
        .zip(&mode.components)
        .fold(rational::zero(), |acc, (c, l)| acc + c * l)
}

/// `(n−1)λ² − 2sλ + (1−α)|r|²`, a lower bound of the `𝒜_α` symbol at total `λ`
/// since every `c_i ≥ 0`.
pub fn symbol_lower_bound(geom: &GeometryData, alpha: &Rational, total: &Rational) -> Rational {
    geom.n_minus_one() * total * total - rational::int(2) * &geom.s * total
        + (rational::one() - alpha) * &geom.ricci_norm_sq
}

/// Exact scalar by which `kind` acts on `mode`.
pub fn symbol(
    geom: &GeometryData,
    kind: &OperatorKind,
    mode: &JointEigenvalue,
) -> Result<Rational> {
    check_arity(geom, mode)?;
    Ok(symbol_lower_bound(geom, &kind.alpha_value(), &mode.total) + ricci_contraction(geom, mode))
}

/// Coefficient field of an expansion: exact rationals or floats.
pub trait Coefficient: Clone + Zero + Mul<Output = Self> + Div<Output = Self> {
    fn from_rational(r: &Rational) -> Self;
    /// Whether `sum_sq`, a sum of `terms` squares, equals one.
    fn is_unit(sum_sq: &Self, terms: usize) -> bool;
}

impl Coefficient for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn is_unit(sum_sq: &Self, _terms: usize) -> bool {
        *sum_sq == rational::one()
    }
}

/// Float results carry at most 8 machine epsilons of error per term.
impl Coefficient for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational::to_f64(r)
    }

    fn is_unit(sum_sq: &Self, terms: usize) -> bool {
        (sum_sq - 1.0).abs() <= 8.0 * f64::EPSILON * terms.max(1) as f64
    }
}

/// Finite expansion `φ = Σ a_j φ_j` over distinct joint modes, each `φ_j` of unit
/// L² norm, so `∫φ² = Σ a_j²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientExpansion<C> {
    terms: Vec<(JointEigenvalue, C)>,
    normalized: bool,
}

impl<C: Coefficient> CoefficientExpansion<C> {
    pub fn new(terms: Vec<(JointEigenvalue, C)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyExpansion);
        }
        for (i, (a, _)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(b, _)| b.levels == a.levels) {
                return Err(Error::DuplicateMode(a.levels.clone()));
            }
        }
        let mut out = Self {
            terms,
            normalized: false,
        };
        out.normalized = C::is_unit(&out.norm_sq(), out.terms.len());
        Ok(out)
    }

    pub fn single(mode: JointEigenvalue) -> Self {
        Self::new(alloc::vec![(mode, C::from_rational(&rational::one()))])
            .expect("single-term expansion")
    }

    pub fn terms(&self) -> &[(JointEigenvalue, C)] {
        &self.terms
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `∫φ² = Σ a_j²`.
    pub fn norm_sq(&self) -> C {
        self.terms
            .iter()
            .fold(C::zero(), |acc, (_, c)| acc + c.clone() * c.clone())
    }
}

/// `∫φ·Op(φ) = Σ a_j² q(φ_j)`.
pub fn quadratic_form<C: Coefficient>(
    geom: &GeometryData,
    kind: &OperatorKind,
    phi: &CoefficientExpansion<C>,
) -> Result<C> {
    phi.terms.iter().try_fold(C::zero(), |acc, (mode, c)| {
        let q = C::from_rational(&symbol(geom, kind, mode)?);
        Ok(acc + c.clone() * c.clone() * q)
    })
}

/// `∫φ·Op(φ) / ∫φ²`.
pub fn rayleigh<C: Coefficient>(
    geom: &GeometryData,
    kind: &OperatorKind,
    phi: &CoefficientExpansion<C>,
) -> Result<C> {
    let norm = phi.norm_sq();
    if norm.is_zero() {
        return Err(Error::ZeroNorm);
    }
    Ok(quadratic_form(geom, kind, phi)? / norm)
}

/// The four integrands of the Bochner rearrangement
/// `∫φ𝒜φ = ∫ n(Δφ)² − 2s|dφ|² − |Ddφ|² + φ²|r|²`, for a unit-norm eigenfunction.
///
/// Uses `∫(Δφ)² = λ²`, `∫|dφ|² = λ` and `∫|Ddφ|² = ∫(Δφ)² − ∫r(dφ,dφ) = λ² − Σ c_i λ^(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BochnerTerms {
    pub laplacian_sq: Rational,
    pub gradient: Rational,
    pub hessian: Rational,
    pub potential: Rational,
}

impl BochnerTerms {
    pub fn sum(&self) -> Rational {
        &self.laplacian_sq + &self.gradient + &self.hessian + &self.potential
    }
}

pub fn bochner_identity_terms(geom: &GeometryData, mode: &JointEigenvalue) -> Result<BochnerTerms> {
    check_arity(geom, mode)?;
    let lam = &mode.total;
    let lam_sq = lam * lam;
    Ok(BochnerTerms {
        laplacian_sq: rational::int(i64::from(geom.n)) * &lam_sq,
        gradient: -(rational::int(2) * &geom.s * lam),
        hessian: -(lam_sq - ricci_contraction(geom, mode)),
        potential: geom.ricci_norm_sq.clone(),
    })
}
