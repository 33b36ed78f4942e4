//! Products of round spheres and circles, and their curvature constants.
//!
//! A factor `S^m(ρ)` is stored with `ρ²` as an exact rational. On a product of
//! such factors the Ricci tensor is parallel and block diagonal, equal to
//! `c_i g_i` on factor `i` with `c_i = (m_i − 1)/ρ_i²`, so every curvature
//! quantity below is a constant rational.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// One round factor `S^dim` of squared radius `radius_sq`. `dim = 1` is a circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SphereFactor {
    dim: u32,
    radius_sq: Rational,
}

impl SphereFactor {
    pub fn new(dim: u32, radius_sq: Rational) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !radius_sq.is_positive() {
            return Err(Error::NonPositive {
                what: "radius_sq",
                value: rational::to_exact(&radius_sq),
            });
        }
        Ok(Self { dim, radius_sq })
    }

    /// Unit-radius factor.
    pub fn unit(dim: u32) -> Result<Self> {
        Self::new(dim, rational::one())
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radius_sq(&self) -> &Rational {
        &self.radius_sq
    }

    pub fn is_circle(&self) -> bool {
        self.dim == 1
    }

    /// Ricci eigenvalue `(m − 1)/ρ²`.
    pub fn ricci(&self) -> Rational {
        rational::int(i64::from(self.dim) - 1) / &self.radius_sq
    }
}

impl fmt::Display for SphereFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}({})", self.dim, self.radius_sq)
    }
}

/// Ordered, non-empty product of [`SphereFactor`]s with total dimension at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductManifold {
    factors: Vec<SphereFactor>,
}

impl ProductManifold {
    pub fn new(factors: Vec<SphereFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyProduct);
        }
        let n: u32 = factors.iter().map(SphereFactor::dim).sum();
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        Ok(Self { factors })
    }

    /// Product of unit spheres with the given dimensions.
    pub fn unit_product(dims: &[u32]) -> Result<Self> {
        let factors = dims
            .iter()
            .map(|&d| SphereFactor::unit(d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    /// Round unit sphere `S^n`.
    pub fn sphere(n: u32) -> Result<Self> {
        Self::unit_product(&[n])
    }

    pub fn factors(&self) -> &[SphereFactor] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> u32 {
        self.factors.iter().map(SphereFactor::dim).sum()
    }

    /// Homothety `g ↦ t² g`: every `ρ²` is multiplied by `t_sq`.
    pub fn scale(&self, t_sq: &Rational) -> Result<Self> {
        if !t_sq.is_positive() {
            return Err(Error::NonPositive {
                what: "t_sq",
                value: rational::to_exact(t_sq),
            });
        }
        let factors = self
            .factors
            .iter()
            .map(|f| SphereFactor::new(f.dim, &f.radius_sq * t_sq))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn geometry(&self) -> GeometryData {
        GeometryData::of(self)
    }

    /// Compact label such as `S2(1)xS3(1)`.
    pub fn label(&self) -> String {
        let mut out = String::new();
        for (i, f) in self.factors.iter().enumerate() {
            if i > 0 {
                out.push('x');
            }
            out.push_str(&alloc::format!("{}", f));
        }
        out
    }
}

impl fmt::Display for ProductManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Constant curvature data of a [`ProductManifold`].
///
/// `max_M |r|²` and `|r|²` coincide here because the metric is homogeneous;
/// the field is named for the pointwise value and callers that need the
/// maximum over `M` must not assume this outside the homogeneous model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryData {
    pub n: u32,
    pub s: Rational,
    pub factor_dims: Vec<u32>,
    pub ricci_eigs: Vec<Rational>,
    pub ricci_norm_sq: Rational,
    pub ricci_lower: Rational,
    pub z_norm_sq: Rational,
    pub is_einstein: bool,
}

impl GeometryData {
    fn of(m: &ProductManifold) -> Self {
        let factor_dims: Vec<u32> = m.factors.iter().map(SphereFactor::dim).collect();
        let ricci_eigs: Vec<Rational> = m.factors.iter().map(SphereFactor::ricci).collect();
        let n = m.dim();
        let mut s = rational::zero();
        let mut ricci_norm_sq = rational::zero();
        for (c, &d) in ricci_eigs.iter().zip(&factor_dims) {
            let md = rational::int(i64::from(d));
            s += &md * c;
            ricci_norm_sq += &md * c * c;
        }
        let ricci_lower = ricci_eigs
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(rational::zero);
        let is_einstein = ricci_eigs.windows(2).all(|w| w[0] == w[1]);
        let z_norm_sq = &ricci_norm_sq - &s * &s / rational::int(i64::from(n));
        Self {
            n,
            s,
            factor_dims,
            ricci_eigs,
            ricci_norm_sq,
            ricci_lower,
            z_norm_sq,
            is_einstein,
        }
    }

    pub fn factor_count(&self) -> usize {
        self.ricci_eigs.len()
    }

    /// Every `c_i` vanishes (a product of circles).
    pub fn is_ricci_flat(&self) -> bool {
        self.ricci_eigs.iter().all(Zero::is_zero)
    }

    /// `n − 1` as a rational.
    pub fn n_minus_one(&self) -> Rational {
        rational::int(i64::from(self.n) - 1)
    }

    /// `s²/n`.
    pub fn s_sq_over_n(&self) -> Rational {
        &self.s * &self.s / rational::int(i64::from(self.n))
    }

    /// `s/(n − 1)`, the Laplace eigenvalue carried by any kernel function.
    pub fn kernel_eigenvalue(&self) -> Rational {
        &self.s / self.n_minus_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn s2_s3_constants() {
        let g = ProductManifold::unit_product(&[2, 3]).unwrap().geometry();
        assert_eq!(g.n, 5);
        assert_eq!(g.s, int(8));
        assert_eq!(g.ricci_norm_sq, int(14));
        assert_eq!(g.ricci_eigs, [int(1), int(2)]);
        assert_eq!(g.ricci_lower, int(1));
        assert!(!g.is_einstein);
        assert_eq!(g.z_norm_sq, int(14) - ratio(64, 5));
    }

    #[test]
    fn sn_times_sn_plus_one() {
        for n in 2..=6i64 {
            let g = ProductManifold::unit_product(&[n as u32, n as u32 + 1])
                .unwrap()
                .geometry();
            assert_eq!(g.s, int(2 * n * n));
            assert_eq!(g.ricci_norm_sq, int(n * (2 * n * n - n + 1)));
        }
    }

    #[test]
    fn sm_times_sm_is_einstein() {
        for m in 2..=5i64 {
            let g = ProductManifold::unit_product(&[m as u32, m as u32])
                .unwrap()
                .geometry();
            assert_eq!(g.s, int(2 * m * (m - 1)));
            assert_eq!(g.ricci_norm_sq, int(2 * m * (m - 1) * (m - 1)));
            assert!(g.ricci_eigs.iter().all(|c| *c == int(m - 1)));
            assert!(g.is_einstein);
            assert!(g.z_norm_sq.is_zero());
        }
        let g = ProductManifold::unit_product(&[2, 4]).unwrap().geometry();
        assert!(!g.is_einstein);
    }

    #[test]
    fn flat_torus() {
        let g = ProductManifold::unit_product(&[1, 1]).unwrap().geometry();
        assert!(g.s.is_zero());
        assert!(g.ricci_norm_sq.is_zero());
        assert!(g.is_ricci_flat());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(ProductManifold::new(Vec::new()), Err(Error::EmptyProduct));
        assert_eq!(
            ProductManifold::unit_product(&[1]),
            Err(Error::DimensionTooSmall(1))
        );
        assert!(SphereFactor::new(2, int(0)).is_err());
        assert!(SphereFactor::new(0, int(1)).is_err());
        let m = ProductManifold::sphere(2).unwrap();
        assert!(m.scale(&int(0)).is_err());
        assert!(m.scale(&int(-1)).is_err());
    }

    #[test]
    fn scaling_examples() {
        let s2 = ProductManifold::sphere(2).unwrap();
        assert_eq!(s2.scale(&int(1)).unwrap(), s2);
        let big = s2.scale(&int(4)).unwrap();
        assert_eq!(big.factors()[0].radius_sq(), &int(4));
        // s = n(n−1)/ρ² = 2/4.
        assert_eq!(big.geometry().s, ratio(1, 2));

        let m = ProductManifold::unit_product(&[2, 3]).unwrap();
        let t_sq = ratio(9, 4);
        let g = m.scale(&t_sq).unwrap().geometry();
        assert_eq!(g.s, int(8) / &t_sq);
        assert_eq!(g.ricci_norm_sq, int(14) / (&t_sq * &t_sq));
    }

    #[test]
    fn label_round_trip_text() {
        let m = ProductManifold::new(alloc::vec![
            SphereFactor::new(2, ratio(1, 4)).unwrap(),
            SphereFactor::unit(3).unwrap(),
        ])
        .unwrap();
        assert_eq!(m.label(), "S2(1/4)xS3(1)");
    }
}
